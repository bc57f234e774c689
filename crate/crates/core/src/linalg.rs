//! Dense complex linear algebra shared by every model.
//!
//! All matrix exponentials go through a Hermitian eigendecomposition
//! `exp(i t H) = V diag(e^{i t λ}) V†`, which is unitary to machine precision
//! for any `t` and does not drift when the propagator is reused many times.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const IMAG: Complex64 = Complex64::new(0.0, 1.0);

/// `e^{i φ}`.
#[inline]
pub fn cis(phi: f64) -> Complex64 {
    Complex64::new(phi.cos(), phi.sin())
}

/// A square complex matrix acting on a labeled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(CMatrix);

impl Operator {
    pub fn new(matrix: CMatrix) -> Self {
        assert!(matrix.is_square(), "operator matrix must be square");
        Self(matrix)
    }

    pub fn from_real(matrix: &RMatrix) -> Self {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        Self(CMatrix::from_diagonal(&CVector::from_column_slice(entries)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.0 * v
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Kronecker product `self ⊗ other`; `self` indexes the slow (outer) factor.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Largest elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// `max |A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |U†U − 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = Self(self.0.adjoint() * &self.0);
        gram.max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.0[(i, j)].norm() <= tol))
    }

    /// Restriction `P† A P` to the subspace spanned by the (orthonormal) columns of `basis`.
    pub fn restrict(&self, basis: &CMatrix) -> Self {
        Self(basis.adjoint() * &self.0 * basis)
    }

    /// `⟨u|A|v⟩`.
    pub fn matrix_element(&self, u: &CVector, v: &CVector) -> Complex64 {
        u.dotc(&(&self.0 * v))
    }
}

/// Eigendecomposition of a complex Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl HermitianSpectrum {
    /// Decomposes `h`. The lower triangle is trusted; callers are expected to
    /// pass Hermitian matrices (the hermiticity defect is checked in debug builds).
    pub fn new(h: &Operator) -> Self {
        debug_assert!(h.hermiticity_defect() <= 1e-9 * (1.0 + h.max_abs()));
        let eig = SymmetricEigen::new(h.matrix().clone());
        Self {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// `exp(i t H)`.
    pub fn exp_i(&self, t: f64) -> Operator {
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let phase = cis(t * lambda);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        Operator(scaled * self.vectors.adjoint())
    }
}

/// `exp(i t H)` for Hermitian `H`.
pub fn expm_hermitian(h: &Operator, t: f64) -> Operator {
    HermitianSpectrum::new(h).exp_i(t)
}

/// Spectral form of `exp(i θ G)` for a real symmetric generator `G`.
///
/// Applying it to a vector costs two real matrix-vector products per
/// component, so it stays cheap for the (N+1)-dimensional collective
/// rotations at N ~ 10³ without ever forming the dense propagator.
#[derive(Clone, Debug)]
pub struct RealSymmetricExp {
    vectors: RMatrix,
    phases: Vec<Complex64>,
}

impl RealSymmetricExp {
    pub fn new(generator: &RMatrix, theta: f64) -> Self {
        assert!(generator.is_square(), "generator must be square");
        let eig = SymmetricEigen::new(generator.clone());
        let phases = eig.eigenvalues.iter().map(|&l| cis(theta * l)).collect();
        Self {
            vectors: eig.eigenvectors,
            phases,
        }
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// Applies the exponential in place to a contiguous block of amplitudes.
    pub fn apply_slice(&self, amps: &mut [Complex64]) {
        let d = self.dim();
        assert_eq!(amps.len(), d, "state block has wrong dimension");
        let re = DVector::from_iterator(d, amps.iter().map(|z| z.re));
        let im = DVector::from_iterator(d, amps.iter().map(|z| z.im));
        let proj_re = self.vectors.tr_mul(&re);
        let proj_im = self.vectors.tr_mul(&im);
        let mut rot_re = DVector::zeros(d);
        let mut rot_im = DVector::zeros(d);
        for k in 0..d {
            let z = self.phases[k] * Complex64::new(proj_re[k], proj_im[k]);
            rot_re[k] = z.re;
            rot_im[k] = z.im;
        }
        let out_re = &self.vectors * rot_re;
        let out_im = &self.vectors * rot_im;
        for (k, z) in amps.iter_mut().enumerate() {
            *z = Complex64::new(out_re[k], out_im[k]);
        }
    }

    pub fn to_operator(&self) -> Operator {
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        let mut scaled = v.clone();
        for (j, &phase) in self.phases.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
        Operator(scaled * v.transpose())
    }
}

/// Exact `exp(i t h)` for the traceless 2×2 Hermitian `h = hz σz/2 + hx σx/2`,
/// from its spectral projectors `(1 ± h/E)/2` with `E = √(hz² + hx²)/2`.
pub fn exp_i_qubit(hz: f64, hx: f64, t: f64) -> [[Complex64; 2]; 2] {
    let e = 0.5 * (hz * hz + hx * hx).sqrt();
    let c = (e * t).cos();
    // sin(E t)/E, continuous at E = 0
    let s = if e > 0.0 { (e * t).sin() / e } else { t };
    let i_s = IMAG * s;
    [
        [ONE * c + i_s * (0.5 * hz), i_s * (0.5 * hx)],
        [i_s * (0.5 * hx), ONE * c - i_s * (0.5 * hz)],
    ]
}

pub fn norm_sq(amps: &[Complex64]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum()
}
