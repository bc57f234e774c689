//! Spin-J (Dicke) algebra for N identical spin-1/2 particles.
//!
//! Basis ordering is fixed: index `i` carries `m = J − i`, so the first basis
//! vector is the fully polarized `|J, J⟩ = |↑↑…↑⟩`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{CVector, Operator, RMatrix, RealSymmetricExp};
use crate::product;
use crate::state::{Factor, StateVector};

/// Largest N for which the 2^N product basis is materialized.
pub const MAX_EMBED_SPINS: usize = 14;

/// Symmetric subspace of `n_spins` spin-1/2 particles, `J = N/2`, dimension `N + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollectiveBasis {
    n_spins: usize,
}

impl CollectiveBasis {
    pub fn new(n_spins: usize) -> Result<Self> {
        if n_spins == 0 {
            return Err(crate::error::config("n_spins", "must be at least 1"));
        }
        Ok(Self { n_spins })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    /// `J = N/2`.
    pub fn total_spin(&self) -> f64 {
        self.n_spins as f64 / 2.0
    }

    /// `m` carried by basis index `i`.
    pub fn m_label(&self, i: usize) -> f64 {
        debug_assert!(i < self.dim());
        self.total_spin() - i as f64
    }

    pub fn m_labels(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m_label(i)).collect()
    }

    /// Basis index of magnetization `m`, if it is a valid label.
    pub fn index_of(&self, m: f64) -> Option<usize> {
        let i = self.total_spin() - m;
        let rounded = i.round();
        if (i - rounded).abs() > 1e-9 || rounded < 0.0 || rounded > self.n_spins as f64 {
            return None;
        }
        Some(rounded as usize)
    }

    /// `|J, m⟩` for basis index `i`.
    pub fn basis_state(&self, i: usize) -> StateVector {
        let mut amps = CVector::zeros(self.dim());
        amps[i] = Complex64::new(1.0, 0.0);
        StateVector::new(amps, alloc::vec![self.factor()])
    }

    pub fn factor(&self) -> Factor {
        Factor::CollectiveBath {
            n_spins: self.n_spins,
        }
    }
}

/// `⟨m+1|J₊|m⟩ = √(J(J+1) − m(m+1))`.
pub fn ladder_coefficient(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

pub fn jz_real(basis: &CollectiveBasis) -> RMatrix {
    RMatrix::from_diagonal(&nalgebra::DVector::from_vec(basis.m_labels()))
}

/// Raising operator as a real matrix; with m descending it sits on the superdiagonal.
pub fn jplus_real(basis: &CollectiveBasis) -> RMatrix {
    let d = basis.dim();
    let j = basis.total_spin();
    let mut jp = RMatrix::zeros(d, d);
    for i in 1..d {
        jp[(i - 1, i)] = ladder_coefficient(j, basis.m_label(i));
    }
    jp
}

pub fn jx_real(basis: &CollectiveBasis) -> RMatrix {
    let jp = jplus_real(basis);
    (&jp + jp.transpose()) * 0.5
}

pub fn build_jz(basis: &CollectiveBasis) -> Operator {
    Operator::from_real(&jz_real(basis))
}

pub fn build_jx(basis: &CollectiveBasis) -> Operator {
    Operator::from_real(&jx_real(basis))
}

/// `J_y = (J₊ − J₋)/(2i)`.
pub fn build_jy(basis: &CollectiveBasis) -> Operator {
    let jp = jplus_real(basis);
    let diff = &jp - jp.transpose();
    Operator::new(diff.map(|x| Complex64::new(0.0, -0.5 * x)))
}

/// Bath rotation `U_R(θ) = exp(i θ J_x)` held in spectral form.
#[derive(Clone, Debug)]
pub struct CollectiveRotation {
    theta: f64,
    exp: RealSymmetricExp,
}

impl CollectiveRotation {
    pub fn new(basis: &CollectiveBasis, theta: f64) -> Self {
        Self::with_generator(&jx_real(basis), theta)
    }

    /// Rotation about an arbitrary real symmetric generator. Used by the
    /// validation suite to inject a corrupted `J_x`.
    pub fn with_generator(generator: &RMatrix, theta: f64) -> Self {
        Self {
            theta,
            exp: RealSymmetricExp::new(generator, theta),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.exp.dim()
    }

    pub fn apply_slice(&self, amps: &mut [Complex64]) {
        self.exp.apply_slice(amps);
    }

    pub fn to_operator(&self) -> Operator {
        self.exp.to_operator()
    }
}

/// `exp(i θ J_x)` as a dense operator.
pub fn rotation(basis: &CollectiveBasis, theta: f64) -> Operator {
    CollectiveRotation::new(basis, theta).to_operator()
}

/// Binomial coefficient as f64 (exact for the sizes used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Maps a collective-basis state onto the permutation-symmetric vector of the
/// 2^N product basis.
pub fn embed_full(basis: &CollectiveBasis, state: &StateVector) -> Result<StateVector> {
    let n = basis.n_spins();
    if n > MAX_EMBED_SPINS {
        return Err(Error::Capacity {
            what: "product-basis embedding (spins)",
            requested: n,
            limit: MAX_EMBED_SPINS,
        });
    }
    if state.factors() != [basis.factor()] {
        return Err(crate::error::config("state", "expected a single collective bath factor"));
    }
    let weights: Vec<f64> = (0..=n).map(|k| 1.0 / binomial(n, k).sqrt()).collect();
    let src = state.as_slice();
    let amps = CVector::from_iterator(
        1 << n,
        (0..1usize << n).map(|b| {
            let downs = product::down_count(b);
            src[downs] * weights[downs]
        }),
    );
    Ok(StateVector::new(amps, alloc::vec![Factor::ProductBath { n_spins: n }]))
}

/// Orthonormal columns spanning the symmetric subspace, column `i` = embedded `|J, J−i⟩`.
pub fn symmetric_isometry(basis: &CollectiveBasis) -> Result<crate::linalg::CMatrix> {
    let n = basis.n_spins();
    if n > MAX_EMBED_SPINS {
        return Err(Error::Capacity {
            what: "product-basis embedding (spins)",
            requested: n,
            limit: MAX_EMBED_SPINS,
        });
    }
    let mut p = crate::linalg::CMatrix::zeros(1 << n, n + 1);
    for b in 0..1usize << n {
        let k = product::down_count(b);
        p[(b, k)] = Complex64::new(1.0 / binomial(n, k).sqrt(), 0.0);
    }
    Ok(p)
}
