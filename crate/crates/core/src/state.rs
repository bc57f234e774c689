use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

use crate::linalg::{norm_sq, CVector};

/// One tensor factor of a composite state, slowest-varying first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    /// Two-level ancilla, index 0 = `S^z = +1/2` (the `|0⟩` analog).
    Ancilla,
    /// Spin-`N/2` Dicke space, index i ↔ `m = N/2 − i`.
    CollectiveBath { n_spins: usize },
    /// Full `2^N` product basis, spin 0 on the most significant bit, bit 0 = up.
    ProductBath { n_spins: usize },
    /// Truncated Fock space `|0⟩ … |cutoff⟩`.
    Boson { cutoff: usize },
}

impl Factor {
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Ancilla => 2,
            Factor::CollectiveBath { n_spins } => n_spins + 1,
            Factor::ProductBath { n_spins } => 1 << n_spins,
            Factor::Boson { cutoff } => cutoff + 1,
        }
    }
}

/// Complex amplitudes over a tensor product of labeled factors.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    factors: Vec<Factor>,
}

impl StateVector {
    pub fn new(amplitudes: CVector, factors: Vec<Factor>) -> Self {
        let dim: usize = factors.iter().map(Factor::dim).product();
        assert_eq!(amplitudes.len(), dim, "amplitudes do not match factor dimensions");
        Self { amplitudes, factors }
    }

    pub fn from_slice(amplitudes: &[Complex64], factors: Vec<Factor>) -> Self {
        Self::new(CVector::from_column_slice(amplitudes), factors)
    }

    /// Product state of normalized single-factor vectors, in factor order.
    pub fn product(parts: &[(&[Complex64], Factor)]) -> Self {
        let mut amps = CVector::from_element(1, Complex64::new(1.0, 0.0));
        let mut factors = Vec::with_capacity(parts.len());
        for (vec, factor) in parts {
            assert_eq!(vec.len(), factor.dim(), "factor vector has wrong dimension");
            amps = amps.kronecker(&CVector::from_column_slice(vec));
            factors.push(factor.clone());
        }
        Self::new(amps, factors)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        norm_sq(self.amplitudes.as_slice()).sqrt()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn overlap_magnitude(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }
}
