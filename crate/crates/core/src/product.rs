//! Helpers for the full `2^N` product basis of spin-1/2 particles.
//!
//! Spin `k` lives on bit `N − 1 − k` of the basis index; a clear bit is `|↑⟩`.
//! Index 0 is therefore `|↑↑…↑⟩`, which lines up with the descending-`m`
//! ordering of the collective basis.

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

use crate::linalg::{CMatrix, Operator, ONE, ZERO};

pub type Gate = [[Complex64; 2]; 2];

pub const SIGMA_Z_HALF: Gate = [[Complex64::new(0.5, 0.0), ZERO], [ZERO, Complex64::new(-0.5, 0.0)]];
pub const SIGMA_X_HALF: Gate = [[ZERO, Complex64::new(0.5, 0.0)], [Complex64::new(0.5, 0.0), ZERO]];
/// `S⁺ = |↑⟩⟨↓|`.
pub const RAISE: Gate = [[ZERO, ONE], [ZERO, ZERO]];
/// `S⁻ = |↓⟩⟨↑|`.
pub const LOWER: Gate = [[ZERO, ZERO], [ONE, ZERO]];
pub const IDENTITY: Gate = [[ONE, ZERO], [ZERO, ONE]];

#[inline]
pub fn bit_of(n_spins: usize, k: usize) -> usize {
    1 << (n_spins - 1 - k)
}

#[inline]
pub fn is_down(b: usize, n_spins: usize, k: usize) -> bool {
    b & bit_of(n_spins, k) != 0
}

/// `2⟨I^z_k⟩` of a basis state: +1 for up, −1 for down.
#[inline]
pub fn spin_sign(b: usize, n_spins: usize, k: usize) -> f64 {
    if is_down(b, n_spins, k) {
        -1.0
    } else {
        1.0
    }
}

#[inline]
pub fn down_count(b: usize) -> usize {
    b.count_ones() as usize
}

/// Total magnetization `m = Σ_k ⟨I^z_k⟩` of a basis state.
#[inline]
pub fn magnetization(b: usize, n_spins: usize) -> f64 {
    n_spins as f64 / 2.0 - down_count(b) as f64
}

/// `Σ_k g_k ⟨I^z_k⟩` of a basis state.
pub fn weighted_field(b: usize, couplings: &[f64]) -> f64 {
    let n = couplings.len();
    couplings
        .iter()
        .enumerate()
        .map(|(k, g)| 0.5 * g * spin_sign(b, n, k))
        .sum()
}

/// `exp(i θ σ_x / 2)`.
pub fn x_rotation_gate(theta: f64) -> Gate {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, (theta / 2.0).sin());
    [[c, s], [s, c]]
}

/// Applies `gate` to spin `k` of every `2^N` block in `amps` (blocks are contiguous).
pub fn apply_gate(amps: &mut [Complex64], n_spins: usize, k: usize, gate: &Gate) {
    let block = 1usize << n_spins;
    assert_eq!(amps.len() % block, 0, "state length is not a multiple of 2^N");
    let bit = bit_of(n_spins, k);
    for chunk in amps.chunks_mut(block) {
        for b in 0..block {
            if b & bit == 0 {
                let (u, d) = (chunk[b], chunk[b | bit]);
                chunk[b] = gate[0][0] * u + gate[0][1] * d;
                chunk[b | bit] = gate[1][0] * u + gate[1][1] * d;
            }
        }
    }
}

/// Applies the same gate to every spin: `⊗_k gate`.
pub fn apply_gate_all(amps: &mut [Complex64], n_spins: usize, gate: &Gate) {
    for k in 0..n_spins {
        apply_gate(amps, n_spins, k, gate);
    }
}

fn gate_operator(gate: &Gate) -> Operator {
    Operator::new(CMatrix::from_row_slice(2, 2, &[gate[0][0], gate[0][1], gate[1][0], gate[1][1]]))
}

/// Dense `1 ⊗ … ⊗ gate_k ⊗ … ⊗ 1` on `n_spins` spins.
pub fn single_spin_operator(n_spins: usize, k: usize, gate: &Gate) -> Operator {
    let mut out = Operator::identity(1);
    for j in 0..n_spins {
        let factor = if j == k { gate_operator(gate) } else { Operator::identity(2) };
        out = out.kron(&factor);
    }
    out
}

/// Dense `Σ_k gate_k`, e.g. `J_x` for `gate = σ_x/2`.
pub fn total_operator(n_spins: usize, gate: &Gate) -> Operator {
    (0..n_spins).fold(Operator::zeros(1 << n_spins), |acc, k| {
        acc.add(&single_spin_operator(n_spins, k, gate))
    })
}

/// Dense `Σ_k w_k gate_k`.
pub fn weighted_operator(weights: &[f64], gate: &Gate) -> Operator {
    let n = weights.len();
    weights.iter().enumerate().fold(Operator::zeros(1 << n), |acc, (k, &w)| {
        acc.add(&single_spin_operator(n, k, gate).scale(Complex64::new(w, 0.0)))
    })
}

pub fn qubit_operator(gate: &Gate) -> Operator {
    gate_operator(gate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;

    #[test]
    fn gate_application_matches_dense_kron() {
        let n = 4;
        let gate = x_rotation_gate(1.234);
        let mut v: alloc::vec::Vec<Complex64> =
            (0..16).map(|i| Complex64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.05)).collect();
        let dense = single_spin_operator(n, 2, &gate);
        let expected = dense.apply(&CVector::from_column_slice(&v));
        apply_gate(&mut v, n, 2, &gate);
        for i in 0..16 {
            assert!((v[i] - expected[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn bit_layout() {
        // spin 0 is the most significant bit
        assert!(is_down(0b1000, 4, 0));
        assert!(!is_down(0b1000, 4, 3));
        assert_eq!(magnetization(0, 4), 2.0);
        assert_eq!(magnetization(0b1111, 4), -2.0);
        assert!((weighted_field(0b100, &[1.0, 2.0, 3.0]) - (-0.5 + 1.0 + 1.5)).abs() < 1e-15);
    }
}
