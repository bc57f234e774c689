//! Two remote central-spin systems whose ancillas exchange excitations:
//!
//! ```text
//! H = S^z₁ Σ_k g_{k,1} I^z_{k,1} + S^z₂ Σ_k g_{k,2} I^z_{k,2} + J (S⁺₁S⁻₂ + S⁻₁S⁺₂)
//! ```
//!
//! No drive acts on the ancillas. The joint state is ordered
//! `ancilla₁ ⊗ ancilla₂ ⊗ bath₁ ⊗ bath₂`, with ancilla index `a = 2a₁ + a₂`
//! and `|0⟩ = S^z = +1/2`.
//!
//! `H` is diagonal in both baths, so each period applies, per bath basis pair,
//! a phase to `|00⟩` and `|11⟩` and a 2×2 exchange block on `{|01⟩, |10⟩}`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

use crate::central_spin::{Backend, Couplings};
use crate::collective::{self, CollectiveBasis, CollectiveRotation};
use crate::error::{config, Error, Result};
use crate::floquet::{check_epsilon, check_finite, check_periods, FloquetResult, ModelConfig, PropagatorSign};
use crate::linalg::{cis, exp_i_qubit, expm_hermitian, Operator, ZERO};
use crate::product::{self, Gate};
use crate::state::{Factor, StateVector};

/// Largest `N₁ + N₂` in the product-basis backend (joint dimension `4·2^14 = 2^16`).
pub const MAX_FULL_TOTAL_SPINS: usize = 14;
/// Largest joint dimension `4(N₁+1)(N₂+1)` in the collective backend.
pub const MAX_COLLECTIVE_DIM: usize = 1 << 20;
/// Largest joint dimension for which the dense Hamiltonian is built.
pub const MAX_DENSE_DIM: usize = 4096;

/// Initial two-ancilla state.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum AncillaPair {
    #[default]
    S00,
    S01,
    S10,
    S11,
    /// Amplitudes on `|00⟩, |01⟩, |10⟩, |11⟩`; normalized on use.
    Custom([Complex64; 4]),
}

impl AncillaPair {
    pub fn amplitudes(&self) -> Result<[Complex64; 4]> {
        let one = Complex64::new(1.0, 0.0);
        let basis = |k: usize| {
            let mut a = [ZERO; 4];
            a[k] = one;
            a
        };
        match *self {
            AncillaPair::S00 => Ok(basis(0)),
            AncillaPair::S01 => Ok(basis(1)),
            AncillaPair::S10 => Ok(basis(2)),
            AncillaPair::S11 => Ok(basis(3)),
            AncillaPair::Custom(a) => {
                let norm = crate::linalg::norm_sq(&a).sqrt();
                if !norm.is_finite() || norm <= 0.0 {
                    return Err(config("ancilla_init", "zero or non-finite amplitudes"));
                }
                Ok(a.map(|z| z / norm))
            }
        }
    }

    /// The pair with the two ancillas exchanged.
    pub fn swapped(&self) -> Self {
        match *self {
            AncillaPair::S01 => AncillaPair::S10,
            AncillaPair::S10 => AncillaPair::S01,
            AncillaPair::Custom([a, b, c, d]) => AncillaPair::Custom([a, c, b, d]),
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemoteConfig {
    pub bath_sizes: (usize, usize),
    pub couplings: (Couplings, Couplings),
    /// Ancilla exchange rate `J`.
    pub flip_flop: f64,
    pub interaction_time: f64,
    pub rotation_error: f64,
    pub n_periods: usize,
    pub ancilla_init: AncillaPair,
    pub backend: Backend,
    pub propagator_sign: PropagatorSign,
    pub keep_final_state: bool,
}

impl RemoteConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        bath_sizes: (usize, usize),
        g: (f64, f64),
        flip_flop: f64,
        interaction_time: f64,
        rotation_error: f64,
        n_periods: usize,
        ancilla_init: AncillaPair,
    ) -> Self {
        Self {
            bath_sizes,
            couplings: (Couplings::Uniform(g.0), Couplings::Uniform(g.1)),
            flip_flop,
            interaction_time,
            rotation_error,
            n_periods,
            ancilla_init,
            backend: Backend::Collective,
            propagator_sign: PropagatorSign::Minus,
            keep_final_state: false,
        }
    }

    pub fn theta(&self) -> f64 {
        core::f64::consts::PI - self.rotation_error
    }

    /// Bath dimensions `(D₁, D₂)` in the configured backend.
    pub fn bath_dims(&self) -> (usize, usize) {
        let (n1, n2) = self.bath_sizes;
        match self.backend {
            Backend::Collective => (n1 + 1, n2 + 1),
            Backend::Full => (1 << n1, 1 << n2),
        }
    }

    pub fn joint_dim(&self) -> usize {
        let (d1, d2) = self.bath_dims();
        4 * d1 * d2
    }

    /// The same system with the two sites exchanged.
    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        out.bath_sizes = (self.bath_sizes.1, self.bath_sizes.0);
        out.couplings = (self.couplings.1.clone(), self.couplings.0.clone());
        out.ancilla_init = self.ancilla_init.swapped();
        out
    }

    pub fn validate(&self) -> Result<()> {
        let (n1, n2) = self.bath_sizes;
        if n1 == 0 || n2 == 0 {
            return Err(config("bath_sizes", "each bath needs at least 1 spin"));
        }
        self.couplings.0.validate(n1, "g1")?;
        self.couplings.1.validate(n2, "g2")?;
        check_finite("j", self.flip_flop)?;
        check_finite("tau", self.interaction_time)?;
        if self.interaction_time < 0.0 {
            return Err(config("tau", "interaction time must be non-negative"));
        }
        check_epsilon(self.rotation_error)?;
        check_periods(self.n_periods)?;
        self.ancilla_init.amplitudes()?;
        match self.backend {
            Backend::Collective => {
                if self.couplings.0.uniform().is_none() || self.couplings.1.uniform().is_none() {
                    return Err(config("backend", "collective backend requires uniform couplings"));
                }
                let dim = 4usize.saturating_mul(n1 + 1).saturating_mul(n2 + 1);
                if dim > MAX_COLLECTIVE_DIM {
                    return Err(Error::Capacity {
                        what: "remote collective joint dimension",
                        requested: dim,
                        limit: MAX_COLLECTIVE_DIM,
                    });
                }
            }
            Backend::Full => {
                if n1 + n2 > MAX_FULL_TOTAL_SPINS {
                    return Err(Error::Capacity {
                        what: "remote full-basis bath spins",
                        requested: n1 + n2,
                        limit: MAX_FULL_TOTAL_SPINS,
                    });
                }
            }
        }
        Ok(())
    }
}

/// `Σ_k g_k I^z_k` on each basis state of one bath.
fn bath_fields(n_spins: usize, couplings: &Couplings, backend: Backend) -> Vec<f64> {
    match backend {
        Backend::Collective => {
            let g = couplings.uniform().expect("validated uniform coupling");
            let basis = CollectiveBasis::new(n_spins).expect("validated n_spins");
            basis.m_labels().into_iter().map(|m| g * m).collect()
        }
        Backend::Full => {
            let gs = couplings.per_spin(n_spins);
            (0..1usize << n_spins).map(|b| product::weighted_field(b, &gs)).collect()
        }
    }
}

/// Normalized magnetization `m / (N/2)` on each basis state of one bath.
fn bath_readout(n_spins: usize, backend: Backend) -> Vec<f64> {
    let j = n_spins as f64 / 2.0;
    match backend {
        Backend::Collective => (0..=n_spins).map(|i| (j - i as f64) / j).collect(),
        Backend::Full => (0..1usize << n_spins).map(|b| product::magnetization(b, n_spins) / j).collect(),
    }
}

fn bath_z_operator(n_spins: usize, couplings: &Couplings, backend: Backend) -> Result<Operator> {
    Ok(match backend {
        Backend::Collective => {
            let g = couplings.uniform().expect("validated uniform coupling");
            collective::build_jz(&CollectiveBasis::new(n_spins)?).scale(Complex64::new(g, 0.0))
        }
        Backend::Full => product::weighted_operator(&couplings.per_spin(n_spins), &product::SIGMA_Z_HALF),
    })
}

/// Dense `H` on `ancilla₁ ⊗ ancilla₂ ⊗ bath₁ ⊗ bath₂`.
pub fn build_hamiltonian_remote(config: &RemoteConfig) -> Result<Operator> {
    config.validate()?;
    let dim = config.joint_dim();
    if dim > MAX_DENSE_DIM {
        return Err(Error::Capacity {
            what: "dense remote Hamiltonian dimension",
            requested: dim,
            limit: MAX_DENSE_DIM,
        });
    }
    let (n1, n2) = config.bath_sizes;
    let (d1, d2) = config.bath_dims();
    let id2 = Operator::identity(2);
    let sz = product::qubit_operator(&product::SIGMA_Z_HALF);
    let raise = product::qubit_operator(&product::RAISE);
    let lower = product::qubit_operator(&product::LOWER);
    let b1 = bath_z_operator(n1, &config.couplings.0, config.backend)?;
    let b2 = bath_z_operator(n2, &config.couplings.1, config.backend)?;
    let site1 = sz.kron(&id2).kron(&b1).kron(&Operator::identity(d2));
    let site2 = id2.kron(&sz).kron(&Operator::identity(d1)).kron(&b2);
    let exchange = raise
        .kron(&lower)
        .add(&lower.kron(&raise))
        .scale(Complex64::new(config.flip_flop, 0.0))
        .kron(&Operator::identity(d1 * d2));
    Ok(site1.add(&site2).add(&exchange))
}

/// `exp(∓iτH)` by dense eigendecomposition.
pub fn propagator_remote(config: &RemoteConfig) -> Result<Operator> {
    let h = build_hamiltonian_remote(config)?;
    Ok(expm_hermitian(&h, config.propagator_sign.exponent_time(config.interaction_time)))
}

enum Rotations {
    Collective(CollectiveRotation, CollectiveRotation),
    Full { total_spins: usize, gate: Gate },
}

struct RemoteEngine {
    dims: (usize, usize),
    rotations: Rotations,
    /// Per bath pair `q = i₁·D₂ + i₂`: phases on `|00⟩`, `|11⟩` and the exchange block.
    phases: Vec<(Complex64, Complex64)>,
    exchange: Vec<Gate>,
}

impl RemoteEngine {
    fn new(config: &RemoteConfig) -> Result<Self> {
        config.validate()?;
        let (n1, n2) = config.bath_sizes;
        let dims = config.bath_dims();
        let rotations = match config.backend {
            Backend::Collective => Rotations::Collective(
                CollectiveRotation::new(&CollectiveBasis::new(n1)?, config.theta()),
                CollectiveRotation::new(&CollectiveBasis::new(n2)?, config.theta()),
            ),
            Backend::Full => Rotations::Full {
                total_spins: n1 + n2,
                gate: product::x_rotation_gate(config.theta()),
            },
        };
        let h1 = bath_fields(n1, &config.couplings.0, config.backend);
        let h2 = bath_fields(n2, &config.couplings.1, config.backend);
        let t = config.propagator_sign.exponent_time(config.interaction_time);
        let mut phases = Vec::with_capacity(dims.0 * dims.1);
        let mut exchange = Vec::with_capacity(dims.0 * dims.1);
        for &a in &h1 {
            for &b in &h2 {
                let sum = 0.5 * (a + b);
                phases.push((cis(t * sum), cis(-t * sum)));
                exchange.push(exp_i_qubit(a - b, 2.0 * config.flip_flop, t));
            }
        }
        Ok(Self {
            dims,
            rotations,
            phases,
            exchange,
        })
    }

    fn bath_block(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    fn initial_state(&self, ancilla: [Complex64; 4]) -> Vec<Complex64> {
        let db = self.bath_block();
        let mut amps = vec![ZERO; 4 * db];
        for (a, z) in ancilla.iter().enumerate() {
            amps[a * db] = *z;
        }
        amps
    }

    fn step(&self, amps: &mut [Complex64]) {
        let (d1, d2) = self.dims;
        let db = d1 * d2;
        match &self.rotations {
            Rotations::Collective(r1, r2) => {
                let mut column = vec![ZERO; d1];
                for block in amps.chunks_mut(db) {
                    for i2 in 0..d2 {
                        for i1 in 0..d1 {
                            column[i1] = block[i1 * d2 + i2];
                        }
                        r1.apply_slice(&mut column);
                        for i1 in 0..d1 {
                            block[i1 * d2 + i2] = column[i1];
                        }
                    }
                    for row in block.chunks_mut(d2) {
                        r2.apply_slice(row);
                    }
                }
            }
            // bath₁ ⊗ bath₂ is one register of N₁ + N₂ spins, bath₁ on the high bits
            Rotations::Full { total_spins, gate } => product::apply_gate_all(amps, *total_spins, gate),
        }
        for q in 0..db {
            let (p00, p11) = self.phases[q];
            amps[q] *= p00;
            amps[3 * db + q] *= p11;
            let g = &self.exchange[q];
            let (x, y) = (amps[db + q], amps[2 * db + q]);
            amps[db + q] = g[0][0] * x + g[0][1] * y;
            amps[2 * db + q] = g[1][0] * x + g[1][1] * y;
        }
    }
}

struct Record {
    bath: (f64, f64),
    ancilla: (f64, f64),
}

fn record(amps: &[Complex64], dims: (usize, usize), w1: &[f64], w2: &[f64]) -> Record {
    let (d1, d2) = dims;
    let db = d1 * d2;
    let mut out = Record {
        bath: (0.0, 0.0),
        ancilla: (0.0, 0.0),
    };
    for a in 0..4 {
        let s1 = if a & 2 == 0 { 1.0 } else { -1.0 };
        let s2 = if a & 1 == 0 { 1.0 } else { -1.0 };
        for i1 in 0..d1 {
            for i2 in 0..d2 {
                let p = amps[a * db + i1 * d2 + i2].norm_sqr();
                out.bath.0 += p * w1[i1];
                out.bath.1 += p * w2[i2];
                out.ancilla.0 += p * s1;
                out.ancilla.1 += p * s2;
            }
        }
    }
    out
}

/// Stroboscopic evolution from `ancilla_init ⊗ |↑…↑⟩ ⊗ |↑…↑⟩`.
///
/// Each period rotates both baths by `π − ε` and then applies `exp(∓iτH)`.
/// Returns one series per bath, each its normalized collective magnetization;
/// `ancilla_z` carries `2⟨S^z⟩` of that site's ancilla.
pub fn floquet_run_remote(config: &RemoteConfig) -> Result<(FloquetResult, FloquetResult)> {
    let engine = RemoteEngine::new(config)?;
    let (n1, n2) = config.bath_sizes;
    let w1 = bath_readout(n1, config.backend);
    let w2 = bath_readout(n2, config.backend);
    let mut amps = engine.initial_state(config.ancilla_init.amplitudes()?);
    let m = config.n_periods;
    let (mut s1, mut s2, mut a1, mut a2) =
        (Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m));
    for n in 0..m {
        if n > 0 {
            engine.step(&mut amps);
        }
        let r = record(&amps, engine.dims, &w1, &w2);
        s1.push(r.bath.0);
        s2.push(r.bath.1);
        a1.push(r.ancilla.0);
        a2.push(r.ancilla.1);
    }
    let final_state = config.keep_final_state.then(|| {
        let bath = |n_spins| match config.backend {
            Backend::Collective => Factor::CollectiveBath { n_spins },
            Backend::Full => Factor::ProductBath { n_spins },
        };
        StateVector::from_slice(&amps, vec![Factor::Ancilla, Factor::Ancilla, bath(n1), bath(n2)])
    });
    let make = |magnetization, ancilla_z, label: &str, final_state| FloquetResult {
        magnetization,
        ancilla_z,
        spin_purity: Vec::new(),
        final_state,
        config: ModelConfig::RemoteSync(config.clone()),
        label: String::from(label),
    };
    Ok((make(s1, a1, "bath1", final_state), make(s2, a2, "bath2", None)))
}

/// Pearson correlation of two magnetization series.
pub fn sync_metric(r1: &FloquetResult, r2: &FloquetResult) -> Result<f64> {
    pearson(&r1.magnetization, &r2.magnetization)
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Domain(alloc::format!(
            "series lengths differ or are empty ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Domain(String::from("zero-variance series has no correlation")));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central_spin::{floquet_run, CentralSpinConfig};
    use crate::linalg::{CVector, ONE};
    use core::f64::consts::PI;

    fn preset(init: AncillaPair) -> RemoteConfig {
        RemoteConfig::new((3, 3), (1.0, 1.0), PI / 18.0, 9.0, 0.05 * PI, 128, init)
    }

    fn total_ancilla_z(config: &RemoteConfig) -> Operator {
        let (d1, d2) = config.bath_dims();
        let sz = product::qubit_operator(&product::SIGMA_Z_HALF);
        let id2 = Operator::identity(2);
        sz.kron(&id2).add(&id2.kron(&sz)).kron(&Operator::identity(d1 * d2))
    }

    #[test]
    fn hamiltonian_properties() {
        for backend in [Backend::Collective, Backend::Full] {
            let mut c = RemoteConfig::new((2, 3), (0.7, 1.3), 0.4, 1.0, 0.1, 4, AncillaPair::S00);
            c.backend = backend;
            let h = build_hamiltonian_remote(&c).unwrap();
            assert!(h.hermiticity_defect() <= 1e-12);
            assert!(h.commutator(&total_ancilla_z(&c)).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_exchange_is_a_direct_sum() {
        let c = RemoteConfig::new((2, 2), (0.7, 1.3), 0.0, 1.0, 0.0, 4, AncillaPair::S00);
        assert!(build_hamiltonian_remote(&c).unwrap().is_diagonal(0.0));
    }

    #[test]
    fn polarized_ancillas_are_exchange_eigenstates() {
        let mut c = RemoteConfig::new((2, 2), (0.0, 0.0), 1.0, 1.0, 0.0, 4, AncillaPair::S00);
        let h = build_hamiltonian_remote(&c).unwrap();
        let db = 9;
        for q in 0..db {
            for a in [0, 3] {
                let mut v = CVector::zeros(4 * db);
                v[a * db + q] = ONE;
                assert!(h.apply(&v).norm() <= 1e-15);
            }
        }
        c.flip_flop = 0.0;
        assert!(build_hamiltonian_remote(&c).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn block_engine_matches_dense_propagator() {
        for backend in [Backend::Collective, Backend::Full] {
            let mut c = RemoteConfig::new((2, 1), (0.8, 1.4), 0.6, 1.7, 0.3, 4, AncillaPair::S01);
            c.backend = backend;
            c.ancilla_init = AncillaPair::Custom([ONE, ONE * 0.3, ONE * -0.5, Complex64::new(0.0, 0.2)]);
            let engine = RemoteEngine::new(&c).unwrap();
            let u = propagator_remote(&c).unwrap();
            let (n1, n2) = c.bath_sizes;
            let r = match backend {
                Backend::Collective => collective::rotation(&CollectiveBasis::new(n1).unwrap(), c.theta())
                    .kron(&collective::rotation(&CollectiveBasis::new(n2).unwrap(), c.theta())),
                Backend::Full => {
                    let g = product::qubit_operator(&product::x_rotation_gate(c.theta()));
                    (0..n1 + n2).fold(Operator::identity(1), |acc, _| acc.kron(&g))
                }
            };
            let step = u.mul(&Operator::identity(4).kron(&r));
            let mut amps = engine.initial_state(c.ancilla_init.amplitudes().unwrap());
            let mut dense = CVector::from_column_slice(&amps);
            for _ in 0..5 {
                engine.step(&mut amps);
                dense = step.apply(&dense);
            }
            for (a, b) in amps.iter().zip(dense.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn perfect_flips_without_exchange() {
        let mut c = preset(AncillaPair::S01);
        c.flip_flop = 0.0;
        c.rotation_error = 0.0;
        let (a, b) = floquet_run_remote(&c).unwrap();
        for (n, (x, y)) in a.magnetization.iter().zip(&b.magnetization).enumerate() {
            let e = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((x - e).abs() < 1e-9 && (y - e).abs() < 1e-9);
        }
    }

    #[test]
    fn ancilla_sectors_are_conserved() {
        let mut c = preset(AncillaPair::Custom([ONE * 0.5, ONE * 0.6, ONE * -0.3, Complex64::new(0.1, 0.5)]));
        c.keep_final_state = true;
        let init = c.ancilla_init.amplitudes().unwrap();
        let (a, _) = floquet_run_remote(&c).unwrap();
        let state = a.final_state.unwrap();
        let db = 16;
        let sector = |r: core::ops::Range<usize>| crate::linalg::norm_sq(&state.as_slice()[r]);
        assert!((sector(0..db) - init[0].norm_sqr()).abs() < 1e-9);
        assert!((sector(db..3 * db) - init[1].norm_sqr() - init[2].norm_sqr()).abs() < 1e-9);
        assert!((sector(3 * db..4 * db) - init[3].norm_sqr()).abs() < 1e-9);
    }

    #[test]
    fn polarized_ancillas_factorize() {
        let c = RemoteConfig::new((3, 2), (1.0, 0.6), 0.4, 9.0, 0.05 * PI, 64, AncillaPair::S00);
        let (a, b) = floquet_run_remote(&c).unwrap();
        let single = |n, g| floquet_run(&CentralSpinConfig::new(n, g, 0.0, 9.0, 0.05 * PI, 64)).unwrap();
        for (x, y) in a.magnetization.iter().zip(&single(3, 1.0).magnetization) {
            assert!((x - y).abs() < 1e-9);
        }
        for (x, y) in b.magnetization.iter().zip(&single(2, 0.6).magnetization) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn swap_symmetry() {
        let c = RemoteConfig::new((3, 2), (1.0, 0.6), 0.3, 4.0, 0.1, 64, AncillaPair::S01);
        let (a, b) = floquet_run_remote(&c).unwrap();
        let (sa, sb) = floquet_run_remote(&c.swapped()).unwrap();
        let close = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(p, q)| (p - q).abs() < 1e-12);
        assert!(close(&a.magnetization, &sb.magnetization));
        assert!(close(&b.magnetization, &sa.magnetization));
    }

    #[test]
    fn backends_agree() {
        let mut c = preset(AncillaPair::S01);
        let (a, b) = floquet_run_remote(&c).unwrap();
        c.backend = Backend::Full;
        let (fa, fb) = floquet_run_remote(&c).unwrap();
        for (x, y) in a.magnetization.iter().chain(&b.magnetization).zip(fa.magnetization.iter().chain(&fb.magnetization)) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn capacity_limits() {
        let mut c = RemoteConfig::new((8, 7), (1.0, 1.0), 0.1, 1.0, 0.1, 4, AncillaPair::S00);
        c.backend = Backend::Full;
        assert!(matches!(floquet_run_remote(&c), Err(Error::Capacity { .. })));
        c.backend = Backend::Collective;
        assert!(floquet_run_remote(&c).is_ok());
    }

    #[test]
    fn pearson_examples() {
        let s = [1.0, -0.5, 0.3, 0.9];
        assert!((pearson(&s, &s).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = s.iter().map(|x| -x).collect();
        assert!((pearson(&s, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(pearson(&[1.0; 4], &s), Err(Error::Domain(_))));
        assert!(pearson(&s, &s[..3]).is_err());
    }
}
