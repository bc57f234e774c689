//! Central spin model: one driven qubit ancilla coupled to N non-interacting
//! bath spins through `H = S^z Σ_k g_k I^z_k + ω S^x`, evolved under the
//! stroboscopic protocol `U_F = U(g, ω, τ) · U_R(π − ε)`.
//!
//! Two backends share the protocol:
//!
//! * `Collective` works in the `(N+1)`-dimensional Dicke space and needs
//!   uniform couplings.
//! * `Full` works in the `2^N` product basis and accepts any couplings.
//!
//! `H` commutes with every bath `I^z_k`, so both backends apply the
//! interaction as independent 2×2 ancilla blocks, one per bath `z`
//! configuration. [`propagator`] instead exponentiates the dense
//! Hamiltonian; tests check the two agree.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

use crate::collective::{self, CollectiveBasis, CollectiveRotation};
use crate::error::{config, Error, Result};
use crate::floquet::{check_epsilon, check_finite, check_periods, FloquetResult, ModelConfig, PropagatorSign, Qubit};
use crate::linalg::{exp_i_qubit, expm_hermitian, Operator, RMatrix};
use crate::product::{self, Gate};
use crate::state::{Factor, StateVector};

/// Largest bath simulated in the product basis.
pub const MAX_FULL_SPINS: usize = 16;
/// Largest bath for which the dense `2·2^N` Hamiltonian is materialized.
pub const MAX_DENSE_SPINS: usize = 10;
/// Largest bath accepted by [`cross_validate_backends`].
pub const MAX_CROSS_VALIDATION_SPINS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum Couplings {
    Uniform(f64),
    PerSpin(Vec<f64>),
}

impl Couplings {
    /// The common coupling, if every spin has the same one.
    pub fn uniform(&self) -> Option<f64> {
        match self {
            Couplings::Uniform(g) => Some(*g),
            Couplings::PerSpin(gs) => {
                let first = *gs.first()?;
                gs.iter().all(|&g| g == first).then_some(first)
            }
        }
    }

    pub fn per_spin(&self, n_spins: usize) -> Vec<f64> {
        match self {
            Couplings::Uniform(g) => vec![*g; n_spins],
            Couplings::PerSpin(gs) => gs.clone(),
        }
    }

    pub(crate) fn validate(&self, n_spins: usize, field: &'static str) -> Result<()> {
        match self {
            Couplings::Uniform(g) => check_finite(field, *g),
            Couplings::PerSpin(gs) => {
                if gs.len() != n_spins {
                    return Err(config(field, alloc::format!("expected {n_spins} couplings, got {}", gs.len())));
                }
                gs.iter().try_for_each(|&g| check_finite(field, g))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    #[default]
    Collective,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Readout {
    /// `⟨J_z⟩ / (N/2)`.
    Collective,
    /// `2⟨I^z_k⟩` of one designated bath spin.
    Spin(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CentralSpinConfig {
    pub n_spins: usize,
    pub couplings: Couplings,
    /// Ancilla drive `ω`.
    pub drive: f64,
    /// Interaction time `τ` per period.
    pub interaction_time: f64,
    /// `ε`, with rotation angle `θ = π − ε`.
    pub rotation_error: f64,
    pub n_periods: usize,
    pub backend: Backend,
    pub ancilla_init: Qubit,
    /// `None` resolves to the backend default (collective / spin 0).
    pub readout: Option<Readout>,
    pub propagator_sign: PropagatorSign,
    pub keep_final_state: bool,
}

impl CentralSpinConfig {
    /// Uniform-coupling config with every optional field at its default.
    pub fn new(n_spins: usize, g: f64, drive: f64, interaction_time: f64, rotation_error: f64, n_periods: usize) -> Self {
        Self {
            n_spins,
            couplings: Couplings::Uniform(g),
            drive,
            interaction_time,
            rotation_error,
            n_periods,
            backend: Backend::Collective,
            ancilla_init: Qubit::ZERO,
            readout: None,
            propagator_sign: PropagatorSign::Minus,
            keep_final_state: false,
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn theta(&self) -> f64 {
        core::f64::consts::PI - self.rotation_error
    }

    pub fn resolved_readout(&self) -> Readout {
        self.readout.unwrap_or(match self.backend {
            Backend::Collective => Readout::Collective,
            Backend::Full => Readout::Spin(0),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins == 0 {
            return Err(config("n_spins", "must be at least 1"));
        }
        self.couplings.validate(self.n_spins, "couplings")?;
        check_finite("omega", self.drive)?;
        check_finite("tau", self.interaction_time)?;
        if self.interaction_time < 0.0 {
            return Err(config("tau", "interaction time must be non-negative"));
        }
        check_epsilon(self.rotation_error)?;
        check_periods(self.n_periods)?;
        if self.backend == Backend::Collective && self.couplings.uniform().is_none() {
            return Err(config("backend", "collective backend requires uniform couplings"));
        }
        if self.backend == Backend::Full && self.n_spins > MAX_FULL_SPINS {
            return Err(Error::Capacity {
                what: "full-basis bath (spins)",
                requested: self.n_spins,
                limit: MAX_FULL_SPINS,
            });
        }
        if let Some(Readout::Spin(k)) = self.readout {
            if k >= self.n_spins {
                return Err(config("readout", alloc::format!("spin index {k} out of range")));
            }
        }
        Ok(())
    }
}

fn bath_dim(config: &CentralSpinConfig) -> usize {
    match config.backend {
        Backend::Collective => config.n_spins + 1,
        Backend::Full => 1 << config.n_spins,
    }
}

/// `Σ_k g_k I^z_k` evaluated on each bath basis state.
fn bath_fields(config: &CentralSpinConfig) -> Vec<f64> {
    match config.backend {
        Backend::Collective => {
            let g = config.couplings.uniform().expect("validated uniform coupling");
            let basis = CollectiveBasis::new(config.n_spins).expect("validated n_spins");
            basis.m_labels().into_iter().map(|m| g * m).collect()
        }
        Backend::Full => {
            let gs = config.couplings.per_spin(config.n_spins);
            (0..1usize << config.n_spins).map(|b| product::weighted_field(b, &gs)).collect()
        }
    }
}

/// Dense Hamiltonian on ancilla ⊗ bath (ancilla is the slow index).
pub fn build_hamiltonian(config: &CentralSpinConfig) -> Result<Operator> {
    config.validate()?;
    let sz = product::qubit_operator(&product::SIGMA_Z_HALF);
    let sx = product::qubit_operator(&product::SIGMA_X_HALF);
    let bath_z = match config.backend {
        Backend::Collective => {
            let basis = CollectiveBasis::new(config.n_spins)?;
            let g = config.couplings.uniform().expect("validated uniform coupling");
            collective::build_jz(&basis).scale(Complex64::new(g, 0.0))
        }
        Backend::Full => {
            if config.n_spins > MAX_DENSE_SPINS {
                return Err(Error::Capacity {
                    what: "dense central-spin Hamiltonian (spins)",
                    requested: config.n_spins,
                    limit: MAX_DENSE_SPINS,
                });
            }
            product::weighted_operator(&config.couplings.per_spin(config.n_spins), &product::SIGMA_Z_HALF)
        }
    };
    let d = bath_z.dim();
    Ok(sz
        .kron(&bath_z)
        .add(&sx.kron(&Operator::identity(d)).scale(Complex64::new(config.drive, 0.0))))
}

/// `U(g, ω, τ) = exp(∓iτH)` by dense Hermitian eigendecomposition.
pub fn propagator(config: &CentralSpinConfig) -> Result<Operator> {
    let h = build_hamiltonian(config)?;
    if config.interaction_time == 0.0 {
        return Ok(Operator::identity(h.dim()));
    }
    Ok(expm_hermitian(&h, config.propagator_sign.exponent_time(config.interaction_time)))
}

enum BathRotation {
    Collective(CollectiveRotation),
    Full { n_spins: usize, gate: Gate },
}

/// Per-period update shared by [`floquet_run`] and the perturbative probes.
struct Engine {
    bath_dim: usize,
    rotation: BathRotation,
    /// One ancilla 2×2 unitary per bath basis state.
    blocks: Vec<Gate>,
}

impl Engine {
    fn new(config: &CentralSpinConfig) -> Result<Self> {
        Self::with_generator(config, None)
    }

    fn with_generator(config: &CentralSpinConfig, generator: Option<&RMatrix>) -> Result<Self> {
        config.validate()?;
        let rotation = match config.backend {
            Backend::Collective => {
                let basis = CollectiveBasis::new(config.n_spins)?;
                match generator {
                    Some(g) => BathRotation::Collective(CollectiveRotation::with_generator(g, config.theta())),
                    None => BathRotation::Collective(CollectiveRotation::new(&basis, config.theta())),
                }
            }
            Backend::Full => BathRotation::Full {
                n_spins: config.n_spins,
                gate: product::x_rotation_gate(config.theta()),
            },
        };
        let t = config.propagator_sign.exponent_time(config.interaction_time);
        let blocks = bath_fields(config)
            .into_iter()
            .map(|h| exp_i_qubit(h, config.drive, t))
            .collect();
        Ok(Self {
            bath_dim: bath_dim(config),
            rotation,
            blocks,
        })
    }

    fn initial_state(&self, ancilla: Qubit) -> Vec<Complex64> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * self.bath_dim];
        amps[0] = ancilla.up;
        amps[self.bath_dim] = ancilla.down;
        amps
    }

    fn step(&self, amps: &mut [Complex64]) {
        let d = self.bath_dim;
        match &self.rotation {
            BathRotation::Collective(r) => {
                r.apply_slice(&mut amps[..d]);
                r.apply_slice(&mut amps[d..]);
            }
            BathRotation::Full { n_spins, gate } => product::apply_gate_all(amps, *n_spins, gate),
        }
        let (upper, lower) = amps.split_at_mut(d);
        for ((u, l), block) in upper.iter_mut().zip(lower.iter_mut()).zip(&self.blocks) {
            let (a, b) = (*u, *l);
            *u = block[0][0] * a + block[0][1] * b;
            *l = block[1][0] * a + block[1][1] * b;
        }
    }
}

fn readout_weights(config: &CentralSpinConfig) -> Vec<f64> {
    let n = config.n_spins;
    match (config.backend, config.resolved_readout()) {
        // symmetric states: every spin reads the normalized collective value
        (Backend::Collective, _) => {
            let basis = CollectiveBasis::new(n).expect("validated n_spins");
            basis.m_labels().into_iter().map(|m| m / basis.total_spin()).collect()
        }
        (Backend::Full, Readout::Collective) => {
            (0..1usize << n).map(|b| 2.0 * product::magnetization(b, n) / n as f64).collect()
        }
        (Backend::Full, Readout::Spin(k)) => (0..1usize << n).map(|b| product::spin_sign(b, n, k)).collect(),
    }
}

fn record(amps: &[Complex64], weights: &[f64]) -> (f64, f64) {
    let d = weights.len();
    let (mut mag, mut up, mut down) = (0.0, 0.0, 0.0);
    for i in 0..d {
        let (pu, pd) = (amps[i].norm_sqr(), amps[d + i].norm_sqr());
        mag += weights[i] * (pu + pd);
        up += pu;
        down += pd;
    }
    (mag, up - down)
}

fn state_factors(config: &CentralSpinConfig) -> Vec<Factor> {
    let bath = match config.backend {
        Backend::Collective => Factor::CollectiveBath { n_spins: config.n_spins },
        Backend::Full => Factor::ProductBath { n_spins: config.n_spins },
    };
    vec![Factor::Ancilla, bath]
}

fn run_with_engine(config: &CentralSpinConfig, engine: &Engine) -> FloquetResult {
    let weights = readout_weights(config);
    let mut amps = engine.initial_state(config.ancilla_init);
    let mut magnetization = Vec::with_capacity(config.n_periods);
    let mut ancilla_z = Vec::with_capacity(config.n_periods);
    for n in 0..config.n_periods {
        if n > 0 {
            engine.step(&mut amps);
        }
        let (m, a) = record(&amps, &weights);
        magnetization.push(m);
        ancilla_z.push(a);
    }
    let final_state = config
        .keep_final_state
        .then(|| StateVector::from_slice(&amps, state_factors(config)));
    FloquetResult {
        magnetization,
        ancilla_z,
        spin_purity: Vec::new(),
        final_state,
        config: ModelConfig::CentralSpin(config.clone()),
        label: String::from("bath"),
    }
}

/// Stroboscopic evolution from `ancilla_init ⊗ |↑↑…↑⟩`.
///
/// Each period applies `U_R(π − ε)` to the bath and then `U(g, ω, τ)`; the
/// readout is recorded once per period, starting with the initial state.
pub fn floquet_run(config: &CentralSpinConfig) -> Result<FloquetResult> {
    let engine = Engine::new(config)?;
    Ok(run_with_engine(config, &engine))
}

/// First-order error amplitude `Mε/2` accumulated after `M` faulty flips without
/// interaction, per spin (the amplitude on a product state with one given spin
/// flipped). It does not depend on the starting magnetization.
pub fn linear_error_amplitude(n_periods: usize, eps: f64) -> f64 {
    n_periods as f64 * eps / 2.0
}

/// Ancilla-resolved amplitudes leaked out of the polarized sector, per spin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Leakage {
    pub n_periods: usize,
    /// Components of `⟨N/2 − 1|ψ⟩ / √N` for ancilla up, down.
    pub lower: [Complex64; 2],
    /// Components of `⟨1 − N/2|ψ⟩ / √N` for ancilla up, down.
    pub upper: [Complex64; 2],
}

impl Leakage {
    pub fn lower_norm(&self) -> f64 {
        (self.lower[0].norm_sqr() + self.lower[1].norm_sqr()).sqrt()
    }

    pub fn upper_norm(&self) -> f64 {
        (self.upper[0].norm_sqr() + self.upper[1].norm_sqr()).sqrt()
    }
}

/// Evolves `config` and samples the leaked amplitudes after each period count
/// in `samples` (`M` counts full periods applied to the initial state).
///
/// In the full backend the amplitudes are read from the product states with the
/// readout spin flipped down (lower) or alone left up (upper); in the collective
/// backend the Dicke overlaps are divided by `√N`, which is the same quantity for
/// symmetric states.
pub fn leakage_amplitudes(config: &CentralSpinConfig, samples: &[usize]) -> Result<Vec<Leakage>> {
    let engine = Engine::new(config)?;
    let n = config.n_spins;
    let d = engine.bath_dim;
    let (lower_idx, upper_idx, scale) = match config.backend {
        Backend::Collective => (1, n - 1, 1.0 / (n as f64).sqrt()),
        Backend::Full => {
            let k = match config.resolved_readout() {
                Readout::Spin(k) => k,
                Readout::Collective => 0,
            };
            let bit = product::bit_of(n, k);
            (bit, (d - 1) & !bit, 1.0)
        }
    };
    let last = samples.iter().copied().max().unwrap_or(0);
    let mut amps = engine.initial_state(config.ancilla_init);
    let mut out = Vec::with_capacity(samples.len());
    for m in 0..=last {
        if m > 0 {
            engine.step(&mut amps);
        }
        if samples.contains(&m) {
            out.push(Leakage {
                n_periods: m,
                lower: [amps[lower_idx] * scale, amps[d + lower_idx] * scale],
                upper: [amps[upper_idx] * scale, amps[d + upper_idx] * scale],
            });
        }
    }
    // keep caller order
    Ok(samples
        .iter()
        .map(|&m| *out.iter().find(|l| l.n_periods == m).expect("sampled"))
        .collect())
}

/// Numerically extracted first-order coefficients of the error mixing with
/// the ancilla-mediated interaction switched on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FFactors {
    /// Richardson-extrapolated coefficient of `|N/2 − 1⟩`.
    pub f1: Complex64,
    /// Richardson-extrapolated coefficient of `|1 − N/2⟩`.
    pub f2: Complex64,
    /// Plain finite-difference values at step `ε`.
    pub f1_coarse: Complex64,
    pub f2_coarse: Complex64,
    /// `max(|f1 − f1_coarse|, |f2 − f2_coarse|)`, a measure of the O(ε) remainder.
    pub richardson_gap: f64,
}

fn phased_norm(amps: &[Complex64; 2], norm: f64, component: usize) -> Complex64 {
    let z = amps[component];
    if z.norm() > 0.0 {
        z / z.norm() * norm
    } else {
        Complex64::new(norm, 0.0)
    }
}

/// `f₁ = ⟨N/2−1|ψ(M)⟩/ε`, `f₂ = ⟨1−N/2|ψ(M)⟩/ε`, ancilla reduced by the overlap
/// norm and phased by the dominant ancilla component. The step is the config's
/// `ε`, with a Richardson step at `ε/2`.
pub fn f_factors(config: &CentralSpinConfig, n_periods: usize) -> Result<FFactors> {
    if config.couplings.uniform().is_none() {
        return Err(config_err_uniform());
    }
    let eps = config.rotation_error;
    if eps == 0.0 {
        return Err(Error::Domain(String::from("f-factors are undefined at ε = 0")));
    }
    let coarse = leakage_amplitudes(config, &[n_periods])?[0];
    let mut half_cfg = config.clone();
    half_cfg.rotation_error = eps / 2.0;
    let fine = leakage_amplitudes(&half_cfg, &[n_periods])?[0];

    let pick = |a: &[Complex64; 2]| usize::from(a[1].norm() > a[0].norm());
    let (c1, c2) = (pick(&coarse.lower), pick(&coarse.upper));
    let f1_coarse = phased_norm(&coarse.lower, coarse.lower_norm(), c1) / eps;
    let f2_coarse = phased_norm(&coarse.upper, coarse.upper_norm(), c2) / eps;
    let f1_fine = phased_norm(&fine.lower, fine.lower_norm(), c1) / (eps / 2.0);
    let f2_fine = phased_norm(&fine.upper, fine.upper_norm(), c2) / (eps / 2.0);
    let f1 = f1_fine * 2.0 - f1_coarse;
    let f2 = f2_fine * 2.0 - f2_coarse;
    Ok(FFactors {
        f1,
        f2,
        f1_coarse,
        f2_coarse,
        richardson_gap: (f1 - f1_coarse).norm().max((f2 - f2_coarse).norm()),
    })
}

fn config_err_uniform() -> Error {
    config("couplings", "operation requires uniform couplings")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BackendComparison {
    pub n_periods: usize,
    /// `max_n |s_collective(n) − s_full(n)|`.
    pub max_discrepancy: f64,
}

/// Runs the protocol in both backends (each with its default readout) and
/// reports the largest magnetization difference.
pub fn cross_validate_backends(config: &CentralSpinConfig) -> Result<BackendComparison> {
    cross_validate_inner(config, None)
}

/// As [`cross_validate_backends`] but with the collective `J_x` replaced by
/// `generator`; a mutation hook for the validation suite.
pub fn cross_validate_with_generator(config: &CentralSpinConfig, generator: &RMatrix) -> Result<BackendComparison> {
    cross_validate_inner(config, Some(generator))
}

fn cross_validate_inner(config: &CentralSpinConfig, generator: Option<&RMatrix>) -> Result<BackendComparison> {
    if config.couplings.uniform().is_none() {
        return Err(config_err_uniform());
    }
    if config.n_spins > MAX_CROSS_VALIDATION_SPINS {
        return Err(Error::Capacity {
            what: "backend cross-validation (spins)",
            requested: config.n_spins,
            limit: MAX_CROSS_VALIDATION_SPINS,
        });
    }
    let mut collective_cfg = config.clone();
    collective_cfg.backend = Backend::Collective;
    collective_cfg.readout = None;
    let mut full_cfg = config.clone();
    full_cfg.backend = Backend::Full;
    full_cfg.readout = None;
    let a = run_with_engine(&collective_cfg, &Engine::with_generator(&collective_cfg, generator)?);
    let b = floquet_run(&full_cfg)?;
    let max_discrepancy = a
        .magnetization
        .iter()
        .zip(&b.magnetization)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
    Ok(BackendComparison {
        n_periods: config.n_periods,
        max_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CVector, ONE};
    use core::f64::consts::PI;

    fn cfg(n: usize, g: f64, w: f64, tau: f64, eps: f64, m: usize) -> CentralSpinConfig {
        CentralSpinConfig::new(n, g, w, tau, eps, m)
    }

    #[test]
    fn validation_rules() {
        assert!(cfg(3, 1.0, 1.0, 1.0, 0.1, 7).validate().is_err());
        assert!(cfg(3, 1.0, 1.0, -1.0, 0.1, 8).validate().is_err());
        assert!(cfg(3, 1.0, 1.0, 1.0, PI, 8).validate().is_err());
        assert!(cfg(0, 1.0, 1.0, 1.0, 0.1, 8).validate().is_err());
        let mut c = cfg(3, 1.0, 1.0, 1.0, 0.1, 8);
        c.couplings = Couplings::PerSpin(vec![1.0, 2.0, 3.0]);
        assert!(matches!(c.validate(), Err(Error::Config { field: "backend", .. })));
        c.backend = Backend::Full;
        assert!(c.validate().is_ok());
        c.couplings = Couplings::PerSpin(vec![1.0, 2.0]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let h = build_hamiltonian(&cfg(1, 2.0, 0.0, 1.0, 0.0, 2)).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| h.matrix()[(i, i)].re).collect();
        assert_eq!(diag, [0.5, -0.5, -0.5, 0.5]);
        assert!(h.is_diagonal(0.0));
        let h = build_hamiltonian(&cfg(3, 1.0, 0.7, 1.0, 0.0, 2)).unwrap();
        assert!(h.hermiticity_defect() <= 1e-12);
        let sz = product::qubit_operator(&product::SIGMA_Z_HALF).kron(&Operator::identity(4));
        assert!(h.commutator(&sz).max_abs() > 0.1);

        let mut c = cfg(3, 1.0, 0.0, 1.0, 0.0, 2);
        c.couplings = Couplings::PerSpin(vec![1.0, 2.0, 3.0]);
        assert!(build_hamiltonian(&c).is_err());
        c.backend = Backend::Full;
        assert!(build_hamiltonian(&c).unwrap().is_diagonal(0.0));
    }

    #[test]
    fn propagator_examples() {
        let u = propagator(&cfg(4, 1.3, 0.9, 0.0, 0.0, 2)).unwrap();
        assert!(u.max_abs_diff(&Operator::identity(10)) < 1e-15);

        // ω = 0: diagonal phases exp(∓iτ g m/2) in the two ancilla sectors
        let (g, tau) = (1.3, 0.77);
        let c = cfg(3, g, 0.0, tau, 0.0, 2);
        let u = propagator(&c).unwrap();
        let basis = CollectiveBasis::new(3).unwrap();
        for (i, m) in basis.m_labels().into_iter().enumerate() {
            let up = crate::linalg::cis(-tau * g * m / 2.0);
            let down = crate::linalg::cis(tau * g * m / 2.0);
            assert!((u.matrix()[(i, i)] - up).norm() < 1e-12);
            assert!((u.matrix()[(4 + i, 4 + i)] - down).norm() < 1e-12);
        }
        assert!(u.is_diagonal(1e-12));

        let u = propagator(&cfg(6, 1.0, 2.0, 9.5, 0.0, 2)).unwrap();
        assert!(u.unitarity_defect() <= 1e-10);
    }

    #[test]
    fn block_engine_matches_dense_propagator() {
        for backend in [Backend::Collective, Backend::Full] {
            let mut c = cfg(3, 0.8, 1.7, 2.3, 0.3, 4).with_backend(backend);
            c.propagator_sign = PropagatorSign::Plus;
            let dense_u = propagator(&c).unwrap();
            let dense_r = match backend {
                Backend::Collective => {
                    Operator::identity(2).kron(&collective::rotation(&CollectiveBasis::new(3).unwrap(), c.theta()))
                }
                Backend::Full => {
                    let gate = product::x_rotation_gate(c.theta());
                    let mut r = Operator::identity(1);
                    for _ in 0..3 {
                        r = r.kron(&product::qubit_operator(&gate));
                    }
                    Operator::identity(2).kron(&r)
                }
            };
            let step = dense_u.mul(&dense_r);
            let engine = Engine::new(&c).unwrap();
            let mut amps = engine.initial_state(Qubit::new(ONE, ONE * 0.5).unwrap());
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
    fn perfect_flips_give_period_doubling() {
        for backend in [Backend::Collective, Backend::Full] {
            for &(g, w, tau) in &[(1.0, 2.0, 9.5), (0.3, 0.0, 1.0), (0.0, 4.0, 2.0)] {
                let r = floquet_run(&cfg(4, g, w, tau, 0.0, 32).with_backend(backend)).unwrap();
                for (n, s) in r.magnetization.iter().enumerate() {
                    let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((s - expected).abs() < 1e-9, "n={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn no_interaction_is_a_plain_rotation_sequence() {
        let eps = 0.05 * PI;
        let r = floquet_run(&cfg(5, 1.0, 1.0, 0.0, eps, 64)).unwrap();
        for (n, s) in r.magnetization.iter().enumerate() {
            assert!((s - (n as f64 * (PI - eps)).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn final_state_keeps_unit_norm() {
        let mut c = cfg(7, 1.0, 2.0, 9.5, 0.3, 200);
        c.keep_final_state = true;
        let r = floquet_run(&c).unwrap();
        assert!((r.final_state.unwrap().norm() - 1.0).abs() < 1e-9);
        assert!(r.magnetization.iter().all(|s| s.abs() <= 1.0 + 1e-9));
    }

    #[test]
    fn linear_amplitude_examples() {
        assert_eq!(linear_error_amplitude(0, 0.3), 0.0);
        assert!((linear_error_amplitude(2, 0.01) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn linear_amplitude_matches_full_basis_evolution() {
        let eps = 1e-3;
        let c = cfg(4, 0.0, 0.0, 1.0, eps, 10).with_backend(Backend::Full);
        let samples = leakage_amplitudes(&c, &[2, 4, 8]).unwrap();
        for l in samples {
            let m = l.n_periods as f64;
            let err = (l.lower_norm() - linear_error_amplitude(l.n_periods, eps)).abs();
            assert!(err <= eps * eps * m * m, "M={m} err={err}");
        }
    }

    #[test]
    fn f_factor_limits() {
        let mut c = cfg(4, 0.0, 3.0, 1.0, 1e-4, 2);
        for m in [2, 10, 40] {
            let f = f_factors(&c, m).unwrap();
            assert!((f.f1.norm() - m as f64 / 2.0).abs() < 1e-3 * m as f64, "{f:?}");
        }
        c.rotation_error = 0.0;
        assert!(matches!(f_factors(&c, 4), Err(Error::Domain(_))));
        c.couplings = Couplings::PerSpin(vec![1.0, 2.0, 1.0, 1.0]);
        assert!(f_factors(&c, 4).is_err());
    }

    #[test]
    fn f1_without_drive_grows_linearly() {
        let c = cfg(4, 1.0, 0.0, 1.0, 1e-4, 2);
        let f: Vec<f64> = [20usize, 40, 80].iter().map(|&m| f_factors(&c, m).unwrap().f1.norm()).collect();
        assert!((f[1] / f[0] - 2.0).abs() < 0.05 && (f[2] / f[0] - 4.0).abs() < 0.1, "{f:?}");
    }

    #[test]
    fn f1_with_drive_stays_bounded() {
        let c = cfg(6, 1.0, 2.0, 9.5, 1e-4, 2);
        let f: Vec<f64> = (1..=50).map(|k| f_factors(&c, 2 * k).unwrap().f1.norm()).collect();
        let max = f.iter().copied().fold(0.0, f64::max);
        // non-interacting growth would reach 50 at M = 100
        assert!(max < 5.0, "max |f1| = {max}");
    }

    #[test]
    fn backends_agree() {
        let c = cfg(4, 1.0, 1.0, 1.0, 0.05 * PI, 64);
        assert!(cross_validate_backends(&c).unwrap().max_discrepancy <= 1e-8);
        let c = cfg(1, 0.7, 1.3, 2.0, 0.3, 64);
        assert!(cross_validate_backends(&c).unwrap().max_discrepancy <= 1e-10);
        let mut c = cfg(3, 1.0, 1.0, 1.0, 0.1, 8);
        c.couplings = Couplings::PerSpin(vec![1.0, 1.5, 2.0]);
        assert!(cross_validate_backends(&c).is_err());
        assert!(matches!(
            cross_validate_backends(&cfg(13, 1.0, 1.0, 1.0, 0.1, 8)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn corrupted_generator_is_caught() {
        let c = cfg(4, 1.0, 2.0, 9.5, 0.05 * PI, 64);
        let basis = CollectiveBasis::new(4).unwrap();
        // one wrong ladder coefficient, as from an off-by-one in m
        let mut bad = collective::jx_real(&basis);
        bad[(1, 2)] *= 1.1;
        bad[(2, 1)] *= 1.1;
        assert!(cross_validate_with_generator(&c, &bad).unwrap().max_discrepancy > 1e-3);
    }
}
