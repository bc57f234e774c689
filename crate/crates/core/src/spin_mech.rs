//! Spins embedded in a mechanical oscillator:
//! `H = ω₀ a†a + g J_z (a + a†)`, solved in closed form and by brute force in a
//! truncated Fock space.
//!
//! With `L = g J_z` the exact propagator factorizes per Dicke sector `m`:
//!
//! ```text
//! exp(−itH) = e^{+i t f(t) L²} · D(L α) · e^{−i ω₀ t a†a},
//! f(t) = (1 − sinc(ω₀t)) / ω₀,   α = (e^{−iω₀t} − 1)/ω₀ = −conj(α₀),
//! ```
//!
//! where `α₀ = (1 − e^{iω₀t})/ω₀` is the conditional displacement amplitude.
//! `exp(+itH)` is the complex conjugate, since `H` is real in this basis.
//!
//! State layout is spin-major: amplitude `(i, n)` sits at `i·(n_max+1) + n`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

use crate::collective::{self, CollectiveBasis, CollectiveRotation};
use crate::error::{config, Error, Result};
use crate::floquet::{check_epsilon, check_finite, check_periods, FloquetResult, ModelConfig, PropagatorSign};
use crate::linalg::{cis, expm_hermitian, CMatrix, Operator, RMatrix, IMAG, ONE, ZERO};
use crate::state::{Factor, StateVector};

/// Largest `(N+1)(n_max+1)` accepted by [`brute_force_unitary`].
pub const MAX_BRUTE_FORCE_DIM: usize = 4096;
/// Largest Fock cutoff tried by [`floquet_run_mech_auto`].
pub const MAX_FOCK_CUTOFF: usize = 1024;
/// Population allowed in the highest Fock level before a run is rejected.
pub const FOCK_EDGE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum BosonInit {
    #[default]
    Vacuum,
    Coherent(Complex64),
}

impl BosonInit {
    /// Normalized amplitudes on `|0⟩ … |cutoff⟩`.
    pub fn amplitudes(&self, cutoff: usize) -> Vec<Complex64> {
        match *self {
            BosonInit::Vacuum => {
                let mut v = vec![ZERO; cutoff + 1];
                v[0] = ONE;
                v
            }
            BosonInit::Coherent(alpha) => {
                let mut v = Vec::with_capacity(cutoff + 1);
                let mut term = ONE;
                for n in 0..=cutoff {
                    if n > 0 {
                        term = term * alpha / (n as f64).sqrt();
                    }
                    v.push(term);
                }
                let norm = crate::linalg::norm_sq(&v).sqrt();
                v.iter_mut().for_each(|z| *z /= norm);
                v
            }
        }
    }

    pub fn magnitude(&self) -> f64 {
        match *self {
            BosonInit::Vacuum => 0.0,
            BosonInit::Coherent(a) => a.norm(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinMechConfig {
    pub n_spins: usize,
    /// Uniform spin–mode coupling `g`.
    pub coupling: f64,
    /// Mode frequency `ω₀`.
    pub mode_frequency: f64,
    /// Interaction time `t` per period.
    pub interaction_time: f64,
    pub rotation_error: f64,
    pub n_periods: usize,
    pub fock_cutoff: usize,
    pub boson_init: BosonInit,
    /// Project the mode back onto `boson_init` after every period.
    pub boson_reset: bool,
    pub propagator_sign: PropagatorSign,
    pub keep_final_state: bool,
}

impl SpinMechConfig {
    pub fn new(
        n_spins: usize,
        coupling: f64,
        mode_frequency: f64,
        interaction_time: f64,
        rotation_error: f64,
        n_periods: usize,
        fock_cutoff: usize,
    ) -> Self {
        Self {
            n_spins,
            coupling,
            mode_frequency,
            interaction_time,
            rotation_error,
            n_periods,
            fock_cutoff,
            boson_init: BosonInit::Vacuum,
            boson_reset: false,
            propagator_sign: PropagatorSign::Minus,
            keep_final_state: false,
        }
    }

    pub fn theta(&self) -> f64 {
        core::f64::consts::PI - self.rotation_error
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_cutoff + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins == 0 {
            return Err(config("n_spins", "must be at least 1"));
        }
        check_finite("g", self.coupling)?;
        check_finite("omega0", self.mode_frequency)?;
        check_finite("t", self.interaction_time)?;
        if self.mode_frequency <= 0.0 {
            return Err(config("omega0", "mode frequency must be positive"));
        }
        if self.interaction_time < 0.0 {
            return Err(config("t", "interaction time must be non-negative"));
        }
        if self.fock_cutoff < 4 {
            return Err(config("fock_cutoff", "Fock cutoff must be at least 4"));
        }
        check_epsilon(self.rotation_error)?;
        check_periods(self.n_periods)
    }

    /// Largest coherent amplitude reached by any conditional-displacement branch.
    pub fn branch_amplitude(&self) -> f64 {
        let alpha0 = displacement_amplitude(self.mode_frequency, self.interaction_time);
        self.boson_init.magnitude() + (self.coupling * self.n_spins as f64 / 2.0).abs() * alpha0.norm()
    }

    /// A-priori cutoff rule: `amplitude² ≤ n_max / 4`.
    pub fn check_cutoff(&self) -> Result<()> {
        let amp = self.branch_amplitude();
        if amp * amp > self.fock_cutoff as f64 / 4.0 {
            return Err(Error::CutoffInsufficient {
                cutoff: self.fock_cutoff,
                detail: format!("branch amplitude² = {:.3} exceeds n_max/4", amp * amp),
            });
        }
        Ok(())
    }
}

/// `sinc(x) = sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        // Taylor series; error O(x⁶) ≈ 1e−26 here
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}

/// Induced spin–spin coupling `f(t) = (1 − sinc(ω₀t)) / ω₀`.
pub fn interaction_phase(omega0: f64, t: f64) -> f64 {
    (1.0 - sinc(omega0 * t)) / omega0
}

/// Conditional displacement amplitude `α₀ = (1 − e^{iω₀t}) / ω₀`.
pub fn displacement_amplitude(omega0: f64, t: f64) -> Complex64 {
    (ONE - cis(omega0 * t)) / omega0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormPieces {
    pub phase_coeff: f64,
    pub displacement: Complex64,
}

pub fn closed_form_pieces(omega0: f64, t: f64) -> ClosedFormPieces {
    ClosedFormPieces {
        phase_coeff: interaction_phase(omega0, t),
        displacement: displacement_amplitude(omega0, t),
    }
}

/// Truncated annihilation operator on `|0⟩ … |cutoff⟩`.
pub fn annihilation(cutoff: usize) -> RMatrix {
    let d = cutoff + 1;
    let mut a = RMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    a
}

/// `D(β) = exp(β a† − β* a)` on the truncated space, via the Hermitian
/// generator `−i(β a† − β* a)`. Exactly unitary at any cutoff.
pub fn displacement(beta: Complex64, cutoff: usize) -> Operator {
    if beta == ZERO {
        return Operator::identity(cutoff + 1);
    }
    let a = annihilation(cutoff).map(|x| Complex64::new(x, 0.0));
    let generator = (a.transpose() * beta - &a * beta.conj()) * (-IMAG);
    expm_hermitian(&Operator::new(generator), 1.0)
}

fn sector_blocks(config: &SpinMechConfig) -> Result<Vec<CMatrix>> {
    config.validate()?;
    let basis = CollectiveBasis::new(config.n_spins)?;
    let d = config.fock_dim();
    let (omega0, t, g) = (config.mode_frequency, config.interaction_time, config.coupling);
    let pieces = closed_form_pieces(omega0, t);
    let alpha = -pieces.displacement.conj();
    let free: Vec<Complex64> = (0..d).map(|n| cis(-omega0 * t * n as f64)).collect();
    let blocks = basis
        .m_labels()
        .into_iter()
        .map(|m| {
            let l = g * m;
            let phase = cis(t * pieces.phase_coeff * l * l);
            let mut block = displacement(alpha * l, config.fock_cutoff).into_matrix() * phase;
            for (n, f) in free.iter().enumerate() {
                block.column_mut(n).iter_mut().for_each(|z| *z *= f);
            }
            match config.propagator_sign {
                PropagatorSign::Minus => block,
                PropagatorSign::Plus => block.map(|z| z.conj()),
            }
        })
        .collect();
    Ok(blocks)
}

/// Closed-form propagator, block diagonal over Dicke labels `m`.
pub fn closed_form_unitary(config: &SpinMechConfig) -> Result<Operator> {
    config.check_cutoff()?;
    let blocks = sector_blocks(config)?;
    let d = config.fock_dim();
    let total = blocks.len() * d;
    let mut u = CMatrix::zeros(total, total);
    for (i, block) in blocks.iter().enumerate() {
        u.view_mut((i * d, i * d), (d, d)).copy_from(block);
    }
    Ok(Operator::new(u))
}

/// Dense `H = ω₀ a†a + g J_z (a + a†)` on Dicke ⊗ truncated Fock.
pub fn build_hamiltonian_mech(config: &SpinMechConfig) -> Result<Operator> {
    config.validate()?;
    let basis = CollectiveBasis::new(config.n_spins)?;
    let a = annihilation(config.fock_cutoff);
    let number = a.transpose() * &a;
    let position = &a + a.transpose();
    let jz = collective::jz_real(&basis);
    let spin_id = RMatrix::identity(basis.dim(), basis.dim());
    let h = spin_id.kronecker(&number) * config.mode_frequency + jz.kronecker(&position) * config.coupling;
    Ok(Operator::from_real(&h))
}

/// `exp(∓itH)` by Hermitian eigendecomposition in the truncated space.
pub fn brute_force_unitary(config: &SpinMechConfig) -> Result<Operator> {
    config.validate()?;
    let dim = (config.n_spins + 1) * config.fock_dim();
    if dim > MAX_BRUTE_FORCE_DIM {
        return Err(Error::Capacity {
            what: "brute-force spin-boson dimension",
            requested: dim,
            limit: MAX_BRUTE_FORCE_DIM,
        });
    }
    let h = build_hamiltonian_mech(config)?;
    Ok(expm_hermitian(&h, config.propagator_sign.exponent_time(config.interaction_time)))
}

/// Indices of the spin ⊗ Fock basis with occupation `≤ max_occupation`.
pub fn low_fock_indices(n_spins: usize, cutoff: usize, max_occupation: usize) -> Vec<usize> {
    let d = cutoff + 1;
    (0..=n_spins)
        .flat_map(|i| (0..=max_occupation.min(cutoff)).map(move |n| i * d + n))
        .collect()
}

/// `max |A_ij − B_ij|` over rows and columns in `indices`.
pub fn max_deviation_on(a: &Operator, b: &Operator, indices: &[usize]) -> f64 {
    let mut worst = 0.0f64;
    for &i in indices {
        for &j in indices {
            worst = worst.max((a.matrix()[(i, j)] - b.matrix()[(i, j)]).norm());
        }
    }
    worst
}

/// Boson-traced spin density matrix of a spin-major state.
pub fn reduced_spin_state(amps: &[Complex64], n_spins: usize, cutoff: usize) -> CMatrix {
    let d = cutoff + 1;
    let s = n_spins + 1;
    let psi = CMatrix::from_fn(s, d, |i, n| amps[i * d + n]);
    &psi * psi.adjoint()
}

struct MechEngine {
    spin_dim: usize,
    fock_dim: usize,
    rotation: CollectiveRotation,
    blocks: Vec<CMatrix>,
}

impl MechEngine {
    fn new(config: &SpinMechConfig) -> Result<Self> {
        config.check_cutoff()?;
        let basis = CollectiveBasis::new(config.n_spins)?;
        Ok(Self {
            spin_dim: basis.dim(),
            fock_dim: config.fock_dim(),
            rotation: CollectiveRotation::new(&basis, config.theta()),
            blocks: sector_blocks(config)?,
        })
    }

    fn initial_state(&self, init: &BosonInit) -> Vec<Complex64> {
        let mut amps = vec![ZERO; self.spin_dim * self.fock_dim];
        amps[..self.fock_dim].copy_from_slice(&init.amplitudes(self.fock_dim - 1));
        amps
    }

    fn step(&self, amps: &mut [Complex64]) {
        let (s, d) = (self.spin_dim, self.fock_dim);
        let mut column = vec![ZERO; s];
        for n in 0..d {
            for i in 0..s {
                column[i] = amps[i * d + n];
            }
            self.rotation.apply_slice(&mut column);
            for i in 0..s {
                amps[i * d + n] = column[i];
            }
        }
        for (i, block) in self.blocks.iter().enumerate() {
            let part = crate::linalg::CVector::from_column_slice(&amps[i * d..(i + 1) * d]);
            let out = block * part;
            amps[i * d..(i + 1) * d].copy_from_slice(out.as_slice());
        }
    }

    fn edge_population(&self, amps: &[Complex64]) -> f64 {
        let d = self.fock_dim;
        (0..self.spin_dim).map(|i| amps[i * d + d - 1].norm_sqr()).sum()
    }

    fn reset(&self, amps: &mut [Complex64], init: &[Complex64]) -> Result<()> {
        let (s, d) = (self.spin_dim, self.fock_dim);
        let spin: Vec<Complex64> = (0..s)
            .map(|i| (0..d).map(|n| init[n].conj() * amps[i * d + n]).sum())
            .collect();
        let norm = crate::linalg::norm_sq(&spin).sqrt();
        if norm == 0.0 {
            return Err(Error::Domain(String::from("boson reset projected onto a zero-norm state")));
        }
        for i in 0..s {
            for n in 0..d {
                amps[i * d + n] = spin[i] * init[n] / norm;
            }
        }
        Ok(())
    }
}

fn magnetization_and_purity(amps: &[Complex64], config: &SpinMechConfig) -> (f64, f64) {
    let rho = reduced_spin_state(amps, config.n_spins, config.fock_cutoff);
    let j = config.n_spins as f64 / 2.0;
    let mag = (0..rho.nrows()).map(|i| rho[(i, i)].re * (j - i as f64)).sum::<f64>() / j;
    let purity = rho.iter().map(|z| z.norm_sqr()).sum();
    (mag, purity)
}

/// Stroboscopic protocol: `U_R(π − ε) ⊗ 1`, then the closed-form propagator.
///
/// The spin readout is `Tr[(J_z/(N/2)) ρ_spin]` of the boson-traced state,
/// recorded once per period starting with the initial state.
pub fn floquet_run_mech(config: &SpinMechConfig) -> Result<FloquetResult> {
    let engine = MechEngine::new(config)?;
    let init = config.boson_init.amplitudes(config.fock_cutoff);
    let mut amps = engine.initial_state(&config.boson_init);
    let mut magnetization = Vec::with_capacity(config.n_periods);
    let mut spin_purity = Vec::with_capacity(config.n_periods);
    for n in 0..config.n_periods {
        if n > 0 {
            engine.step(&mut amps);
            let edge = engine.edge_population(&amps);
            if edge > FOCK_EDGE_TOLERANCE {
                return Err(Error::CutoffInsufficient {
                    cutoff: config.fock_cutoff,
                    detail: format!("top Fock level holds population {edge:.3e} after period {n}"),
                });
            }
            if config.boson_reset {
                engine.reset(&mut amps, &init)?;
            }
        }
        let (m, p) = magnetization_and_purity(&amps, config);
        magnetization.push(m);
        spin_purity.push(p);
    }
    let final_state = config.keep_final_state.then(|| {
        StateVector::from_slice(
            &amps,
            vec![
                Factor::CollectiveBath { n_spins: config.n_spins },
                Factor::Boson { cutoff: config.fock_cutoff },
            ],
        )
    });
    Ok(FloquetResult {
        magnetization,
        ancilla_z: Vec::new(),
        spin_purity,
        final_state,
        config: ModelConfig::SpinMech(config.clone()),
        label: String::from("spins"),
    })
}

/// Runs [`floquet_run_mech`], doubling the Fock cutoff until both the a-priori
/// amplitude rule and the runtime edge check pass. Returns the cutoff used.
pub fn floquet_run_mech_auto(config: &SpinMechConfig) -> Result<(FloquetResult, usize)> {
    let mut cfg = config.clone();
    loop {
        match floquet_run_mech(&cfg) {
            Ok(r) => return Ok((r, cfg.fock_cutoff)),
            Err(Error::CutoffInsufficient { .. }) if cfg.fock_cutoff * 2 <= MAX_FOCK_CUTOFF => {
                cfg.fock_cutoff *= 2;
            }
            Err(Error::CutoffInsufficient { cutoff, detail }) => {
                return Err(Error::CutoffInsufficient {
                    cutoff,
                    detail: format!("{detail}; cutoff limit {MAX_FOCK_CUTOFF} reached"),
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// Leakage predicted for the squeezing-mediated protocol,
/// `ε · sin²[Ngt(1+M)] / sin²[Ngt]`.
pub fn predicted_leakage(n_spins: usize, g: f64, t: f64, n_periods: usize, eps: f64) -> Result<f64> {
    let x = n_spins as f64 * g * t;
    let s = x.sin();
    if s.abs() < 1e-9 {
        return Err(Error::Singular(format!("sin(Ngt) = {s:.3e} at Ngt = {x}; the ratio is 0/0")));
    }
    let num = (x * (1.0 + n_periods as f64)).sin();
    Ok(eps * num * num / (s * s))
}

/// Per-spin amplitudes leaked to `|N/2 − 1⟩` and `|1 − N/2⟩`, boson traced by
/// the overlap norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MechLeakage {
    pub n_periods: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Evolves without the edge guard and samples the first-order leakage after
/// each period count in `samples` (returned in caller order).
pub fn leakage_amplitudes_mech(config: &SpinMechConfig, samples: &[usize]) -> Result<Vec<MechLeakage>> {
    let engine = MechEngine::new(config)?;
    let n = config.n_spins;
    let d = config.fock_dim();
    let scale = 1.0 / (n as f64).sqrt();
    let norm_of = |amps: &[Complex64], i: usize| crate::linalg::norm_sq(&amps[i * d..(i + 1) * d]).sqrt() * scale;
    let last = samples.iter().copied().max().unwrap_or(0);
    let mut amps = engine.initial_state(&config.boson_init);
    let mut out = Vec::with_capacity(samples.len());
    for m in 0..=last {
        if m > 0 {
            engine.step(&mut amps);
        }
        if samples.contains(&m) {
            out.push(MechLeakage {
                n_periods: m,
                lower: norm_of(&amps, 1),
                upper: norm_of(&amps, n - 1),
            });
        }
    }
    Ok(samples
        .iter()
        .map(|&m| *out.iter().find(|l| l.n_periods == m).expect("sampled"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermitianSpectrum;
    use core::f64::consts::PI;

    #[test]
    fn phase_examples() {
        assert_eq!(interaction_phase(2.0, 0.0), 0.0);
        assert!(interaction_phase(2.0, 1e-7).abs() < 1e-14);
        assert!((interaction_phase(3.0, PI / 3.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((interaction_phase(3.0, 2.0 * PI / 3.0) - 1.0 / 3.0).abs() < 1e-15);
        // series branch joins the direct formula smoothly
        assert!((sinc(0.99e-4) - (0.99e-4f64).sin() / 0.99e-4).abs() < 1e-15);
    }

    #[test]
    fn displacement_amplitude_examples() {
        assert_eq!(displacement_amplitude(1.5, 0.0).norm(), 0.0);
        assert!(displacement_amplitude(1.5, 2.0 * PI / 1.5).norm() < 1e-15);
        assert!((displacement_amplitude(1.5, PI / 1.5).norm() - 2.0 / 1.5).abs() < 1e-15);
        let p = closed_form_pieces(2.0, 0.0);
        assert_eq!((p.phase_coeff, p.displacement.norm()), (0.0, 0.0));
    }

    #[test]
    fn displacement_operator_is_unitary_and_displaces_vacuum() {
        let beta = Complex64::new(0.6, -0.3);
        let d = displacement(beta, 40);
        assert!(d.unitarity_defect() < 1e-12);
        let coherent = BosonInit::Coherent(beta).amplitudes(40);
        for n in 0..20 {
            assert!((d.matrix()[(n, 0)] - coherent[n]).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_examples() {
        let mut c = SpinMechConfig::new(3, 0.0, 1.3, 2.0, 0.0, 2, 8);
        let u = closed_form_unitary(&c).unwrap();
        // g = 0 leaves only the free oscillator phase
        let free = brute_force_unitary(&c).unwrap();
        assert!(u.max_abs_diff(&free) < 1e-12);
        assert!(free.is_diagonal(1e-13));

        // ω₀t = 2π: no displacement, pure phase per m
        c.coupling = 0.4;
        c.mode_frequency = 2.0 * PI / c.interaction_time;
        let u = closed_form_unitary(&c).unwrap();
        assert!(u.is_diagonal(1e-12));
        let f = interaction_phase(c.mode_frequency, c.interaction_time);
        let basis = CollectiveBasis::new(3).unwrap();
        for (i, m) in basis.m_labels().into_iter().enumerate() {
            let expected = cis(c.interaction_time * f * (c.coupling * m).powi(2));
            assert!((u.matrix()[(i * 9 + 2, i * 9 + 2)] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_brute_force() {
        let c = SpinMechConfig::new(2, 1.0, 1.0, 1.0, 0.0, 2, 24);
        let idx = low_fock_indices(2, 24, 12);
        let dev = max_deviation_on(&closed_form_unitary(&c).unwrap(), &brute_force_unitary(&c).unwrap(), &idx);
        assert!(dev <= 1e-6, "deviation {dev}");

        let mut plus = c.clone();
        plus.propagator_sign = PropagatorSign::Plus;
        let dev = max_deviation_on(
            &closed_form_unitary(&plus).unwrap(),
            &brute_force_unitary(&plus).unwrap(),
            &idx,
        );
        assert!(dev <= 1e-6, "plus deviation {dev}");
    }

    #[test]
    fn brute_force_examples() {
        let c = SpinMechConfig::new(2, 0.7, 1.1, 0.0, 0.0, 2, 6);
        assert!(brute_force_unitary(&c).unwrap().max_abs_diff(&Operator::identity(21)) < 1e-13);
        let big = SpinMechConfig::new(40, 0.7, 1.1, 1.0, 0.0, 2, 100);
        assert!(matches!(brute_force_unitary(&big), Err(Error::Capacity { .. })));
    }

    #[test]
    fn cutoff_rule() {
        let c = SpinMechConfig::new(20, 2.0, 1.0, PI, 0.0, 2, 8);
        assert!(matches!(closed_form_unitary(&c), Err(Error::CutoffInsufficient { .. })));
        assert!(matches!(
            SpinMechConfig::new(2, 1.0, 1.0, 1.0, 0.0, 2, 3).validate(),
            Err(Error::Config { field: "fock_cutoff", .. })
        ));
    }

    fn fig2(eps: f64) -> SpinMechConfig {
        SpinMechConfig::new(4, PI / 2.0, 2.0 * PI, 1.0, eps, 256, 8)
    }

    #[test]
    fn run_examples() {
        let r = floquet_run_mech(&fig2(0.0)).unwrap();
        for (n, s) in r.magnetization.iter().enumerate() {
            assert!((s - if n % 2 == 0 { 1.0 } else { -1.0 }).abs() < 1e-9);
        }
        let eps = 0.05 * PI;
        let mut c = fig2(eps);
        c.coupling = 0.0;
        let r = floquet_run_mech(&c).unwrap();
        for (n, s) in r.magnetization.iter().enumerate() {
            assert!((s - (n as f64 * (PI - eps)).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn decoupled_mode_keeps_spins_pure() {
        let r = floquet_run_mech(&fig2(0.2)).unwrap();
        assert!(r.spin_purity.iter().all(|p| (p - 1.0).abs() < 1e-9));
    }

    #[test]
    fn reduced_state_is_physical() {
        let mut c = SpinMechConfig::new(3, 0.5, 1.0, 1.3, 0.2, 40, 24);
        c.keep_final_state = true;
        let r = floquet_run_mech(&c).unwrap();
        assert!(r.spin_purity.iter().any(|p| *p < 0.999), "mode should entangle");
        let state = r.final_state.unwrap();
        let rho = reduced_spin_state(state.as_slice(), 3, 24);
        let rho_op = Operator::new(rho.clone());
        assert!(rho_op.hermiticity_defect() < 1e-12);
        assert!((rho.trace().re - 1.0).abs() < 1e-9);
        let spec = HermitianSpectrum::new(&rho_op);
        assert!(spec.values().iter().all(|&l| l >= -1e-9));
    }

    #[test]
    fn resonant_pumping_is_rejected() {
        // period-two flips drive the mode at ω₀t = π; photon number grows without bound
        let c = SpinMechConfig::new(4, PI / 4.0, PI, 1.0, 0.05 * PI, 256, 16);
        assert!(matches!(floquet_run_mech(&c), Err(Error::CutoffInsufficient { .. })));
    }

    #[test]
    fn auto_cutoff_doubles() {
        let mut c = SpinMechConfig::new(2, 0.5, 1.0, 1.3, 0.1, 16, 4);
        c.boson_init = BosonInit::Coherent(Complex64::new(1.0, 0.0));
        let (_, used) = floquet_run_mech_auto(&c).unwrap();
        assert!(used > 4 && used.is_power_of_two());
    }

    #[test]
    fn reset_keeps_mode_in_initial_state() {
        let mut c = SpinMechConfig::new(2, 0.5, 1.0, 1.3, 0.1, 20, 16);
        c.boson_reset = true;
        let r = floquet_run_mech(&c).unwrap();
        assert!(r.spin_purity.iter().all(|p| (p - 1.0).abs() < 1e-9));
    }

    #[test]
    fn predicted_leakage_examples() {
        assert!((predicted_leakage(4, 0.3, 1.0, 0, 0.01).unwrap() - 0.01).abs() < 1e-15);
        let g = PI / 2.0 / 4.0;
        assert!(predicted_leakage(4, g, 1.0, 1, 0.01).unwrap().abs() < 1e-15);
        assert!(matches!(predicted_leakage(4, PI / 4.0, 1.0, 4, 0.01), Err(Error::Singular(_))));
    }

    #[test]
    fn squeezing_leakage_follows_first_order_sum() {
        // pure one-axis twisting e^{iφ J_z²}: leakage = (ε/2)|sin(Mx/2)/sin(x/2)|, x = φ(N−1)
        let eps = 1e-5;
        let mut c = SpinMechConfig::new(4, PI / 4.0 * 1.05, 2.0 * PI, 1.0, eps, 2, 8);
        c.rotation_error = eps;
        let phi = c.interaction_time * interaction_phase(c.mode_frequency, c.interaction_time) * c.coupling.powi(2);
        let x = phi * 3.0;
        let samples: Vec<usize> = (1..=50).map(|k| 2 * k).collect();
        for l in leakage_amplitudes_mech(&c, &samples).unwrap() {
            let m = l.n_periods as f64;
            let expected = eps / 2.0 * ((m * x / 2.0).sin() / (x / 2.0).sin()).abs();
            assert!((l.lower - expected).abs() < 1e-3 * eps + 1e-2 * expected, "M={m} {} vs {expected}", l.lower);
        }
    }
}
