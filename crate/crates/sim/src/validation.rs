//! Self-checks of the simulator against independent references.
//!
//! Every check becomes a report entry; nothing here panics or aborts on a
//! failed comparison. `Info` entries carry measured quantities without a
//! pass/fail verdict.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use dtc_core::central_spin::{
    cross_validate_backends, cross_validate_with_generator, f_factors, leakage_amplitudes, linear_error_amplitude,
    CentralSpinConfig, MAX_CROSS_VALIDATION_SPINS,
};
use dtc_core::collective::{jx_real, CollectiveBasis};
use dtc_core::spin_mech::{
    brute_force_unitary, closed_form_unitary, predicted_leakage, leakage_amplitudes_mech, low_fock_indices, max_deviation_on,
    SpinMechConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

impl Entry {
    fn check(name: impl Into<String>, measured: f64, tolerance: f64, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: Some(measured),
            tolerance: Some(tolerance),
            detail: detail.into(),
        }
    }

    fn at_most(name: impl Into<String>, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self::check(name, measured, tolerance, measured <= tolerance, detail)
    }

    fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            measured: None,
            tolerance: None,
            detail: detail.into(),
        }
    }

    fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Skipped,
            measured: None,
            tolerance: None,
            detail: reason.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<Entry>,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[derive(Clone, Debug)]
pub struct ValidationOptions {
    /// Bath sizes for the collective-vs-full comparison.
    pub cross_validation_spins: Vec<usize>,
    /// Random parameter draws per bath size.
    pub draws: usize,
    pub seed: u64,
    /// Replace the collective `J_x` with a slightly wrong one (mutation fixture).
    pub corrupt_jx: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            cross_validation_spins: (1..=8).collect(),
            draws: 20,
            seed: 0x5eed,
            corrupt_jx: false,
        }
    }
}

pub const BACKEND_TOLERANCE: f64 = 1e-8;
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-6;
pub const LINEAR_RELATIVE_TOLERANCE: f64 = 0.05;
pub const ENVELOPE_RATIO_LIMIT: f64 = 10.0;
pub const SLOPE_RELATIVE_TOLERANCE: f64 = 0.10;

pub fn run_validation_suite(options: &ValidationOptions) -> ValidationReport {
    let mut entries = Vec::new();
    backend_checks(options, &mut entries);
    closed_form_checks(&mut entries);
    linear_error_checks(&mut entries);
    drive_bounds_f1(&mut entries);
    leakage_checks(&mut entries);
    ValidationReport { entries }
}

/// Collective `J_x` with its first ladder coefficient scaled by 1.1.
pub fn corrupted_jx(n_spins: usize) -> dtc_core::linalg::RMatrix {
    let mut g = jx_real(&CollectiveBasis::new(n_spins).expect("n ≥ 1"));
    g[(0, 1)] *= 1.1;
    g[(1, 0)] *= 1.1;
    g
}

fn backend_checks(options: &ValidationOptions, entries: &mut Vec<Entry>) {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for &n in &options.cross_validation_spins {
        let name = format!("backend-equivalence/N={n}");
        if n == 0 || n > MAX_CROSS_VALIDATION_SPINS {
            entries.push(Entry::skipped(
                name,
                format!("N = {n} outside the cross-validation capacity 1..={MAX_CROSS_VALIDATION_SPINS}"),
            ));
            continue;
        }
        let mut worst = 0.0f64;
        let mut error = None;
        for _ in 0..options.draws {
            let c = CentralSpinConfig::new(
                n,
                rng.gen_range(0.2..2.0),
                rng.gen_range(0.0..3.0),
                rng.gen_range(0.0..10.0),
                rng.gen_range(0.0..0.3 * PI),
                64,
            );
            let result = if options.corrupt_jx {
                cross_validate_with_generator(&c, &corrupted_jx(n))
            } else {
                cross_validate_backends(&c)
            };
            match result {
                Ok(r) => worst = worst.max(r.max_discrepancy),
                Err(e) => error = Some(e.to_string()),
            }
        }
        entries.push(match error {
            Some(e) => Entry::failed(name, e),
            None => Entry::at_most(
                name,
                worst,
                BACKEND_TOLERANCE,
                format!("max |s_collective − s_full| over {} draws × 64 periods", options.draws),
            ),
        });
    }
}

/// Largest low-Fock deviation between closed form and brute force, at a cutoff.
pub fn closed_form_deviation(n: usize, g: f64, omega0: f64, t: f64, cutoff: usize) -> dtc_core::Result<f64> {
    let c = SpinMechConfig::new(n, g, omega0, t, 0.0, 2, cutoff);
    let idx = low_fock_indices(n, cutoff, cutoff / 2);
    Ok(max_deviation_on(&closed_form_unitary(&c)?, &brute_force_unitary(&c)?, &idx))
}

fn closed_form_checks(entries: &mut Vec<Entry>) {
    for n in [2usize, 4] {
        let mut worst = 0.0f64;
        let mut error = None;
        for w0t in [PI / 2.0, PI, 2.0 * PI] {
            for gt in [PI / 8.0, PI / 4.0] {
                match closed_form_deviation(n, gt, w0t, 1.0, 32) {
                    Ok(d) => worst = worst.max(d),
                    Err(e) => error = Some(e.to_string()),
                }
            }
        }
        let name = format!("closed-form-vs-brute-force/N={n}");
        entries.push(match error {
            Some(e) => Entry::failed(name, e),
            None => Entry::at_most(
                name,
                worst,
                CLOSED_FORM_TOLERANCE,
                "n_max = 32, occupations ≤ 16, ω₀t ∈ {π/2, π, 2π}, gt ∈ {π/8, π/4}",
            ),
        });
    }
}

fn linear_error_checks(entries: &mut Vec<Entry>) {
    let eps = 1e-3;
    let c = CentralSpinConfig::new(4, 0.0, 0.0, 1.0, eps, 16);
    let samples = [2usize, 4, 8, 16];
    match leakage_amplitudes(&c, &samples) {
        Ok(ls) => {
            let worst = ls
                .iter()
                .map(|l| {
                    let expected = linear_error_amplitude(l.n_periods, eps);
                    (l.lower_norm() - expected).abs() / expected
                })
                .fold(0.0, f64::max);
            entries.push(Entry::at_most(
                "first-order-error-growth",
                worst,
                LINEAR_RELATIVE_TOLERANCE,
                "relative gap to Mε/2, g = ω = 0, ε = 1e−3, N = 4, M ∈ {2, 4, 8, 16}",
            ));
        }
        Err(e) => entries.push(Entry::failed("first-order-error-growth", e.to_string())),
    }
}

fn drive_bounds_f1(entries: &mut Vec<Entry>) {
    let c = CentralSpinConfig::new(6, 1.0, 2.0, 9.5, 1e-4, 2);
    let mut worst = 0.0f64;
    for k in 1..=50 {
        match f_factors(&c, 2 * k) {
            Ok(f) => worst = worst.max(f.f1.norm()),
            Err(e) => {
                entries.push(Entry::failed("driven-error-stays-bounded", e.to_string()));
                return;
            }
        }
    }
    // undriven growth would reach M/2 = 50
    entries.push(Entry::at_most(
        "driven-error-stays-bounded",
        worst,
        10.0,
        "max |f₁| over M ≤ 100 for N = 6, g = 1, ω = 2, τ = 9.5 (free growth reaches 50)",
    ));
}

/// The spin-mechanical leakage configuration: `N = 4`, `Ngt = 1.05π`, `ω₀t = 2π`.
pub fn leakage_config(eps: f64, coupled: bool) -> SpinMechConfig {
    let g = if coupled { 1.05 * PI / 4.0 } else { 0.0 };
    SpinMechConfig::new(4, g, 2.0 * PI, 1.0, eps, 2, 8)
}

/// Running maximum of the extracted leakage, `envelope(M_max) / envelope(2)`.
pub fn envelope_ratio(amplitudes: &[f64]) -> f64 {
    let first = amplitudes[0];
    let last = amplitudes.iter().copied().fold(0.0, f64::max);
    last / first
}

/// Least-squares slope through the origin.
pub fn slope_through_origin(x: &[f64], y: &[f64]) -> f64 {
    let num: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let den: f64 = x.iter().map(|a| a * a).sum();
    num / den
}

fn leakage_checks(entries: &mut Vec<Entry>) {
    let eps = 1e-4;
    let samples: Vec<usize> = (1..=50).map(|k| 2 * k).collect();
    let ms: Vec<f64> = samples.iter().map(|&m| m as f64).collect();
    match leakage_amplitudes_mech(&leakage_config(eps, true), &samples) {
        Ok(ls) => {
            let amps: Vec<f64> = ls.iter().map(|l| l.lower).collect();
            let ratio = envelope_ratio(&amps);
            entries.push(Entry::check(
                "spin-mech-leakage-bounded",
                ratio,
                ENVELOPE_RATIO_LIMIT,
                ratio < ENVELOPE_RATIO_LIMIT,
                "envelope(100)/envelope(2) of the leaked amplitude, N = 4, Ngt = 1.05π, ω₀t = 2π, ε = 1e−4",
            ));
        }
        Err(e) => entries.push(Entry::failed("spin-mech-leakage-bounded", e.to_string())),
    }
    match leakage_amplitudes_mech(&leakage_config(eps, false), &samples) {
        Ok(ls) => {
            let amps: Vec<f64> = ls.iter().map(|l| l.lower).collect();
            let rel = (slope_through_origin(&ms, &amps) / (eps / 2.0) - 1.0).abs();
            entries.push(Entry::at_most(
                "spin-mech-uncoupled-linear-growth",
                rel,
                SLOPE_RELATIVE_TOLERANCE,
                "relative gap of the fitted slope to ε/2 with g = 0",
            ));
        }
        Err(e) => entries.push(Entry::failed("spin-mech-uncoupled-linear-growth", e.to_string())),
    }
    for (label, ngt) in [("pi/3", PI / 3.0), ("pi/2", PI / 2.0), ("2pi/3", 2.0 * PI / 3.0)] {
        let name = format!("leakage-formula-vs-simulation/Ngt={label}");
        let mut c = leakage_config(eps, true);
        c.coupling = ngt / 4.0;
        match predicted_leakage_gap(&c, &samples) {
            Ok(gap) => entries.push(Entry {
                name,
                status: Status::Info,
                measured: Some(gap),
                tolerance: None,
                detail: "max |formula − simulated| / ε over M ≤ 100; the closed formula does not track the \
                         simulated first-order leakage, reported without a verdict"
                    .into(),
            }),
            Err(e) => entries.push(Entry::failed(name, e.to_string())),
        }
    }
}

/// `max_M |ε sin²[Ngt(1+M)]/sin²[Ngt] − leakage(M)| / ε`.
pub fn predicted_leakage_gap(c: &SpinMechConfig, samples: &[usize]) -> dtc_core::Result<f64> {
    let ls = leakage_amplitudes_mech(c, samples)?;
    let eps = c.rotation_error;
    let mut worst = 0.0f64;
    for l in ls {
        let formula = predicted_leakage(c.n_spins, c.coupling, c.interaction_time, l.n_periods, eps)?;
        worst = worst.max((formula - l.lower).abs() / eps);
    }
    Ok(worst)
}
