//! Power spectra of stroboscopic series and subharmonic peak reports.
//!
//! Frequencies are in cycles per Floquet period, `ν_k = k/M`. The series is
//! mean-subtracted, optionally windowed, transformed, and the power
//! `|X_k|²` normalized to unit sum. With `M` even, `ν = 1/2` is bin `M/2`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

use crate::error::{config, Error, Result};
use crate::floquet::ModelConfig;
use crate::linalg::cis;

/// Default factor by which `ν = 1/2` must dominate the largest satellite.
pub const DEFAULT_DOMINANCE: f64 = 3.0;
/// Satellites are searched strictly inside this band.
pub const SATELLITE_BAND: (f64, f64) = (0.4, 0.6);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    pub fn name(self) -> &'static str {
        match self {
            Window::Rectangular => "rectangular",
            Window::Hann => "hann",
        }
    }

    /// Periodic window weight at sample `n` of `m`.
    pub fn weight(self, n: usize, m: usize) -> f64 {
        match self {
            Window::Rectangular => 1.0,
            Window::Hann => 0.5 * (1.0 - (2.0 * PI * n as f64 / m as f64).cos()),
        }
    }
}

/// In-place forward DFT `X_k = Σ_n x_n e^{−2πikn/M}`: iterative radix-2 for
/// powers of two, direct summation otherwise.
pub fn dft(data: &mut [Complex64]) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data);
    } else {
        let out: Vec<Complex64> = (0..n)
            .map(|k| {
                data.iter()
                    .enumerate()
                    // reduce kn mod n first so the phase stays accurate
                    .map(|(j, x)| x * cis(-2.0 * PI * ((k * j) % n) as f64 / n as f64))
                    .sum()
            })
            .collect();
        data.copy_from_slice(&out);
    }
}

fn radix2(data: &mut [Complex64]) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let twiddles: Vec<Complex64> = (0..half).map(|k| cis(-2.0 * PI * k as f64 / len as f64)).collect();
        for chunk in data.chunks_mut(len) {
            for k in 0..half {
                let t = twiddles[k] * chunk[k + half];
                let u = chunk[k];
                chunk[k] = u + t;
                chunk[k + half] = u - t;
            }
        }
        len *= 2;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    pub window: Window,
    /// `Σ_n |s̃(n)|²` of the windowed, mean-subtracted series; `Σ_k |X_k|² = M` times this.
    pub raw_energy: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    pub fn half_index(&self) -> usize {
        self.len() / 2
    }
}

/// Normalized power spectrum of a real series of even length `M ≥ 8`.
pub fn power_spectrum(series: &[f64], window: Window) -> Result<Spectrum> {
    let m = series.len();
    if m < 8 || !m.is_multiple_of(2) {
        return Err(config("n_periods", alloc::format!("series length must be even and at least 8, got {m}")));
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(String::from("series contains non-finite values")));
    }
    let mean = series.iter().sum::<f64>() / m as f64;
    let scale = series.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let shaped: Vec<f64> = series
        .iter()
        .enumerate()
        .map(|(n, x)| (x - mean) * window.weight(n, m))
        .collect();
    if shaped.iter().all(|x| x.abs() <= 1e-12 * scale) {
        return Err(Error::Degenerate(String::from(
            "series is constant after mean subtraction; its spectrum is undefined",
        )));
    }
    let raw_energy = shaped.iter().map(|x| x * x).sum();
    let mut data: Vec<Complex64> = shaped.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    dft(&mut data);
    let mut power: Vec<f64> = data.iter().map(|z| z.norm_sqr()).collect();
    // exact real-input symmetry; the transform only matches it to rounding
    for k in 1..m / 2 {
        let avg = 0.5 * (power[k] + power[m - k]);
        power[k] = avg;
        power[m - k] = avg;
    }
    let total: f64 = power.iter().sum();
    power.iter_mut().for_each(|p| *p /= total);
    Ok(Spectrum {
        frequencies: (0..m).map(|k| k as f64 / m as f64).collect(),
        power,
        window,
        raw_energy,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeakReport {
    /// Normalized power in the `ν = 1/2` bin.
    pub height_at_half: f64,
    pub global_max_at_half: bool,
    /// `(ν, power)` of strict local maxima in `(0.4, 0.6)`, excluding `ν = 1/2`.
    pub satellites: Vec<(f64, f64)>,
    /// `ν₊ − ν₋` between the strongest satellite on each side of `1/2`.
    pub splitting: Option<f64>,
}

impl PeakReport {
    pub fn largest_satellite(&self) -> f64 {
        self.satellites.iter().map(|s| s.1).fold(0.0, f64::max)
    }

    /// Global maximum at `1/2` and at least `dominance` times the largest satellite.
    pub fn dtc_signature(&self, dominance: f64) -> bool {
        self.global_max_at_half && self.height_at_half >= dominance * self.largest_satellite()
    }
}

pub fn peak_report(spec: &Spectrum) -> PeakReport {
    let p = &spec.power;
    let m = p.len();
    let half = m / 2;
    let height_at_half = p[half];
    let global_max_at_half = p.iter().enumerate().all(|(k, &x)| k == half || x <= height_at_half);
    let satellites: Vec<(f64, f64)> = (1..m - 1)
        .filter(|&k| k != half)
        .filter(|&k| spec.frequencies[k] > SATELLITE_BAND.0 && spec.frequencies[k] < SATELLITE_BAND.1)
        .filter(|&k| p[k] > p[k - 1] && p[k] > p[k + 1])
        .map(|k| (spec.frequencies[k], p[k]))
        .collect();
    let strongest = |below: bool| {
        satellites
            .iter()
            .filter(|s| (s.0 < 0.5) == below)
            .fold(None::<(f64, f64)>, |best, &s| match best {
                Some(b) if b.1 >= s.1 => Some(b),
                _ => Some(s),
            })
    };
    let splitting = match (strongest(true), strongest(false)) {
        (Some(lo), Some(hi)) => Some(hi.0 - lo.0),
        _ => None,
    };
    PeakReport {
        height_at_half,
        global_max_at_half,
        satellites,
        splitting,
    }
}

/// Spectrum and report of one series in one call.
pub fn analyze(series: &[f64], window: Window) -> Result<(Spectrum, PeakReport)> {
    let spec = power_spectrum(series, window)?;
    let report = peak_report(&spec);
    Ok((spec, report))
}

/// One grid point of a parameter sweep. Failures are kept, not propagated.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub outcome: core::result::Result<PeakReport, Error>,
}

/// Runs `base` with `parameter = value` and reports on the primary series.
pub fn sweep_point(base: &ModelConfig, parameter: &str, value: f64, window: Window) -> SweepPoint {
    let outcome = (|| {
        let mut cfg = base.clone();
        cfg.set_parameter(parameter, value)?;
        let run = cfg.run()?;
        analyze(&run.primary.magnetization, window).map(|(_, r)| r)
    })();
    SweepPoint { value, outcome }
}

/// Peak reports over a grid of rotation errors in `[0, π/2)`, sorted by `ε`.
pub fn epsilon_sweep(base: &ModelConfig, eps_grid: &[f64], window: Window) -> Result<Vec<SweepPoint>> {
    check_eps_grid(eps_grid)?;
    let mut grid = eps_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    Ok(grid.into_iter().map(|e| sweep_point(base, "epsilon", e, window)).collect())
}

pub fn check_eps_grid(eps_grid: &[f64]) -> Result<()> {
    if eps_grid.is_empty() {
        return Err(config("sweep.grid", "grid must not be empty"));
    }
    if eps_grid.iter().any(|e| !(0.0..PI / 2.0).contains(e)) {
        return Err(config("sweep.grid", "rotation errors must lie in [0, π/2)"));
    }
    Ok(())
}

/// Convenience for tests and the validation suite: power at `ν = 1/2` of a series.
pub fn height_at_half(series: &[f64]) -> Result<f64> {
    Ok(power_spectrum(series, Window::Rectangular)?.power[series.len() / 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central_spin::CentralSpinConfig;
    use proptest::prelude::*;

    fn alternating(m: usize) -> Vec<f64> {
        (0..m).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect()
    }

    #[test]
    fn alternating_series_is_pure_half() {
        let spec = power_spectrum(&alternating(128), Window::Rectangular).unwrap();
        assert!((spec.power[64] - 1.0).abs() < 1e-14);
        assert!(spec.power.iter().enumerate().all(|(k, p)| k == 64 || *p < 1e-28));
        let r = peak_report(&spec);
        assert!(r.global_max_at_half && r.satellites.is_empty() && r.splitting.is_none());
        assert!(r.dtc_signature(DEFAULT_DOMINANCE));
    }

    #[test]
    fn constant_series_is_degenerate() {
        assert!(matches!(power_spectrum(&[1.0; 16], Window::Rectangular), Err(Error::Degenerate(_))));
        assert!(matches!(power_spectrum(&[0.3; 16], Window::Hann), Err(Error::Degenerate(_))));
        assert!(power_spectrum(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], Window::Rectangular).is_err());
        assert!(power_spectrum(&alternating(9), Window::Rectangular).is_err());
    }

    #[test]
    fn on_grid_cosine() {
        let s: Vec<f64> = (0..64).map(|n| (2.0 * PI * n as f64 * 0.25).cos()).collect();
        let spec = power_spectrum(&s, Window::Rectangular).unwrap();
        assert!((spec.power[16] - 0.5).abs() < 1e-12 && (spec.power[48] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rotation_sequence_splits() {
        let eps = 0.05 * PI;
        let s: Vec<f64> = (0..256).map(|n| (n as f64 * (PI - eps)).cos()).collect();
        let r = peak_report(&power_spectrum(&s, Window::Rectangular).unwrap());
        assert!(!r.global_max_at_half);
        let bin = 1.0 / 256.0;
        assert!((r.splitting.unwrap() - 0.05).abs() <= 2.0 * bin, "{r:?}");
    }

    #[test]
    fn non_power_of_two_matches_naive() {
        for m in [10usize, 12, 30, 64] {
            let s: Vec<f64> = (0..m).map(|n| ((n * n) as f64 * 0.37).sin()).collect();
            let mut fast: Vec<Complex64> = s.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            dft(&mut fast);
            for k in 0..m {
                let naive: Complex64 = s
                    .iter()
                    .enumerate()
                    .map(|(n, &x)| cis(-2.0 * PI * (k * n) as f64 / m as f64) * x)
                    .sum();
                assert!((fast[k] - naive).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn sweep_orders_and_keeps_failures() {
        let base = ModelConfig::CentralSpin(CentralSpinConfig::new(4, 1.0, 4.0 / 3.0, 9.5, 0.0, 64));
        let pts = epsilon_sweep(&base, &[0.2, 0.0, 0.1], Window::Rectangular).unwrap();
        assert_eq!(pts.iter().map(|p| p.value).collect::<Vec<_>>(), [0.0, 0.1, 0.2]);
        assert!(pts[0].outcome.as_ref().unwrap().height_at_half >= 0.999);
        assert!(epsilon_sweep(&base, &[], Window::Rectangular).is_err());
        assert!(epsilon_sweep(&base, &[2.0], Window::Rectangular).is_err());
        let bad = sweep_point(&base, "nonexistent", 1.0, Window::Rectangular);
        assert!(matches!(bad.outcome, Err(Error::Config { .. })));
    }

    proptest! {
        #[test]
        fn power_is_normalized_symmetric_and_parseval(
            raw in proptest::collection::vec(-1.0f64..1.0, 4..40),
            hann in any::<bool>(),
        ) {
            let mut s = raw.clone();
            if s.len() % 2 == 1 { s.pop(); }
            prop_assume!(s.len() >= 8);
            let window = if hann { Window::Hann } else { Window::Rectangular };
            let Ok(spec) = power_spectrum(&s, window) else { return Ok(()); };
            let m = s.len();
            prop_assert!((spec.power.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(spec.power.iter().all(|&p| p >= 0.0));
            for k in 1..m { prop_assert!((spec.power[k] - spec.power[m - k]).abs() < 1e-15); }
            // Parseval: unnormalized Σ|X_k|² = M Σ|s̃|²
            let mean = s.iter().sum::<f64>() / m as f64;
            let mut x: Vec<Complex64> = s.iter().enumerate()
                .map(|(n, v)| Complex64::new((v - mean) * window.weight(n, m), 0.0)).collect();
            dft(&mut x);
            let total: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((total - m as f64 * spec.raw_energy).abs() <= 1e-10 * total.max(1.0));
            // invariant under a global sign flip
            let flipped: Vec<f64> = s.iter().map(|v| -v).collect();
            let spec2 = power_spectrum(&flipped, window).unwrap();
            for k in 0..m { prop_assert!((spec.power[k] - spec2.power[k]).abs() < 1e-14); }
        }
    }
}
