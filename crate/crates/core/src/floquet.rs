//! Result of a stroboscopic run and the model dispatch used by sweeps.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent when std is linked elsewhere in the graph
use num_traits::Float;

use crate::central_spin::{self, CentralSpinConfig};
use crate::error::{config, Result};
use crate::remote::{self, RemoteConfig};
use crate::spin_mech::{self, SpinMechConfig};
use crate::state::StateVector;

/// Stroboscopic record of one observable series.
///
/// `magnetization[n]` is the normalized readout after `n` full periods, so
/// index 0 is the initial state and the series has `M` entries.
#[derive(Clone, Debug)]
pub struct FloquetResult {
    pub magnetization: Vec<f64>,
    /// `2⟨S^z⟩` of the ancilla per period; empty when the model has no qubit ancilla.
    pub ancilla_z: Vec<f64>,
    /// Purity of the boson-traced spin state per period (spin-mechanical model only).
    pub spin_purity: Vec<f64>,
    pub final_state: Option<StateVector>,
    pub config: ModelConfig,
    /// Which series this is when a model produces several (e.g. `"bath1"`).
    pub label: String,
}

impl FloquetResult {
    pub fn n_periods(&self) -> usize {
        self.magnetization.len()
    }
}

/// One of the three simulated models.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelConfig {
    CentralSpin(CentralSpinConfig),
    SpinMech(SpinMechConfig),
    RemoteSync(RemoteConfig),
}

/// Output of [`ModelConfig::run`]: the primary series and, for two-site
/// models, the second site.
#[derive(Clone, Debug)]
pub struct ModelRun {
    pub primary: FloquetResult,
    pub secondary: Option<FloquetResult>,
    /// Fock cutoff actually used after automatic doubling (spin-mechanical model).
    pub fock_cutoff: Option<usize>,
}

impl ModelRun {
    pub fn series(&self) -> impl Iterator<Item = &FloquetResult> {
        core::iter::once(&self.primary).chain(self.secondary.iter())
    }
}

impl ModelConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelConfig::CentralSpin(_) => "central_spin",
            ModelConfig::SpinMech(_) => "spin_mech",
            ModelConfig::RemoteSync(_) => "remote_sync",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelConfig::CentralSpin(c) => c.validate(),
            ModelConfig::SpinMech(c) => c.validate(),
            ModelConfig::RemoteSync(c) => c.validate(),
        }
    }

    pub fn run(&self) -> Result<ModelRun> {
        match self {
            ModelConfig::CentralSpin(c) => Ok(ModelRun {
                primary: central_spin::floquet_run(c)?,
                secondary: None,
                fock_cutoff: None,
            }),
            ModelConfig::SpinMech(c) => {
                let (primary, cutoff) = spin_mech::floquet_run_mech_auto(c)?;
                Ok(ModelRun {
                    primary,
                    secondary: None,
                    fock_cutoff: Some(cutoff),
                })
            }
            ModelConfig::RemoteSync(c) => {
                let (a, b) = remote::floquet_run_remote(c)?;
                Ok(ModelRun {
                    primary: a,
                    secondary: Some(b),
                    fock_cutoff: None,
                })
            }
        }
    }

    pub fn n_periods(&self) -> usize {
        match self {
            ModelConfig::CentralSpin(c) => c.n_periods,
            ModelConfig::SpinMech(c) => c.n_periods,
            ModelConfig::RemoteSync(c) => c.n_periods,
        }
    }

    pub fn rotation_error(&self) -> f64 {
        self.parameter("epsilon").unwrap_or(0.0)
    }

    /// Numeric parameters that can be swept, by their config-file names.
    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            ModelConfig::CentralSpin(_) => &["epsilon", "g", "omega", "tau"],
            ModelConfig::SpinMech(_) => &["epsilon", "g", "omega0", "t"],
            ModelConfig::RemoteSync(_) => &["epsilon", "g1", "g2", "j", "tau"],
        }
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        match (self, name) {
            (ModelConfig::CentralSpin(c), "epsilon") => Some(c.rotation_error),
            (ModelConfig::CentralSpin(c), "g") => c.couplings.uniform(),
            (ModelConfig::CentralSpin(c), "omega") => Some(c.drive),
            (ModelConfig::CentralSpin(c), "tau") => Some(c.interaction_time),
            (ModelConfig::SpinMech(c), "epsilon") => Some(c.rotation_error),
            (ModelConfig::SpinMech(c), "g") => Some(c.coupling),
            (ModelConfig::SpinMech(c), "omega0") => Some(c.mode_frequency),
            (ModelConfig::SpinMech(c), "t") => Some(c.interaction_time),
            (ModelConfig::RemoteSync(c), "epsilon") => Some(c.rotation_error),
            (ModelConfig::RemoteSync(c), "g1") => c.couplings.0.uniform(),
            (ModelConfig::RemoteSync(c), "g2") => c.couplings.1.uniform(),
            (ModelConfig::RemoteSync(c), "j") => Some(c.flip_flop),
            (ModelConfig::RemoteSync(c), "tau") => Some(c.interaction_time),
            _ => None,
        }
    }

    /// Sets a sweepable parameter by name; unknown names are a config error.
    pub fn set_parameter(&mut self, name: &str, value: f64) -> Result<()> {
        use crate::central_spin::Couplings;
        match (self, name) {
            (ModelConfig::CentralSpin(c), "epsilon") => c.rotation_error = value,
            (ModelConfig::CentralSpin(c), "g") => c.couplings = Couplings::Uniform(value),
            (ModelConfig::CentralSpin(c), "omega") => c.drive = value,
            (ModelConfig::CentralSpin(c), "tau") => c.interaction_time = value,
            (ModelConfig::SpinMech(c), "epsilon") => c.rotation_error = value,
            (ModelConfig::SpinMech(c), "g") => c.coupling = value,
            (ModelConfig::SpinMech(c), "omega0") => c.mode_frequency = value,
            (ModelConfig::SpinMech(c), "t") => c.interaction_time = value,
            (ModelConfig::RemoteSync(c), "epsilon") => c.rotation_error = value,
            (ModelConfig::RemoteSync(c), "g1") => c.couplings.0 = Couplings::Uniform(value),
            (ModelConfig::RemoteSync(c), "g2") => c.couplings.1 = Couplings::Uniform(value),
            (ModelConfig::RemoteSync(c), "j") => c.flip_flop = value,
            (ModelConfig::RemoteSync(c), "tau") => c.interaction_time = value,
            _ => return Err(config("sweep.parameter", alloc::format!("unknown parameter `{name}`"))),
        }
        Ok(())
    }
}

/// Normalized two-level state; index 0 is `S^z = +1/2` (`|0⟩`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Qubit {
    pub up: Complex64,
    pub down: Complex64,
}

impl Qubit {
    pub const ZERO: Qubit = Qubit {
        up: Complex64::new(1.0, 0.0),
        down: Complex64::new(0.0, 0.0),
    };
    pub const ONE: Qubit = Qubit {
        up: Complex64::new(0.0, 0.0),
        down: Complex64::new(1.0, 0.0),
    };

    pub fn new(up: Complex64, down: Complex64) -> Result<Self> {
        let norm = (up.norm_sqr() + down.norm_sqr()).sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(config("ancilla_init", "zero or non-finite amplitudes"));
        }
        Ok(Self {
            up: up / norm,
            down: down / norm,
        })
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.up, self.down]
    }
}

impl Default for Qubit {
    fn default() -> Self {
        Self::ZERO
    }
}

/// Sign of the time-evolution exponent: `exp(−iτH)` (default) or `exp(+iτH)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PropagatorSign {
    #[default]
    Minus,
    Plus,
}

impl PropagatorSign {
    /// `t` such that the propagator is `exp(i t H)`.
    pub fn exponent_time(self, tau: f64) -> f64 {
        match self {
            PropagatorSign::Minus => -tau,
            PropagatorSign::Plus => tau,
        }
    }
}

pub(crate) fn check_periods(n_periods: usize) -> Result<()> {
    if n_periods < 2 {
        return Err(config("n_periods", "must be at least 2"));
    }
    if !n_periods.is_multiple_of(2) {
        return Err(config("n_periods", "n_periods must be even"));
    }
    Ok(())
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if !(0.0..core::f64::consts::PI).contains(&eps) {
        return Err(config("epsilon", "rotation error must lie in [0, π)"));
    }
    Ok(())
}

pub(crate) fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(config(field, "must be finite"));
    }
    Ok(())
}
