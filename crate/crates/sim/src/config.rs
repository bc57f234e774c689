//! Experiment spec files (TOML) and their resolution into model configs.
//!
//! Every table rejects unknown keys. A minimal central-spin spec:
//!
//! ```toml
//! spec_version = 1
//! model = "central_spin"
//!
//! [central_spin]
//! n_spins = 6
//! g = 1.0
//! omega = 2.0
//! tau = 9.5
//! epsilon_pi = 0.05
//! n_periods = 256
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use dtc_core::central_spin::{Backend, CentralSpinConfig, Couplings, Readout};
use dtc_core::remote::{AncillaPair, RemoteConfig};
use dtc_core::spectral::{check_eps_grid, Window, DEFAULT_DOMINANCE};
use dtc_core::spin_mech::{BosonInit, SpinMechConfig};
use dtc_core::{ModelConfig, PropagatorSign, Qubit};

use crate::error::{SimError, SimResult};

pub const SPEC_VERSION: u32 = 1;
pub const DEFAULT_FOCK_CUTOFF: usize = 16;
pub const DEFAULT_OUTPUT_DIR: &str = "out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    CentralSpin,
    SpinMech,
    RemoteSync,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BackendName {
    Collective,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SignName {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WindowName {
    Rectangular,
    Hann,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Units {
    Rad,
    Pi,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum QubitSpec {
    Label(String),
    Custom { up: [f64; 2], down: [f64; 2] },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum PairSpec {
    Label(String),
    Custom { custom: [[f64; 2]; 4] },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum BosonSpec {
    Label(String),
    Coherent { coherent: [f64; 2] },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    spec_version: u32,
    name: Option<String>,
    description: Option<String>,
    model: ModelKind,
    central_spin: Option<CentralSpinBlock>,
    spin_mech: Option<SpinMechBlock>,
    remote_sync: Option<RemoteBlock>,
    #[serde(default)]
    analysis: AnalysisBlock,
    sweep: Option<SweepBlock>,
    #[serde(default)]
    output: OutputBlock,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CentralSpinBlock {
    n_spins: usize,
    g: Option<f64>,
    couplings: Option<Vec<f64>>,
    omega: f64,
    tau: f64,
    epsilon: Option<f64>,
    epsilon_pi: Option<f64>,
    n_periods: usize,
    backend: Option<BackendName>,
    readout: Option<String>,
    ancilla_init: Option<QubitSpec>,
    propagator_sign: Option<SignName>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpinMechBlock {
    n_spins: usize,
    g: f64,
    omega0: f64,
    t: f64,
    epsilon: Option<f64>,
    epsilon_pi: Option<f64>,
    n_periods: usize,
    fock_cutoff: Option<usize>,
    boson_init: Option<BosonSpec>,
    boson_reset: Option<bool>,
    propagator_sign: Option<SignName>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RemoteBlock {
    bath_sizes: [usize; 2],
    g1: Option<f64>,
    g2: Option<f64>,
    couplings1: Option<Vec<f64>>,
    couplings2: Option<Vec<f64>>,
    j: Option<f64>,
    tau: f64,
    epsilon: Option<f64>,
    epsilon_pi: Option<f64>,
    n_periods: usize,
    ancilla_init: Option<PairSpec>,
    backend: Option<BackendName>,
    propagator_sign: Option<SignName>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisBlock {
    window: Option<WindowName>,
    dominance: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepBlock {
    parameter: String,
    values: Option<Vec<f64>>,
    /// `[start, stop, points]`, endpoints included.
    linspace: Option<(f64, f64, usize)>,
    units: Option<Units>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputBlock {
    directory: Option<PathBuf>,
    format: Option<OutputFormat>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub window: Window,
    pub dominance: f64,
}

impl Default for Analysis {
    fn default() -> Self {
        Self {
            window: Window::Rectangular,
            dominance: DEFAULT_DOMINANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub parameter: String,
    /// Grid in radians / natural units, in the order given.
    pub grid: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub directory: PathBuf,
    pub format: OutputFormat,
}

/// A validated experiment with every default resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub description: Option<String>,
    pub model: ModelConfig,
    pub analysis: Analysis,
    pub sweep: Option<Sweep>,
    pub output: Output,
}

pub fn load_spec(path: &Path) -> SimResult<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    let default_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".into());
    parse_spec(&text, &default_name).map_err(|e| match e {
        SimError::Config(msg) => SimError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parses and validates spec text; `default_name` is used when the file has no `name`.
pub fn parse_spec(text: &str, default_name: &str) -> SimResult<ExperimentSpec> {
    let file: SpecFile = toml::from_str(text).map_err(|e| SimError::Config(e.to_string().trim_end().to_owned()))?;
    if file.spec_version != SPEC_VERSION {
        return Err(SimError::config(format!(
            "spec_version: unsupported version {} (expected {SPEC_VERSION})",
            file.spec_version
        )));
    }
    let present = [
        ("central_spin", file.central_spin.is_some()),
        ("spin_mech", file.spin_mech.is_some()),
        ("remote_sync", file.remote_sync.is_some()),
    ];
    let expected = match file.model {
        ModelKind::CentralSpin => "central_spin",
        ModelKind::SpinMech => "spin_mech",
        ModelKind::RemoteSync => "remote_sync",
    };
    for (block, is_present) in present {
        if is_present && block != expected {
            return Err(SimError::config(format!("[{block}]: block does not match model = \"{expected}\"")));
        }
    }
    let model = match file.model {
        ModelKind::CentralSpin => resolve_central(file.central_spin.ok_or_else(|| missing(expected))?)?,
        ModelKind::SpinMech => resolve_mech(file.spin_mech.ok_or_else(|| missing(expected))?)?,
        ModelKind::RemoteSync => resolve_remote(file.remote_sync.ok_or_else(|| missing(expected))?)?,
    };
    model.validate().map_err(|e| prefixed(expected, e))?;

    let analysis = Analysis {
        window: match file.analysis.window {
            Some(WindowName::Hann) => Window::Hann,
            _ => Window::Rectangular,
        },
        dominance: file.analysis.dominance.unwrap_or(DEFAULT_DOMINANCE),
    };
    if !(analysis.dominance.is_finite() && analysis.dominance >= 1.0) {
        return Err(SimError::config("analysis.dominance: must be a finite number ≥ 1"));
    }
    let sweep = file.sweep.map(|s| resolve_sweep(s, &model)).transpose()?;
    let output = Output {
        directory: file.output.directory.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
        format: file.output.format.unwrap_or_default(),
    };
    let name = file.name.unwrap_or_else(|| default_name.to_owned());
    if name.is_empty() || name.contains(['/', '\\']) || name == "." || name == ".." {
        return Err(SimError::config("name: must be a plain, non-empty file name"));
    }
    Ok(ExperimentSpec {
        name,
        description: file.description,
        model,
        analysis,
        sweep,
        output,
    })
}

fn missing(block: &str) -> SimError {
    SimError::config(format!("[{block}]: model block is missing"))
}

fn prefixed(block: &str, e: dtc_core::Error) -> SimError {
    match e {
        dtc_core::Error::Config { field, reason } => SimError::config(format!("{block}.{field}: {reason}")),
        other => SimError::Model(other),
    }
}

fn rotation_error(block: &str, epsilon: Option<f64>, epsilon_pi: Option<f64>) -> SimResult<f64> {
    match (epsilon, epsilon_pi) {
        (Some(e), None) => Ok(e),
        (None, Some(e)) => Ok(e * PI),
        (None, None) => Err(SimError::config(format!("{block}.epsilon: set `epsilon` or `epsilon_pi`"))),
        (Some(_), Some(_)) => Err(SimError::config(format!(
            "{block}.epsilon: `epsilon` and `epsilon_pi` are mutually exclusive"
        ))),
    }
}

fn backend(name: Option<BackendName>) -> Backend {
    match name {
        Some(BackendName::Full) => Backend::Full,
        _ => Backend::Collective,
    }
}

fn sign(name: Option<SignName>) -> PropagatorSign {
    match name {
        Some(SignName::Plus) => PropagatorSign::Plus,
        _ => PropagatorSign::Minus,
    }
}

fn couplings(block: &str, uniform: Option<f64>, list: Option<Vec<f64>>, key: &str) -> SimResult<Couplings> {
    match (uniform, list) {
        (Some(g), None) => Ok(Couplings::Uniform(g)),
        (None, Some(gs)) => Ok(Couplings::PerSpin(gs)),
        (None, None) => Err(SimError::config(format!("{block}.{key}: coupling is missing"))),
        (Some(_), Some(_)) => Err(SimError::config(format!(
            "{block}.{key}: give a uniform coupling or a per-spin list, not both"
        ))),
    }
}

fn resolve_central(b: CentralSpinBlock) -> SimResult<ModelConfig> {
    let block = "central_spin";
    let mut c = CentralSpinConfig::new(
        b.n_spins,
        0.0,
        b.omega,
        b.tau,
        rotation_error(block, b.epsilon, b.epsilon_pi)?,
        b.n_periods,
    );
    c.couplings = couplings(block, b.g, b.couplings, "g")?;
    c.backend = backend(b.backend);
    c.propagator_sign = sign(b.propagator_sign);
    c.readout = match b.readout.as_deref() {
        None => None,
        Some("collective") => Some(Readout::Collective),
        Some(s) => Some(Readout::Spin(
            s.strip_prefix("spin:")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| SimError::config(format!("{block}.readout: expected \"collective\" or \"spin:<k>\", got \"{s}\"")))?,
        )),
    };
    c.ancilla_init = match b.ancilla_init {
        None => Qubit::ZERO,
        Some(QubitSpec::Label(s)) => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            match s.as_str() {
                "0" => Qubit::ZERO,
                "1" => Qubit::ONE,
                "+" => Qubit::new(Complex64::new(h, 0.0), Complex64::new(h, 0.0))?,
                "-" => Qubit::new(Complex64::new(h, 0.0), Complex64::new(-h, 0.0))?,
                _ => {
                    return Err(SimError::config(format!(
                        "{block}.ancilla_init: expected \"0\", \"1\", \"+\", \"-\" or {{ up, down }}, got \"{s}\""
                    )))
                }
            }
        }
        Some(QubitSpec::Custom { up, down }) => Qubit::new(Complex64::new(up[0], up[1]), Complex64::new(down[0], down[1]))
            .map_err(|e| prefixed(block, e))?,
    };
    Ok(ModelConfig::CentralSpin(c))
}

fn resolve_mech(b: SpinMechBlock) -> SimResult<ModelConfig> {
    let block = "spin_mech";
    let mut c = SpinMechConfig::new(
        b.n_spins,
        b.g,
        b.omega0,
        b.t,
        rotation_error(block, b.epsilon, b.epsilon_pi)?,
        b.n_periods,
        b.fock_cutoff.unwrap_or(DEFAULT_FOCK_CUTOFF),
    );
    c.boson_init = match b.boson_init {
        None => BosonInit::Vacuum,
        Some(BosonSpec::Label(s)) if s == "vacuum" => BosonInit::Vacuum,
        Some(BosonSpec::Label(s)) => {
            return Err(SimError::config(format!(
                "{block}.boson_init: expected \"vacuum\" or {{ coherent = [re, im] }}, got \"{s}\""
            )))
        }
        Some(BosonSpec::Coherent { coherent }) => BosonInit::Coherent(Complex64::new(coherent[0], coherent[1])),
    };
    c.boson_reset = b.boson_reset.unwrap_or(false);
    c.propagator_sign = sign(b.propagator_sign);
    Ok(ModelConfig::SpinMech(c))
}

fn resolve_remote(b: RemoteBlock) -> SimResult<ModelConfig> {
    let block = "remote_sync";
    let j = match b.j {
        Some(j) => j,
        // half an exchange oscillation per period
        None if b.tau > 0.0 => PI / (2.0 * b.tau),
        None => return Err(SimError::config(format!("{block}.j: required when tau = 0"))),
    };
    let ancilla = match b.ancilla_init {
        None => AncillaPair::S00,
        Some(PairSpec::Label(s)) => match s.as_str() {
            "00" => AncillaPair::S00,
            "01" => AncillaPair::S01,
            "10" => AncillaPair::S10,
            "11" => AncillaPair::S11,
            _ => {
                return Err(SimError::config(format!(
                    "{block}.ancilla_init: expected \"00\", \"01\", \"10\", \"11\" or {{ custom = [...] }}, got \"{s}\""
                )))
            }
        },
        Some(PairSpec::Custom { custom }) => AncillaPair::Custom(custom.map(|z| Complex64::new(z[0], z[1]))),
    };
    let mut c = RemoteConfig::new(
        (b.bath_sizes[0], b.bath_sizes[1]),
        (0.0, 0.0),
        j,
        b.tau,
        rotation_error(block, b.epsilon, b.epsilon_pi)?,
        b.n_periods,
        ancilla,
    );
    c.couplings = (
        couplings(block, b.g1, b.couplings1, "g1")?,
        couplings(block, b.g2, b.couplings2, "g2")?,
    );
    c.backend = backend(b.backend);
    c.propagator_sign = sign(b.propagator_sign);
    Ok(ModelConfig::RemoteSync(c))
}

fn resolve_sweep(s: SweepBlock, model: &ModelConfig) -> SimResult<Sweep> {
    if !model.parameter_names().contains(&s.parameter.as_str()) {
        return Err(SimError::config(format!(
            "sweep.parameter: unknown field `{}` (expected one of: {})",
            s.parameter,
            model.parameter_names().join(", ")
        )));
    }
    let raw = match (s.values, s.linspace) {
        (Some(v), None) => v,
        (None, Some((start, stop, n))) => {
            if n < 2 {
                return Err(SimError::config("sweep.linspace: needs at least 2 points"));
            }
            (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect()
        }
        _ => return Err(SimError::config("sweep: give exactly one of `values` or `linspace`")),
    };
    let scale = if s.units == Some(Units::Pi) { PI } else { 1.0 };
    let grid: Vec<f64> = raw.iter().map(|v| v * scale).collect();
    if grid.is_empty() {
        return Err(SimError::config("sweep.values: grid must not be empty"));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(SimError::config("sweep.values: grid values must be finite"));
    }
    if s.parameter == "epsilon" {
        check_eps_grid(&grid).map_err(|e| SimError::config(e.to_string()))?;
    }
    for &v in &grid {
        let mut probe = model.clone();
        probe.set_parameter(&s.parameter, v)?;
        probe
            .validate()
            .map_err(|e| SimError::config(format!("sweep: value {v} is invalid: {e}")))?;
    }
    Ok(Sweep {
        parameter: s.parameter,
        grid,
    })
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn backend_json(b: Backend) -> &'static str {
    match b {
        Backend::Collective => "collective",
        Backend::Full => "full",
    }
}

fn sign_json(s: PropagatorSign) -> &'static str {
    match s {
        PropagatorSign::Minus => "minus",
        PropagatorSign::Plus => "plus",
    }
}

fn couplings_json(c: &Couplings) -> Value {
    match c {
        Couplings::Uniform(g) => json!(g),
        Couplings::PerSpin(gs) => json!(gs),
    }
}

/// Fully resolved model parameters, as echoed into output metadata.
pub fn model_json(model: &ModelConfig) -> Value {
    match model {
        ModelConfig::CentralSpin(c) => json!({
            "model": "central_spin",
            "n_spins": c.n_spins,
            "g": couplings_json(&c.couplings),
            "omega": c.drive,
            "tau": c.interaction_time,
            "epsilon": c.rotation_error,
            "epsilon_over_pi": c.rotation_error / PI,
            "n_periods": c.n_periods,
            "backend": backend_json(c.backend),
            "readout": match c.resolved_readout() {
                Readout::Collective => "collective".to_owned(),
                Readout::Spin(k) => format!("spin:{k}"),
            },
            "ancilla_init": { "up": complex_json(c.ancilla_init.up), "down": complex_json(c.ancilla_init.down) },
            "propagator_sign": sign_json(c.propagator_sign),
        }),
        ModelConfig::SpinMech(c) => json!({
            "model": "spin_mech",
            "n_spins": c.n_spins,
            "g": c.coupling,
            "omega0": c.mode_frequency,
            "t": c.interaction_time,
            "epsilon": c.rotation_error,
            "epsilon_over_pi": c.rotation_error / PI,
            "n_periods": c.n_periods,
            "fock_cutoff": c.fock_cutoff,
            "boson_init": match c.boson_init {
                BosonInit::Vacuum => json!("vacuum"),
                BosonInit::Coherent(a) => json!({ "coherent": complex_json(a) }),
            },
            "boson_reset": c.boson_reset,
            "propagator_sign": sign_json(c.propagator_sign),
        }),
        ModelConfig::RemoteSync(c) => json!({
            "model": "remote_sync",
            "bath_sizes": [c.bath_sizes.0, c.bath_sizes.1],
            "g1": couplings_json(&c.couplings.0),
            "g2": couplings_json(&c.couplings.1),
            "j": c.flip_flop,
            "tau": c.interaction_time,
            "epsilon": c.rotation_error,
            "epsilon_over_pi": c.rotation_error / PI,
            "n_periods": c.n_periods,
            "ancilla_init": c.ancilla_init.amplitudes().map(|a| a.map(complex_json).to_vec()).unwrap_or_default(),
            "backend": backend_json(c.backend),
            "propagator_sign": sign_json(c.propagator_sign),
        }),
    }
}

/// The whole resolved spec as JSON (model, analysis, sweep and output).
pub fn spec_json(spec: &ExperimentSpec) -> Value {
    json!({
        "spec_version": SPEC_VERSION,
        "name": spec.name,
        "description": spec.description,
        "model": model_json(&spec.model),
        "analysis": {
            "window": spec.analysis.window.name(),
            "dominance": spec.analysis.dominance,
        },
        "sweep": spec.sweep.as_ref().map(|s| json!({ "parameter": s.parameter, "grid": s.grid })),
        "output": {
            "directory": spec.output.directory,
            "format": spec.output.format,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
spec_version = 1
model = "central_spin"

[central_spin]
n_spins = 6
g = 1.0
omega = 2.0
tau = 9.5
epsilon_pi = 0.05
n_periods = 256
"#;

    #[test]
    fn minimal_spec_resolves_defaults() {
        let spec = parse_spec(MINIMAL, "minimal").unwrap();
        let ModelConfig::CentralSpin(c) = &spec.model else { panic!() };
        assert_eq!(c.backend, Backend::Collective);
        assert_eq!(c.resolved_readout(), Readout::Collective);
        assert!((c.rotation_error - 0.05 * PI).abs() < 1e-15);
        assert_eq!(spec.analysis, Analysis::default());
        assert_eq!(spec.output.format, OutputFormat::Csv);
        assert_eq!(spec.name, "minimal");
    }

    #[test]
    fn unknown_keys_are_rejected_with_line() {
        let text = MINIMAL.replace("omega = 2.0", "omega = 2.0\nomegaa = 1.0");
        let err = parse_spec(&text, "x").unwrap_err().to_string();
        assert!(err.contains("omegaa") && err.contains("line"), "{err}");
    }

    #[test]
    fn unknown_sweep_parameter() {
        let text = format!("{MINIMAL}\n[sweep]\nparameter = \"epsilonn\"\nvalues = [0.0]\n");
        let err = parse_spec(&text, "x").unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("unknown field `epsilonn`"), "{err}");
    }

    #[test]
    fn odd_periods_name_the_invariant() {
        let err = parse_spec(&MINIMAL.replace("256", "255"), "x").unwrap_err();
        assert!(err.to_string().contains("n_periods must be even"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn mismatched_blocks() {
        let text = MINIMAL.replace("model = \"central_spin\"", "model = \"spin_mech\"");
        assert!(parse_spec(&text, "x").is_err());
    }

    #[test]
    fn remote_defaults_quarter_exchange() {
        let text = r#"
spec_version = 1
model = "remote_sync"
[remote_sync]
bath_sizes = [3, 3]
g1 = 1.0
g2 = 1.0
tau = 9.0
epsilon_pi = 0.05
n_periods = 128
ancilla_init = "01"
"#;
        let spec = parse_spec(text, "r").unwrap();
        let ModelConfig::RemoteSync(c) = spec.model else { panic!() };
        assert!((c.flip_flop * c.interaction_time - PI / 2.0).abs() < 1e-15);
        assert_eq!(c.ancilla_init, AncillaPair::S01);
    }

    #[test]
    fn linspace_in_units_of_pi() {
        let text = format!("{MINIMAL}\n[sweep]\nparameter = \"epsilon\"\nlinspace = [0.0, 0.2, 16]\nunits = \"pi\"\n");
        let spec = parse_spec(&text, "x").unwrap();
        let grid = spec.sweep.unwrap().grid;
        assert_eq!(grid.len(), 16);
        assert!((grid[15] - 0.2 * PI).abs() < 1e-15);
        let bad = format!("{MINIMAL}\n[sweep]\nparameter = \"epsilon\"\nvalues = [1.7]\n");
        assert!(parse_spec(&bad, "x").is_err());
    }
}
