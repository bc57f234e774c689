//! Bundled experiment specs that regenerate the figure data sets.

use std::path::Path;

use crate::config::{parse_spec, ExperimentSpec};
use crate::error::{SimError, SimResult};
use crate::runner::{run_experiment, RunOptions, RunSummary};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    /// `(file name, TOML text)` per spec.
    pub specs: &'static [(&'static str, &'static str)],
}

macro_rules! spec {
    ($file:literal) => {
        ($file, include_str!(concat!("../presets/", $file)))
    };
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1b",
        summary: "central-spin magnetization series with the drive on",
        specs: &[spec!("fig1b_driven.toml")],
    },
    Preset {
        name: "fig1c",
        summary: "central-spin spectra with the drive off and on",
        specs: &[spec!("fig1c_drive_off.toml"), spec!("fig1c_drive_on.toml")],
    },
    Preset {
        name: "fig1d",
        summary: "central-spin peak height against epsilon, driven and undriven",
        specs: &[spec!("fig1d_driven.toml"), spec!("fig1d_undriven.toml")],
    },
    Preset {
        name: "fig2",
        summary: "spin-mechanical spectra with and without coupling",
        specs: &[spec!("fig2_coupled.toml"), spec!("fig2_uncoupled.toml")],
    },
    Preset {
        name: "fig2-inset",
        summary: "spin-mechanical peak height against epsilon",
        specs: &[spec!("fig2-inset_coupled.toml")],
    },
    Preset {
        name: "fig3",
        summary: "remote baths with ancillas in |01> and |00>",
        specs: &[spec!("fig3_ancilla_01.toml"), spec!("fig3_ancilla_00.toml")],
    },
];

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn find(name: &str) -> SimResult<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        SimError::config(format!("unknown preset `{name}` (available: {})", names().join(", ")))
    })
}

impl Preset {
    pub fn load(&self) -> SimResult<Vec<ExperimentSpec>> {
        self.specs
            .iter()
            .map(|(file, text)| {
                let stem = file.trim_end_matches(".toml");
                parse_spec(text, stem).map_err(|e| match e {
                    SimError::Config(msg) => SimError::Config(format!("preset {file}: {msg}")),
                    other => other,
                })
            })
            .collect()
    }

    /// Runs every spec into `<root>/<preset>/<spec name>/`.
    pub fn run(&self, root: &Path, options: &RunOptions) -> SimResult<Vec<RunSummary>> {
        let base = root.join(self.name);
        self.load()?
            .iter()
            .map(|spec| run_experiment(spec, &base.join(&spec.name), options))
            .collect()
    }
}
