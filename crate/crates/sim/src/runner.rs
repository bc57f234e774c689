//! Experiment orchestration: single runs, parallel sweeps and their files.
//!
//! A single run writes, per magnetization series, `series*.{csv,json}` and
//! `spectrum*.{csv,json}`, plus `peaks.json` and `metadata.json`. Two-site
//! models suffix the per-series files with `_bath1` / `_bath2`.
//!
//! A sweep writes `sweep*.{csv,json}` and `metadata.json`. Grid points run as
//! independent tasks on a bounded worker pool; rows come out sorted by the
//! swept value whatever the completion order, and a failing point becomes a
//! row with an error message instead of aborting the sweep.
//!
//! Everything except `metadata.json` is a pure function of the spec.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use dtc_core::central_spin::Backend;
use dtc_core::remote::sync_metric;
use dtc_core::spectral::{analyze, PeakReport, Spectrum};
use dtc_core::{FloquetResult, ModelConfig, ModelRun};

use crate::config::{spec_json, ExperimentSpec};
use crate::error::{SimError, SimResult};
use crate::io::{self, Cell, Table};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads for sweeps; `None` uses one per core.
    pub threads: Option<usize>,
}

/// Analysis of one magnetization series.
#[derive(Clone, Debug)]
pub struct SeriesOutcome {
    pub label: String,
    pub series: Vec<f64>,
    pub spectrum: Spectrum,
    pub report: PeakReport,
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<SweepSuccess, String>,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SweepSuccess {
    /// `(label, report)` per series.
    pub reports: Vec<(String, PeakReport)>,
    pub fock_cutoff: Option<usize>,
    pub sync_metric: Option<f64>,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Single {
        series: Vec<SeriesOutcome>,
        sync_metric: Option<f64>,
        fock_cutoff: Option<usize>,
    },
    Sweep {
        parameter: String,
        rows: Vec<SweepRow>,
    },
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub name: String,
    pub directory: PathBuf,
    pub files: Vec<PathBuf>,
    pub outcome: Outcome,
}

fn labels(run: &ModelRun) -> Vec<(String, &FloquetResult)> {
    if run.secondary.is_some() {
        run.series().map(|r| (r.label.clone(), r)).collect()
    } else {
        vec![(String::new(), &run.primary)]
    }
}

fn suffix(label: &str) -> String {
    if label.is_empty() {
        String::new()
    } else {
        format!("_{label}")
    }
}

fn backend_name(model: &ModelConfig) -> &'static str {
    let b = match model {
        ModelConfig::CentralSpin(c) => c.backend,
        ModelConfig::RemoteSync(c) => c.backend,
        ModelConfig::SpinMech(_) => return "closed_form",
    };
    match b {
        Backend::Collective => "collective",
        Backend::Full => "full",
    }
}

/// Runs the model once and analyzes every series.
pub fn simulate(spec: &ExperimentSpec) -> SimResult<(Vec<SeriesOutcome>, Option<f64>, Option<usize>)> {
    let run = spec.model.run()?;
    let sync = match &run.secondary {
        Some(b) => sync_metric(&run.primary, b).ok(),
        None => None,
    };
    let mut out = Vec::new();
    for (label, result) in labels(&run) {
        let (spectrum, report) = analyze(&result.magnetization, spec.analysis.window)?;
        out.push(SeriesOutcome {
            label,
            series: result.magnetization.clone(),
            spectrum,
            report,
        });
    }
    Ok((out, sync, run.fock_cutoff))
}

fn sweep_task(spec: &ExperimentSpec, parameter: &str, value: f64) -> SweepRow {
    let start = Instant::now();
    let outcome = (|| -> dtc_core::Result<SweepSuccess> {
        let mut model = spec.model.clone();
        model.set_parameter(parameter, value)?;
        let run = model.run()?;
        let reports = labels(&run)
            .into_iter()
            .map(|(label, r)| analyze(&r.magnetization, spec.analysis.window).map(|(_, rep)| (label, rep)))
            .collect::<dtc_core::Result<Vec<_>>>()?;
        let sync_metric = run.secondary.as_ref().and_then(|b| sync_metric(&run.primary, b).ok());
        Ok(SweepSuccess {
            reports,
            fock_cutoff: run.fock_cutoff,
            sync_metric,
        })
    })();
    SweepRow {
        value,
        outcome: outcome.map_err(|e| e.to_string()),
        wall_seconds: start.elapsed().as_secs_f64(),
    }
}

/// Evaluates the sweep grid, sorted by value, on a pool of `threads` workers.
pub fn run_sweep(spec: &ExperimentSpec, options: &RunOptions) -> SimResult<(String, Vec<SweepRow>)> {
    let sweep = spec
        .sweep
        .as_ref()
        .ok_or_else(|| SimError::config("spec has no [sweep] block"))?;
    let mut grid = sweep.grid.clone();
    grid.sort_by(f64::total_cmp);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| SimError::io("<thread pool>", std::io::Error::other(e)))?;
    let rows = pool.install(|| {
        grid.par_iter()
            .map(|&v| sweep_task(spec, &sweep.parameter, v))
            .collect::<Vec<_>>()
    });
    Ok((sweep.parameter.clone(), rows))
}

fn conventions() -> Value {
    json!({
        "series_index": "entry n is the readout after n Floquet periods; n = 0 is the initial state",
        "magnetization": "bath <J_z>/(N/2) (collective) or 2<I^z_k> of one spin (full backend, spin:k readout)",
        "spectrum": "series mean-subtracted, windowed, |DFT|^2 normalized to unit sum over all M bins; nu = k/M cycles per period",
        "height_at_half": "normalized power in the nu = 1/2 bin",
        "dtc_signature": "nu = 1/2 is the global maximum and at least `dominance` times the largest satellite in (0.4, 0.6)",
        "ancilla_basis": "|0> is S^z = +1/2",
        "float_format": "17 significant digits",
    })
}

/// Runs `spec` and writes its files into `dir`.
pub fn run_experiment(spec: &ExperimentSpec, dir: &Path, options: &RunOptions) -> SimResult<RunSummary> {
    let started = chrono::Utc::now();
    let clock = Instant::now();
    io::ensure_dir(dir)?;
    let format = spec.output.format;
    let mut files = Vec::new();
    let mut meta = json!({
        "tool": "dtc-sim",
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": dtc_core::VERSION,
        "spec": spec_json(spec),
        "backend": backend_name(&spec.model),
        "conventions": conventions(),
    });

    let outcome = if spec.sweep.is_some() {
        let (parameter, rows) = run_sweep(spec, options)?;
        let n_series = rows
            .iter()
            .find_map(|r| r.outcome.as_ref().ok().map(|s| s.reports.len()))
            .unwrap_or(1);
        let series_labels: Vec<String> = match &spec.model {
            ModelConfig::RemoteSync(_) if n_series == 2 => vec!["bath1".into(), "bath2".into()],
            _ => vec![String::new()],
        };
        for (i, label) in series_labels.iter().enumerate() {
            let mut table = Table::new(&[
                parameter.as_str(),
                "height_at_half",
                "global_max_at_half",
                "splitting",
                "error",
            ]);
            for row in &rows {
                table.push(match &row.outcome {
                    Ok(s) => {
                        let r = &s.reports[i].1;
                        vec![
                            Cell::Float(row.value),
                            Cell::Float(r.height_at_half),
                            Cell::Bool(r.global_max_at_half),
                            r.splitting.map_or(Cell::Empty, Cell::Float),
                            Cell::Empty,
                        ]
                    }
                    Err(msg) => vec![Cell::Float(row.value), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Text(msg.clone())],
                });
            }
            files.push(table.write(dir, &format!("sweep{}", suffix(label)), format)?);
        }
        meta["sweep_rows"] = rows
            .iter()
            .map(|r| {
                let ok = r.outcome.as_ref().ok();
                json!({
                    "value": r.value,
                    "wall_seconds": r.wall_seconds,
                    "fock_cutoff": ok.and_then(|s| s.fock_cutoff),
                    "sync_metric": ok.and_then(|s| s.sync_metric),
                    "dtc_signature": ok.map(|s| s.reports.iter()
                        .map(|(_, rep)| rep.dtc_signature(spec.analysis.dominance)).collect::<Vec<_>>()),
                    "error": r.outcome.as_ref().err(),
                })
            })
            .collect();
        meta["threads"] = json!(options.threads);
        Outcome::Sweep { parameter, rows }
    } else {
        let (series, sync, cutoff) = simulate(spec)?;
        for s in &series {
            let sfx = suffix(&s.label);
            files.push(io::series_table(&s.series).write(dir, &format!("series{sfx}"), format)?);
            files.push(io::spectrum_table(&s.spectrum).write(dir, &format!("spectrum{sfx}"), format)?);
        }
        let peaks = json!({
            "window": spec.analysis.window.name(),
            "dominance": spec.analysis.dominance,
            "series": series.iter().map(|s| io::report_json(
                if s.label.is_empty() { "bath" } else { &s.label }, &s.report, spec.analysis.dominance)).collect::<Vec<_>>(),
            "sync_metric": sync,
        });
        let peaks_path = dir.join("peaks.json");
        io::write_json(&peaks_path, &peaks)?;
        files.push(peaks_path);
        meta["fock_cutoff_used"] = json!(cutoff);
        Outcome::Single {
            series,
            sync_metric: sync,
            fock_cutoff: cutoff,
        }
    };

    let meta_path = dir.join("metadata.json");
    let mut names: Vec<String> = files
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect();
    names.push("metadata.json".into());
    meta["files"] = json!(names);
    meta["started_utc"] = json!(started.to_rfc3339());
    meta["wall_seconds"] = json!(clock.elapsed().as_secs_f64());
    io::write_json(&meta_path, &meta)?;
    files.push(meta_path);
    Ok(RunSummary {
        name: spec.name.clone(),
        directory: dir.to_owned(),
        files,
        outcome,
    })
}

/// Re-analyzes an existing series file; writes `spectrum.<ext>` and `peaks.json` into `dir`.
pub fn reanalyze(
    input: &Path,
    dir: &Path,
    analysis: &crate::config::Analysis,
    format: crate::config::OutputFormat,
) -> SimResult<(Vec<PathBuf>, PeakReport)> {
    let series = io::read_series(input)?;
    let (spectrum, report) = analyze(&series, analysis.window)?;
    io::ensure_dir(dir)?;
    let spec_path = io::spectrum_table(&spectrum).write(dir, "spectrum", format)?;
    let peaks_path = dir.join("peaks.json");
    io::write_json(
        &peaks_path,
        &json!({
            "input": input,
            "window": analysis.window.name(),
            "dominance": analysis.dominance,
            "series": [io::report_json("input", &report, analysis.dominance)],
        }),
    )?;
    Ok((vec![spec_path, peaks_path], report))
}
