//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use dtc_core::spectral::{Window, DEFAULT_DOMINANCE};

use crate::config::{load_spec, Analysis, ExperimentSpec, OutputFormat};
use crate::error::{SimError, SimResult};
use crate::presets;
use crate::runner::{reanalyze, run_experiment, Outcome, RunOptions, RunSummary};
use crate::validation::{run_validation_suite, Status, ValidationOptions};

#[derive(Debug, Parser)]
#[command(name = "dtc-sim", version, about = "Simulate ancilla-assisted discrete time crystals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for sweeps (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// More output; repeat for extra detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment spec (single run or sweep) and write its files.
    Run(SpecArgs),
    /// Run a spec that has a [sweep] block.
    Sweep(SpecArgs),
    /// Re-analyze an existing series file without simulating.
    Spectrum(SpectrumArgs),
    /// Run the built-in validation suite; exits 3 if any check fails.
    Validate(ValidateArgs),
    /// Run a bundled figure preset.
    Replicate(ReplicateArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Experiment spec (TOML).
    pub spec: PathBuf,
    /// Output root; files go to <OUT>/<spec name>/. Defaults to the spec's output.directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WindowArg {
    Rectangular,
    Hann,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Series file with columns period_index, magnetization (.csv or .json).
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Directory for spectrum and peaks.json.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Window applied before the transform.
    #[arg(long, value_enum, default_value = "rectangular")]
    pub window: WindowArg,
    /// Required ratio of the nu = 1/2 peak to the largest satellite.
    #[arg(long, default_value_t = DEFAULT_DOMINANCE)]
    pub dominance: f64,
    /// Format of the spectrum table.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Bath sizes for the backend comparison, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "N,...")]
    pub spins: Option<Vec<usize>>,
    /// Random parameter draws per bath size.
    #[arg(long, default_value_t = ValidationOptions::default().draws)]
    pub draws: usize,
    /// Seed for the parameter draws.
    #[arg(long, default_value_t = ValidationOptions::default().seed)]
    pub seed: u64,
    /// Also write the report as JSON to this file.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplicateArgs {
    /// Preset name (see --list).
    #[arg(required_unless_present = "list")]
    pub name: Option<String>,
    /// Output root; files go to <OUT>/<preset>/<spec name>/.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// List the presets and exit.
    #[arg(long)]
    pub list: bool,
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> SimResult<()> {
    let options = RunOptions { threads: cli.threads };
    match &cli.command {
        Command::Run(args) => {
            let spec = load_spec(&args.spec)?;
            run_spec(&spec, args.out.as_deref(), &options, cli.verbose, out)
        }
        Command::Sweep(args) => {
            let spec = load_spec(&args.spec)?;
            if spec.sweep.is_none() {
                return Err(SimError::config(format!("{}: spec has no [sweep] block", args.spec.display())));
            }
            run_spec(&spec, args.out.as_deref(), &options, cli.verbose, out)
        }
        Command::Spectrum(args) => {
            let analysis = Analysis {
                window: match args.window {
                    WindowArg::Rectangular => Window::Rectangular,
                    WindowArg::Hann => Window::Hann,
                },
                dominance: args.dominance,
            };
            if !(analysis.dominance.is_finite() && analysis.dominance >= 1.0) {
                return Err(SimError::config("--dominance: must be a finite number ≥ 1"));
            }
            let format = match args.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
            let (files, report) = reanalyze(&args.input, &args.out, &analysis, format)?;
            writeln!(
                out,
                "height_at_half = {:.6}  global_max_at_half = {}  dtc_signature = {}",
                report.height_at_half,
                report.global_max_at_half,
                report.dtc_signature(analysis.dominance)
            )
            .ok();
            list_files(out, &files);
            Ok(())
        }
        Command::Validate(args) => {
            let defaults = ValidationOptions::default();
            let options = ValidationOptions {
                cross_validation_spins: args.spins.clone().unwrap_or(defaults.cross_validation_spins),
                draws: args.draws,
                seed: args.seed,
                corrupt_jx: false,
            };
            let report = run_validation_suite(&options);
            for e in &report.entries {
                let status = match e.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                    Status::Info => "INFO",
                };
                let measured = e.measured.map_or("-".into(), |m| format!("{m:.3e}"));
                let tol = e.tolerance.map_or(String::new(), |t| format!(" (limit {t:.1e})"));
                writeln!(out, "{status}  {:<44} {measured}{tol}", e.name).ok();
                if cli.verbose > 0 || e.status != Status::Pass {
                    writeln!(out, "      {}", e.detail).ok();
                }
            }
            if let Some(path) = &args.report {
                crate::io::write_json(path, &report.to_json())?;
            }
            match report.failures() {
                0 => Ok(()),
                n => Err(SimError::Validation(n)),
            }
        }
        Command::Replicate(args) => {
            if args.list {
                for p in presets::PRESETS {
                    writeln!(out, "{:<12} {}", p.name, p.summary).ok();
                }
                return Ok(());
            }
            let name = args.name.as_deref().unwrap_or_default();
            let preset = presets::find(name)?;
            for summary in preset.run(&args.out, &options)? {
                report_summary(&summary, cli.verbose, out);
            }
            Ok(())
        }
    }
}

fn run_spec(
    spec: &ExperimentSpec,
    root: Option<&Path>,
    options: &RunOptions,
    verbose: u8,
    out: &mut dyn Write,
) -> SimResult<()> {
    let root = root.unwrap_or(&spec.output.directory);
    let summary = run_experiment(spec, &root.join(&spec.name), options)?;
    report_summary(&summary, verbose, out);
    Ok(())
}

fn list_files(out: &mut dyn Write, files: &[PathBuf]) {
    for f in files {
        writeln!(out, "  wrote {}", f.display()).ok();
    }
}

fn report_summary(summary: &RunSummary, verbose: u8, out: &mut dyn Write) {
    writeln!(out, "{} -> {}", summary.name, summary.directory.display()).ok();
    match &summary.outcome {
        Outcome::Single { series, sync_metric, .. } => {
            for s in series {
                let label = if s.label.is_empty() { "bath" } else { &s.label };
                writeln!(
                    out,
                    "  {label}: height_at_half = {:.6}  global_max_at_half = {}",
                    s.report.height_at_half, s.report.global_max_at_half
                )
                .ok();
            }
            if let Some(c) = sync_metric {
                writeln!(out, "  sync_metric = {c:.6}").ok();
            }
        }
        Outcome::Sweep { parameter, rows } => {
            let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
            writeln!(out, "  {} {parameter} points, {failed} failed", rows.len()).ok();
            for r in rows.iter().filter(|r| verbose > 0 || r.outcome.is_err()) {
                match &r.outcome {
                    Ok(s) => {
                        let heights: Vec<String> =
                            s.reports.iter().map(|(_, rep)| format!("{:.6}", rep.height_at_half)).collect();
                        writeln!(out, "    {parameter} = {:.6}: height_at_half = {}", r.value, heights.join(", ")).ok();
                    }
                    Err(msg) => {
                        writeln!(out, "    {parameter} = {:.6}: error: {msg}", r.value).ok();
                    }
                }
            }
        }
    }
    if verbose > 0 {
        list_files(out, &summary.files);
    }
}
