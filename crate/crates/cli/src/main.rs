//! `qprune` command-line front end.
//!
//! Machine-readable output goes to stdout (or the file named by an `--*-out`
//! flag); warnings and errors go to stderr. Exit codes: 0 success, 1 internal
//! failure, 2 input error, 3 empty or infeasible result.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qprune::bench::{self, ExperimentConfig, Mode};
use qprune::calibration::{self, CalibrationSnapshot, SynthSpec};
use qprune::device_graph::{build_weighted_graph, DeviceGraph, GraphWarning};
use qprune::pruner::{self, PartitionDoc, ThresholdPolicy};
use qprune::{CouplingMap, Error};

#[derive(Parser)]
#[command(
    name = "qprune",
    version,
    about = "Select low-error partitions of a quantum device and measure the fidelity gain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the largest partition satisfying both thresholds as JSON.
    Prune {
        #[command(flatten)]
        device: DeviceFiles,
        #[command(flatten)]
        thresholds: Thresholds,
        /// Renumber partition qubits to 0..size in ascending original order.
        #[arg(long)]
        relabel: bool,
        /// Emit every partition, largest first, as a JSON array.
        #[arg(long)]
        all_partitions: bool,
    },
    /// Tabulate largest-partition size over a grid of thresholds.
    Sweep {
        #[command(flatten)]
        device: DeviceFiles,
        /// Comma-separated readout thresholds, e.g. `0.01,2%,0.05`.
        #[arg(long, value_parser = parse_grid)]
        readout_grid: Grid,
        /// Comma-separated CNOT thresholds.
        #[arg(long, value_parser = parse_grid)]
        cnot_grid: Grid,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Simulate random CNOT chains on the full device or inside the largest partition.
    Bench {
        #[command(flatten)]
        device: DeviceFiles,
        /// Comma-separated chain lengths in qubits.
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        /// Chains sampled per length.
        #[arg(long)]
        samples: usize,
        /// Monte Carlo trials per chain.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Use every non-faulty qubit instead of a pruned partition.
        #[arg(long, conflicts_with_all = ["readout_max", "cnot_max"])]
        baseline: bool,
        #[arg(long, value_parser = parse_probability, required_unless_present = "baseline")]
        readout_max: Option<f64>,
        #[arg(long, value_parser = parse_probability, required_unless_present = "baseline")]
        cnot_max: Option<f64>,
        #[arg(long)]
        seed: u64,
        /// Per-chain CSV destination.
        #[arg(long)]
        raw_out: Option<PathBuf>,
        /// Per-length summary CSV destination; stdout when absent.
        #[arg(long)]
        summary_out: Option<PathBuf>,
    },
    /// Fill the delta column of a pruned summary from a baseline summary.
    Delta {
        baseline_summary: PathBuf,
        method_summary: PathBuf,
    },
    /// Generate a drifting calibration series and emit its smoothed mean CNOT error.
    Drift {
        /// JSON synthetic-device description.
        #[arg(long)]
        synth_spec_file: PathBuf,
        #[arg(long)]
        days: usize,
        #[arg(long, default_value_t = 1)]
        per_day: usize,
        /// Additive CNOT error increase per day.
        #[arg(long, allow_negative_numbers = true)]
        drift_rate: f64,
        /// Standard deviation of the per-snapshot offset.
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
        #[arg(long)]
        seed: u64,
        /// Moving-average window in snapshots.
        #[arg(long)]
        window: usize,
        #[arg(long)]
        csv_out: Option<PathBuf>,
        /// Also write the raw snapshot list as JSON.
        #[arg(long)]
        series_out: Option<PathBuf>,
    },
    /// Generate a synthetic calibration snapshot and its coupling map.
    Synth {
        #[arg(long)]
        synth_spec_file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        calibration_out: PathBuf,
        #[arg(long)]
        coupling_out: PathBuf,
    },
}

#[derive(Args)]
struct DeviceFiles {
    /// Calibration snapshot JSON.
    calibration: PathBuf,
    /// Coupling map JSON.
    coupling: PathBuf,
}

#[derive(Args)]
struct Thresholds {
    /// Maximum readout error, as a fraction (0.016) or percent (1.6%).
    #[arg(long, value_parser = parse_probability)]
    readout_max: f64,
    /// Maximum CNOT error, as a fraction or percent.
    #[arg(long, value_parser = parse_probability)]
    cnot_max: f64,
}

type Grid = Vec<f64>;

fn parse_probability(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.strip_suffix('%') {
        Some(pct) => pct.trim().parse::<f64>().map(|v| v / 100.0),
        None => s.parse::<f64>(),
    }
    .map_err(|_| format!("not a number: {s:?}"))?;
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(format!("probability outside [0,1]: {s}"))
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let grid: Grid = s
        .split(',')
        .map(parse_probability)
        .collect::<Result<_, _>>()?;
    if grid.is_empty() {
        return Err("empty grid".into());
    }
    Ok(grid)
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EmptyPartition
            | Error::EmptySeries
            | Error::EmptyResult
            | Error::NoPathFound { .. }
            | Error::PartitionTooSmall { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let result = match path {
        Some(p) => fs::write(p, text).map_err(|e| (p.display().to_string(), e)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| ("stdout".to_string(), e)),
    };
    result.map_err(|(target, e)| Failure {
        code: 1,
        message: format!("cannot write {target}: {e}"),
    })
}

fn load_device(files: &DeviceFiles) -> Result<DeviceGraph<f64>, Failure> {
    let snap = CalibrationSnapshot::from_json(&read(&files.calibration)?)?;
    let coupling = CouplingMap::from_json(&read(&files.coupling)?)?;
    let (graph, warnings) = build_weighted_graph(&coupling, &snap)?;
    for GraphWarning::EdgeNotInCoupling((c, t)) in warnings {
        eprintln!("warning: calibrated edge ({c},{t}) is not in the coupling map and was ignored");
    }
    Ok(graph)
}

fn load_spec(path: &Path) -> Result<SynthSpec<f64>, Failure> {
    Ok(SynthSpec::from_json(&read(path)?)?)
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Prune {
            device,
            thresholds,
            relabel,
            all_partitions,
        } => {
            let graph = load_device(&device)?;
            let policy = ThresholdPolicy::new(thresholds.readout_max, thresholds.cnot_max)?;
            let parts = pruner::partitions(&pruner::prune(&graph, &policy));
            if parts.is_empty() {
                return Err(Error::EmptyPartition.into());
            }
            let docs = parts
                .iter()
                .map(|p| PartitionDoc::new(p, relabel, policy))
                .collect::<Result<Vec<_>, _>>()?;
            let text = if all_partitions {
                to_json(&docs)
            } else {
                to_json(&docs[0])
            };
            emit(None, &text)
        }
        Command::Sweep {
            device,
            readout_grid,
            cnot_grid,
            csv_out,
        } => {
            let graph = load_device(&device)?;
            let table = pruner::sweep(&graph, &readout_grid, &cnot_grid)?;
            emit(csv_out.as_deref(), &table.to_csv())
        }
        Command::Bench {
            device,
            lengths,
            samples,
            trials,
            baseline,
            readout_max,
            cnot_max,
            seed,
            raw_out,
            summary_out,
        } => {
            let graph = load_device(&device)?;
            let mode = match (baseline, readout_max, cnot_max) {
                (true, _, _) => Mode::Baseline,
                (false, Some(r), Some(c)) => Mode::Pruned(ThresholdPolicy::new(r, c)?),
                _ => unreachable!("clap requires both thresholds without --baseline"),
            };
            let cfg = ExperimentConfig {
                chain_lengths: lengths,
                samples_per_length: samples,
                trials_per_chain: trials,
                mode,
                seed,
            };
            let result = bench::run_experiment(&graph, &cfg)?;
            let failed = result.failures().count();
            if failed > 0 {
                eprintln!("warning: {failed} chain(s) could not be sampled and are excluded from the summary");
            }
            if let Some(path) = &raw_out {
                emit(Some(path), &result.raw_csv())?;
            }
            let rows = bench::summarize(&result)?;
            for r in rows.iter().filter(|r| r.n == 0) {
                eprintln!("warning: no chain of length {} succeeded", r.length);
            }
            emit(summary_out.as_deref(), &bench::summary_csv(&rows))
        }
        Command::Delta {
            baseline_summary,
            method_summary,
        } => {
            let base = bench::parse_summary_csv::<f64>(&read(&baseline_summary)?)?;
            let mut method = bench::parse_summary_csv::<f64>(&read(&method_summary)?)?;
            bench::attach_delta(&base, &mut method);
            emit(None, &bench::summary_csv(&method))
        }
        Command::Drift {
            synth_spec_file,
            days,
            per_day,
            drift_rate,
            jitter,
            seed,
            window,
            csv_out,
            series_out,
        } => {
            let spec = load_spec(&synth_spec_file)?;
            let series =
                calibration::synth_drift_series(&spec, days, per_day, drift_rate, jitter, seed)?;
            let points = calibration::smooth_series(&series, window)?;
            if let Some(path) = &series_out {
                emit(
                    Some(path),
                    &calibration::snapshot_list_to_json(&series.snapshots),
                )?;
            }
            emit(csv_out.as_deref(), &calibration::smoothed_csv(&points))
        }
        Command::Synth {
            synth_spec_file,
            seed,
            calibration_out,
            coupling_out,
        } => {
            let spec = load_spec(&synth_spec_file)?;
            let snap = calibration::synth_snapshot(&spec, seed)?;
            let coupling = CouplingMap::from_snapshot(&snap);
            emit(Some(&calibration_out), &snap.to_json())?;
            emit(Some(&coupling_out), &coupling.to_json())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
