//! Baseline-versus-pruned chain fidelity experiments.
//!
//! Baseline chains may use every non-faulty qubit and every calibrated
//! coupling between them. Pruned chains stay inside the largest partition of
//! a threshold policy. Each sample draws a random chain and simulates its
//! gate fidelity; samples whose walk fails are kept as failures and left out
//! of the statistics.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::chainsim::{mc_chain_process_fidelity, ChainPath, ChainSampler, FidelityEstimate};
use crate::device_graph::DeviceGraph;
use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::pruner::{largest_partition, ThresholdPolicy};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode<T> {
    Baseline,
    Pruned(ThresholdPolicy<T>),
}

impl<T> Mode<T> {
    pub fn label(&self) -> ModeLabel {
        match self {
            Mode::Baseline => ModeLabel::Baseline,
            Mode::Pruned(_) => ModeLabel::Pruned,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeLabel {
    Baseline,
    Pruned,
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeLabel::Baseline => "baseline",
            ModeLabel::Pruned => "pruned",
        })
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(ModeLabel::Baseline),
            "pruned" => Ok(ModeLabel::Pruned),
            other => Err(Error::Malformed(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T> {
    pub chain_lengths: Vec<usize>,
    pub samples_per_length: usize,
    pub trials_per_chain: usize,
    pub mode: Mode<T>,
    pub seed: u64,
}

impl<T: Scalar> ExperimentConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.chain_lengths.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one chain length is required".into(),
            ));
        }
        if let Some(&l) = self.chain_lengths.iter().find(|&&l| l < 2) {
            return Err(Error::InvalidParameter(format!(
                "chain lengths must be >= 2, got {l}"
            )));
        }
        if self.samples_per_length == 0 {
            return Err(Error::InvalidParameter(
                "samples_per_length must be >= 1".into(),
            ));
        }
        if self.trials_per_chain == 0 {
            return Err(Error::InvalidParameter(
                "trials_per_chain must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleOutcome<T> {
    Simulated {
        path: ChainPath,
        estimate: FidelityEstimate<T>,
    },
    /// Path generation gave up; the sample does not count towards `N`.
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSample<T> {
    pub length: usize,
    pub sample_index: usize,
    pub outcome: SampleOutcome<T>,
}

impl<T: Scalar> ChainSample<T> {
    pub fn gate_fidelity(&self) -> Option<T> {
        match &self.outcome {
            SampleOutcome::Simulated { estimate, .. } => Some(estimate.gate_fidelity),
            SampleOutcome::Failed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult<T> {
    pub mode: ModeLabel,
    /// Ordered by length (config order), then sample index.
    pub samples: Vec<ChainSample<T>>,
}

impl<T: Scalar> ExperimentResult<T> {
    pub fn failures(&self) -> impl Iterator<Item = &ChainSample<T>> {
        self.samples
            .iter()
            .filter(|s| matches!(s.outcome, SampleOutcome::Failed(_)))
    }

    /// CSV `length,sample_index,path,gate_fidelity,std_error`; failed samples
    /// leave the last three fields empty. Paths are written `a-b-c`.
    pub fn raw_csv(&self) -> String {
        let mut out = String::from("length,sample_index,path,gate_fidelity,std_error\n");
        for s in &self.samples {
            match &s.outcome {
                SampleOutcome::Simulated { path, estimate } => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        s.length, s.sample_index, path, estimate.gate_fidelity, estimate.std_error
                    );
                }
                SampleOutcome::Failed(_) => {
                    let _ = writeln!(out, "{},{},,,", s.length, s.sample_index);
                }
            }
        }
        out
    }
}

/// Mixes a base seed with indices into an independent 64-bit seed
/// (SplitMix64 finalizer applied per part).
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(seed), |acc, &p| mix(acc ^ mix(p)))
}

/// Qubits and couplings a chain may use in baseline mode.
fn baseline_sampler<T: Scalar>(graph: &DeviceGraph<T>) -> ChainSampler {
    let mut adj: BTreeMap<usize, Vec<usize>> = (0..graph.num_qubits)
        .filter(|q| !graph.faulty.contains(q))
        .map(|q| (q, Vec::new()))
        .collect();
    for (&(c, t), w) in &graph.edge_weight {
        if w.is_some() && adj.contains_key(&c) && adj.contains_key(&t) {
            adj.get_mut(&c).expect("checked").push(t);
            adj.get_mut(&t).expect("checked").push(c);
        }
    }
    ChainSampler::new(&adj)
}

/// Runs one experiment. Deterministic in `(graph, cfg)` and independent of
/// the thread count.
pub fn run_experiment<T: Scalar>(
    graph: &DeviceGraph<T>,
    cfg: &ExperimentConfig<T>,
) -> Result<ExperimentResult<T>> {
    cfg.validate()?;
    let sampler = match &cfg.mode {
        Mode::Baseline => baseline_sampler(graph),
        Mode::Pruned(policy) => ChainSampler::from_partition(&largest_partition(graph, policy)?),
    };
    if let Some(&length) = cfg
        .chain_lengths
        .iter()
        .find(|&&l| l > sampler.num_qubits())
    {
        return Err(Error::PartitionTooSmall {
            size: sampler.num_qubits(),
            length,
        });
    }

    let jobs: Vec<(usize, usize)> = cfg
        .chain_lengths
        .iter()
        .flat_map(|&l| (0..cfg.samples_per_length).map(move |i| (l, i)))
        .collect();
    let samples = jobs
        .par_iter()
        .map(|&(length, sample_index)| {
            let key = [length as u64, sample_index as u64];
            let outcome = match sampler.sample(length, derive_seed(cfg.seed, &[key[0], key[1], 0]))
            {
                Ok(path) => {
                    let mc_seed = derive_seed(cfg.seed, &[key[0], key[1], 1]);
                    let estimate =
                        mc_chain_process_fidelity(&path, graph, cfg.trials_per_chain, mc_seed)?;
                    SampleOutcome::Simulated { path, estimate }
                }
                Err(e @ Error::NoPathFound { .. }) => SampleOutcome::Failed(e),
                Err(e) => return Err(e),
            };
            Ok(ChainSample {
                length,
                sample_index,
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentResult {
        mode: cfg.mode.label(),
        samples,
    })
}

/// Per-length statistics of gate fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthSummary<T> {
    pub length: usize,
    pub mode: ModeLabel,
    /// `None` when no sample of this length succeeded.
    pub mean: Option<T>,
    /// Sample standard deviation (`N - 1`); zero when `n == 1`.
    pub std_dev: Option<T>,
    pub n: usize,
    pub delta_mean_pct: Option<T>,
}

impl<T> LengthSummary<T> {
    /// A single sample has no spread to report.
    pub fn is_degenerate(&self) -> bool {
        self.n <= 1
    }
}

/// Mean, standard deviation and count per chain length, in first-seen order.
pub fn summarize<T: Scalar>(result: &ExperimentResult<T>) -> Result<Vec<LengthSummary<T>>> {
    if result.samples.is_empty() {
        return Err(Error::EmptyResult);
    }
    let mut lengths: Vec<usize> = Vec::new();
    let mut by_length: BTreeMap<usize, Vec<T>> = BTreeMap::new();
    for s in &result.samples {
        if !by_length.contains_key(&s.length) {
            lengths.push(s.length);
        }
        let entry = by_length.entry(s.length).or_default();
        if let Some(f) = s.gate_fidelity() {
            entry.push(f);
        }
    }
    Ok(lengths
        .into_iter()
        .map(|length| {
            let xs = &by_length[&length];
            LengthSummary {
                length,
                mode: result.mode,
                mean: stats::mean(xs),
                std_dev: stats::sample_std(xs),
                n: xs.len(),
                delta_mean_pct: None,
            }
        })
        .collect())
}

/// Improvement of `method_mean` over `baseline_mean` in percent, normalised
/// by the method mean: `100 (method - baseline) / method`.
pub fn delta_mean<T: Scalar>(baseline_mean: T, method_mean: T) -> Result<T> {
    if method_mean.is_nan() || method_mean <= T::zero() {
        return Err(Error::InvalidParameter(format!(
            "method mean must be > 0, got {method_mean}"
        )));
    }
    Ok(T::of(100.0) * (method_mean - baseline_mean) / method_mean)
}

/// Fills `delta_mean_pct` of each method row from the baseline row of the
/// same length, when both means exist.
pub fn attach_delta<T: Scalar>(baseline: &[LengthSummary<T>], method: &mut [LengthSummary<T>]) {
    for row in method.iter_mut() {
        let base = baseline
            .iter()
            .find(|b| b.length == row.length)
            .and_then(|b| b.mean);
        row.delta_mean_pct = match (base, row.mean) {
            (Some(b), Some(m)) => delta_mean(b, m).ok(),
            _ => None,
        };
    }
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// CSV `length,mode,mean,std_dev,n,delta_mean_pct`; missing values are empty.
pub fn summary_csv<T: Scalar>(rows: &[LengthSummary<T>]) -> String {
    let mut out = String::from("length,mode,mean,std_dev,n,delta_mean_pct\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.length,
            r.mode,
            opt(&r.mean),
            opt(&r.std_dev),
            r.n,
            opt(&r.delta_mean_pct)
        );
    }
    out
}

/// Reads back a [`summary_csv`] document.
pub fn parse_summary_csv<T: Scalar>(text: &str) -> Result<Vec<LengthSummary<T>>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("length,mode,mean,std_dev,n,delta_mean_pct") => {}
        other => {
            return Err(Error::Malformed(format!(
                "unexpected summary header {other:?}"
            )))
        }
    }
    let bad = |line: &str| Error::Malformed(format!("bad summary row {line:?}"));
    let num = |s: &str, line: &str| -> Result<Option<T>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>()
                .map(|v| Some(T::of(v)))
                .map_err(|_| bad(line))
        }
    };
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(bad(line));
            }
            Ok(LengthSummary {
                length: f[0].parse().map_err(|_| bad(line))?,
                mode: f[1].parse()?,
                mean: num(f[2], line)?,
                std_dev: num(f[3], line)?,
                n: f[4].parse().map_err(|_| bad(line))?,
                delta_mean_pct: num(f[5], line)?,
            })
        })
        .collect()
}
