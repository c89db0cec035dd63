//! CNOT chain fidelity under a Pauli noise model.
//!
//! Each CNOT of a chain is followed, with probability `1 - F_process` of that
//! gate, by a uniformly random non-identity two-qubit Pauli on its qubits
//! (two-qubit depolarizing noise). Errors are pushed through the remaining
//! CNOTs by Clifford conjugation. For a Pauli channel the process fidelity is
//! the probability that the net error is the identity, so counting identity
//! outcomes estimates it directly.

mod pauli;
mod walk;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::CalibrationSnapshot;
use crate::device_graph::DeviceGraph;
use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::pruner::Partition;

pub use pauli::{pauli_conjugate_cnot, Pauli, PauliString};
pub use walk::{random_chain_path, ChainSampler, DEFAULT_RESTART_BUDGET};

/// Ordered simple path of qubits; CNOTs run between consecutive entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainPath(Vec<usize>);

impl ChainPath {
    pub fn new(qubits: Vec<usize>) -> Self {
        Self(qubits)
    }

    pub fn qubits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(control, target)` of each CNOT, in execution order.
    pub fn gates(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    /// Simple and running only over couplings of `p`.
    pub fn is_valid_in(&self, p: &Partition) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.0
            .iter()
            .all(|q| p.qubits.contains(q) && seen.insert(*q))
            && self
                .gates()
                .all(|(a, b)| p.edges.contains(&(a, b)) || p.edges.contains(&(b, a)))
    }
}

impl std::fmt::Display for ChainPath {
    /// Qubits joined by `-`, e.g. `4-7-10`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

/// Where error rates come from.
pub trait ErrorSource<T> {
    fn cnot_error(&self, control: usize, target: usize) -> Option<T>;
    fn readout_error(&self, qubit: usize) -> Option<T>;
}

impl<T: Scalar> ErrorSource<T> for CalibrationSnapshot<T> {
    fn cnot_error(&self, control: usize, target: usize) -> Option<T> {
        self.cnot(control, target)
    }

    fn readout_error(&self, qubit: usize) -> Option<T> {
        self.readout(qubit)
    }
}

impl<T: Scalar> ErrorSource<T> for DeviceGraph<T> {
    fn cnot_error(&self, control: usize, target: usize) -> Option<T> {
        self.cnot(control, target)
    }

    fn readout_error(&self, qubit: usize) -> Option<T> {
        self.readout(qubit)
    }
}

/// Process and gate fidelity of one chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar", serialize = "T: Scalar"))]
pub struct FidelityEstimate<T> {
    pub process_fidelity: T,
    pub gate_fidelity: T,
    pub std_error: T,
    /// Zero for analytic estimates.
    pub trials: usize,
}

impl<T: Scalar> FidelityEstimate<T> {
    /// Derives the gate fidelity from the process fidelity.
    pub fn from_process(process_fidelity: T, std_error: T, trials: usize) -> Result<Self> {
        Ok(Self {
            process_fidelity,
            gate_fidelity: process_to_gate_fidelity(process_fidelity)?,
            std_error,
            trials,
        })
    }
}

/// Converts a two-qubit process fidelity to average gate fidelity,
/// `(4 F_process + 1) / 5`.
pub fn process_to_gate_fidelity<T: Scalar>(fp: T) -> Result<T> {
    if !fp.is_probability() {
        return Err(Error::ProbabilityOutOfRange {
            context: "process fidelity".into(),
            value: fp.as_f64(),
        });
    }
    Ok((T::of(4.0) * fp + T::one()) / T::of(5.0))
}

/// Process fidelity of a two-qubit gate whose average gate error is `e`:
/// `(5 (1 - e) - 1) / 4`, clamped to `[0, 1]` (reached at `e = 0.8`).
pub fn gate_error_to_process_fidelity<T: Scalar>(e: T) -> Result<T> {
    if !e.is_probability() {
        return Err(Error::ProbabilityOutOfRange {
            context: "gate error".into(),
            value: e.as_f64(),
        });
    }
    let fp = (T::of(5.0) * (T::one() - e) - T::one()) / T::of(4.0);
    Ok(fp.clamp_unit())
}

/// CNOT error of every gate of `path`, falling back to the reverse
/// direction when only that one is calibrated.
pub fn chain_gate_errors<T: Scalar>(path: &ChainPath, src: &impl ErrorSource<T>) -> Result<Vec<T>> {
    path.gates()
        .map(|(c, t)| {
            src.cnot_error(c, t)
                .or_else(|| src.cnot_error(t, c))
                .ok_or(Error::UncalibratedEdge(c, t))
        })
        .collect()
}

/// Product of per-gate process fidelities. Ignores errors that cancel, so it
/// never exceeds the simulated value beyond sampling noise.
pub fn analytic_chain_fidelity<T: Scalar>(
    path: &ChainPath,
    src: &impl ErrorSource<T>,
) -> Result<FidelityEstimate<T>> {
    let fp = chain_gate_errors(path, src)?
        .into_iter()
        .try_fold(T::one(), |acc, e| {
            gate_error_to_process_fidelity(e).map(|f| acc * f)
        })?;
    FidelityEstimate::from_process(fp, T::zero(), 0)
}

const TRIALS_PER_BLOCK: usize = 4096;

/// Runs `trials` Bernoulli trials in fixed blocks. Block `b` draws from the
/// ChaCha stream `b` of `seed`, so the count does not depend on how blocks
/// are scheduled across threads.
fn count_successes<F>(trials: usize, seed: u64, trial: F) -> usize
where
    F: Fn(&mut ChaCha8Rng, &mut PauliString) -> bool + Sync,
{
    let blocks = trials.div_ceil(TRIALS_PER_BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut state = PauliString::default();
            let n = TRIALS_PER_BLOCK.min(trials - b * TRIALS_PER_BLOCK);
            (0..n).filter(|_| trial(&mut rng, &mut state)).count()
        })
        .sum()
}

/// Error probabilities as `f64` for sampling.
fn injection_probabilities<T: Scalar>(errors: &[T]) -> Result<Vec<f64>> {
    errors
        .iter()
        .map(|&e| gate_error_to_process_fidelity(e).map(|f| 1.0 - f.as_f64()))
        .collect()
}

/// Pushes one trial's gate noise through the chain, leaving the net error in
/// `state`.
fn run_chain<R: Rng>(rng: &mut R, state: &mut PauliString, inject: &[f64]) {
    state.reset(inject.len() + 1);
    for (k, &p) in inject.iter().enumerate() {
        state.conjugate_cnot(k, k + 1);
        if p > 0.0 {
            let u: f64 = rng.random();
            if u < p {
                // u / p is uniform on [0, 1) given u < p.
                let idx = 1 + ((u / p * 15.0) as usize).min(14);
                state.apply_pair(k, Pauli::ALL[idx / 4], k + 1, Pauli::ALL[idx % 4]);
            }
        }
    }
}

fn binomial_std_error(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}

/// Monte Carlo process fidelity of a CNOT chain.
pub fn mc_chain_process_fidelity<T: Scalar>(
    path: &ChainPath,
    src: &(impl ErrorSource<T> + Sync),
    trials: usize,
    seed: u64,
) -> Result<FidelityEstimate<T>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let inject = injection_probabilities(&chain_gate_errors(path, src)?)?;
    let successes = count_successes(trials, seed, |rng, state| {
        run_chain(rng, state, &inject);
        state.is_identity()
    });
    let p = successes as f64 / trials as f64;
    FidelityEstimate::from_process(T::of(p), T::of(binomial_std_error(p, trials)), trials)
}

/// Monte Carlo success probability of a probability-of-success estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar", serialize = "T: Scalar"))]
pub struct SuccessEstimate<T> {
    pub probability: T,
    pub std_error: T,
    pub trials: usize,
}

/// Probability that the chain runs and every qubit then reads out correctly:
/// the net gate error has no bit flip on any qubit and no readout error fires.
pub fn end_to_end_success<T: Scalar>(
    path: &ChainPath,
    src: &(impl ErrorSource<T> + Sync),
    trials: usize,
    seed: u64,
) -> Result<SuccessEstimate<T>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if path.is_empty() {
        return Err(Error::InvalidParameter("empty path".into()));
    }
    let inject = injection_probabilities(&chain_gate_errors(path, src)?)?;
    let flips: Vec<f64> = path
        .qubits()
        .iter()
        .map(|&q| {
            let e = src.readout_error(q).ok_or(Error::UncalibratedQubit(q))?;
            if e.is_probability() {
                Ok(e.as_f64())
            } else {
                Err(Error::ProbabilityOutOfRange {
                    context: format!("readout_error[{q}]"),
                    value: e.as_f64(),
                })
            }
        })
        .collect::<Result<_>>()?;
    let successes = count_successes(trials, seed, |rng, state| {
        run_chain(rng, state, &inject);
        // Every qubit is measured, so draw all flips even after a failure.
        let mut flipped = false;
        for &f in &flips {
            flipped |= rng.random::<f64>() < f;
        }
        !flipped && !state.has_bit_flip()
    });
    let p = successes as f64 / trials as f64;
    Ok(SuccessEstimate {
        probability: T::of(p),
        std_error: T::of(binomial_std_error(p, trials)),
        trials,
    })
}

/// JSON form of one simulated chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar", serialize = "T: Scalar"))]
pub struct ChainResultDoc<T> {
    pub path: Vec<usize>,
    pub trials: usize,
    pub process_fidelity: T,
    pub gate_fidelity: T,
    pub std_error: T,
}

impl<T: Scalar> ChainResultDoc<T> {
    pub fn new(path: &ChainPath, est: &FidelityEstimate<T>) -> Self {
        Self {
            path: path.qubits().to_vec(),
            trials: est.trials,
            process_fidelity: est.process_fidelity,
            gate_fidelity: est.gate_fidelity,
            std_error: est.std_error,
        }
    }
}
