//! Random self-avoiding walks used to lay out CNOT chains.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ChainPath;
use crate::error::{Error, Result};
use crate::pruner::Partition;

/// Restarts allowed before a walk is declared impossible.
pub const DEFAULT_RESTART_BUDGET: usize = 10_000;

/// Walk sampler over an undirected qubit graph, which need not be connected.
#[derive(Debug, Clone)]
pub struct ChainSampler {
    qubits: Vec<usize>,
    /// Neighbours as indices into `qubits`.
    adj: Vec<Vec<usize>>,
    restart_budget: usize,
}

impl ChainSampler {
    /// `adjacency` maps each qubit to its neighbours; every neighbour must be
    /// a key too.
    pub fn new(adjacency: &BTreeMap<usize, Vec<usize>>) -> Self {
        let qubits: Vec<usize> = adjacency.keys().copied().collect();
        let local: BTreeMap<usize, usize> =
            qubits.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let adj = adjacency
            .values()
            .map(|ns| {
                let mut v: Vec<usize> = ns.iter().filter_map(|n| local.get(n).copied()).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        Self {
            qubits,
            adj,
            restart_budget: DEFAULT_RESTART_BUDGET,
        }
    }

    pub fn from_partition(p: &Partition) -> Self {
        Self::new(&p.adjacency())
    }

    pub fn with_restart_budget(mut self, budget: usize) -> Self {
        self.restart_budget = budget;
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// Starts at a uniformly chosen qubit and steps to a uniformly chosen
    /// unvisited neighbour; a walk that gets stuck short of `length` is
    /// thrown away and restarted.
    pub fn sample(&self, length: usize, seed: u64) -> Result<ChainPath> {
        if length < 2 {
            return Err(Error::InvalidParameter(format!(
                "chain length must be >= 2, got {length}"
            )));
        }
        if length > self.qubits.len() {
            return Err(Error::PartitionTooSmall {
                size: self.qubits.len(),
                length,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // visited[i] == attempt marks a qubit used by the current attempt.
        let mut visited = vec![usize::MAX; self.qubits.len()];
        let mut path = Vec::with_capacity(length);
        let mut open = Vec::new();
        for attempt in 0..self.restart_budget {
            path.clear();
            let mut current = rng.random_range(0..self.qubits.len());
            visited[current] = attempt;
            path.push(current);
            while path.len() < length {
                open.clear();
                open.extend(
                    self.adj[current]
                        .iter()
                        .copied()
                        .filter(|&n| visited[n] != attempt),
                );
                if open.is_empty() {
                    break;
                }
                current = open[rng.random_range(0..open.len())];
                visited[current] = attempt;
                path.push(current);
            }
            if path.len() == length {
                return Ok(ChainPath::new(
                    path.iter().map(|&i| self.qubits[i]).collect(),
                ));
            }
        }
        Err(Error::NoPathFound {
            length,
            restarts: self.restart_budget,
        })
    }
}

/// Random simple path of `length` qubits inside a partition.
pub fn random_chain_path(p: &Partition, length: usize, seed: u64) -> Result<ChainPath> {
    ChainSampler::from_partition(p).sample(length, seed)
}
