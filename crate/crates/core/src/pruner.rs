//! Threshold pruning and partition extraction.
//!
//! A qubit survives when it is not faulty and its readout error is known and
//! at most the readout threshold. A coupling survives when both endpoints
//! survive and its merged CNOT error is known and at most the CNOT threshold.
//! Requiring both endpoints removes dangling couplings without a second pass.
//! The surviving graph's connected components are the partitions.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calibration::DirectedPair;
use crate::device_graph::{CouplingMap, DeviceGraph};
use crate::error::{Error, Result};
use crate::num::Scalar;

/// The two user-defined maxima. Comparisons are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar", serialize = "T: Scalar"))]
pub struct ThresholdPolicy<T> {
    pub readout_error_max: T,
    pub cnot_error_max: T,
}

impl<T: Scalar> ThresholdPolicy<T> {
    pub fn new(readout_error_max: T, cnot_error_max: T) -> Result<Self> {
        for (name, v) in [
            ("readout_error_max", readout_error_max),
            ("cnot_error_max", cnot_error_max),
        ] {
            if !v.is_probability() {
                return Err(Error::ProbabilityOutOfRange {
                    context: name.into(),
                    value: v.as_f64(),
                });
            }
        }
        Ok(Self {
            readout_error_max,
            cnot_error_max,
        })
    }

    /// Admits everything that is known and not faulty.
    pub fn permissive() -> Self {
        Self {
            readout_error_max: T::one(),
            cnot_error_max: T::one(),
        }
    }

    pub fn admits_qubit(&self, readout: Option<T>) -> bool {
        readout.is_some_and(|e| e <= self.readout_error_max)
    }

    pub fn admits_coupling(&self, merged: Option<T>) -> bool {
        merged.is_some_and(|e| e <= self.cnot_error_max)
    }
}

/// Result of [`prune`]: surviving qubits and couplings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrunedGraph {
    pub num_qubits: usize,
    pub qubits: BTreeSet<usize>,
    /// Surviving couplings as `(a, b)` with `a < b`.
    pub couplings: BTreeSet<(usize, usize)>,
    /// Every directed edge of a surviving coupling.
    pub directed: BTreeSet<DirectedPair>,
}

impl PrunedGraph {
    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }
}

pub fn prune<T: Scalar>(graph: &DeviceGraph<T>, policy: &ThresholdPolicy<T>) -> PrunedGraph {
    let qubits: BTreeSet<usize> = (0..graph.num_qubits)
        .filter(|q| !graph.faulty.contains(q) && policy.admits_qubit(graph.readout(*q)))
        .collect();
    let merged = graph.undirected_view();
    let couplings: BTreeSet<(usize, usize)> = merged
        .edge_weight
        .iter()
        .filter(|(&(a, b), &w)| {
            qubits.contains(&a) && qubits.contains(&b) && policy.admits_coupling(w)
        })
        .map(|(&pair, _)| pair)
        .collect();
    let directed = graph
        .edge_weight
        .keys()
        .filter(|&&(c, t)| couplings.contains(&(c.min(t), c.max(t))))
        .copied()
        .collect();
    PrunedGraph {
        num_qubits: graph.num_qubits,
        qubits,
        couplings,
        directed,
    }
}

/// A connected set of surviving qubits with its directed edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    /// Size of the device the partition was cut from.
    pub device_qubits: usize,
    pub qubits: BTreeSet<usize>,
    pub edges: BTreeSet<DirectedPair>,
}

impl Partition {
    pub fn size(&self) -> usize {
        self.qubits.len()
    }

    /// Undirected adjacency lists over the partition's qubits.
    pub fn adjacency(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> =
            self.qubits.iter().map(|&q| (q, Vec::new())).collect();
        for &(c, t) in &self.edges {
            for (a, b) in [(c, t), (t, c)] {
                let list = adj.entry(a).or_default();
                if !list.contains(&b) {
                    list.push(b);
                }
            }
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    /// `true` when the undirected graph over the partition is connected.
    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.qubits.iter().next() else {
            return false;
        };
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            for &r in &adj[&q] {
                if seen.insert(r) {
                    queue.push_back(r);
                }
            }
        }
        seen.len() == self.qubits.len()
    }

    fn order_key(&self) -> (Reverse<usize>, Reverse<usize>, usize) {
        let first = self.qubits.iter().next().copied().unwrap_or(usize::MAX);
        (Reverse(self.size()), Reverse(self.edges.len()), first)
    }
}

/// Connected components of a pruned graph, largest first.
///
/// Ordered by qubit count, then directed edge count (both descending), then
/// smallest member index.
pub fn partitions(pruned: &PrunedGraph) -> Vec<Partition> {
    let mut adj: BTreeMap<usize, Vec<usize>> =
        pruned.qubits.iter().map(|&q| (q, Vec::new())).collect();
    for &(a, b) in &pruned.couplings {
        adj.get_mut(&a).expect("endpoint survives").push(b);
        adj.get_mut(&b).expect("endpoint survives").push(a);
    }
    let mut unvisited = pruned.qubits.clone();
    let mut out = Vec::new();
    while let Some(start) = unvisited.pop_first() {
        let mut members = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            for &r in &adj[&q] {
                if unvisited.remove(&r) {
                    members.insert(r);
                    queue.push_back(r);
                }
            }
        }
        let edges = pruned
            .directed
            .iter()
            .filter(|(c, _)| members.contains(c))
            .copied()
            .collect();
        out.push(Partition {
            device_qubits: pruned.num_qubits,
            qubits: members,
            edges,
        });
    }
    out.sort_by_key(Partition::order_key);
    out
}

/// The head of the ordered partition list.
pub fn largest_partition<T: Scalar>(
    graph: &DeviceGraph<T>,
    policy: &ThresholdPolicy<T>,
) -> Result<Partition> {
    partitions(&prune(graph, policy))
        .into_iter()
        .next()
        .ok_or(Error::EmptyPartition)
}

/// A partition rendered as a coupling map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMap {
    pub coupling: CouplingMap,
    /// Original index to new index, present when relabelled.
    pub relabel_map: Option<BTreeMap<usize, usize>>,
}

/// Converts a partition into a coupling map.
///
/// With `relabel` the qubits become `0..size` in ascending original order;
/// otherwise original indices and the device size are kept.
pub fn to_coupling_map(p: &Partition, relabel: bool) -> Result<PartitionMap> {
    if p.qubits.is_empty() {
        return Err(Error::EmptyPartition);
    }
    if !relabel {
        let coupling = CouplingMap::new(p.device_qubits, p.edges.iter().copied())?;
        return Ok(PartitionMap {
            coupling,
            relabel_map: None,
        });
    }
    let mapping: BTreeMap<usize, usize> = p
        .qubits
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let coupling = CouplingMap::new(
        p.size(),
        p.edges.iter().map(|(c, t)| (mapping[c], mapping[t])),
    )?;
    Ok(PartitionMap {
        coupling,
        relabel_map: Some(mapping),
    })
}

/// JSON form of a selected partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar", serialize = "T: Scalar"))]
pub struct PartitionDoc<T> {
    pub qubits: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub relabel_map: Option<BTreeMap<usize, usize>>,
    pub policy: ThresholdPolicy<T>,
}

impl<T: Scalar> PartitionDoc<T> {
    /// Qubits and edges are given in the (possibly relabelled) output indices.
    pub fn new(p: &Partition, relabel: bool, policy: ThresholdPolicy<T>) -> Result<Self> {
        let map = to_coupling_map(p, relabel)?;
        let qubits = match &map.relabel_map {
            Some(m) => m.values().copied().collect(),
            None => p.qubits.iter().copied().collect(),
        };
        let edges = map.coupling.edges().iter().map(|&(c, t)| [c, t]).collect();
        Ok(Self {
            qubits,
            edges,
            relabel_map: map.relabel_map,
            policy,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<T> {
    pub readout_threshold: T,
    pub cnot_threshold: T,
    pub largest_partition_size: usize,
    pub partition_count: usize,
}

/// Largest-partition size over a threshold grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable<T> {
    /// Readout-major: every CNOT threshold for the first readout threshold,
    /// then the second, and so on.
    pub rows: Vec<SweepRow<T>>,
}

impl<T: Scalar> SweepTable<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "readout_threshold,cnot_threshold,largest_partition_size,partition_count\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.readout_threshold, r.cnot_threshold, r.largest_partition_size, r.partition_count
            );
        }
        out
    }
}

/// Evaluates every `(readout, cnot)` grid point. Points run in parallel; row
/// order is always the sequential grid order.
pub fn sweep<T: Scalar>(
    graph: &DeviceGraph<T>,
    readout_grid: &[T],
    cnot_grid: &[T],
) -> Result<SweepTable<T>> {
    if readout_grid.is_empty() || cnot_grid.is_empty() {
        return Err(Error::InvalidParameter(
            "threshold grids must be non-empty".into(),
        ));
    }
    let points: Vec<ThresholdPolicy<T>> = readout_grid
        .iter()
        .flat_map(|&r| cnot_grid.iter().map(move |&c| (r, c)))
        .map(|(r, c)| ThresholdPolicy::new(r, c))
        .collect::<Result<_>>()?;
    let rows = points
        .par_iter()
        .map(|policy| {
            let parts = partitions(&prune(graph, policy));
            SweepRow {
                readout_threshold: policy.readout_error_max,
                cnot_threshold: policy.cnot_error_max,
                largest_partition_size: parts.first().map_or(0, Partition::size),
                partition_count: parts.len(),
            }
        })
        .collect();
    Ok(SweepTable { rows })
}
