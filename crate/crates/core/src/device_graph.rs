//! Weighted network view of a device: qubits weighted by readout error,
//! couplings weighted by CNOT error.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::calibration::{CalibrationSnapshot, DirectedPair, Topology};
use crate::error::{Error, Result};
use crate::num::Scalar;

/// Directed coupling graph of a device.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CouplingDoc", into = "CouplingDoc")]
pub struct CouplingMap {
    num_qubits: usize,
    edges: BTreeSet<DirectedPair>,
}

#[derive(Serialize, Deserialize)]
struct CouplingDoc {
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<CouplingDoc> for CouplingMap {
    type Error = Error;

    fn try_from(doc: CouplingDoc) -> Result<Self> {
        CouplingMap::new(doc.num_qubits, doc.edges.into_iter().map(|[c, t]| (c, t)))
    }
}

impl From<CouplingMap> for CouplingDoc {
    fn from(map: CouplingMap) -> Self {
        CouplingDoc {
            num_qubits: map.num_qubits,
            edges: map.edges.into_iter().map(|(c, t)| [c, t]).collect(),
        }
    }
}

impl CouplingMap {
    pub fn new(num_qubits: usize, edges: impl IntoIterator<Item = DirectedPair>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (c, t) in edges {
            if c == t {
                return Err(Error::SelfLoop(c));
            }
            for q in [c, t] {
                if q >= num_qubits {
                    return Err(Error::IndexOutOfRange {
                        index: q,
                        num_qubits,
                    });
                }
            }
            set.insert((c, t));
        }
        Ok(Self {
            num_qubits,
            edges: set,
        })
    }

    /// Both directions of every coupling of a synthetic topology.
    pub fn from_topology(topology: Topology, num_qubits: usize) -> Self {
        let edges = topology
            .undirected_edges(num_qubits)
            .into_iter()
            .flat_map(|(a, b)| [(a, b), (b, a)])
            .collect();
        Self { num_qubits, edges }
    }

    /// The directed edges listed in a calibration snapshot.
    pub fn from_snapshot<T: Scalar>(snap: &CalibrationSnapshot<T>) -> Self {
        Self {
            num_qubits: snap.num_qubits,
            edges: snap.cnot_error.keys().copied().collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &BTreeSet<DirectedPair> {
        &self.edges
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coupling maps always serialize")
    }
}

/// Non-fatal findings of [`build_weighted_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphWarning {
    /// The calibration has an error for an edge the coupling map lacks.
    EdgeNotInCoupling(DirectedPair),
}

/// Weighted network of a device. `None` weights are unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceGraph<T> {
    pub num_qubits: usize,
    pub node_weight: Vec<Option<T>>,
    pub edge_weight: BTreeMap<DirectedPair, Option<T>>,
    pub faulty: BTreeSet<usize>,
}

/// Enriches a coupling map with a snapshot's error rates.
///
/// Calibrated edges missing from the coupling map are dropped and reported.
pub fn build_weighted_graph<T: Scalar>(
    coupling: &CouplingMap,
    snap: &CalibrationSnapshot<T>,
) -> Result<(DeviceGraph<T>, Vec<GraphWarning>)> {
    if coupling.num_qubits != snap.num_qubits {
        return Err(Error::QubitCountMismatch {
            coupling: coupling.num_qubits,
            calibration: snap.num_qubits,
        });
    }
    let node_weight = (0..coupling.num_qubits).map(|q| snap.readout(q)).collect();
    let edge_weight = coupling
        .edges
        .iter()
        .map(|&(c, t)| ((c, t), snap.cnot(c, t)))
        .collect();
    let warnings = snap
        .cnot_error
        .keys()
        .filter(|pair| !coupling.edges.contains(pair))
        .map(|&pair| GraphWarning::EdgeNotInCoupling(pair))
        .collect();
    let graph = DeviceGraph {
        num_qubits: coupling.num_qubits,
        node_weight,
        edge_weight,
        faulty: snap.faulty_qubits.clone(),
    };
    Ok((graph, warnings))
}

impl<T: Scalar> DeviceGraph<T> {
    /// Builds the graph over the edges the snapshot itself calibrates.
    pub fn from_snapshot(snap: &CalibrationSnapshot<T>) -> Self {
        build_weighted_graph(&CouplingMap::from_snapshot(snap), snap)
            .expect("qubit counts agree by construction")
            .0
    }

    pub fn coupling_map(&self) -> CouplingMap {
        CouplingMap {
            num_qubits: self.num_qubits,
            edges: self.edge_weight.keys().copied().collect(),
        }
    }

    pub fn readout(&self, qubit: usize) -> Option<T> {
        self.node_weight.get(qubit).copied().flatten()
    }

    pub fn cnot(&self, control: usize, target: usize) -> Option<T> {
        self.edge_weight.get(&(control, target)).copied().flatten()
    }

    pub fn undirected_view(&self) -> UndirectedGraph<T> {
        undirected_view(self)
    }
}

/// Direction-merged view used for connectivity and pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct UndirectedGraph<T> {
    pub num_qubits: usize,
    pub node_weight: Vec<Option<T>>,
    /// Keyed by `(a, b)` with `a < b`.
    pub edge_weight: BTreeMap<(usize, usize), Option<T>>,
    pub faulty: BTreeSet<usize>,
}

/// Merges each pair's directed edges: the worst (maximum) known weight, or
/// unknown if any direction present is unknown.
pub fn undirected_view<T: Scalar>(graph: &DeviceGraph<T>) -> UndirectedGraph<T> {
    let mut edge_weight: BTreeMap<(usize, usize), Option<T>> = BTreeMap::new();
    for (&(c, t), &w) in &graph.edge_weight {
        let key = (c.min(t), c.max(t));
        edge_weight
            .entry(key)
            .and_modify(|merged| {
                *merged = match (*merged, w) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                }
            })
            .or_insert(w);
    }
    UndirectedGraph {
        num_qubits: graph.num_qubits,
        node_weight: graph.node_weight.clone(),
        edge_weight,
        faulty: graph.faulty.clone(),
    }
}
