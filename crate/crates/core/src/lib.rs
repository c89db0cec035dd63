//! Threshold-driven partition selection for noisy superconducting devices.
//!
//! Given a coupling map, a calibration snapshot and two user limits (CNOT
//! error and readout error), [`pruner`] drops every element above its limit,
//! drops couplings left without both endpoints, and returns the connected
//! partitions largest first. [`chainsim`] and [`bench`] measure what that buys:
//! random CNOT chains are simulated under depolarizing gate noise on the full
//! device and inside the pruned partition, and their gate fidelities compared.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`.

pub mod bench;
pub mod calibration;
pub mod chainsim;
pub mod device_graph;
pub mod error;
pub mod num;
pub mod pruner;
pub mod stats;

pub use error::{Error, Result};
pub use num::Scalar;

pub use calibration::{DirectedPair, Topology};
pub use chainsim::{ChainPath, Pauli, PauliString};
pub use device_graph::{CouplingMap, GraphWarning};
pub use pruner::{Partition, PartitionMap, PrunedGraph};

pub type CalibrationSnapshot = calibration::CalibrationSnapshot<f64>;
pub type SynthSpec = calibration::SynthSpec<f64>;
pub type DriftSeries = calibration::DriftSeries<f64>;
pub type SmoothedPoint = calibration::SmoothedPoint<f64>;
pub type DeviceGraph = device_graph::DeviceGraph<f64>;
pub type UndirectedGraph = device_graph::UndirectedGraph<f64>;
pub type ThresholdPolicy = pruner::ThresholdPolicy<f64>;
pub type PartitionDoc = pruner::PartitionDoc<f64>;
pub type SweepTable = pruner::SweepTable<f64>;
pub type FidelityEstimate = chainsim::FidelityEstimate<f64>;
pub type SuccessEstimate = chainsim::SuccessEstimate<f64>;
pub type ExperimentConfig = bench::ExperimentConfig<f64>;
pub type ExperimentResult = bench::ExperimentResult<f64>;
pub type LengthSummary = bench::LengthSummary<f64>;
pub type Mode = bench::Mode<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type CalibrationSnapshot = crate::calibration::CalibrationSnapshot<f32>;
    pub type DeviceGraph = crate::device_graph::DeviceGraph<f32>;
    pub type ThresholdPolicy = crate::pruner::ThresholdPolicy<f32>;
    pub type FidelityEstimate = crate::chainsim::FidelityEstimate<f32>;
    pub type ExperimentConfig = crate::bench::ExperimentConfig<f32>;
}
