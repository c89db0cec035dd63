//! Calibration snapshots: per-qubit readout errors and per-directed-edge CNOT
//! errors, as published by a device at one point in time.
//!
//! Missing entries mean "unknown". They are never read as zero, and every
//! consumer downstream treats an unknown error as failing any threshold.

mod document;
mod drift;
mod synth;
pub mod topology;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::num::Scalar;

pub use drift::{smooth_series, smoothed_csv, synth_drift_series, DriftSeries, SmoothedPoint};
pub use synth::{synth_snapshot, SynthSpec};
pub use topology::Topology;

/// A directed qubit pair `(control, target)`.
pub type DirectedPair = (usize, usize);

/// Calibration data for one device at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSnapshot<T> {
    pub device_name: String,
    /// UTC seconds since the Unix epoch.
    pub timestamp_unix_s: i64,
    pub num_qubits: usize,
    pub readout_error: BTreeMap<usize, T>,
    pub cnot_error: BTreeMap<DirectedPair, T>,
    pub faulty_qubits: BTreeSet<usize>,
}

impl<T: Scalar> CalibrationSnapshot<T> {
    /// An empty snapshot: every error unknown, nothing faulty.
    pub fn new(device_name: impl Into<String>, timestamp_unix_s: i64, num_qubits: usize) -> Self {
        Self {
            device_name: device_name.into(),
            timestamp_unix_s,
            num_qubits,
            readout_error: BTreeMap::new(),
            cnot_error: BTreeMap::new(),
            faulty_qubits: BTreeSet::new(),
        }
    }

    pub fn with_readout(mut self, qubit: usize, error: T) -> Self {
        self.readout_error.insert(qubit, error);
        self
    }

    pub fn with_cnot(mut self, control: usize, target: usize, error: T) -> Self {
        self.cnot_error.insert((control, target), error);
        self
    }

    pub fn with_faulty(mut self, qubit: usize) -> Self {
        self.faulty_qubits.insert(qubit);
        self
    }

    /// Checks every structural invariant of a snapshot.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_qubits;
        let in_range = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange {
                    index: q,
                    num_qubits: n,
                })
            }
        };
        for (&q, &e) in &self.readout_error {
            in_range(q)?;
            check_probability(e, || format!("readout_error[{q}]"))?;
        }
        for (&(c, t), &e) in &self.cnot_error {
            if c == t {
                return Err(Error::SelfLoop(c));
            }
            in_range(c)?;
            in_range(t)?;
            check_probability(e, || format!("cnot_error[{c}-{t}]"))?;
        }
        for &q in &self.faulty_qubits {
            in_range(q)?;
        }
        Ok(())
    }

    pub fn readout(&self, qubit: usize) -> Option<T> {
        self.readout_error.get(&qubit).copied()
    }

    pub fn cnot(&self, control: usize, target: usize) -> Option<T> {
        self.cnot_error.get(&(control, target)).copied()
    }

    pub fn is_faulty(&self, qubit: usize) -> bool {
        self.faulty_qubits.contains(&qubit)
    }

    /// Mean over all known directed CNOT errors, `None` when there are none.
    pub fn mean_cnot_error(&self) -> Option<T> {
        if self.cnot_error.is_empty() {
            return None;
        }
        let sum: T = self.cnot_error.values().copied().sum();
        Some(sum / T::of_usize(self.cnot_error.len()))
    }

    /// Parses and validates a calibration document.
    pub fn from_json(text: &str) -> Result<Self> {
        parse_snapshot(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&document::SnapshotDoc::from_snapshot(self))
            .expect("snapshot documents always serialize")
    }
}

/// Parses a calibration document into a validated snapshot.
///
/// Entries whose value is `null` are kept as unknown (absent).
pub fn parse_snapshot<T: Scalar>(text: &str) -> Result<CalibrationSnapshot<T>> {
    let doc: document::SnapshotDoc<T> =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.into_snapshot()
}

/// Parses a JSON array of calibration documents.
pub fn parse_snapshot_list<T: Scalar>(text: &str) -> Result<Vec<CalibrationSnapshot<T>>> {
    let docs: Vec<document::SnapshotDoc<T>> =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    docs.into_iter()
        .map(document::SnapshotDoc::into_snapshot)
        .collect()
}

pub fn snapshot_list_to_json<T: Scalar>(snapshots: &[CalibrationSnapshot<T>]) -> String {
    let docs: Vec<_> = snapshots
        .iter()
        .map(document::SnapshotDoc::from_snapshot)
        .collect();
    serde_json::to_string_pretty(&docs).expect("snapshot documents always serialize")
}

pub(crate) fn check_probability<T: Scalar>(
    value: T,
    context: impl FnOnce() -> String,
) -> Result<()> {
    if value.is_probability() {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange {
            context: context(),
            value: value.as_f64(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_QUBIT: &str = r#"{
        "device_name": "toy",
        "timestamp_unix_s": 1706572800,
        "num_qubits": 2,
        "readout_error": {"0": 0.01, "1": 0.02},
        "cnot_error": {"0-1": 0.008, "1-0": 0.009},
        "faulty_qubits": []
    }"#;

    #[test]
    fn parses_two_qubit_document() {
        let snap: CalibrationSnapshot<f64> = parse_snapshot(TWO_QUBIT).unwrap();
        assert_eq!(snap.device_name, "toy");
        assert_eq!(snap.timestamp_unix_s, 1_706_572_800);
        assert_eq!(snap.readout(0), Some(0.01));
        assert_eq!(snap.readout(1), Some(0.02));
        assert_eq!(snap.cnot(0, 1), Some(0.008));
        assert_eq!(snap.cnot(1, 0), Some(0.009));
        assert!(snap.faulty_qubits.is_empty());
    }

    #[test]
    fn parses_as_f32() {
        let snap: CalibrationSnapshot<f32> = parse_snapshot(TWO_QUBIT).unwrap();
        assert_eq!(snap.cnot(0, 1), Some(0.008f32));
    }

    #[test]
    fn rejects_probability_above_one() {
        let doc = TWO_QUBIT.replace("0.01,", "1.3,");
        let err = parse_snapshot::<f64>(&doc).unwrap_err();
        assert!(matches!(err, Error::ProbabilityOutOfRange { .. }), "{err}");
        assert!(err.to_string().contains("probability outside [0,1]"));
    }

    #[test]
    fn rejects_self_loop() {
        let doc = TWO_QUBIT.replace("\"1-0\"", "\"0-0\"");
        let err = parse_snapshot::<f64>(&doc).unwrap_err();
        assert_eq!(err, Error::SelfLoop(0));
        assert!(err.to_string().contains("self-loop pair"));
    }

    #[test]
    fn rejects_duplicate_pair() {
        let doc = TWO_QUBIT.replace("\"1-0\"", "\"0-1\"");
        assert_eq!(
            parse_snapshot::<f64>(&doc).unwrap_err(),
            Error::DuplicatePair(0, 1)
        );
        // Same pair spelled differently is still a duplicate.
        let doc = TWO_QUBIT.replace("\"1-0\"", "\"00-1\"");
        assert_eq!(
            parse_snapshot::<f64>(&doc).unwrap_err(),
            Error::DuplicatePair(0, 1)
        );
    }

    #[test]
    fn rejects_out_of_range_indices() {
        let doc = TWO_QUBIT.replace("\"1-0\"", "\"2-0\"");
        assert_eq!(
            parse_snapshot::<f64>(&doc).unwrap_err(),
            Error::IndexOutOfRange {
                index: 2,
                num_qubits: 2
            }
        );
        let doc = TWO_QUBIT.replace("[]", "[5]");
        assert!(matches!(
            parse_snapshot::<f64>(&doc),
            Err(Error::IndexOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            parse_snapshot::<f64>("{"),
            Err(Error::Malformed(_))
        ));
        let doc = TWO_QUBIT.replace("\"0-1\"", "\"0_1\"");
        assert!(matches!(
            parse_snapshot::<f64>(&doc),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn null_entries_are_unknown() {
        let doc = TWO_QUBIT.replace("0.009", "null");
        let snap: CalibrationSnapshot<f64> = parse_snapshot(&doc).unwrap();
        assert_eq!(snap.cnot(1, 0), None);
        assert_eq!(snap.cnot_error.len(), 1);
    }

    #[test]
    fn mean_cnot() {
        let snap: CalibrationSnapshot<f64> = parse_snapshot(TWO_QUBIT).unwrap();
        assert!((snap.mean_cnot_error().unwrap() - 0.0085).abs() < 1e-15);
        assert_eq!(
            CalibrationSnapshot::<f64>::new("x", 0, 1).mean_cnot_error(),
            None
        );
    }
}
