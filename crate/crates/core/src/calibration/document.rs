//! JSON wire form of [`CalibrationSnapshot`].
//!
//! Object keys are strings (`"3"` for a qubit, `"3-4"` for a directed pair).
//! Duplicate keys are kept as separate entries so they can be reported.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::CalibrationSnapshot;
use crate::error::{Error, Result};
use crate::num::Scalar;

#[derive(Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar", serialize = "T: Scalar"))]
pub(super) struct SnapshotDoc<T> {
    device_name: String,
    timestamp_unix_s: i64,
    num_qubits: usize,
    readout_error: Entries<T>,
    cnot_error: Entries<T>,
    #[serde(default)]
    faulty_qubits: Vec<usize>,
}

/// Map entries in document order, duplicates included.
struct Entries<T>(Vec<(String, Option<T>)>);

impl<T: Scalar> Serialize for Entries<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Entries<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor<T>(PhantomData<T>);

        impl<'de, T: Scalar> Visitor<'de> for EntriesVisitor<T> {
            type Value = Entries<T>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object of error rates")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::with_capacity(access.size_hint().unwrap_or(0));
                while let Some((k, v)) = access.next_entry::<String, Option<T>>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }

        deserializer.deserialize_map(EntriesVisitor(PhantomData))
    }
}

fn parse_qubit_key(key: &str) -> Result<usize> {
    if key.is_empty() || !key.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Malformed(format!("bad qubit key {key:?}")));
    }
    key.parse()
        .map_err(|_| Error::Malformed(format!("bad qubit key {key:?}")))
}

fn parse_pair_key(key: &str) -> Result<(usize, usize)> {
    let (c, t) = key.split_once('-').ok_or_else(|| {
        Error::Malformed(format!(
            "bad pair key {key:?}, expected \"<control>-<target>\""
        ))
    })?;
    Ok((parse_qubit_key(c)?, parse_qubit_key(t)?))
}

impl<T: Scalar> SnapshotDoc<T> {
    pub(super) fn from_snapshot(snap: &CalibrationSnapshot<T>) -> Self {
        Self {
            device_name: snap.device_name.clone(),
            timestamp_unix_s: snap.timestamp_unix_s,
            num_qubits: snap.num_qubits,
            readout_error: Entries(
                snap.readout_error
                    .iter()
                    .map(|(q, e)| (q.to_string(), Some(*e)))
                    .collect(),
            ),
            cnot_error: Entries(
                snap.cnot_error
                    .iter()
                    .map(|((c, t), e)| (format!("{c}-{t}"), Some(*e)))
                    .collect(),
            ),
            faulty_qubits: snap.faulty_qubits.iter().copied().collect(),
        }
    }

    pub(super) fn into_snapshot(self) -> Result<CalibrationSnapshot<T>> {
        let mut readout_error = BTreeMap::new();
        let mut seen_qubits = BTreeSet::new();
        for (key, value) in self.readout_error.0 {
            let q = parse_qubit_key(&key)?;
            if !seen_qubits.insert(q) {
                return Err(Error::DuplicateQubit(q));
            }
            if let Some(v) = value {
                readout_error.insert(q, v);
            }
        }

        let mut cnot_error = BTreeMap::new();
        let mut seen_pairs = BTreeSet::new();
        for (key, value) in self.cnot_error.0 {
            let (c, t) = parse_pair_key(&key)?;
            if c == t {
                return Err(Error::SelfLoop(c));
            }
            if !seen_pairs.insert((c, t)) {
                return Err(Error::DuplicatePair(c, t));
            }
            if let Some(v) = value {
                cnot_error.insert((c, t), v);
            }
        }

        let snap = CalibrationSnapshot {
            device_name: self.device_name,
            timestamp_unix_s: self.timestamp_unix_s,
            num_qubits: self.num_qubits,
            readout_error,
            cnot_error,
            faulty_qubits: self.faulty_qubits.into_iter().collect(),
        };
        snap.validate()?;
        // Unknown (null) entries still need in-range indices.
        for q in seen_qubits {
            if q >= snap.num_qubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    num_qubits: snap.num_qubits,
                });
            }
        }
        for (c, t) in seen_pairs {
            for q in [c, t] {
                if q >= snap.num_qubits {
                    return Err(Error::IndexOutOfRange {
                        index: q,
                        num_qubits: snap.num_qubits,
                    });
                }
            }
        }
        Ok(snap)
    }
}
