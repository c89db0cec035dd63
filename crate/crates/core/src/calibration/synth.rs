//! Seeded synthetic calibration data with log-normal error rates.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::topology::Topology;
use super::{check_probability, CalibrationSnapshot};
use crate::error::{Error, Result};
use crate::num::Scalar;

/// Fixed timestamp given to synthetic snapshots (2024-01-30T00:00:00Z).
pub const SYNTH_EPOCH_UNIX_S: i64 = 1_706_572_800;

/// Parameters of a synthetic device.
///
/// Error rates are log-normal: `median * exp(dispersion * z)` with `z`
/// standard normal, so `dispersion` is the spread in log space and
/// `exp(dispersion)` the one-sigma multiplicative factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar", serialize = "T: Scalar"))]
pub struct SynthSpec<T> {
    pub num_qubits: usize,
    pub topology: Topology,
    pub readout_median: T,
    pub readout_dispersion: T,
    pub cnot_median: T,
    pub cnot_dispersion: T,
    #[serde(default)]
    pub faulty_fraction: T,
}

impl<T: Scalar> SynthSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: T, name: &str| {
            if v > T::zero() && v < T::one() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be in (0,1), got {v}"
                )))
            }
        };
        let positive = |v: T, name: &str| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )))
            }
        };
        open_unit(self.readout_median, "readout_median")?;
        open_unit(self.cnot_median, "cnot_median")?;
        positive(self.readout_dispersion, "readout_dispersion")?;
        positive(self.cnot_dispersion, "cnot_dispersion")?;
        if !(self.faulty_fraction >= T::zero() && self.faulty_fraction < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "faulty_fraction must be in [0,1), got {}",
                self.faulty_fraction
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Number of qubits flagged faulty: `floor(faulty_fraction * num_qubits)`.
    pub fn faulty_count(&self) -> usize {
        // Rounded in f64 so that 0.1 * 20 lands on 2, not 1.9999.
        let exact = self.faulty_fraction.as_f64() * self.num_qubits as f64;
        (exact + 1e-9).floor() as usize
    }
}

fn log_normal<R: Rng>(rng: &mut R, median: f64, dispersion: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    (median * (dispersion * z).exp()).clamp(0.0, 1.0)
}

/// Draws a snapshot from `spec`. Deterministic in `(spec, seed)`.
///
/// Both directions of a coupling share one drawn CNOT error.
pub fn synth_snapshot<T: Scalar>(spec: &SynthSpec<T>, seed: u64) -> Result<CalibrationSnapshot<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.num_qubits;
    let name = format!("synth-{}-{}", spec.topology.name(), n);
    let mut snap = CalibrationSnapshot::new(name, SYNTH_EPOCH_UNIX_S, n);

    let (rm, rd) = (
        spec.readout_median.as_f64(),
        spec.readout_dispersion.as_f64(),
    );
    for q in 0..n {
        snap.readout_error
            .insert(q, T::of(log_normal(&mut rng, rm, rd)));
    }
    let (cm, cd) = (spec.cnot_median.as_f64(), spec.cnot_dispersion.as_f64());
    for (a, b) in spec.topology.undirected_edges(n) {
        let e = T::of(log_normal(&mut rng, cm, cd));
        snap.cnot_error.insert((a, b), e);
        snap.cnot_error.insert((b, a), e);
    }
    let faulty = spec.faulty_count();
    if faulty > 0 {
        snap.faulty_qubits.extend(sample(&mut rng, n, faulty));
    }
    for (&q, &e) in &snap.readout_error {
        check_probability(e, || format!("readout_error[{q}]"))?;
    }
    Ok(snap)
}
