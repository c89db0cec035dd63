//! Calibration time series with aging drift, and the moving-average view of
//! mean CNOT error over time.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::synth::{synth_snapshot, SynthSpec};
use super::CalibrationSnapshot;
use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::stats;

const SECONDS_PER_DAY: i64 = 86_400;

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSeries<T> {
    /// Strictly increasing timestamps.
    pub snapshots: Vec<CalibrationSnapshot<T>>,
    /// Additive increase of every CNOT error per day.
    pub drift_rate: T,
    /// Standard deviation of the per-snapshot common offset.
    pub jitter: T,
}

impl<T: Scalar> DriftSeries<T> {
    /// Wraps existing snapshots, checking order and validity.
    pub fn new(snapshots: Vec<CalibrationSnapshot<T>>, drift_rate: T, jitter: T) -> Result<Self> {
        for s in &snapshots {
            s.validate()?;
        }
        if snapshots
            .windows(2)
            .any(|w| w[0].timestamp_unix_s >= w[1].timestamp_unix_s)
        {
            return Err(Error::InvalidParameter(
                "timestamps must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            snapshots,
            drift_rate,
            jitter,
        })
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Mean CNOT error of each snapshot; snapshots without CNOT data are NaN.
    pub fn mean_cnot_errors(&self) -> Vec<T> {
        self.snapshots
            .iter()
            .map(|s| s.mean_cnot_error().unwrap_or_else(T::nan))
            .collect()
    }
}

/// Generates `days * snapshots_per_day + 1` snapshots spanning days `0..=days`.
///
/// Every snapshot starts from the same seeded device; at day `t` all CNOT
/// errors are shifted by `drift_rate * t + jitter * z`, with one standard
/// normal `z` per snapshot, then clamped to `[0, 1]`.
pub fn synth_drift_series<T: Scalar>(
    spec: &SynthSpec<T>,
    days: usize,
    snapshots_per_day: usize,
    drift_rate: T,
    jitter: T,
    seed: u64,
) -> Result<DriftSeries<T>> {
    if days == 0 {
        return Err(Error::InvalidParameter("days must be >= 1".into()));
    }
    if snapshots_per_day == 0 || snapshots_per_day as i64 > SECONDS_PER_DAY {
        return Err(Error::InvalidParameter(format!(
            "snapshots_per_day must be in [1, {SECONDS_PER_DAY}]"
        )));
    }
    if !drift_rate.is_finite() {
        return Err(Error::InvalidParameter("drift_rate must be finite".into()));
    }
    if !(jitter >= T::zero() && jitter.is_finite()) {
        return Err(Error::InvalidParameter("jitter must be >= 0".into()));
    }

    let base = synth_snapshot(spec, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let count = days * snapshots_per_day + 1;
    let per_day = snapshots_per_day as i64;
    let (rate, jit) = (drift_rate.as_f64(), jitter.as_f64());

    let snapshots = (0..count)
        .map(|k| {
            let z: f64 = rng.sample(StandardNormal);
            let day = k as f64 / snapshots_per_day as f64;
            let offset = rate * day + jit * z;
            let mut snap = base.clone();
            snap.timestamp_unix_s = base.timestamp_unix_s + k as i64 * SECONDS_PER_DAY / per_day;
            for e in snap.cnot_error.values_mut() {
                *e = T::of((e.as_f64() + offset).clamp(0.0, 1.0));
            }
            snap
        })
        .collect();
    Ok(DriftSeries {
        snapshots,
        drift_rate,
        jitter,
    })
}

/// One output row of [`smooth_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedPoint<T> {
    pub timestamp_unix_s: i64,
    pub mean_cnot_error: T,
    /// Population standard deviation of the per-snapshot means in the window.
    pub std_dev: T,
}

/// Centered moving average of per-snapshot mean CNOT error.
///
/// An odd window covers `(window - 1) / 2` samples each side; an even one
/// reaches one sample further right. Near either end both sides shrink to the
/// same reach, so the window stays centered and a linear series is returned
/// unchanged.
pub fn smooth_series<T: Scalar>(
    series: &DriftSeries<T>,
    window: usize,
) -> Result<Vec<SmoothedPoint<T>>> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let n = series.len();
    if window == 0 || window > n {
        return Err(Error::InvalidParameter(format!(
            "window must be in [1, {n}], got {window}"
        )));
    }
    let means = series.mean_cnot_errors();
    let left = (window - 1) / 2;
    let right = window - 1 - left;
    let points = (0..n)
        .map(|i| {
            let (mut lo, mut hi) = (left.min(i), right.min(n - 1 - i));
            if lo < left || hi < right {
                let reach = lo.min(hi);
                lo = reach;
                hi = reach;
            }
            let slice = &means[i - lo..=i + hi];
            SmoothedPoint {
                timestamp_unix_s: series.snapshots[i].timestamp_unix_s,
                mean_cnot_error: stats::mean(slice).expect("window is non-empty"),
                std_dev: stats::population_std(slice).expect("window is non-empty"),
            }
        })
        .collect();
    Ok(points)
}

/// CSV with header `timestamp_unix_s,mean_cnot_error,std_dev`.
pub fn smoothed_csv<T: Scalar>(points: &[SmoothedPoint<T>]) -> String {
    let mut out = String::from("timestamp_unix_s,mean_cnot_error,std_dev\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{}",
            p.timestamp_unix_s, p.mean_cnot_error, p.std_dev
        );
    }
    out
}
