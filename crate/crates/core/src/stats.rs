//! Small descriptive statistics and a least-squares line fit.

use crate::num::Scalar;

pub fn mean<T: Scalar>(xs: &[T]) -> Option<T> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().copied().sum::<T>() / T::of_usize(xs.len()))
    }
}

/// Standard deviation with the `N` denominator.
pub fn population_std<T: Scalar>(xs: &[T]) -> Option<T> {
    let m = mean(xs)?;
    let ss: T = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    Some((ss / T::of_usize(xs.len())).sqrt())
}

/// Standard deviation with the `N - 1` denominator; zero for one sample.
pub fn sample_std<T: Scalar>(xs: &[T]) -> Option<T> {
    let m = mean(xs)?;
    if xs.len() == 1 {
        return Some(T::zero());
    }
    let ss: T = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    Some((ss / T::of_usize(xs.len() - 1)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub slope_std_error: T,
}

/// Ordinary least squares `y = intercept + slope * x`.
///
/// With `lag == 0` the slope standard error is the classical one. A positive
/// `lag` gives the Newey-West (Bartlett kernel) error, which stays honest on
/// autocorrelated residuals such as those of a moving average over `lag + 1`
/// samples. Needs at least three points and non-constant `x`.
pub fn linear_fit<T: Scalar>(x: &[T], y: &[T], lag: usize) -> Option<LinearFit<T>> {
    let n = x.len();
    if n != y.len() || n < 3 {
        return None;
    }
    let mx = mean(x)?;
    let my = mean(y)?;
    let d: Vec<T> = x.iter().map(|&xi| xi - mx).collect();
    let sxx: T = d.iter().map(|&di| di * di).sum();
    if sxx <= T::zero() {
        return None;
    }
    let sxy: T = d.iter().zip(y).map(|(&di, &yi)| di * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let resid: Vec<T> = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| yi - intercept - slope * xi)
        .collect();

    let dof = T::of_usize(n - 2);
    let var = if lag == 0 {
        let s2 = resid.iter().map(|&r| r * r).sum::<T>() / dof;
        s2 / sxx
    } else {
        let score: Vec<T> = d.iter().zip(&resid).map(|(&di, &ri)| di * ri).collect();
        let mut s = score.iter().map(|&v| v * v).sum::<T>();
        for l in 1..=lag.min(n - 1) {
            let w = T::one() - T::of_usize(l) / T::of_usize(lag + 1);
            let cov: T = (l..n).map(|t| score[t] * score[t - l]).sum();
            s = s + (w + w) * cov;
        }
        let small_sample = T::of_usize(n) / dof;
        (s * small_sample / (sxx * sxx)).max(T::zero())
    };
    Some(LinearFit {
        slope,
        intercept,
        slope_std_error: var.sqrt(),
    })
}
