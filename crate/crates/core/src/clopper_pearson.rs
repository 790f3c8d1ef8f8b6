//! Clopper-Pearson confidence limits.
//!
//! For `k` successes in `n` trials and confidence parameter `delta`, the lower
//! limit solves `S(n, k-1, p) = 1 - delta/2` (zero when `k = 0`) and the upper
//! limit solves `S(n, k, p) = delta/2` (one when `k = n`). Both roots are found
//! by bisection on `[0, 1]`; `S(n, j, .)` is strictly decreasing, so the root
//! is always bracketed and unique.

use rayon::prelude::*;

use crate::binomial::{binomial_tail, check_successes, check_trials};
use crate::error::{Error, Result};

/// Guaranteed absolute accuracy of the limits, in the proportion variable.
/// Bisection actually runs until the bracket is two adjacent doubles, which
/// also keeps the defining-equation residual small where the tail is steep.
pub const LIMIT_TOLERANCE: f64 = 1e-12;

/// Hard cap on bisection steps.
pub const MAX_BISECTION_STEPS: u32 = 200;

/// Confidence parameter `delta`; the nominal confidence level is `1 - delta`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ConfidenceParam(f64);

impl ConfidenceParam {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Delta(delta));
        }
        Ok(ConfidenceParam(delta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Probability allotted to each side.
    pub fn half(self) -> f64 {
        0.5 * self.0
    }
}

/// One interval-construction problem `(n, k, delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceSpec {
    n: u64,
    k: u64,
    delta: ConfidenceParam,
}

impl ConfidenceSpec {
    pub fn new(n: u64, k: u64, delta: f64) -> Result<Self> {
        check_successes(n, k)?;
        Ok(ConfidenceSpec {
            n,
            k,
            delta: ConfidenceParam::new(delta)?,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn delta(&self) -> ConfidenceParam {
        self.delta
    }
}

/// Closed interval `[lower, upper]` with `0 <= lower < upper <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ConfidenceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Root of the strictly decreasing `p -> S(n, j, p)` at `target`.
fn solve_tail(n: u64, j: u64, target: f64) -> Result<f64> {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binomial_tail(n, j, mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn lower_limit(spec: &ConfidenceSpec) -> Result<f64> {
    if spec.k == 0 {
        return Ok(0.0);
    }
    solve_tail(spec.n, spec.k - 1, 1.0 - spec.delta.half())
}

pub fn upper_limit(spec: &ConfidenceSpec) -> Result<f64> {
    if spec.k == spec.n {
        return Ok(1.0);
    }
    solve_tail(spec.n, spec.k, spec.delta.half())
}

/// The two-sided Clopper-Pearson interval for `spec`.
pub fn interval(spec: &ConfidenceSpec) -> Result<ConfidenceInterval> {
    Ok(ConfidenceInterval {
        lower: lower_limit(spec)?,
        upper: upper_limit(spec)?,
    })
}

/// All `n + 1` intervals for fixed `(n, delta)`, indexed by `k`.
pub fn interval_batch(n: u64, delta: ConfidenceParam) -> Result<Vec<ConfidenceInterval>> {
    check_trials(n)?;
    (0..=n)
        .into_par_iter()
        .map(|k| {
            interval(&ConfidenceSpec {
                n,
                k,
                delta,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u64, k: u64, delta: f64) -> ConfidenceSpec {
        ConfidenceSpec::new(n, k, delta).unwrap()
    }

    #[test]
    fn lower_limit_examples() {
        assert_eq!(lower_limit(&spec(10, 0, 0.05)).unwrap(), 0.0);
        // (1-p)^2 = 3/4
        let closed = 1.0 - 0.75f64.sqrt();
        assert!((lower_limit(&spec(2, 1, 0.5)).unwrap() - closed).abs() < 1e-12);
        assert!((closed - 0.1339746).abs() < 1e-7);
        let l = lower_limit(&spec(7, 7, 0.05)).unwrap();
        assert!((l - 0.025f64.powf(1.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn upper_limit_examples() {
        assert_eq!(upper_limit(&spec(7, 7, 0.05)).unwrap(), 1.0);
        assert!((upper_limit(&spec(2, 1, 0.5)).unwrap() - 0.75f64.sqrt()).abs() < 1e-12);
        let u = upper_limit(&spec(10, 0, 0.05)).unwrap();
        assert!((u - (1.0 - 0.025f64.powf(0.1))).abs() < 1e-12);
        assert!((u - 0.308_497_1).abs() < 1e-7);
    }

    #[test]
    fn interval_examples() {
        let iv = interval(&spec(1, 0, 0.5)).unwrap();
        assert_eq!(iv.lower, 0.0);
        assert!((iv.upper - 0.75).abs() < 1e-12);
        let iv = interval(&spec(10, 0, 0.05)).unwrap();
        assert_eq!(iv.lower, 0.0);
        assert!((iv.upper - 0.308_497_1).abs() < 1e-7);
    }

    #[test]
    fn spec_validation() {
        assert_eq!(
            ConfidenceSpec::new(10, 11, 0.05),
            Err(Error::KExceedsN { n: 10, k: 11 })
        );
        assert_eq!(ConfidenceSpec::new(10, 1, 0.0), Err(Error::Delta(0.0)));
        assert_eq!(ConfidenceSpec::new(10, 1, 1.0), Err(Error::Delta(1.0)));
        assert!(ConfidenceSpec::new(10, 1, f64::NAN).is_err());
        assert!(ConfidenceSpec::new(0, 0, 0.5).is_err());
    }

    #[test]
    fn symmetry_and_ordering_small_n() {
        for n in 1..=100u64 {
            for &d in &[0.01, 0.05, 0.5] {
                let batch = interval_batch(n, ConfidenceParam::new(d).unwrap()).unwrap();
                for k in 0..=n {
                    let iv = batch[k as usize];
                    let mirror = batch[(n - k) as usize];
                    assert!((iv.lower - (1.0 - mirror.upper)).abs() <= 1e-12);
                    assert!(iv.lower < iv.upper, "n={n} k={k} d={d}");
                    if k > 0 {
                        let prev = batch[(k - 1) as usize];
                        assert!(iv.lower > prev.lower && iv.upper > prev.upper);
                    }
                    if d <= 0.5 {
                        let p_hat = k as f64 / n as f64;
                        assert!(iv.lower <= p_hat && p_hat <= iv.upper);
                    }
                }
            }
        }
    }

    #[test]
    fn defining_equation_residuals() {
        for &n in &[1u64, 5, 20, 64, 65, 300, 2000] {
            for &d in &[0.01, 0.05, 0.5] {
                let half = d / 2.0;
                for k in (0..=n).step_by((n as usize / 25).max(1)) {
                    let iv = interval(&spec(n, k, d)).unwrap();
                    if k > 0 {
                        let r = binomial_tail(n, k - 1, iv.lower).unwrap() - (1.0 - half);
                        assert!(r.abs() <= 1e-10, "n={n} k={k} d={d} lower residual {r}");
                    }
                    if k < n {
                        let r = binomial_tail(n, k, iv.upper).unwrap() - half;
                        assert!(r.abs() <= 1e-10, "n={n} k={k} d={d} upper residual {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_edges() {
        for &n in &[1u64, 2, 10, 100, 10_000, 1_000_000] {
            for &d in &[0.001, 0.01, 0.05, 0.5] {
                let t = (d / 2.0f64).powf(1.0 / n as f64);
                let u = upper_limit(&spec(n, 0, d)).unwrap();
                let l = lower_limit(&spec(n, n, d)).unwrap();
                assert!((u - (1.0 - t)).abs() <= 1e-12, "n={n} d={d}");
                assert!((l - t).abs() <= 1e-12, "n={n} d={d}");
            }
        }
    }
}
