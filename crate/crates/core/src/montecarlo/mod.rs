//! Seeded Monte Carlo estimation of a probability with a Clopper-Pearson
//! error bar, plus replication experiments that check the empirical coverage
//! against the exact enumerated value.
//!
//! The robustness demo estimates the probability that a polynomial with
//! uniformly distributed uncertain coefficients is not Hurwitz stable.

mod routh;
mod stream;

use std::fmt::Display;

use rayon::prelude::*;

pub use routh::is_hurwitz_stable;
pub use stream::{SeededStream, StreamRng};

use crate::binomial::{check_open_proportion, check_proportion, check_trials};
use crate::clopper_pearson::{interval, ConfidenceInterval, ConfidenceSpec};
use crate::coverage::{BoundaryMode, IntervalTable};
use crate::error::{Error, Result};

/// Outcome of `n` sampled trials with its confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationResult {
    pub n: u64,
    pub k: u64,
    pub p_hat: f64,
    pub interval: ConfidenceInterval,
    pub delta: f64,
    pub stream: SeededStream,
}

impl EstimationResult {
    fn new(stream: SeededStream, n: u64, k: u64, delta: f64) -> Result<Self> {
        let spec = ConfidenceSpec::new(n, k, delta)?;
        Ok(EstimationResult {
            n,
            k,
            p_hat: k as f64 / n as f64,
            interval: interval(&spec)?,
            delta,
            stream,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationReport {
    pub p: f64,
    pub n: u64,
    pub delta: f64,
    pub seed: u64,
    pub replications: u64,
    pub hits: u64,
    pub empirical_coverage: f64,
    pub exact_coverage_reference: f64,
}

impl ReplicationReport {
    /// Binomial standard error of the hit fraction around the exact value.
    pub fn standard_error(&self) -> f64 {
        let c = self.exact_coverage_reference;
        (c * (1.0 - c) / self.replications as f64).sqrt()
    }
}

/// Number of successes among `n` Bernoulli(`p`) draws from `stream`.
pub fn bernoulli_sample(stream: SeededStream, p: f64, n: u64) -> Result<u64> {
    check_proportion(p)?;
    check_trials(n)?;
    let mut rng = stream.rng();
    Ok(count_successes(&mut rng, p, n))
}

fn count_successes(rng: &mut StreamRng, p: f64, n: u64) -> u64 {
    (0..n).filter(|_| rng.uniform() < p).count() as u64
}

/// Samples `n` Bernoulli(`p`) trials and attaches the interval.
pub fn estimate_with_interval(
    stream: SeededStream,
    p: f64,
    n: u64,
    delta: f64,
) -> Result<EstimationResult> {
    let k = bernoulli_sample(stream, p, n)?;
    EstimationResult::new(stream, n, k, delta)
}

/// Runs `predicate` once per trial; a trial is a success when it returns
/// `true`. A failing trial aborts the run and reports its zero-based index.
pub fn estimate_with_predicate<F, E>(
    stream: SeededStream,
    n: u64,
    delta: f64,
    mut predicate: F,
) -> Result<EstimationResult>
where
    F: FnMut(&mut StreamRng) -> std::result::Result<bool, E>,
    E: Display,
{
    // Fail fast on bad parameters before spending any samples.
    ConfidenceSpec::new(n, 0, delta)?;
    let mut rng = stream.rng();
    let mut k = 0;
    for trial in 0..n {
        match predicate(&mut rng) {
            Ok(true) => k += 1,
            Ok(false) => {}
            Err(e) => {
                return Err(Error::Predicate {
                    trial,
                    message: e.to_string(),
                })
            }
        }
    }
    EstimationResult::new(stream, n, k, delta)
}

/// Repeats the estimate on streams `(seed, 0)`, `(seed, 1)`, ... and counts
/// how often the closed interval contains the true `p`.
pub fn empirical_coverage(
    p: f64,
    n: u64,
    delta: f64,
    replications: u64,
    seed: u64,
) -> Result<ReplicationReport> {
    check_open_proportion(p)?;
    if replications == 0 {
        return Err(Error::Replications);
    }
    let table = IntervalTable::new(n, delta)?;
    let base = SeededStream::new(seed, 0);
    let hits: u64 = (0..replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = base.derive(r).rng();
            let k = count_successes(&mut rng, p, n);
            let iv = table.get(k).expect("k <= n");
            u64::from(BoundaryMode::Closed.contains(iv, p))
        })
        .sum();
    Ok(ReplicationReport {
        p,
        n,
        delta,
        seed,
        replications,
        hits,
        empirical_coverage: hits as f64 / replications as f64,
        exact_coverage_reference: table.coverage(p, BoundaryMode::Closed)?,
    })
}

/// Polynomial whose coefficient of `s^i` is uniform on
/// `coefficient_intervals[i]`, sampled independently.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertainPolynomial {
    coefficient_intervals: Vec<(f64, f64)>,
}

impl UncertainPolynomial {
    /// `coefficient_intervals[i]` bounds the coefficient of `s^i`; the last
    /// entry is the leading coefficient and must be strictly positive.
    pub fn new(coefficient_intervals: Vec<(f64, f64)>) -> Result<Self> {
        if coefficient_intervals.len() < 2 {
            return Err(Error::Polynomial("degree must be at least 1".into()));
        }
        for (i, &(low, high)) in coefficient_intervals.iter().enumerate() {
            if !low.is_finite() || !high.is_finite() || !(high - low).is_finite() {
                return Err(Error::Polynomial(format!(
                    "coefficient {i}: bounds must be finite"
                )));
            }
            if low > high {
                return Err(Error::Polynomial(format!(
                    "coefficient {i}: low {low} exceeds high {high}"
                )));
            }
        }
        let (lead_low, _) = coefficient_intervals[coefficient_intervals.len() - 1];
        if lead_low <= 0.0 {
            return Err(Error::Polynomial(
                "leading coefficient must be strictly positive".into(),
            ));
        }
        Ok(UncertainPolynomial {
            coefficient_intervals,
        })
    }

    pub fn degree(&self) -> usize {
        self.coefficient_intervals.len() - 1
    }

    pub fn coefficient_intervals(&self) -> &[(f64, f64)] {
        &self.coefficient_intervals
    }

    /// One draw, returned in descending powers. Coefficients are drawn in
    /// ascending power order.
    pub fn sample(&self, rng: &mut StreamRng) -> Vec<f64> {
        let mut coeffs: Vec<f64> = self
            .coefficient_intervals
            .iter()
            .map(|&(low, high)| rng.uniform_in(low, high))
            .collect();
        coeffs.reverse();
        coeffs
    }
}

/// Estimates `Pr{sampled polynomial is not Hurwitz stable}`.
pub fn estimate_instability_probability(
    poly: &UncertainPolynomial,
    n: u64,
    delta: f64,
    stream: SeededStream,
) -> Result<EstimationResult> {
    estimate_with_predicate(stream, n, delta, |rng| {
        is_hurwitz_stable(&poly.sample(rng)).map(|stable| !stable)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_extremes() {
        let s = SeededStream::new(9, 4);
        assert_eq!(bernoulli_sample(s, 0.0, 100).unwrap(), 0);
        assert_eq!(bernoulli_sample(s, 1.0, 100).unwrap(), 100);
        assert!(bernoulli_sample(s, 1.1, 100).is_err());
        assert!(bernoulli_sample(s, 0.5, 0).is_err());
    }

    #[test]
    fn bernoulli_seed_pinned() {
        let k = bernoulli_sample(SeededStream::new(42, 0), 0.3, 10_000).unwrap();
        assert!((k as f64 / 10_000.0 - 0.3).abs() < 0.02);
        assert_eq!(k, 3051);
    }

    #[test]
    fn trivial_estimates() {
        let s = SeededStream::new(1, 0);
        let r = estimate_with_interval(s, 0.0, 50, 0.05).unwrap();
        assert_eq!((r.k, r.p_hat, r.interval.lower), (0, 0.0, 0.0));
        assert!((r.interval.upper - (1.0 - 0.025f64.powf(1.0 / 50.0))).abs() < 1e-12);

        let r = estimate_with_interval(s, 1.0, 50, 0.05).unwrap();
        assert_eq!((r.k, r.p_hat, r.interval.upper), (50, 1.0, 1.0));
        assert!((r.interval.lower - 0.025f64.powf(1.0 / 50.0)).abs() < 1e-12);
    }

    #[test]
    fn estimates_are_reproducible() {
        let s = SeededStream::new(123, 5);
        let a = estimate_with_interval(s, 0.37, 500, 0.05).unwrap();
        let b = estimate_with_interval(s, 0.37, 500, 0.05).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.interval.lower.to_bits(), b.interval.lower.to_bits());
    }

    #[test]
    fn replication_matches_single_estimates() {
        let (p, n, delta, seed) = (0.3, 100, 0.05, 11);
        let report = empirical_coverage(p, n, delta, 40, seed).unwrap();
        let hits = (0..40)
            .filter(|&r| {
                let est = estimate_with_interval(SeededStream::new(seed, r), p, n, delta).unwrap();
                est.interval.lower <= p && p <= est.interval.upper
            })
            .count() as u64;
        assert_eq!(report.hits, hits);
    }

    #[test]
    fn empirical_coverage_examples() {
        let r = empirical_coverage(0.5, 5, 0.05, 1000, 0).unwrap();
        assert_eq!(r.empirical_coverage, 1.0);
        let r = empirical_coverage(0.5, 1, 0.5, 100, 0).unwrap();
        assert_eq!(r.empirical_coverage, 1.0);
        assert!(empirical_coverage(0.5, 5, 0.05, 0, 0).is_err());
        assert!(empirical_coverage(0.0, 5, 0.05, 10, 0).is_err());
    }

    #[test]
    fn empirical_within_band_of_exact() {
        for &(p, n, delta) in &[(0.3, 100, 0.05), (0.02, 60, 0.01), (0.7, 33, 0.1)] {
            let r = empirical_coverage(p, n, delta, 4000, 99).unwrap();
            let band = 4.0 * r.standard_error();
            assert!(
                (r.empirical_coverage - r.exact_coverage_reference).abs() <= band.max(1e-12),
                "{p} {n} {delta}: {r:?}"
            );
        }
    }

    #[test]
    fn predicate_errors_carry_trial_index() {
        let err = estimate_with_predicate(SeededStream::new(0, 0), 10, 0.05, |rng| {
            if rng.uniform() > 2.0 {
                Ok(true)
            } else {
                Err("boom")
            }
        })
        .unwrap_err();
        assert_eq!(
            err,
            Error::Predicate {
                trial: 0,
                message: "boom".into()
            }
        );
        let mut calls = 0;
        let err = estimate_with_predicate(SeededStream::new(0, 0), 10, 0.05, |_| {
            calls += 1;
            if calls == 4 {
                Err("late")
            } else {
                Ok(false)
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::Predicate { trial: 3, .. }));
    }

    #[test]
    fn uncertain_polynomial_validation() {
        assert!(UncertainPolynomial::new(vec![(1.0, 1.0)]).is_err());
        assert!(UncertainPolynomial::new(vec![(2.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(UncertainPolynomial::new(vec![(1.0, 2.0), (0.0, 1.0)]).is_err());
        assert!(UncertainPolynomial::new(vec![(f64::MIN, f64::MAX), (1.0, 1.0)]).is_err());
        let p = UncertainPolynomial::new(vec![(0.5, 1.5), (1.0, 1.0)]).unwrap();
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn degenerate_polynomials() {
        let stable = UncertainPolynomial::new(vec![(1.0, 1.0), (2.0, 2.0), (1.0, 1.0)]).unwrap();
        let r = estimate_instability_probability(&stable, 1000, 0.01, SeededStream::new(3, 0))
            .unwrap();
        assert_eq!(r.k, 0);
        assert!((r.interval.upper - (1.0 - 0.005f64.powf(1.0 / 1000.0))).abs() < 1e-12);

        // s^3 + s^2 + s + 2
        let unstable = UncertainPolynomial::new(vec![(2.0, 2.0), (1.0, 1.0), (1.0, 1.0), (1.0, 1.0)])
            .unwrap();
        let r = estimate_instability_probability(&unstable, 1000, 0.01, SeededStream::new(3, 0))
            .unwrap();
        assert_eq!(r.k, 1000);
    }

    #[test]
    fn cubic_demo_recovers_one_half() {
        let cubic = UncertainPolynomial::new(vec![(0.5, 1.5), (1.0, 1.0), (1.0, 1.0), (1.0, 1.0)])
            .unwrap();
        let r = estimate_instability_probability(&cubic, 10_000, 0.01, SeededStream::new(2024, 0))
            .unwrap();
        assert!((r.p_hat - 0.5).abs() < 0.03);
        assert!(r.interval.lower <= 0.5 && 0.5 <= r.interval.upper);
    }
}
