//! Exact coverage probability of the Clopper-Pearson interval and the
//! rare-event conservatism bound.
//!
//! The coverage at a true proportion `p` is `Pr{L <= p <= U}` where the
//! probability is over `K ~ Binomial(n, p)`. It is computed by enumerating all
//! `n + 1` intervals and summing the mass of every `k` whose interval
//! contains `p`.
//!
//! Writing `t = (delta/2)^(1/n)` and `b = 1 - t`:
//!
//! * `p >= t` exactly when every lower limit is at or below `p`, and
//!   `p <= b` exactly when every upper limit is at or above `p`;
//! * if either holds the coverage is at least `1 - delta/2`;
//! * if both hold the coverage is exactly one.
//!
//! At the thresholds themselves the non-strict form is used for both
//! statements; the classification never depends on a tie in practice.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::binomial::{check_open_proportion, check_trials, pmf_unchecked, NeumaierSum};
use crate::clopper_pearson::{interval_batch, ConfidenceInterval, ConfidenceParam};
use crate::error::{Error, Result};

/// Which event counts as "the interval covers `p`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryMode {
    /// `L <= p <= U`
    #[default]
    Closed,
    /// `L < p < U`
    Open,
}

impl BoundaryMode {
    pub fn contains(self, interval: &ConfidenceInterval, p: f64) -> bool {
        match self {
            BoundaryMode::Closed => interval.lower <= p && p <= interval.upper,
            BoundaryMode::Open => interval.lower < p && p < interval.upper,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::Closed => "closed",
            BoundaryMode::Open => "open",
        }
    }
}

/// Every interval for one `(n, delta)`, indexed by the success count.
#[derive(Debug, Clone)]
pub struct IntervalTable {
    n: u64,
    delta: ConfidenceParam,
    intervals: Vec<ConfidenceInterval>,
}

impl IntervalTable {
    pub fn new(n: u64, delta: f64) -> Result<Self> {
        let delta = ConfidenceParam::new(delta)?;
        let intervals = interval_batch(n, delta)?;
        Ok(IntervalTable {
            n,
            delta,
            intervals,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn delta(&self) -> ConfidenceParam {
        self.delta
    }

    pub fn intervals(&self) -> &[ConfidenceInterval] {
        &self.intervals
    }

    pub fn get(&self, k: u64) -> Option<&ConfidenceInterval> {
        self.intervals.get(k as usize)
    }

    /// Exact coverage probability at the true proportion `p`.
    pub fn coverage(&self, p: f64, mode: BoundaryMode) -> Result<f64> {
        check_open_proportion(p)?;
        let mut sum = NeumaierSum::default();
        for (k, iv) in self.intervals.iter().enumerate() {
            if mode.contains(iv, p) {
                sum.add(pmf_unchecked(self.n, k as u64, p));
            }
        }
        Ok(sum.value().min(1.0))
    }
}

/// Shared cache of interval tables keyed by `(n, delta)`.
///
/// Tables are built outside the lock and inserted once; concurrent readers
/// only ever clone an `Arc`.
#[derive(Debug, Default)]
pub struct IntervalCache {
    tables: RwLock<HashMap<(u64, u64), Arc<IntervalTable>>>,
}

impl IntervalCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: u64, delta: f64) -> Result<Arc<IntervalTable>> {
        let key = (n, delta.to_bits());
        if let Some(table) = self.tables.read().expect("cache lock poisoned").get(&key) {
            return Ok(Arc::clone(table));
        }
        let table = Arc::new(IntervalTable::new(n, delta)?);
        let mut tables = self.tables.write().expect("cache lock poisoned");
        Ok(Arc::clone(tables.entry(key).or_insert(table)))
    }

    pub fn len(&self) -> usize {
        self.tables.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveragePoint {
    pub p: f64,
    pub coverage: f64,
    pub mode: BoundaryMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageCurve {
    pub n: u64,
    pub delta: f64,
    pub mode: BoundaryMode,
    pub points: Vec<CoveragePoint>,
}

pub fn exact_coverage(n: u64, delta: f64, p: f64, mode: BoundaryMode) -> Result<CoveragePoint> {
    check_open_proportion(p)?;
    let table = IntervalTable::new(n, delta)?;
    Ok(CoveragePoint {
        p,
        coverage: table.coverage(p, mode)?,
        mode,
    })
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::Grid);
    }
    grid.iter().try_for_each(|&p| check_open_proportion(p))
}

/// Coverage over a strictly increasing grid of proportions, sharing one table.
pub fn coverage_curve_with(
    table: &IntervalTable,
    grid: &[f64],
    mode: BoundaryMode,
) -> Result<CoverageCurve> {
    check_grid(grid)?;
    let points = grid
        .par_iter()
        .map(|&p| {
            Ok(CoveragePoint {
                p,
                coverage: table.coverage(p, mode)?,
                mode,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverageCurve {
        n: table.n(),
        delta: table.delta().value(),
        mode,
        points,
    })
}

pub fn coverage_curve(n: u64, delta: f64, grid: &[f64], mode: BoundaryMode) -> Result<CoverageCurve> {
    check_grid(grid)?;
    let table = IntervalTable::new(n, delta)?;
    coverage_curve_with(&table, grid, mode)
}

/// `i / (m + 1)` for `i = 1..=m`.
pub fn uniform_p_grid(m: usize) -> Vec<f64> {
    let denom = (m + 1) as f64;
    (1..=m).map(|i| i as f64 / denom).collect()
}

/// The 999-point grid `i / 1000`.
pub fn default_p_grid() -> Vec<f64> {
    uniform_p_grid(999)
}

fn validated_log_half_delta(n: u64, delta: f64) -> Result<f64> {
    check_trials(n)?;
    let delta = ConfidenceParam::new(delta)?;
    Ok(delta.half().ln() / n as f64)
}

/// `1 - (delta/2)^(1/n)`: proportions below this keep the coverage at or
/// above `1 - delta/2`.
pub fn rare_event_bound(n: u64, delta: f64) -> Result<f64> {
    Ok(-validated_log_half_delta(n, delta)?.exp_m1())
}

/// `(delta/2)^(1/n)`, the largest lower limit `L_n`.
pub fn certainty_threshold(n: u64, delta: f64) -> Result<f64> {
    Ok(validated_log_half_delta(n, delta)?.exp())
}

/// Whether `L <= p` and `p <= U` hold for every possible outcome `k`.
pub fn one_sided_certainty(n: u64, delta: f64, p: f64) -> Result<(bool, bool)> {
    check_open_proportion(p)?;
    let threshold = certainty_threshold(n, delta)?;
    let bound = rare_event_bound(n, delta)?;
    Ok((p >= threshold, p <= bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Every interval contains `p`; coverage is one.
    CoverageOne,
    /// One side can never miss; coverage is at least `1 - delta/2`.
    AtLeastOneMinusHalfDelta,
    /// Only the general guarantee `coverage > 1 - delta` applies.
    CluniesRossOnly,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::CoverageOne => "coverage_one",
            Regime::AtLeastOneMinusHalfDelta => "at_least_one_minus_half_delta",
            Regime::CluniesRossOnly => "clunies_ross_only",
        }
    }

    /// Guaranteed lower bound on the closed-interval coverage.
    pub fn guaranteed_coverage(self, delta: f64) -> f64 {
        match self {
            Regime::CoverageOne => 1.0,
            Regime::AtLeastOneMinusHalfDelta => 1.0 - delta / 2.0,
            Regime::CluniesRossOnly => 1.0 - delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservatismReport {
    pub n: u64,
    pub delta: f64,
    pub p: f64,
    pub bound: f64,
    pub regime: Regime,
}

pub fn classify_regime(n: u64, delta: f64, p: f64) -> Result<ConservatismReport> {
    let (lower_certain, upper_certain) = one_sided_certainty(n, delta, p)?;
    let regime = match (lower_certain, upper_certain) {
        (true, true) => Regime::CoverageOne,
        (true, false) | (false, true) => Regime::AtLeastOneMinusHalfDelta,
        (false, false) => Regime::CluniesRossOnly,
    };
    Ok(ConservatismReport {
        n,
        delta,
        p,
        bound: rare_event_bound(n, delta)?,
        regime,
    })
}

/// `rare_event_bound` over a strictly increasing grid of trial counts.
pub fn bound_curve(delta: f64, n_grid: &[u64]) -> Result<Vec<(u64, f64)>> {
    ConfidenceParam::new(delta)?;
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Grid);
    }
    n_grid
        .iter()
        .map(|&n| Ok((n, rare_event_bound(n, delta)?)))
        .collect()
}

/// Up to `points` integers spaced evenly in `log n` over `[n_min, n_max]`,
/// rounded and deduplicated, so the result is strictly increasing and may be
/// shorter than requested when the range is narrow.
pub fn log_spaced_n_grid(n_min: u64, n_max: u64, points: usize) -> Result<Vec<u64>> {
    check_trials(n_min)?;
    check_trials(n_max)?;
    if points == 0 || n_min > n_max {
        return Err(Error::Grid);
    }
    if points == 1 || n_min == n_max {
        return Ok(vec![n_min]);
    }
    let (lo, hi) = ((n_min as f64).ln(), (n_max as f64).ln());
    let step = (hi - lo) / (points - 1) as f64;
    let mut grid: Vec<u64> = (0..points)
        .map(|i| {
            if i == points - 1 {
                n_max
            } else {
                ((lo + step * i as f64).exp().round() as u64).clamp(n_min, n_max)
            }
        })
        .collect();
    grid.dedup();
    Ok(grid)
}
