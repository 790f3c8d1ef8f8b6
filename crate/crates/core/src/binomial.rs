//! Binomial probability mass and lower tail sums.
//!
//! `binomial_tail(n, k, x)` is `S(n, k, x) = sum_{j=0}^{k} C(n,j) x^j (1-x)^(n-j)`,
//! the probability of at most `k` successes in `n` trials. For `n <= 64` it is
//! a compensated direct sum of log-space terms; above that it goes through the
//! identity `S(n, k, x) = I_{1-x}(n-k, k+1)`.

use crate::error::{Error, Result};
use crate::special::{beta_reg_xy, ln_beta_kernel};

/// Upper limit on the number of trials accepted anywhere in the crate.
pub const MAX_TRIALS: u64 = 10_000_000;

/// Largest `n` evaluated by direct summation.
pub const DIRECT_SUM_MAX_N: u64 = 64;

pub(crate) fn check_trials(n: u64) -> Result<()> {
    if n == 0 || n > MAX_TRIALS {
        return Err(Error::TrialCount { n, max: MAX_TRIALS });
    }
    Ok(())
}

pub(crate) fn check_successes(n: u64, k: u64) -> Result<()> {
    check_trials(n)?;
    if k > n {
        return Err(Error::KExceedsN { n, k });
    }
    Ok(())
}

pub(crate) fn check_proportion(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Proportion(x));
    }
    Ok(())
}

pub(crate) fn check_open_proportion(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OpenProportion(p));
    }
    Ok(())
}

/// `C(n,k) x^k (1-x)^(n-k)`.
pub fn binomial_pmf(n: u64, k: u64, x: f64) -> Result<f64> {
    check_successes(n, k)?;
    check_proportion(x)?;
    Ok(pmf_unchecked(n, k, x))
}

pub(crate) fn pmf_unchecked(n: u64, k: u64, x: f64) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if x == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    ln_pmf(n, k, x).exp()
}

fn ln_pmf(n: u64, k: u64, x: f64) -> f64 {
    let nf = n as f64;
    if k == 0 {
        return nf * (-x).ln_1p();
    }
    if k == n {
        return nf * x.ln();
    }
    let kf = k as f64;
    let rest = nf - kf;
    // C(n,k) = n / (k (n-k)) / B(k, n-k)
    ln_beta_kernel(kf, rest, x, 1.0 - x) + (nf / (kf * rest)).ln()
}

/// `S(n, k, x)`: probability of at most `k` successes.
pub fn binomial_tail(n: u64, k: u64, x: f64) -> Result<f64> {
    check_successes(n, k)?;
    check_proportion(x)?;
    if k == n || x == 0.0 {
        return Ok(1.0);
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    if n <= DIRECT_SUM_MAX_N {
        Ok(tail_direct_unchecked(n, k, x))
    } else {
        tail_beta_unchecked(n, k, x)
    }
}

/// Direct compensated summation route for `S(n, k, x)`, any `n`.
pub fn tail_direct(n: u64, k: u64, x: f64) -> Result<f64> {
    check_successes(n, k)?;
    check_proportion(x)?;
    Ok(tail_direct_unchecked(n, k, x))
}

/// Incomplete-beta route for `S(n, k, x)`, any `n`.
pub fn tail_incomplete_beta(n: u64, k: u64, x: f64) -> Result<f64> {
    check_successes(n, k)?;
    check_proportion(x)?;
    if k == n {
        return Ok(1.0);
    }
    tail_beta_unchecked(n, k, x)
}

fn tail_direct_unchecked(n: u64, k: u64, x: f64) -> f64 {
    if k == n {
        return 1.0;
    }
    let mut sum = NeumaierSum::default();
    for j in 0..=k {
        sum.add(pmf_unchecked(n, j, x));
    }
    sum.value().min(1.0)
}

fn tail_beta_unchecked(n: u64, k: u64, x: f64) -> Result<f64> {
    // S(n, k, x) = I_{1-x}(n-k, k+1); hand x over as the exact complement.
    beta_reg_xy((n - k) as f64, (k + 1) as f64, 1.0 - x, x)
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
