//! Exact reference implementations for validating the floating-point numerics
//! in `cpcover` at small trial counts.
//!
//! Everything here is carried in arbitrary-precision rationals. Tail sums are
//! exact; interval limits are bracketed by bisection over dyadic rationals
//! until the bracket is narrower than `2^-BISECTION_STEPS`, which is far below
//! 50 significant decimal digits for every limit reachable with `n <= 64`.
//! Nothing in this crate is meant for production use: it is slow on purpose.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use thiserror::Error;

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// Largest trial count the oracle accepts.
pub const MAX_ORACLE_TRIALS: u64 = 64;

/// Dyadic bisection depth for interval limits (bracket width `2^-200`).
pub const BISECTION_STEPS: u32 = 200;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("oracle guard: n = {0} exceeds {MAX_ORACLE_TRIALS}")]
    TooManyTrials(u64),
    #[error("n must be at least 1")]
    ZeroTrials,
    #[error("k = {k} exceeds n = {n}")]
    KExceedsN { n: u64, k: u64 },
    #[error("proportion outside [0, 1]")]
    Proportion,
    #[error("proportion must lie strictly inside (0, 1)")]
    OpenProportion,
    #[error("delta must lie strictly inside (0, 1)")]
    Delta,
    #[error("value is not finite")]
    NotFinite,
}

/// Which event counts as "covered".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `L <= p <= U`
    Closed,
    /// `L < p < U`
    Open,
}

/// Oracle limits, rounded to binary64 only at the very end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleInterval {
    pub lower: f64,
    pub upper: f64,
}

/// Exact rational value of a binary64 number.
pub fn rational_from_f64(x: f64) -> Result<ExactRational, OracleError> {
    BigRational::from_float(x).ok_or(OracleError::NotFinite)
}

/// Nearest binary64 to an exact rational.
pub fn to_f64(x: &ExactRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn guard(n: u64, k: u64) -> Result<(), OracleError> {
    if n == 0 {
        return Err(OracleError::ZeroTrials);
    }
    if n > MAX_ORACLE_TRIALS {
        return Err(OracleError::TooManyTrials(n));
    }
    if k > n {
        return Err(OracleError::KExceedsN { n, k });
    }
    Ok(())
}

fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for j in 1..=n {
        let next = &row[(j - 1) as usize] * BigUint::from(n - j + 1) / BigUint::from(j);
        row.push(next);
    }
    row
}

/// `sum_{j=0}^{k} C(n,j) a^j (b-a)^(n-j)` for `x = a/b`, i.e. the tail sum
/// scaled by `b^n`. Requires `0 <= a <= b`.
fn scaled_tail(row: &[BigUint], n: u64, k: u64, a: &BigUint, b: &BigUint) -> BigUint {
    let q = b - a;
    // q^(n-j) for j = 0..=k, built from the top down.
    let mut q_pows = Vec::with_capacity(n as usize + 1);
    let mut acc = BigUint::one();
    for _ in 0..=n {
        q_pows.push(acc.clone());
        acc *= &q;
    }
    let mut a_pow = BigUint::one();
    let mut sum = BigUint::zero();
    for j in 0..=k {
        sum += &row[j as usize] * &a_pow * &q_pows[(n - j) as usize];
        a_pow *= a;
    }
    sum
}

fn split_unit(x: &ExactRational) -> Result<(BigUint, BigUint), OracleError> {
    if x.is_negative() || *x > ExactRational::one() {
        return Err(OracleError::Proportion);
    }
    let a = x.numer().to_biguint().ok_or(OracleError::Proportion)?;
    let b = x.denom().to_biguint().ok_or(OracleError::Proportion)?;
    Ok((a, b))
}

/// Exact `S(n, k, x) = sum_{j=0}^{k} C(n,j) x^j (1-x)^(n-j)`.
pub fn oracle_tail(n: u64, k: u64, x: &ExactRational) -> Result<ExactRational, OracleError> {
    guard(n, k)?;
    let (a, b) = split_unit(x)?;
    let row = binomial_row(n);
    let num = scaled_tail(&row, n, k, &a, &b);
    let den = b.pow(n as u32);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Exact binomial probability `C(n,k) x^k (1-x)^(n-k)`.
pub fn oracle_pmf(n: u64, k: u64, x: &ExactRational) -> Result<ExactRational, OracleError> {
    guard(n, k)?;
    let (a, b) = split_unit(x)?;
    let row = binomial_row(n);
    let q = &b - &a;
    let num = &row[k as usize] * a.pow(k as u32) * q.pow((n - k) as u32);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(b.pow(n as u32))))
}

/// Compares `S(n, k, m / 2^e)` against `target` without forming a reduced
/// fraction.
fn cmp_tail_dyadic(
    row: &[BigUint],
    n: u64,
    k: u64,
    m: &BigUint,
    e: u32,
    target: &ExactRational,
) -> Ordering {
    let b = BigUint::one() << e;
    let lhs = scaled_tail(row, n, k, m, &b);
    // lhs / 2^(e n)  vs  t_num / t_den
    let t_num = target.numer().to_biguint().expect("target is nonnegative");
    let t_den = target.denom().to_biguint().expect("denominator is positive");
    (lhs * t_den).cmp(&((t_num) << (e as u64 * n)))
}

/// Root of the strictly decreasing map `x -> S(n, k, x)` at `target`, bracketed
/// to width `2^-BISECTION_STEPS` and returned as the bracket midpoint.
fn bisect_root(row: &[BigUint], n: u64, k: u64, target: &ExactRational) -> ExactRational {
    // Bracket [lo, hi] = [lo_m / 2^e, (lo_m + 1) / 2^e] after e halvings.
    let mut lo_m = BigUint::zero();
    for e in 1..=BISECTION_STEPS {
        let mid = (&lo_m << 1u32) + BigUint::one();
        // S decreasing: S(mid) > target means the root lies above mid.
        if cmp_tail_dyadic(row, n, k, &mid, e, target) == Ordering::Greater {
            lo_m = mid;
        } else {
            lo_m <<= 1u32;
        }
    }
    let num = (lo_m << 1u32) + BigUint::one();
    BigRational::new(
        BigInt::from(num),
        BigInt::from(BigUint::one() << (BISECTION_STEPS + 1)),
    )
}

fn check_delta(delta: &ExactRational) -> Result<(), OracleError> {
    if !delta.is_positive() || *delta >= ExactRational::one() {
        return Err(OracleError::Delta);
    }
    Ok(())
}

/// Clopper-Pearson limits computed by exact dyadic bisection on
/// [`oracle_tail`]; `delta` is taken at its exact binary64 value.
pub fn oracle_interval(n: u64, k: u64, delta: f64) -> Result<OracleInterval, OracleError> {
    guard(n, k)?;
    let delta = rational_from_f64(delta)?;
    check_delta(&delta)?;
    let half = &delta / BigInt::from(2);
    let row = binomial_row(n);

    let lower = if k == 0 {
        ExactRational::zero()
    } else {
        bisect_root(&row, n, k - 1, &(ExactRational::one() - &half))
    };
    let upper = if k == n {
        ExactRational::one()
    } else {
        bisect_root(&row, n, k, &half)
    };
    Ok(OracleInterval {
        lower: to_f64(&lower),
        upper: to_f64(&upper),
    })
}

/// Exact coverage probability of the Clopper-Pearson interval at true
/// proportion `p`.
///
/// Membership of `p` in the k-th interval is decided against the exact limits
/// through the defining tail equations: since `S(n, j, .)` is strictly
/// decreasing, `L_k <= p` iff `S(n, k-1, p) <= 1 - delta/2` and
/// `p <= U_k` iff `S(n, k, p) >= delta/2`. No limit is ever rounded.
pub fn oracle_coverage(
    n: u64,
    delta: f64,
    p: f64,
    boundary: Boundary,
) -> Result<ExactRational, OracleError> {
    guard(n, 0)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(OracleError::OpenProportion);
    }
    let delta = rational_from_f64(delta)?;
    check_delta(&delta)?;
    let p = rational_from_f64(p)?;
    let half = &delta / BigInt::from(2);
    let upper_target = ExactRational::one() - &half;

    // tails[j] = S(n, j, p)
    let tails: Vec<ExactRational> = (0..=n)
        .map(|j| oracle_tail(n, j, &p))
        .collect::<Result<_, _>>()?;

    let mut coverage = ExactRational::zero();
    for k in 0..=n {
        let lower_ok = if k == 0 {
            true
        } else {
            let s = &tails[(k - 1) as usize];
            match boundary {
                Boundary::Closed => *s <= upper_target,
                Boundary::Open => *s < upper_target,
            }
        };
        let upper_ok = if k == n {
            true
        } else {
            let s = &tails[k as usize];
            match boundary {
                Boundary::Closed => *s >= half,
                Boundary::Open => *s > half,
            }
        };
        if lower_ok && upper_ok {
            coverage += oracle_pmf(n, k, &p)?;
        }
    }
    Ok(coverage)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> ExactRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn tail_examples() {
        assert_eq!(oracle_tail(4, 2, &r(1, 2)).unwrap(), r(11, 16));
        assert_eq!(oracle_tail(3, 3, &r(2, 7)).unwrap(), r(1, 1));
        assert_eq!(oracle_tail(2, 0, &r(1, 3)).unwrap(), r(4, 9));
    }

    #[test]
    fn pmf_sums_to_one() {
        let x = r(3, 11);
        let total = (0..=9).fold(ExactRational::zero(), |acc, k| {
            acc + oracle_pmf(9, k, &x).unwrap()
        });
        assert_eq!(total, ExactRational::one());
    }

    #[test]
    fn guard_rejects_large_n() {
        assert_eq!(
            oracle_tail(65, 0, &r(1, 2)),
            Err(OracleError::TooManyTrials(65))
        );
        assert!(oracle_interval(100, 3, 0.05).is_err());
    }

    #[test]
    fn interval_examples() {
        let iv = oracle_interval(2, 1, 0.5).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert!((iv.lower - (1.0 - s)).abs() < 1e-15);
        assert!((iv.upper - s).abs() < 1e-15);

        let iv = oracle_interval(10, 0, 0.05).unwrap();
        assert_eq!(iv.lower, 0.0);
        assert!((iv.upper - (1.0 - 0.025f64.powf(0.1))).abs() < 1e-15);

        let iv = oracle_interval(1, 1, 0.5).unwrap();
        assert_eq!(iv.lower, 0.25);
        assert_eq!(iv.upper, 1.0);
    }

    #[test]
    fn coverage_examples() {
        assert_eq!(
            oracle_coverage(1, 0.5, 0.5, Boundary::Closed).unwrap(),
            ExactRational::one()
        );
        assert_eq!(
            oracle_coverage(5, 0.05, 0.5, Boundary::Closed).unwrap(),
            ExactRational::one()
        );
        // n = 2, delta = 0.5: intervals [0, 1/2], [1 - sqrt(3)/2, sqrt(3)/2],
        // [1/2, 1]. p = 0.9 (as binary64) lies only in the last one.
        let c = oracle_coverage(2, 0.5, 0.9, Boundary::Closed).unwrap();
        let p = rational_from_f64(0.9).unwrap();
        assert_eq!(c, &p * &p);
    }
}
