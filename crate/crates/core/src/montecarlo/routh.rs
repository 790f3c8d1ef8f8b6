//! Hurwitz stability of real polynomials via the Routh table.

use crate::error::{Error, Result};

/// Whether every root of the polynomial lies strictly in the open left half
/// plane.
///
/// `coefficients` are in descending powers: `[1, 2, 1]` is `s^2 + 2s + 1`.
/// A zero anywhere in the first column of the Routh table is reported as not
/// stable; no epsilon substitution is attempted, so marginal cases count as
/// unstable. A table entry that overflows to a non-finite value is a
/// numerical error.
pub fn is_hurwitz_stable(coefficients: &[f64]) -> Result<bool> {
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::Polynomial("coefficients must be finite".into()));
    }
    if coefficients.is_empty() {
        return Err(Error::Polynomial("no coefficients".into()));
    }
    if coefficients[0] == 0.0 {
        let msg = if coefficients.iter().all(|&c| c == 0.0) {
            "polynomial is identically zero"
        } else {
            "leading coefficient is zero"
        };
        return Err(Error::Polynomial(msg.into()));
    }
    let sign = coefficients[0].signum();
    let a: Vec<f64> = coefficients.iter().map(|&c| c * sign).collect();
    let degree = a.len() - 1;
    if degree == 0 {
        return Ok(true);
    }
    // Necessary condition: all coefficients strictly positive.
    if a.iter().any(|&c| c <= 0.0) {
        return Ok(false);
    }

    let mut prev: Vec<f64> = a.iter().step_by(2).copied().collect();
    let mut curr: Vec<f64> = a.iter().skip(1).step_by(2).copied().collect();
    // degree + 1 rows in total; the first two are the coefficients.
    for _ in 1..degree {
        let pivot = curr[0];
        if pivot <= 0.0 {
            return Ok(false);
        }
        let width = prev.len() - 1;
        let next: Vec<f64> = (0..width)
            .map(|j| {
                let right = curr.get(j + 1).copied().unwrap_or(0.0);
                (pivot * prev[j + 1] - prev[0] * right) / pivot
            })
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("Routh table overflowed".into()));
        }
        prev = curr;
        curr = next;
    }
    Ok(curr[0] > 0.0)
}
