//! Coefficient bounds for the robustness demo.
//!
//! ```text
//! # s^3 + s^2 + s + a0 with a0 uniform on [0.5, 1.5]
//! degree = 3
//! coeff_0_low = 0.5
//! coeff_0_high = 1.5
//! coeff_1_low = 1
//! coeff_1_high = 1
//! ...
//! ```
//!
//! `coeff_i` is the coefficient of `s^i`; every index from 0 to `degree`
//! needs both bounds.

use std::collections::HashMap;

use cpcover::montecarlo::UncertainPolynomial;

use crate::CliError;

fn err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("config line {line}: {msg}"))
}

pub fn parse_config(text: &str) -> Result<UncertainPolynomial, CliError> {
    let mut degree: Option<usize> = None;
    let mut bounds: HashMap<(usize, bool), f64> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());

        if key == "degree" {
            if degree.is_some() {
                return Err(err(line_no, "duplicate key `degree`"));
            }
            let d: usize = value
                .parse()
                .map_err(|_| err(line_no, format!("degree must be a positive integer, got `{value}`")))?;
            if d == 0 {
                return Err(err(line_no, "degree must be at least 1"));
            }
            degree = Some(d);
            continue;
        }

        let (index, is_high) = parse_coeff_key(key).ok_or_else(|| err(line_no, format!("unknown key `{key}`")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| err(line_no, format!("`{key}` is not a number: `{value}`")))?;
        if !v.is_finite() {
            return Err(err(line_no, format!("`{key}` must be finite")));
        }
        if bounds.insert((index, is_high), v).is_some() {
            return Err(err(line_no, format!("duplicate key `{key}`")));
        }
    }

    let degree = degree.ok_or_else(|| CliError::Config("config: missing `degree`".into()))?;
    if let Some(&(i, _)) = bounds.keys().find(|(i, _)| *i > degree) {
        return Err(CliError::Config(format!(
            "config: coeff_{i} is beyond degree {degree}"
        )));
    }
    let mut intervals = Vec::with_capacity(degree + 1);
    for i in 0..=degree {
        let get = |high: bool| {
            let name = if high { "high" } else { "low" };
            bounds
                .get(&(i, high))
                .copied()
                .ok_or_else(|| CliError::Config(format!("config: missing `coeff_{i}_{name}`")))
        };
        intervals.push((get(false)?, get(true)?));
    }
    Ok(UncertainPolynomial::new(intervals)?)
}

fn parse_coeff_key(key: &str) -> Option<(usize, bool)> {
    let rest = key.strip_prefix("coeff_")?;
    let (index, side) = rest.split_once('_')?;
    let is_high = match side {
        "low" => false,
        "high" => true,
        _ => return None,
    };
    Some((index.parse().ok()?, is_high))
}
