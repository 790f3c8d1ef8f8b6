//! Tabular output as JSON or CSV.
//!
//! Reals carry 15 significant digits in both formats, so parsing either
//! rendering of the same table yields identical values. Formatting never
//! consults the locale.

use serde_json::{Map, Number, Value};

pub const SIG_DIGITS: usize = 15;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Rows with named columns. A `record` renders as one JSON object instead of
/// an array.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub record: bool,
}

impl Table {
    pub fn record(columns: Vec<&'static str>, row: Vec<Cell>) -> Self {
        Table {
            columns,
            rows: vec![row],
            record: true,
        }
    }

    pub fn rows(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Self {
        Table {
            columns,
            rows,
            record: false,
        }
    }
}

/// `x` with [`SIG_DIGITS`] significant digits, trailing zeros dropped.
/// Plain decimal notation for exponents -5..15, scientific otherwise.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if x < 0.0 { "-" } else { "" };

    if !(-5..15).contains(&exp) {
        let m = trim_fraction(mantissa);
        return format!("{sign}{m}e{exp}");
    }
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Value of `x` after rounding to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    format_real(x).parse().unwrap_or(x)
}

fn json_cell(cell: &Cell) -> Value {
    match cell {
        Cell::Int(v) => Value::from(*v),
        Cell::Real(v) => Number::from_f64(round_sig(*v)).map_or(Value::Null, Value::Number),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Null => Value::Null,
    }
}

fn json_row(columns: &[&str], row: &[Cell]) -> Value {
    let map: Map<String, Value> = columns
        .iter()
        .zip(row)
        .map(|(c, v)| (c.to_string(), json_cell(v)))
        .collect();
    Value::Object(map)
}

pub fn to_json(table: &Table) -> String {
    let value = if table.record {
        json_row(&table.columns, &table.rows[0])
    } else {
        Value::Array(table.rows.iter().map(|r| json_row(&table.columns, r)).collect())
    };
    let mut out = value.to_string();
    out.push('\n');
    out
}

pub fn to_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let fields: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Int(v) => v.to_string(),
                Cell::Real(v) => format_real(*v),
                Cell::Text(s) => s.clone(),
                Cell::Null => String::new(),
            })
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
