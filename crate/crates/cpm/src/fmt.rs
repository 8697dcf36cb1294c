//! Cell formatting: 30 significant digits for exact values, 17 for floats.

use cpm_core::Number;

pub const EXACT_DIGITS: usize = 30;

/// Floats with 17 significant digits; empty for non-finite values.
pub fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

pub fn number(v: &Number) -> String {
    match v {
        Number::Exact(_) => v.to_decimal(EXACT_DIGITS),
        Number::Float(f) => real(*f),
    }
}

/// Parses a cell written by [`real`]; empty cells are `None`.
pub fn parse_real(cell: &str) -> Option<f64> {
    if cell.is_empty() {
        None
    } else {
        cell.parse().ok()
    }
}
