//! Comma-separated tables with a single header line.

use std::fmt::Write as _;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// `x` with [`SIGNIFICANT_DIGITS`] significant digits: positional notation
/// for magnitudes in `[1e-5, 1e9)`, scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..9).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_sig(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Dense matrix with a header row of `xs` and a leading column of `ys`.
pub fn matrix_csv(xs: &[f64], ys: &[f64], values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 16);
    out.push_str("y\\x");
    for x in xs {
        write!(out, ",{}", fmt_sig(*x)).unwrap();
    }
    out.push('\n');
    for (j, y) in ys.iter().enumerate() {
        out.push_str(&fmt_sig(*y));
        for v in &values[j * xs.len()..(j + 1) * xs.len()] {
            write!(out, ",{}", fmt_sig(*v)).unwrap();
        }
        out.push('\n');
    }
    out
}
