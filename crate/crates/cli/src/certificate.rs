//! The `certificate` command: optimal SSP coefficient for a given step history.

use std::fmt::Write as _;

use ssp_lmm::formula::{
    make_second_order, third_order_certificate, upper_bound, FormulaCoefficients, FormulaError, RatioHistory,
};
use ssp_lmm::Extended;

use crate::CliError;

/// How the step history is given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum History {
    /// `k` equal steps.
    Fixed(usize),
    Steps(Vec<f64>),
    Omegas(Vec<f64>),
    /// `Ω_0 = 0, …, Ω_k`.
    Cumulative(Vec<f64>),
}

impl History {
    pub fn ratios(&self) -> Result<RatioHistory, CliError> {
        match self {
            History::Fixed(k) => RatioHistory::from_steps(&vec![1.0; *k]),
            History::Steps(h) => RatioHistory::from_steps(h),
            History::Omegas(w) => RatioHistory::from_omegas(w),
            History::Cumulative(c) => RatioHistory::from_cumulative(c),
        }
        .map_err(|e| CliError::Config(e.to_string()))
    }
}

/// A decimal number or a fraction `a/b`.
pub fn parse_number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Config(format!("invalid number {s:?}"));
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn parse_numbers(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_number).collect()
}

fn formula_error(e: FormulaError) -> CliError {
    CliError::Config(e.to_string())
}

fn coefficients(out: &mut String, f: &FormulaCoefficients) {
    let list = |v: &[f64]| v.iter().map(|c| format!("{c:.16e}")).collect::<Vec<_>>().join(", ");
    writeln!(out, "alpha = [{}]", list(&f.alphas)).unwrap();
    writeln!(out, "beta  = [{}]", list(&f.betas)).unwrap();
}

fn extended(v: Extended) -> String {
    match v {
        Extended::Finite(x) => format!("{x:.16e}"),
        Extended::Unbounded => "inf".into(),
    }
}

/// The printed certificate for an order-`order` formula.
pub fn cmd_certificate(history: &History, k: Option<usize>, order: u32) -> Result<String, CliError> {
    let ratios = history.ratios()?;
    let k_hist = ratios.k();
    if let Some(k) = k {
        if k != k_hist {
            return Err(CliError::Config(format!("--k {k} does not match the {k_hist} ratios given")));
        }
    }
    if k_hist < 2 {
        return Err(CliError::Config(format!("k must be at least 2, got {k_hist}")));
    }
    let total = ratios.total();
    let mut out = String::new();
    writeln!(out, "k = {k_hist}, order = {order}").unwrap();
    let cumulative: Vec<String> = ratios.cumulative().iter().map(|c| format!("{c}")).collect();
    writeln!(out, "Omega = ({})", cumulative.join(", ")).unwrap();
    match order {
        2 => {
            let f = make_second_order(k_hist, &ratios).map_err(formula_error)?;
            writeln!(out, "optimal C = {}", extended(f.ssp_coeff)).unwrap();
            writeln!(out, "upper bound = {:.16e}", upper_bound(total, 2)).unwrap();
            coefficients(&mut out, &f);
        }
        3 => {
            let cert = third_order_certificate(k_hist, &ratios).map_err(formula_error)?;
            writeln!(out, "j,r_j").unwrap();
            for (j, r) in cert.r_values.iter().enumerate() {
                let mark = if cert.borderline.contains(&j) { " (borderline)" } else { "" };
                writeln!(out, "{j},{}{mark}", extended(*r)).unwrap();
            }
            let argmin: Vec<String> = cert.argmin_indices.iter().map(usize::to_string).collect();
            writeln!(out, "argmin = {{{}}}", argmin.join(", ")).unwrap();
            let support: Vec<String> = cert.support.iter().map(ToString::to_string).collect();
            writeln!(out, "support = {{{}}}", support.join(", ")).unwrap();
            writeln!(out, "optimal C = {:.16e}", cert.optimal_c).unwrap();
            writeln!(out, "upper bound = {:.16e}", upper_bound(total, 3)).unwrap();
            if cert.non_unique() {
                writeln!(out, "optimal formula is not unique").unwrap();
            }
            match cert.formula(&ratios) {
                Ok(f) => coefficients(&mut out, &f),
                Err(e) => writeln!(out, "no formula constructed: {e}").unwrap(),
            }
        }
        p => return Err(CliError::Config(format!("order must be 2 or 3, got {p}"))),
    }
    Ok(out)
}
