//! Optimal SSP coefficient of third-order `k`-step formulae for arbitrary
//! step-size ratios, together with the coefficients allowed to be nonzero.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use super::cubic::cubic_root;
use super::{FormulaCoefficients, FormulaError, RatioHistory};
use crate::extended::Extended;

/// Absolute tolerance for ties between `r` values and between the two
/// branches of the `max` defining `r_j`, `1 <= j <= k-2`.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// A formula coefficient in shifted variables (`δ_j = α_j - r β_j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coefficient {
    Delta(usize),
    Beta(usize),
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Delta(j) => write!(f, "delta_{j}"),
            Coefficient::Beta(j) => write!(f, "beta_{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThirdOrderCertificate {
    pub k: usize,
    /// `r_0, …, r_{2k-3}`.
    pub r_values: Vec<Extended>,
    /// Indices attaining the minimum (within [`TIE_TOLERANCE`]).
    pub argmin_indices: Vec<usize>,
    /// Coefficients that may be nonzero in an optimal formula.
    pub support: BTreeSet<Coefficient>,
    pub optimal_c: f64,
    /// Indices `j` whose two `max` branches agree within tolerance.
    pub borderline: Vec<usize>,
}

impl ThirdOrderCertificate {
    /// Optimal formulae are not unique when the minimum is shared or a
    /// borderline index attains it.
    pub fn non_unique(&self) -> bool {
        self.argmin_indices.len() > 1
            || self
                .argmin_indices
                .iter()
                .any(|i| self.borderline.contains(i))
    }

    /// Construct an optimal formula supported on at most three coefficients
    /// of the certified support.
    ///
    /// Each candidate support is solved against the order conditions in the
    /// least-squares sense and accepted when the solution is non-negative and
    /// all four conditions hold to `1e-10`.
    pub fn formula(&self, ratios: &RatioHistory) -> Result<FormulaCoefficients, FormulaError> {
        if ratios.k() != self.k {
            return Err(FormulaError::WrongLength {
                expected: self.k,
                found: ratios.k(),
            });
        }
        let r = self.optimal_c;
        let members: Vec<Coefficient> = self.support.iter().copied().collect();
        for size in (1..=members.len().min(3)).rev() {
            for subset in combinations(members.len(), size) {
                let chosen: Vec<Coefficient> = subset.iter().map(|&i| members[i]).collect();
                if let Some(values) = solve_support(ratios, r, &chosen) {
                    let mut alphas = vec![0.0; self.k];
                    let mut betas = vec![0.0; self.k];
                    for (c, v) in chosen.iter().zip(values) {
                        match *c {
                            Coefficient::Delta(j) => alphas[j] += v,
                            Coefficient::Beta(j) => {
                                betas[j] += v;
                                alphas[j] += r * v;
                            }
                        }
                    }
                    let mut f = FormulaCoefficients::new(3, alphas, betas)?;
                    f.optimal = true;
                    return Ok(f);
                }
            }
        }
        Err(FormulaError::Domain(format!(
            "no non-negative formula of support <= 3 found in {:?} at r = {r}",
            self.support
        )))
    }
}

/// Certify the optimal third-order SSP coefficient for the given ratios.
pub fn third_order_certificate(k: usize, ratios: &RatioHistory) -> Result<ThirdOrderCertificate, FormulaError> {
    if k < 2 {
        return Err(FormulaError::Domain(format!("k = {k} is below the minimum 2")));
    }
    if ratios.k() != k {
        return Err(FormulaError::WrongLength {
            expected: k,
            found: ratios.k(),
        });
    }
    let total = ratios.total();
    if total <= 3.0 {
        return Err(FormulaError::InfeasibleOrder {
            order: 3,
            quantity: "Omega_k",
            value: total,
            threshold: 3.0,
        });
    }

    use Coefficient::{Beta, Delta};
    let mut r_values = Vec::with_capacity(2 * k - 2);
    let mut supports: Vec<BTreeSet<Coefficient>> = Vec::with_capacity(2 * k - 2);
    let mut borderline = Vec::new();

    r_values.push(Extended::Finite((total - 3.0) / (total - 1.0)));
    supports.push([Delta(0), Beta(0), Beta(k - 1)].into());

    for j in 1..=k.saturating_sub(2) {
        let dj = ratios.delta(j);
        let first = (dj - 3.0) / (dj - 1.0);
        let second = 2.0 / ratios.omega(j) + 1.0 / ratios.delta(j - 1);
        let support: BTreeSet<Coefficient> = if (first - second).abs() <= TIE_TOLERANCE {
            borderline.push(j);
            [Delta(j), Beta(j - 1), Beta(j), Beta(k - 1)].into()
        } else if first > second {
            [Delta(j), Beta(j), Beta(k - 1)].into()
        } else {
            [Delta(j), Beta(j - 1), Beta(j)].into()
        };
        r_values.push(Extended::Finite(first.max(second)));
        supports.push(support);
    }

    let last = 2.0 / ratios.omega(k - 1) + 1.0 / ratios.delta(k - 2);
    r_values.push(Extended::Finite(last));
    supports.push([Delta(k - 1), Beta(k - 2), Beta(k - 1)].into());

    for j in 0..k.saturating_sub(2) {
        r_values.push(cubic_root(ratios.delta(j), ratios.delta(j + 1))?);
        supports.push([Beta(j), Beta(j + 1), Beta(k - 1)].into());
    }

    let optimal_c = r_values
        .iter()
        .filter_map(|r| r.finite())
        .fold(f64::INFINITY, f64::min);
    let argmin_indices: Vec<usize> = r_values
        .iter()
        .enumerate()
        .filter(|(_, r)| r.finite().is_some_and(|v| v - optimal_c <= TIE_TOLERANCE))
        .map(|(i, _)| i)
        .collect();
    let mut support = supports[argmin_indices[0]].clone();
    for &i in &argmin_indices[1..] {
        support = support.intersection(&supports[i]).copied().collect();
    }

    Ok(ThirdOrderCertificate {
        k,
        r_values,
        argmin_indices,
        support,
        optimal_c,
        borderline,
    })
}

/// Least-squares solve of the order conditions (in shifted variables, at
/// fixed `r`) restricted to `chosen`; `None` if the fit is inexact or negative.
fn solve_support(ratios: &RatioHistory, r: f64, chosen: &[Coefficient]) -> Option<Vec<f64>> {
    let rows = 4;
    let total = ratios.total();
    let a = DMatrix::from_fn(rows, chosen.len(), |m, c| {
        let (j, is_beta) = match chosen[c] {
            Coefficient::Delta(j) => (j, false),
            Coefficient::Beta(j) => (j, true),
        };
        let w = ratios.big_omega(j);
        let mi = m as i32;
        let plain = w.powi(mi);
        let entry = if is_beta {
            r * plain + if m == 0 { 0.0 } else { m as f64 * w.powi(mi - 1) }
        } else {
            plain
        };
        entry / total.powi(mi).max(1.0)
    });
    let b = DVector::from_fn(rows, |m, _| {
        let mi = m as i32;
        total.powi(mi) / total.powi(mi).max(1.0)
    });
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-13).ok()?;
    let residual = (&a * &x - &b).amax();
    if residual > 1e-10 || x.iter().any(|&v| v < -1e-10) {
        return None;
    }
    Some(x.iter().map(|&v| v.max(0.0)).collect())
}

/// All `size`-element index subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, size, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut current, &mut out);
    out
}
