//! Variable step-size SSP multistep formulae.
//!
//! A formula for step `n` combines the `k` previous states
//!
//! ```text
//! u_n = Σ_j ( α_j u_{n-k+j} + h_n β_j f(u_{n-k+j}) ),   j = 0..k-1
//! ```
//!
//! and its coefficients depend on the ratios of the recent step sizes to
//! `h_n`. This module builds the optimal second- and third-order formulae
//! from a [`RatioHistory`], computes SSP coefficients, and checks order
//! conditions. The general third-order optimality analysis lives in
//! [`certificate`].

mod certificate;
mod cubic;

pub use certificate::{third_order_certificate, Coefficient, ThirdOrderCertificate};
pub use cubic::cubic_root;

use crate::extended::Extended;
use thiserror::Error;

/// `2(1 + √2)`: upper end of the window where the two-term third-order formula is optimal.
pub const THIRD_ORDER_WINDOW: f64 = 2.0 * (1.0 + std::f64::consts::SQRT_2);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormulaError {
    #[error("step size #{index} is not positive ({value})")]
    NonPositiveStep { index: usize, value: f64 },
    #[error("expected {expected} values, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("no order-{order} formula with positive SSP coefficient: {quantity} = {value} must exceed {threshold}")]
    InfeasibleOrder {
        order: u32,
        quantity: &'static str,
        value: f64,
        threshold: f64,
    },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Step-size ratios `ω_j = h_{n-k+j} / h_n` and their partial sums `Ω_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioHistory {
    omegas: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RatioHistory {
    /// Build from the `k` most recent step sizes `h_{n-k+1}, …, h_n` (oldest first).
    pub fn from_steps(steps: &[f64]) -> Result<Self, FormulaError> {
        if steps.is_empty() {
            return Err(FormulaError::WrongLength {
                expected: 1,
                found: 0,
            });
        }
        for (index, &value) in steps.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(FormulaError::NonPositiveStep { index, value });
            }
        }
        let current = steps[steps.len() - 1];
        let mut omegas: Vec<f64> = steps.iter().map(|h| h / current).collect();
        *omegas.last_mut().unwrap() = 1.0;
        Ok(Self::from_valid_omegas(omegas))
    }

    /// Build from `ω_1, …, ω_k`; the last ratio must be one.
    pub fn from_omegas(omegas: &[f64]) -> Result<Self, FormulaError> {
        let Some(&last) = omegas.last() else {
            return Err(FormulaError::WrongLength {
                expected: 1,
                found: 0,
            });
        };
        for (index, &value) in omegas.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(FormulaError::NonPositiveStep { index, value });
            }
        }
        if (last - 1.0).abs() > 1e-12 {
            return Err(FormulaError::Domain(format!(
                "the last step ratio must be 1, got {last}"
            )));
        }
        let mut omegas = omegas.to_vec();
        *omegas.last_mut().unwrap() = 1.0;
        Ok(Self::from_valid_omegas(omegas))
    }

    /// Build from `Ω_0 = 0, Ω_1, …, Ω_k` with `Ω_k = Ω_{k-1} + 1`.
    pub fn from_cumulative(cumulative: &[f64]) -> Result<Self, FormulaError> {
        if cumulative.len() < 2 {
            return Err(FormulaError::WrongLength {
                expected: 2,
                found: cumulative.len(),
            });
        }
        if cumulative[0] != 0.0 {
            return Err(FormulaError::Domain(format!(
                "cumulative ratios must start at 0, got {}",
                cumulative[0]
            )));
        }
        let omegas: Vec<f64> = cumulative.windows(2).map(|w| w[1] - w[0]).collect();
        Self::from_omegas(&omegas)
    }

    fn from_valid_omegas(omegas: Vec<f64>) -> Self {
        let k = omegas.len();
        let mut cumulative = Vec::with_capacity(k + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for &w in &omegas[..k - 1] {
            acc += w;
            cumulative.push(acc);
        }
        cumulative.push(acc + 1.0);
        Self { omegas, cumulative }
    }

    /// Number of steps `k`.
    pub fn k(&self) -> usize {
        self.omegas.len()
    }

    /// `ω_1, …, ω_k`.
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    /// `Ω_0, …, Ω_k`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// `ω_j` for `1 <= j <= k`.
    pub fn omega(&self, j: usize) -> f64 {
        self.omegas[j - 1]
    }

    /// `Ω_j` for `0 <= j <= k`.
    pub fn big_omega(&self, j: usize) -> f64 {
        self.cumulative[j]
    }

    /// `Ω_k`.
    pub fn total(&self) -> f64 {
        self.cumulative[self.k()]
    }

    /// `Δ_m = Ω_k - Ω_m`.
    pub fn delta(&self, m: usize) -> f64 {
        self.total() - self.cumulative[m]
    }
}

/// One step's multistep coefficients. Index `j` multiplies `u_{n-k+j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaCoefficients {
    pub order: u32,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub ssp_coeff: Extended,
    /// False when the formula is valid but another formula has a larger SSP coefficient.
    pub optimal: bool,
}

impl FormulaCoefficients {
    /// Wrap arbitrary coefficients, computing their SSP coefficient.
    pub fn new(order: u32, alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self, FormulaError> {
        if alphas.len() != betas.len() {
            return Err(FormulaError::WrongLength {
                expected: alphas.len(),
                found: betas.len(),
            });
        }
        let ssp_coeff = ssp_coefficient(&alphas, &betas);
        Ok(Self {
            order,
            alphas,
            betas,
            ssp_coeff,
            optimal: false,
        })
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// Shift variables `δ_j = α_j - r β_j`.
    pub fn deltas(&self, r: f64) -> Vec<f64> {
        self.alphas
            .iter()
            .zip(&self.betas)
            .map(|(a, b)| a - r * b)
            .collect()
    }
}

/// SSP coefficient of a formula: the largest `r` with `α_j - r β_j >= 0`,
/// zero when any coefficient is negative.
pub fn ssp_coefficient(alphas: &[f64], betas: &[f64]) -> Extended {
    if alphas.iter().chain(betas).any(|&c| c < 0.0) {
        return Extended::Finite(0.0);
    }
    alphas
        .iter()
        .zip(betas)
        .filter(|(_, &b)| b > 0.0)
        .map(|(&a, &b)| Extended::Finite(a / b))
        .fold(Extended::Unbounded, Extended::min)
}

/// Largest possible SSP coefficient of an order-`p` formula with total ratio `Ω_k`.
pub fn upper_bound(omega_k: f64, p: u32) -> f64 {
    let p = f64::from(p);
    if omega_k <= p {
        0.0
    } else {
        (omega_k - p) / (omega_k - 1.0)
    }
}

/// The optimal second-order `k`-step formula.
///
/// Only `u_{n-1}`, `f(u_{n-1})` and `u_{n-k}` enter the combination.
pub fn make_second_order(k: usize, ratios: &RatioHistory) -> Result<FormulaCoefficients, FormulaError> {
    check_k(k, ratios, 2)?;
    let total = ratios.total();
    if total <= 2.0 {
        return Err(FormulaError::InfeasibleOrder {
            order: 2,
            quantity: "Omega_k",
            value: total,
            threshold: 2.0,
        });
    }
    let w = ratios.big_omega(k - 1);
    let w2 = w * w;
    let mut alphas = vec![0.0; k];
    let mut betas = vec![0.0; k];
    alphas[k - 1] = (w2 - 1.0) / w2;
    betas[k - 1] = alphas[k - 1] * w / (w - 1.0);
    alphas[0] = 1.0 / w2;
    Ok(FormulaCoefficients {
        order: 2,
        alphas,
        betas,
        ssp_coeff: Extended::Finite((total - 2.0) / (total - 1.0)),
        optimal: true,
    })
}

/// The two-term third-order formula using `u_{n-1}`, `u_{n-k}` and their slopes.
///
/// Optimal for `2 < Ω_{k-1} <= 2(1+√2)`. Beyond that window the formula is
/// still returned, flagged non-optimal, with its smaller SSP coefficient.
pub fn make_third_order(k: usize, ratios: &RatioHistory) -> Result<FormulaCoefficients, FormulaError> {
    check_k(k, ratios, 2)?;
    let w = ratios.big_omega(k - 1);
    if w <= 2.0 {
        return Err(FormulaError::InfeasibleOrder {
            order: 3,
            quantity: "Omega_{k-1}",
            value: w,
            threshold: 2.0,
        });
    }
    let w2 = w * w;
    let w3 = w2 * w;
    let mut alphas = vec![0.0; k];
    let mut betas = vec![0.0; k];
    betas[k - 1] = (w + 1.0) * (w + 1.0) / w2;
    betas[0] = (w + 1.0) / w2;
    alphas[k - 1] = (w + 1.0) * (w + 1.0) * (w - 2.0) / w3;
    alphas[0] = (3.0 * w + 2.0) / w3;
    let optimal = w <= THIRD_ORDER_WINDOW;
    let c = if optimal {
        (w - 2.0) / w
    } else {
        (3.0 * w + 2.0) / (w * (w + 1.0))
    };
    Ok(FormulaCoefficients {
        order: 3,
        alphas,
        betas,
        ssp_coeff: Extended::Finite(c),
        optimal,
    })
}

/// Residuals of the order conditions up to order `p`:
/// `Σα_j - 1` followed by `Σ(Ω_j^m α_j + m Ω_j^{m-1} β_j) - Ω_k^m` for `m = 1..=p`.
pub fn verify_order(formula: &FormulaCoefficients, ratios: &RatioHistory, p: u32) -> Vec<f64> {
    let k = formula.k().min(ratios.k());
    let mut residuals = Vec::with_capacity(p as usize + 1);
    residuals.push(formula.alphas.iter().sum::<f64>() - 1.0);
    for m in 1..=p as i32 {
        let mf = f64::from(m);
        let lhs: f64 = (0..k)
            .map(|j| {
                let w = ratios.big_omega(j);
                w.powi(m) * formula.alphas[j] + mf * w.powi(m - 1) * formula.betas[j]
            })
            .sum();
        residuals.push(lhs - ratios.total().powi(m));
    }
    residuals
}

fn check_k(k: usize, ratios: &RatioHistory, min_k: usize) -> Result<(), FormulaError> {
    if k < min_k {
        return Err(FormulaError::Domain(format!("k = {k} is below the minimum {min_k}")));
    }
    if ratios.k() != k {
        return Err(FormulaError::WrongLength {
            expected: k,
            found: ratios.k(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    #[test]
    fn ratio_history_fixed_step() {
        let r = RatioHistory::from_steps(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.omegas(), &[1.0, 1.0, 1.0]);
        assert_eq!(r.cumulative(), &[0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn ratio_history_shrinking_steps() {
        let r = RatioHistory::from_steps(&[2.0, 1.0, 0.5]).unwrap();
        assert_eq!(r.omegas(), &[4.0, 2.0, 1.0]);
        assert_eq!(r.cumulative(), &[0.0, 4.0, 6.0, 7.0]);
        assert_eq!(r.delta(1), 3.0);
    }

    #[test]
    fn ratio_history_growing_last_step() {
        let r = RatioHistory::from_steps(&[1.0, 1.0, 1.0, 2.0 / 3.0]).unwrap();
        let expected = [0.0, 1.5, 3.0, 4.5, 5.5];
        for (a, b) in r.cumulative().iter().zip(expected) {
            assert!(close(*a, b, 1e-14), "{:?}", r.cumulative());
        }
        assert_eq!(r.total(), r.big_omega(3) + 1.0);
    }

    #[test]
    fn ratio_history_rejects_non_positive() {
        assert_eq!(
            RatioHistory::from_steps(&[1.0, 0.0, 1.0]),
            Err(FormulaError::NonPositiveStep {
                index: 1,
                value: 0.0
            })
        );
        assert!(matches!(
            RatioHistory::from_steps(&[-1.0, 1.0]),
            Err(FormulaError::NonPositiveStep { index: 0, .. })
        ));
    }

    #[test]
    fn ratio_history_from_cumulative() {
        let r = RatioHistory::from_cumulative(&[0.0, 1.0, 7.0 / 3.0, 11.0 / 3.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.k(), 5);
        assert!(close(r.omega(2), 4.0 / 3.0, 1e-15));
        assert!(RatioHistory::from_cumulative(&[0.0, 1.0, 2.5]).is_err());
    }

    #[test]
    fn ssp_coefficient_examples() {
        assert_eq!(
            ssp_coefficient(&[0.25, 0.0, 0.75], &[0.0, 0.0, 1.5]),
            Extended::Finite(0.5)
        );
        assert_eq!(ssp_coefficient(&[-0.1, 1.1], &[0.0, 1.0]), Extended::Finite(0.0));
        assert_eq!(ssp_coefficient(&[1.0, 0.0], &[0.0, 0.0]), Extended::Unbounded);
    }

    #[test]
    fn upper_bound_examples() {
        assert!(close(upper_bound(4.0, 3), 1.0 / 3.0, 1e-15));
        assert_eq!(upper_bound(3.0, 3), 0.0);
        assert!(close(upper_bound(3.0, 2), 0.5, 1e-15));
    }

    #[test]
    fn second_order_fixed_step_k3() {
        let r = RatioHistory::from_steps(&[1.0; 3]).unwrap();
        let f = make_second_order(3, &r).unwrap();
        assert!(close(f.alphas[0], 0.25, 1e-15));
        assert_eq!(f.alphas[1], 0.0);
        assert!(close(f.alphas[2], 0.75, 1e-15));
        assert_eq!(&f.betas[..2], &[0.0, 0.0]);
        assert!(close(f.betas[2], 1.5, 1e-15));
        assert_eq!(f.ssp_coeff, Extended::Finite(0.5));
    }

    #[test]
    fn second_order_variable_step_k3() {
        let r = RatioHistory::from_steps(&[1.0, 1.0, 2.0 / 3.0]).unwrap();
        let f = make_second_order(3, &r).unwrap();
        assert!(close(f.alphas[0], 1.0 / 9.0, 1e-15));
        assert!(close(f.alphas[2], 8.0 / 9.0, 1e-15));
        assert!(close(f.betas[2], 4.0 / 3.0, 1e-15));
        assert!(close(f.ssp_coeff.finite().unwrap(), 2.0 / 3.0, 1e-15));
        assert!(max_abs(&verify_order(&f, &r, 2)) < 1e-13);
    }

    #[test]
    fn second_order_fixed_step_k4() {
        let r = RatioHistory::from_steps(&[1.0; 4]).unwrap();
        let f = make_second_order(4, &r).unwrap();
        assert!(close(f.alphas[0], 1.0 / 9.0, 1e-15));
        assert!(close(f.alphas[3], 8.0 / 9.0, 1e-15));
        assert!(close(f.betas[3], 4.0 / 3.0, 1e-15));
        assert!(close(f.ssp_coeff.finite().unwrap(), 2.0 / 3.0, 1e-15));
    }

    #[test]
    fn second_order_infeasible() {
        // Ω_3 = 2 when h_n = 2 h_{n-1} = 2 h_{n-2}.
        let r = RatioHistory::from_steps(&[1.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            make_second_order(3, &r),
            Err(FormulaError::InfeasibleOrder { order: 2, .. })
        ));
    }

    #[test]
    fn third_order_fixed_step_k4() {
        let r = RatioHistory::from_steps(&[1.0; 4]).unwrap();
        let f = make_third_order(4, &r).unwrap();
        assert!(close(f.alphas[3], 16.0 / 27.0, 1e-15));
        assert!(close(f.betas[3], 16.0 / 9.0, 1e-15));
        assert!(close(f.alphas[0], 11.0 / 27.0, 1e-15));
        assert!(close(f.betas[0], 4.0 / 9.0, 1e-15));
        assert!(close(f.ssp_coeff.finite().unwrap(), 1.0 / 3.0, 1e-15));
        assert!(f.optimal);
        assert!(max_abs(&verify_order(&f, &r, 3)) < 1e-13);
    }

    #[test]
    fn third_order_fixed_step_k5() {
        let r = RatioHistory::from_steps(&[1.0; 5]).unwrap();
        let f = make_third_order(5, &r).unwrap();
        assert!(close(f.ssp_coeff.finite().unwrap(), 0.5, 1e-15));
        assert!(close(f.betas[4], 25.0 / 16.0, 1e-15));
        assert!(close(f.betas[0], 5.0 / 16.0, 1e-15));
        assert!(close(f.alphas[4], 25.0 / 32.0, 1e-15));
        assert!(close(f.alphas[0], 7.0 / 32.0, 1e-15));
    }

    #[test]
    fn third_order_boundary_is_infeasible() {
        // Ω_3 = 2 exactly.
        let r = RatioHistory::from_omegas(&[0.5, 0.5, 1.0, 1.0]).unwrap();
        assert!(matches!(
            make_third_order(4, &r),
            Err(FormulaError::InfeasibleOrder { order: 3, .. })
        ));
    }

    #[test]
    fn third_order_outside_window_is_soft() {
        let r = RatioHistory::from_omegas(&[2.0, 2.0, 2.0, 1.0]).unwrap();
        let f = make_third_order(4, &r).unwrap();
        assert!(!f.optimal);
        let w = 6.0;
        let expected = (3.0 * w + 2.0) / (w * (w + 1.0));
        assert!(close(f.ssp_coeff.finite().unwrap(), expected, 1e-15));
        assert!(close(
            ssp_coefficient(&f.alphas, &f.betas).finite().unwrap(),
            expected,
            1e-14
        ));
        assert!(max_abs(&verify_order(&f, &r, 3)) < 1e-12);
    }

    #[test]
    fn perturbed_third_order_breaks_order_conditions() {
        let r = RatioHistory::from_steps(&[1.0; 4]).unwrap();
        let mut f = make_third_order(4, &r).unwrap();
        f.betas[0] += 1e-3;
        // β_0 sits at Ω_0 = 0, so only the m = 1 condition sees it.
        let res = verify_order(&f, &r, 3);
        assert!((res[1] - 1e-3).abs() < 1e-12, "{res:?}");
        f.betas[0] -= 1e-3;
        f.betas[3] += 1e-3;
        let res = verify_order(&f, &r, 3);
        assert!((res[3] - 3.0 * 9.0 * 1e-3).abs() < 1e-12, "{res:?}");
    }

    #[test]
    fn forward_euler_is_first_order() {
        let r = RatioHistory::from_cumulative(&[0.0, 1.0]).unwrap();
        let f = FormulaCoefficients::new(1, vec![1.0], vec![1.0]).unwrap();
        assert_eq!(verify_order(&f, &r, 1), vec![0.0, 0.0]);
        assert_eq!(f.ssp_coeff, Extended::Finite(1.0));
    }
}
