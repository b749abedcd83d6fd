//! Greedy step-size selection.
//!
//! The SSP restriction `h_n <= C_n μ_n` is implicit because `C_n` depends on
//! `h_n` through the step ratios. For the optimal formulae it can be solved in
//! closed form; taking equality gives the greedy rules below.

mod recursion;

pub use recursion::{
    monotone_run_lengths, tau_recursion, RecursionScalar, TauLimit, TauRun, Wide, WIDE_PRECISION,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControllerError {
    #[error("forward-Euler history is empty")]
    EmptyHistory,
    #[error("forward-Euler step size #{index} is not positive ({value})")]
    InvalidFe { index: usize, value: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Temporal order of a multistep method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Second,
    Third,
}

impl Order {
    pub fn as_u32(self) -> u32 {
        match self {
            Order::Second => 2,
            Order::Third => 3,
        }
    }
}

/// Parameters of the step-size controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerParams {
    pub k: usize,
    pub order: Order,
    /// Bound `h_j <= rho · h_FE(u_j)` on the starting steps (third order only).
    pub rho: f64,
    /// Admissible band `[rho_fe, 1/rho_fe]` for consecutive `h_FE` ratios.
    pub rho_fe: f64,
    /// CFL number under which forward Euler is monotone.
    pub cfl_fe: f64,
    /// Safety factor for the Runge–Kutta starting steps.
    pub gamma: f64,
    /// Enforce the `rho` / `rho_fe` conditions (third order only).
    pub enforce_conditions: bool,
}

impl ControllerParams {
    /// Defaults: `cfl_fe = 1/2`, `gamma = 0.9`, and for third order the
    /// `(rho, rho_fe)` pairs `(0.6, 0.9)` for `k = 4` and `(0.57, 0.962)` for `k = 5`.
    pub fn new(k: usize, order: Order) -> Result<Self, ControllerError> {
        let min_k = match order {
            Order::Second => 2,
            Order::Third => 3,
        };
        if k < min_k {
            return Err(ControllerError::Domain(format!(
                "k = {k} is too small for order {}",
                order.as_u32()
            )));
        }
        let (rho, rho_fe) = match (order, k) {
            (Order::Third, 4) => (0.6, 0.9),
            (Order::Third, 5) => (0.57, 0.962),
            _ => (1.0, 1.0),
        };
        Ok(Self {
            k,
            order,
            rho,
            rho_fe,
            cfl_fe: 0.5,
            gamma: 0.9,
            enforce_conditions: order == Order::Third,
        })
    }

    /// Asymptotic SSP coefficient `(k - p)/(k - 1)` for constant `h_FE`.
    pub fn limit_ssp_coefficient(&self) -> f64 {
        let p = f64::from(self.order.as_u32());
        let k = self.k as f64;
        (k - p) / (k - 1.0)
    }

    /// Greedy step for this controller's order.
    pub fn greedy_step(&self, history_sum: f64, mu: f64) -> Result<f64, ControllerError> {
        match self.order {
            Order::Second => greedy_step_second(history_sum, mu),
            Order::Third => greedy_step_third(history_sum, mu),
        }
    }
}

/// Forward-Euler step sizes of the states entering the current combination.
#[derive(Debug, Clone, PartialEq)]
pub struct FeHistory {
    values: Vec<f64>,
}

impl FeHistory {
    pub fn new(values: &[f64]) -> Result<Self, ControllerError> {
        if values.is_empty() {
            return Err(ControllerError::EmptyHistory);
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value > 0.0) {
                return Err(ControllerError::InvalidFe { index, value });
            }
        }
        Ok(Self {
            values: values.to_vec(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `μ_n`, the smallest stored `h_FE`.
    pub fn mu(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `μ_n` from raw values.
pub fn mu_n(values: &[f64]) -> Result<f64, ControllerError> {
    Ok(FeHistory::new(values)?.mu())
}

fn check_inputs(history_sum: f64, mu: f64) -> Result<(), ControllerError> {
    if !(history_sum > 0.0) || !(mu > 0.0) || !history_sum.is_finite() || !mu.is_finite() {
        return Err(ControllerError::Domain(format!(
            "greedy step needs positive finite inputs, got S = {history_sum}, mu = {mu}"
        )));
    }
    Ok(())
}

/// Largest `h_n` with `h_n <= C_n μ` for the optimal second-order formula,
/// where `history_sum = Σ_{j=1}^{k-1} h_{n-j}`.
pub fn greedy_step_second(history_sum: f64, mu: f64) -> Result<f64, ControllerError> {
    check_inputs(history_sum, mu)?;
    Ok(mu * history_sum / (history_sum + mu))
}

/// Largest `h_n` with `h_n <= C_n μ` for the two-term third-order formula.
pub fn greedy_step_third(history_sum: f64, mu: f64) -> Result<f64, ControllerError> {
    check_inputs(history_sum, mu)?;
    Ok(mu * history_sum / (history_sum + 2.0 * mu))
}

/// `rho_fe <= fe_prev / fe_curr <= 1 / rho_fe`.
pub fn check_fe_ratio(fe_prev: f64, fe_curr: f64, rho_fe: f64) -> bool {
    let ratio = fe_prev / fe_curr;
    rho_fe <= ratio && ratio <= 1.0 / rho_fe
}

/// `h_j <= rho · h_FE(u_j)`.
pub fn check_h_bound(h: f64, fe: f64, rho: f64) -> bool {
    h <= rho * fe
}
