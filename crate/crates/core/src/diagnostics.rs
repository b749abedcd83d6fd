//! Error norms, total variation, convergence tables and the efficiency ratio.

use std::fmt::Write as _;

use thiserror::Error;

use crate::integrator::Trajectory;
use crate::spatial::setups::sine_cell_averages;
use crate::spatial::{Grid1D, SpeedProfile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("trajectory has no multistep steps")]
    EmptyTrajectory,
    #[error("need at least two resolutions, got {0}")]
    TooFewRows(usize),
}

/// `Σ |u_i - exact_i| · dx`.
pub fn l1_error(u: &[f64], exact: &[f64], dx: f64) -> Result<f64, DiagnosticsError> {
    if u.len() != exact.len() {
        return Err(DiagnosticsError::LengthMismatch {
            left: u.len(),
            right: exact.len(),
        });
    }
    Ok(u.iter().zip(exact).map(|(a, b)| (a - b).abs()).sum::<f64>() * dx)
}

/// `Σ |u_{i+1} - u_i|`, including the wrap-around term when periodic.
pub fn total_variation(u: &[f64], periodic: bool) -> f64 {
    let inner: f64 = u.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    match (periodic, u.first(), u.last()) {
        (true, Some(a), Some(b)) if u.len() > 1 => inner + (a - b).abs(),
        _ => inner,
    }
}

/// `s = h_min / h_avg` over the multistep steps, with
/// `h_avg = (T - Σ starting steps) / N`. A final step shortened to hit `T`
/// is counted in `N` but not in `h_min`.
pub fn efficiency_ratio(trajectory: &Trajectory) -> Result<f64, DiagnosticsError> {
    let lmm: Vec<_> = trajectory.lmm_steps().collect();
    if lmm.is_empty() {
        return Err(DiagnosticsError::EmptyTrajectory);
    }
    let h_min = lmm
        .iter()
        .filter(|s| !s.clipped)
        .map(|s| s.h)
        .fold(f64::INFINITY, f64::min);
    let h_min = if h_min.is_finite() { h_min } else { lmm[0].h };
    Ok(h_min / average_step(trajectory, lmm.len()))
}

fn average_step(trajectory: &Trajectory, n: usize) -> f64 {
    (trajectory.t_final - trajectory.t0 - trajectory.starter_time()) / n as f64
}

/// Step statistics reported alongside the efficiency ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSummary {
    pub s: f64,
    pub n_steps: usize,
    pub h_min: f64,
    pub h_avg: f64,
}

pub fn step_summary(trajectory: &Trajectory) -> Result<StepSummary, DiagnosticsError> {
    let s = efficiency_ratio(trajectory)?;
    let n = trajectory.lmm_steps().count();
    let h_avg = average_step(trajectory, n);
    Ok(StepSummary {
        s,
        n_steps: n,
        h_min: s * h_avg,
        h_avg,
    })
}

/// Exact cell averages of the advected sine wave at time `t`.
pub fn exact_advection(grid: &Grid1D, speed: &SpeedProfile, t: f64) -> Vec<f64> {
    sine_cell_averages(grid, 0.0, speed.displacement(t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub resolution: usize,
    pub error: f64,
    /// `log2(e_{r-1} / e_r)`; absent on the first row.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub method: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Rows in the given order of `(resolution, error)`; consecutive
    /// resolutions are assumed to double.
    pub fn new(method: impl Into<String>, data: &[(usize, f64)]) -> Result<Self, DiagnosticsError> {
        if data.len() < 2 {
            return Err(DiagnosticsError::TooFewRows(data.len()));
        }
        let rows = data
            .iter()
            .enumerate()
            .map(|(i, &(resolution, error))| ConvergenceRow {
                resolution,
                error,
                order: (i > 0).then(|| {
                    let (r0, e0) = data[i - 1];
                    (e0 / error).ln() / (resolution as f64 / r0 as f64).ln()
                }),
            })
            .collect();
        Ok(Self {
            method: method.into(),
            rows,
        })
    }

    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("resolution,error,order\n");
        for r in &self.rows {
            let order = r.order.map(|o| format!("{o:.16e}")).unwrap_or_default();
            writeln!(out, "{},{:.16e},{}", r.resolution, r.error, order).unwrap();
        }
        out
    }
}
