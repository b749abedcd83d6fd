//! The `run` and `convergence` commands.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ssp_lmm::controller::{ControllerParams, Order};
use ssp_lmm::diagnostics::{exact_advection, l1_error, step_summary, ConvergenceTable, StepSummary};
use ssp_lmm::integrator::{run, run_ssprk2, IntegratorConfig, IntegratorError, Trajectory};
use ssp_lmm::spatial::{by_name, setups, Physics, Setup, WENO_EPSILON};

use crate::config::{Method, RunConfig};
use crate::CliError;

/// A finished run with its diagnostics.
pub struct Outcome {
    pub setup: Setup,
    pub trajectory: Trajectory,
    pub summary: StepSummary,
    pub final_tv: f64,
    /// Only for the advection problem, whose exact solution is known.
    pub l1_error: Option<f64>,
}

fn integrator_error(e: IntegratorError) -> CliError {
    match e {
        IntegratorError::Config(msg) => CliError::Config(msg),
        other => CliError::Numerical(other.to_string()),
    }
}

/// Efficiency ratio for a pure Runge–Kutta run, taken over all steps.
fn starter_summary(trajectory: &Trajectory) -> StepSummary {
    let n = trajectory.steps.len();
    let h_avg = (trajectory.t_final - trajectory.t0) / n as f64;
    let h_min = trajectory
        .steps
        .iter()
        .filter(|s| !s.clipped)
        .map(|s| s.h)
        .fold(f64::INFINITY, f64::min);
    let h_min = if h_min.is_finite() { h_min } else { trajectory.steps[0].h };
    StepSummary {
        s: h_min / h_avg,
        n_steps: n,
        h_min,
        h_avg,
    }
}

pub fn simulate(config: &RunConfig, n_cells: usize) -> Result<Outcome, CliError> {
    config.validate()?;
    let reconstruction = config.method.reconstruction(&config.problem);
    let setup = by_name(&config.problem, n_cells, reconstruction)
        .ok_or_else(|| CliError::Config(format!("unknown problem {:?}", config.problem)))?
        .map_err(|e| CliError::Config(e.to_string()))?;
    let t_final = config.t_final.unwrap_or(setup.t_final);

    let (k, order) = match config.method {
        Method::Msv { k, order } => (k, order),
        Method::Ssprk2Only => (3, Order::Second),
    };
    let mut params = ControllerParams::new(k, order).map_err(|e| CliError::Config(e.to_string()))?;
    params.gamma = config.gamma;
    params.cfl_fe = config.cfl_fe;
    params.enforce_conditions = config.enforce_conditions && order == Order::Third;
    let mut integrator = IntegratorConfig::new(params, t_final);
    integrator.h1 = config.h1;

    let trajectory = match config.method {
        Method::Ssprk2Only => run_ssprk2(&setup.problem, &setup.initial, &integrator),
        Method::Msv { .. } => run(&setup.problem, &setup.initial, &integrator),
    }
    .map_err(integrator_error)?;

    let summary = match config.method {
        Method::Ssprk2Only => starter_summary(&trajectory),
        Method::Msv { .. } => step_summary(&trajectory).map_err(|e| CliError::Numerical(e.to_string()))?,
    };
    let final_tv = trajectory.steps.last().map_or(trajectory.initial_tv, |s| s.tv);
    let l1_error = match setup.problem.physics {
        Physics::Advection(speed) if speed == setups::ADVECTION_SPEED => {
            let exact = exact_advection(&setup.problem.grid, &speed, t_final);
            Some(l1_error(&trajectory.final_state, &exact, setup.problem.grid.dx).map_err(|e| CliError::Numerical(e.to_string()))?)
        }
        _ => None,
    };
    Ok(Outcome {
        setup,
        trajectory,
        summary,
        final_tv,
        l1_error,
    })
}

pub fn steps_csv(trajectory: &Trajectory) -> String {
    let mut out = String::from("n,t,h,nu,tv,method_tag,rejections\n");
    for s in &trajectory.steps {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            s.n,
            s.t,
            s.h,
            s.nu,
            s.tv,
            s.tag.as_str(),
            s.rejections
        )
        .unwrap();
    }
    out
}

pub fn summary_csv(outcome: &Outcome) -> String {
    let s = &outcome.summary;
    let l1 = outcome.l1_error.map(|e| format!("{e:.16e}")).unwrap_or_default();
    format!(
        "s,N,h_min,h_avg,final_tv,l1_error\n{:.16e},{},{:.16e},{:.16e},{:.16e},{}\n",
        s.s, s.n_steps, s.h_min, s.h_avg, outcome.final_tv, l1
    )
}

/// Final cell averages; Euler states are written as primitive variables.
pub fn snapshot_csv(setup: &Setup, u: &[f64]) -> String {
    let grid = &setup.problem.grid;
    let n = grid.n_cells;
    let mut out = String::new();
    match setup.problem.physics {
        Physics::Euler { gamma } => {
            out.push_str("x,density,velocity,pressure\n");
            for i in 0..n {
                let p = ssp_lmm::spatial::euler::Primitive::from_conserved([u[i], u[n + i], u[2 * n + i]], gamma);
                writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", grid.center(i), p.density, p.velocity, p.pressure).unwrap();
            }
        }
        _ => {
            out.push_str("x,u\n");
            for i in 0..n {
                writeln!(out, "{:.16e},{:.16e}", grid.center(i), u[i]).unwrap();
            }
        }
    }
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::write(dir.join(name), contents).map_err(|e| CliError::Io(format!("{}: {e}", dir.join(name).display())))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn metadata(config: &RunConfig, setup: &Setup) -> String {
    format!(
        "{}reconstruction={:?}\nweno_epsilon={:e}\n",
        config.to_text(),
        setup.problem.reconstruction,
        WENO_EPSILON
    )
}

/// Run one configuration and write its CSV files into `dir`.
pub fn cmd_run(config: &RunConfig, dir: &Path) -> Result<Outcome, CliError> {
    let outcome = simulate(config, config.n_cells)?;
    create_dir(dir)?;
    write(dir, "steps.csv", &steps_csv(&outcome.trajectory))?;
    write(dir, "summary.csv", &summary_csv(&outcome))?;
    write(dir, "metadata.txt", &metadata(config, &outcome.setup))?;
    if config.snapshot {
        write(dir, "solution.csv", &snapshot_csv(&outcome.setup, &outcome.trajectory.final_state))?;
    }
    Ok(outcome)
}

/// L1 errors of the advection problem over `config.resolutions`.
pub fn cmd_convergence(config: &RunConfig, dir: &Path) -> Result<ConvergenceTable, CliError> {
    if config.problem != "advection" {
        return Err(CliError::Config(format!(
            "convergence needs an exact solution; only the advection problem has one, got {:?}",
            config.problem
        )));
    }
    if config.resolutions.len() < 2 {
        return Err(CliError::Config(format!(
            "convergence needs at least two resolutions, got {}",
            config.resolutions.len()
        )));
    }
    let mut data = Vec::with_capacity(config.resolutions.len());
    for &n in &config.resolutions {
        let outcome = simulate(config, n)?;
        let error = outcome.l1_error.expect("advection has an exact solution");
        data.push((n, error));
    }
    let table = ConvergenceTable::new(config.method.to_string(), &data).map_err(|e| CliError::Config(e.to_string()))?;
    create_dir(dir)?;
    write(dir, "convergence.csv", &table.to_csv())?;
    Ok(table)
}
