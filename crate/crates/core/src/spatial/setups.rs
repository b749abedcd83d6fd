//! Benchmark problems on the unit interval.

use std::f64::consts::PI;

use super::euler::Primitive;
use super::{Boundary, Grid1D, Physics, Reconstruction, SemiDiscreteProblem, SpatialError, SpeedProfile};

pub const PROBLEM_NAMES: [&str; 3] = ["advection", "burgers", "blastwave"];

pub const EULER_GAMMA: f64 = 1.4;

/// Advection velocity `2 + 1.5 sin(2πt)`.
pub const ADVECTION_SPEED: SpeedProfile = SpeedProfile {
    mean: 2.0,
    amplitude: 1.5,
    frequency: 1.0,
};

#[derive(Debug, Clone)]
pub struct Setup {
    pub name: &'static str,
    pub problem: SemiDiscreteProblem,
    pub initial: Vec<f64>,
    pub t_final: f64,
}

/// Exact cell averages of `offset + sin(2π(x - shift))`.
pub fn sine_cell_averages(grid: &Grid1D, offset: f64, shift: f64) -> Vec<f64> {
    let w = 2.0 * PI;
    (0..grid.n_cells)
        .map(|i| {
            let (a, b) = grid.edges(i);
            offset + ((w * (a - shift)).cos() - (w * (b - shift)).cos()) / (w * grid.dx)
        })
        .collect()
}

fn periodic_scalar(n_cells: usize, reconstruction: Reconstruction, physics: Physics) -> Result<SemiDiscreteProblem, SpatialError> {
    let grid = Grid1D::new(n_cells, 0.0, 1.0, reconstruction)?;
    SemiDiscreteProblem::new(grid, reconstruction, physics, Boundary::Periodic, Boundary::Periodic)
}

/// `u_t + a(t) u_x = 0`, `u(x, 0) = sin(2πx)`, periodic, up to `t = 5`.
pub fn advection(n_cells: usize, reconstruction: Reconstruction) -> Result<Setup, SpatialError> {
    let problem = periodic_scalar(n_cells, reconstruction, Physics::Advection(ADVECTION_SPEED))?;
    let initial = sine_cell_averages(&problem.grid, 0.0, 0.0);
    Ok(Setup {
        name: "advection",
        problem,
        initial,
        t_final: 5.0,
    })
}

/// `u_t + (u²/2)_x = 0`, `u(x, 0) = 1/2 + sin(2πx)`, periodic, up to `t = 0.8`.
pub fn burgers(n_cells: usize, reconstruction: Reconstruction) -> Result<Setup, SpatialError> {
    let problem = periodic_scalar(n_cells, reconstruction, Physics::Burgers)?;
    let initial = sine_cell_averages(&problem.grid, 0.5, 0.0);
    Ok(Setup {
        name: "burgers",
        problem,
        initial,
        t_final: 0.8,
    })
}

/// Woodward–Colella blast wave between reflecting walls, up to `t = 0.04`.
pub fn blast_wave(n_cells: usize, reconstruction: Reconstruction) -> Result<Setup, SpatialError> {
    let grid = Grid1D::new(n_cells, 0.0, 1.0, reconstruction)?;
    let problem = SemiDiscreteProblem::new(
        grid,
        reconstruction,
        Physics::Euler { gamma: EULER_GAMMA },
        Boundary::Reflecting,
        Boundary::Reflecting,
    )?;
    let mut initial = vec![0.0; 3 * n_cells];
    for i in 0..n_cells {
        let x = grid.center(i);
        let pressure = if x < 0.1 {
            1000.0
        } else if x < 0.9 {
            0.01
        } else {
            100.0
        };
        let u = Primitive {
            density: 1.0,
            velocity: 0.0,
            pressure,
        }
        .to_conserved(EULER_GAMMA);
        for c in 0..3 {
            initial[c * n_cells + i] = u[c];
        }
    }
    Ok(Setup {
        name: "blastwave",
        problem,
        initial,
        t_final: 0.04,
    })
}

/// Look a problem up by name.
pub fn by_name(name: &str, n_cells: usize, reconstruction: Reconstruction) -> Option<Result<Setup, SpatialError>> {
    match name {
        "advection" => Some(advection(n_cells, reconstruction)),
        "burgers" => Some(burgers(n_cells, reconstruction)),
        "blastwave" => Some(blast_wave(n_cells, reconstruction)),
        _ => None,
    }
}
