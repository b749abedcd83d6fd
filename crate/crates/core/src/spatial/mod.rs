//! One-dimensional finite-volume semi-discretizations `u' = L(t, u)`.
//!
//! States are stored component-major: component `c` of cell `i` lives at
//! `u[c * n_cells + i]`. Every right-hand side evaluation also reports the
//! largest characteristic speed, from which the forward-Euler step size
//! `h_FE = cfl_FE · dx / a_max` follows.

pub mod euler;
mod reconstruct;
pub mod setups;

pub use reconstruct::{mc_reconstruct, weno5_reconstruct, WENO_EPSILON};
pub use setups::{by_name, Setup, PROBLEM_NAMES};

use std::f64::consts::PI;

use thiserror::Error;

use crate::Extended;
use euler::Primitive;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpatialError {
    #[error("non-physical state in cell {cell}: density {density}, pressure {pressure}")]
    NonPhysicalState {
        cell: usize,
        density: f64,
        pressure: f64,
    },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("state has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reconstruction {
    /// Piecewise linear with the monotonized-central limiter (TVD).
    Mc,
    /// Fifth-order WENO.
    Weno5,
}

impl Reconstruction {
    pub fn ghost_cells(self) -> usize {
        match self {
            Reconstruction::Mc => 2,
            Reconstruction::Weno5 => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n_cells: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub dx: f64,
    pub ghost: usize,
}

impl Grid1D {
    pub fn new(n_cells: usize, x_lo: f64, x_hi: f64, reconstruction: Reconstruction) -> Result<Self, SpatialError> {
        let ghost = reconstruction.ghost_cells();
        if n_cells < ghost {
            return Err(SpatialError::InvalidGrid(format!(
                "{n_cells} cells is fewer than the {ghost} ghost cells"
            )));
        }
        if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(SpatialError::InvalidGrid(format!("bad interval [{x_lo}, {x_hi}]")));
        }
        Ok(Self {
            n_cells,
            x_lo,
            x_hi,
            dx: (x_hi - x_lo) / n_cells as f64,
            ghost,
        })
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_lo + (i as f64 + 0.5) * self.dx
    }

    /// Cell edges `(x_{i-1/2}, x_{i+1/2})`.
    pub fn edges(&self, i: usize) -> (f64, f64) {
        (
            self.x_lo + i as f64 * self.dx,
            self.x_lo + (i + 1) as f64 * self.dx,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Solid wall: mirrored state with the velocity reversed.
    Reflecting,
    /// Zero-gradient extrapolation.
    Outflow,
}

/// Advection velocity `a(t) = mean + amplitude · sin(2π · frequency · t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedProfile {
    pub mean: f64,
    pub amplitude: f64,
    pub frequency: f64,
}

impl SpeedProfile {
    pub fn constant(a: f64) -> Self {
        Self {
            mean: a,
            amplitude: 0.0,
            frequency: 0.0,
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        self.mean + self.amplitude * (2.0 * PI * self.frequency * t).sin()
    }

    /// `∫_0^t a(s) ds`, the displacement of a characteristic.
    pub fn displacement(&self, t: f64) -> f64 {
        if self.amplitude == 0.0 || self.frequency == 0.0 {
            return self.mean * t;
        }
        let w = 2.0 * PI * self.frequency;
        self.mean * t - self.amplitude / w * ((w * t).cos() - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Physics {
    Advection(SpeedProfile),
    Burgers,
    Euler { gamma: f64 },
}

impl Physics {
    pub fn n_components(&self) -> usize {
        match self {
            Physics::Euler { .. } => 3,
            _ => 1,
        }
    }

    /// Sign applied to component `c` in a reflecting ghost cell.
    fn reflection_sign(&self, c: usize) -> f64 {
        match self {
            Physics::Advection(_) => 1.0,
            Physics::Burgers => -1.0,
            Physics::Euler { .. } => {
                if c == 1 {
                    -1.0
                } else {
                    1.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiDiscreteProblem {
    pub grid: Grid1D,
    pub reconstruction: Reconstruction,
    pub physics: Physics,
    pub left: Boundary,
    pub right: Boundary,
}

impl SemiDiscreteProblem {
    pub fn new(
        grid: Grid1D,
        reconstruction: Reconstruction,
        physics: Physics,
        left: Boundary,
        right: Boundary,
    ) -> Result<Self, SpatialError> {
        if grid.ghost != reconstruction.ghost_cells() {
            return Err(SpatialError::InvalidGrid(format!(
                "grid has {} ghost cells, reconstruction needs {}",
                grid.ghost,
                reconstruction.ghost_cells()
            )));
        }
        if (left == Boundary::Periodic) != (right == Boundary::Periodic) {
            return Err(SpatialError::InvalidGrid(
                "periodic boundaries must be used on both sides".into(),
            ));
        }
        Ok(Self {
            grid,
            reconstruction,
            physics,
            left,
            right,
        })
    }

    pub fn n_components(&self) -> usize {
        self.physics.n_components()
    }

    pub fn len(&self) -> usize {
        self.n_components() * self.grid.n_cells
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_periodic(&self) -> bool {
        self.left == Boundary::Periodic
    }

    fn validate(&self, u: &[f64]) -> Result<(), SpatialError> {
        if u.len() != self.len() {
            return Err(SpatialError::WrongLength {
                expected: self.len(),
                found: u.len(),
            });
        }
        if let Some(index) = u.iter().position(|v| !v.is_finite()) {
            return Err(SpatialError::NonFinite { index });
        }
        if let Physics::Euler { gamma } = self.physics {
            let n = self.grid.n_cells;
            for cell in 0..n {
                let p = Primitive::from_conserved([u[cell], u[n + cell], u[2 * n + cell]], gamma);
                if !p.is_physical() {
                    return Err(SpatialError::NonPhysicalState {
                        cell,
                        density: p.density,
                        pressure: p.pressure,
                    });
                }
            }
        }
        Ok(())
    }

    /// Largest characteristic speed over the cells at time `t`.
    pub fn max_wave_speed(&self, t: f64, u: &[f64]) -> Result<f64, SpatialError> {
        self.validate(u)?;
        Ok(self.wave_speed_unchecked(t, u))
    }

    fn wave_speed_unchecked(&self, t: f64, u: &[f64]) -> f64 {
        let n = self.grid.n_cells;
        match self.physics {
            Physics::Advection(a) => a.at(t).abs(),
            Physics::Burgers => u.iter().fold(0.0, |m, v| m.max(v.abs())),
            Physics::Euler { gamma } => (0..n)
                .map(|i| {
                    let p = Primitive::from_conserved([u[i], u[n + i], u[2 * n + i]], gamma);
                    p.velocity.abs() + p.sound_speed(gamma)
                })
                .fold(0.0, f64::max),
        }
    }

    /// Forward-Euler step size `cfl_fe · dx / a_max`; unbounded when nothing moves.
    pub fn h_fe(&self, t: f64, u: &[f64], cfl_fe: f64) -> Result<Extended, SpatialError> {
        let a = self.max_wave_speed(t, u)?;
        Ok(h_fe_from_speed(cfl_fe, self.grid.dx, a))
    }

    /// Semi-discrete right-hand side and the maximum wave speed.
    pub fn rhs(&self, t: f64, u: &[f64]) -> Result<(Vec<f64>, f64), SpatialError> {
        self.validate(u)?;
        let n = self.grid.n_cells;
        let nc = self.n_components();
        let ext = self.extend(u);
        let fluxes = match self.physics {
            Physics::Euler { gamma } => self.euler_fluxes(&ext, gamma),
            _ => self.scalar_fluxes(t, &ext),
        };
        // fluxes[c * (n + 1) + j] is the flux through the left face of cell j.
        let mut du = vec![0.0; nc * n];
        let inv_dx = 1.0 / self.grid.dx;
        for c in 0..nc {
            let f = &fluxes[c * (n + 1)..(c + 1) * (n + 1)];
            for i in 0..n {
                du[c * n + i] = -(f[i + 1] - f[i]) * inv_dx;
            }
        }
        Ok((du, self.wave_speed_unchecked(t, u)))
    }

    /// Component-major copy of `u` padded with ghost cells on both sides.
    fn extend(&self, u: &[f64]) -> Vec<f64> {
        let n = self.grid.n_cells;
        let g = self.grid.ghost;
        let m = n + 2 * g;
        let nc = self.n_components();
        let mut ext = vec![0.0; nc * m];
        for c in 0..nc {
            let src = &u[c * n..(c + 1) * n];
            let dst = &mut ext[c * m..(c + 1) * m];
            dst[g..g + n].copy_from_slice(src);
            let sign = self.physics.reflection_sign(c);
            for j in 0..g {
                dst[g - 1 - j] = match self.left {
                    Boundary::Periodic => src[n - 1 - j],
                    Boundary::Reflecting => sign * src[j],
                    Boundary::Outflow => src[0],
                };
                dst[g + n + j] = match self.right {
                    Boundary::Periodic => src[j],
                    Boundary::Reflecting => sign * src[n - 1 - j],
                    Boundary::Outflow => src[n - 1],
                };
            }
        }
        ext
    }

    /// Reconstructed `(left face, right face)` values of extended cell `e`.
    fn scalar_faces(&self, v: &[f64], e: usize) -> (f64, f64) {
        match self.reconstruction {
            Reconstruction::Mc => {
                let s = 0.5 * mc_reconstruct([v[e - 1], v[e], v[e + 1]]);
                (v[e] - s, v[e] + s)
            }
            Reconstruction::Weno5 => weno5_reconstruct([v[e - 2], v[e - 1], v[e], v[e + 1], v[e + 2]]),
        }
    }

    fn scalar_fluxes(&self, t: f64, ext: &[f64]) -> Vec<f64> {
        let n = self.grid.n_cells;
        let g = self.grid.ghost;
        // Faces of extended cells g-1 ..= g+n.
        let faces: Vec<(f64, f64)> = (g - 1..=g + n).map(|e| self.scalar_faces(ext, e)).collect();
        let flux = |ul: f64, ur: f64| match self.physics {
            Physics::Advection(a) => {
                let a = a.at(t);
                if a >= 0.0 {
                    a * ul
                } else {
                    a * ur
                }
            }
            _ => burgers_godunov(ul, ur),
        };
        (0..=n).map(|j| flux(faces[j].1, faces[j + 1].0)).collect()
    }

    fn euler_fluxes(&self, ext: &[f64], gamma: f64) -> Vec<f64> {
        let n = self.grid.n_cells;
        let g = self.grid.ghost;
        let m = n + 2 * g;
        let cell = |e: usize| [ext[e], ext[m + e], ext[2 * m + e]];
        let prim: Vec<Primitive> = (0..m).map(|e| Primitive::from_conserved(cell(e), gamma)).collect();
        let mut out = vec![0.0; 3 * (n + 1)];
        for j in 0..=n {
            // Interface between extended cells a = g+j-1 and b = g+j.
            let a = g + j - 1;
            let b = a + 1;
            let (left, right) = match self.reconstruction {
                Reconstruction::Mc => (mc_primitive(&prim, a, 1.0), mc_primitive(&prim, b, -1.0)),
                Reconstruction::Weno5 => weno_characteristic(&cell, &prim, a, gamma),
            };
            // First-order fallback where the reconstruction is not physical.
            let left = if left.is_physical() { left } else { prim[a] };
            let right = if right.is_physical() { right } else { prim[b] };
            let f = euler::hll_flux(left, right, gamma);
            for c in 0..3 {
                out[c * (n + 1) + j] = f[c];
            }
        }
        out
    }

    /// Total variation used as the monotone functional. For systems it is the
    /// variation of the characteristic variables linearized at the domain mean.
    pub fn total_variation(&self, u: &[f64]) -> f64 {
        let n = self.grid.n_cells;
        let periodic = self.is_periodic();
        match self.physics {
            Physics::Euler { gamma } => {
                let mean: [f64; 3] = std::array::from_fn(|c| u[c * n..(c + 1) * n].iter().sum::<f64>() / n as f64);
                let reference = Primitive::from_conserved(mean, gamma);
                let (_, l) = euler::eigenvectors(reference, gamma);
                let w: Vec<[f64; 3]> = (0..n)
                    .map(|i| euler::mat_vec(&l, [u[i], u[n + i], u[2 * n + i]]))
                    .collect();
                (0..3)
                    .map(|c| {
                        let comp: Vec<f64> = w.iter().map(|x| x[c]).collect();
                        crate::diagnostics::total_variation(&comp, periodic)
                    })
                    .sum()
            }
            _ => crate::diagnostics::total_variation(u, periodic),
        }
    }
}

pub fn h_fe_from_speed(cfl_fe: f64, dx: f64, a_max: f64) -> Extended {
    if a_max > 0.0 {
        Extended::Finite(cfl_fe * dx / a_max)
    } else {
        Extended::Unbounded
    }
}

/// Exact Riemann (Godunov) flux for `f(u) = u²/2`.
pub fn burgers_godunov(ul: f64, ur: f64) -> f64 {
    let f = |u: f64| 0.5 * u * u;
    if ul <= ur {
        if ul > 0.0 {
            f(ul)
        } else if ur < 0.0 {
            f(ur)
        } else {
            0.0
        }
    } else if ul + ur > 0.0 {
        f(ul)
    } else {
        f(ur)
    }
}

/// MC-limited primitive value at the face of cell `e` (`side = 1` right, `-1` left).
fn mc_primitive(prim: &[Primitive], e: usize, side: f64) -> Primitive {
    let (a, b, c) = (prim[e - 1], prim[e], prim[e + 1]);
    let face = |x: [f64; 3]| x[1] + side * 0.5 * mc_reconstruct(x);
    Primitive {
        density: face([a.density, b.density, c.density]),
        velocity: face([a.velocity, b.velocity, c.velocity]),
        pressure: face([a.pressure, b.pressure, c.pressure]),
    }
}

/// WENO5 states on both sides of the interface right of extended cell `a`,
/// reconstructed in the characteristic fields of the interface state.
fn weno_characteristic(
    cell: &dyn Fn(usize) -> [f64; 3],
    prim: &[Primitive],
    a: usize,
    gamma: f64,
) -> (Primitive, Primitive) {
    let mid = euler::interface_state(prim[a], prim[a + 1]);
    let (r, l) = euler::eigenvectors(mid, gamma);
    let w: Vec<[f64; 3]> = (a - 2..=a + 3).map(|e| euler::mat_vec(&l, cell(e))).collect();
    let mut wl = [0.0; 3];
    let mut wr = [0.0; 3];
    for c in 0..3 {
        let s: [f64; 6] = std::array::from_fn(|i| w[i][c]);
        wl[c] = weno5_reconstruct([s[0], s[1], s[2], s[3], s[4]]).1;
        wr[c] = weno5_reconstruct([s[1], s[2], s[3], s[4], s[5]]).0;
    }
    (
        Primitive::from_conserved(euler::mat_vec(&r, wl), gamma),
        Primitive::from_conserved(euler::mat_vec(&r, wr), gamma),
    )
}
