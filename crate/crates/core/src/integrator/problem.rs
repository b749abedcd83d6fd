use crate::spatial::{h_fe_from_speed, SemiDiscreteProblem, SpatialError};
use crate::Extended;

/// Right-hand side together with the forward-Euler step size at that state.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub rhs: Vec<f64>,
    pub h_fe: Extended,
}

/// A semi-discrete system `u' = f(t, u)` that reports `h_FE(u)`.
pub trait SemiDiscrete {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn evaluate(&self, t: f64, u: &[f64], cfl_fe: f64) -> Result<Evaluation, SpatialError>;

    /// Convex functional the spatial operator keeps non-increasing under
    /// forward Euler (total variation for the finite-volume problems).
    fn monotone_functional(&self, u: &[f64]) -> f64;
}

impl SemiDiscrete for SemiDiscreteProblem {
    fn len(&self) -> usize {
        SemiDiscreteProblem::len(self)
    }

    fn evaluate(&self, t: f64, u: &[f64], cfl_fe: f64) -> Result<Evaluation, SpatialError> {
        let (rhs, a_max) = self.rhs(t, u)?;
        Ok(Evaluation {
            rhs,
            h_fe: h_fe_from_speed(cfl_fe, self.grid.dx, a_max),
        })
    }

    fn monotone_functional(&self, u: &[f64]) -> f64 {
        self.total_variation(u)
    }
}

/// Closure-backed system with a fixed `h_FE` and the max norm as functional.
pub struct FnProblem<F> {
    len: usize,
    f: F,
    h_fe: Extended,
}

impl<F: Fn(f64, &[f64]) -> Vec<f64>> FnProblem<F> {
    pub fn new(len: usize, f: F, h_fe: Extended) -> Self {
        Self { len, f, h_fe }
    }
}

impl<F: Fn(f64, &[f64]) -> Vec<f64>> SemiDiscrete for FnProblem<F> {
    fn len(&self) -> usize {
        self.len
    }

    fn evaluate(&self, t: f64, u: &[f64], _cfl_fe: f64) -> Result<Evaluation, SpatialError> {
        Ok(Evaluation {
            rhs: (self.f)(t, u),
            h_fe: self.h_fe,
        })
    }

    fn monotone_functional(&self, u: &[f64]) -> f64 {
        u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
