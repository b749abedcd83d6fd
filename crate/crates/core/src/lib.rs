//! Strong-stability-preserving explicit linear multistep methods with
//! variable step size.
//!
//! - [`formula`]: optimal second- and third-order formulae for a given
//!   step-size history, SSP coefficients, order conditions and optimality
//!   certificates.
//! - [`controller`]: greedy step-size rules and admissibility checks.
//! - [`integrator`]: the full time-stepping algorithms (SSP RK2 start-up
//!   followed by the multistep main loop).
//! - [`spatial`]: 1D finite-volume semi-discretizations (advection, Burgers,
//!   Euler) with MC-limited and WENO5 reconstructions.
//! - [`diagnostics`]: error norms, total variation, convergence tables and
//!   the efficiency ratio.

pub mod extended;
pub mod controller;
pub mod formula;

pub use extended::Extended;
pub mod diagnostics;
pub mod integrator;
pub mod spatial;
