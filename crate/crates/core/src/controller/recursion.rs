//! The scaled greedy recursion `τ_n = S / (A + S)`, `S = Σ_{j=1}^{k-1} τ_{n-j}`.
//!
//! With `τ_n = h_n / μ` and constant `μ` this is exactly the greedy step-size
//! rule (`A = 1` for second order, `A = 2` for third order). Its limit is `0`
//! when `k - 1 <= A` and `(k - 1 - A)/(k - 1)` otherwise.
//!
//! Transients can be long and sensitive to rounding, so the recursion is
//! generic over the scalar type; [`Wide`] gives 128-bit binary precision.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

use super::ControllerError;

/// Binary floating point with [`WIDE_PRECISION`] bits, rounding half to even.
pub type Wide = FBig<HalfEven, 2>;

pub const WIDE_PRECISION: usize = 128;

/// Declared converged after this many consecutive iterates within [`LIMIT_TOLERANCE`].
pub const LIMIT_RUN: usize = 50;
pub const LIMIT_TOLERANCE: f64 = 1e-10;

pub trait RecursionScalar: Clone + PartialOrd {
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;

    fn from_ratio(num: f64, den: f64) -> Self {
        Self::from_f64(num).div(&Self::from_f64(den))
    }
}

impl RecursionScalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

impl RecursionScalar for Wide {
    fn from_f64(v: f64) -> Self {
        // Exact conversion; the value is then widened so arithmetic rounds at 128 bits.
        Wide::try_from(v)
            .expect("finite input")
            .with_precision(WIDE_PRECISION)
            .value()
    }
    fn to_f64(&self) -> f64 {
        self.to_f64().value()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauLimit {
    Zero,
    Positive(f64),
}

impl TauLimit {
    pub fn value(self) -> f64 {
        match self {
            TauLimit::Zero => 0.0,
            TauLimit::Positive(v) => v,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TauRun<T> {
    /// `τ_1, …, τ_{n_max}` (starting values included).
    pub values: Vec<T>,
    pub limit: TauLimit,
    /// First 1-based index from which [`LIMIT_RUN`] consecutive iterates lie
    /// within [`LIMIT_TOLERANCE`] of the limit.
    pub converged_at: Option<usize>,
}

/// Iterate the recursion from `k - 1 = initial.len()` starting values up to
/// `n_max` terms in total.
pub fn tau_recursion<T: RecursionScalar>(initial: &[T], a: &T, n_max: usize) -> Result<TauRun<T>, ControllerError> {
    let zero = T::from_f64(0.0);
    if initial.len() < 2 {
        return Err(ControllerError::Domain(format!(
            "need at least two starting values (k >= 3), got {}",
            initial.len()
        )));
    }
    if initial.iter().any(|t| *t < zero) {
        return Err(ControllerError::Domain("starting values must be non-negative".into()));
    }
    if !(*a > zero) {
        return Err(ControllerError::Domain("A must be positive".into()));
    }
    let window = initial.len();
    let window_sum = |vals: &[T]| {
        let n = vals.len();
        (2..=window).fold(vals[n - 1].clone(), |acc, j| acc.add(&vals[n - j]))
    };
    if !(window_sum(initial) > zero) {
        return Err(ControllerError::Domain("starting values must have a positive sum".into()));
    }

    let mut values: Vec<T> = initial.to_vec();
    values.reserve(n_max.saturating_sub(window));
    while values.len() < n_max {
        let sum = window_sum(&values);
        values.push(sum.div(&a.add(&sum)));
    }

    let km1 = window as f64;
    let a_f = a.to_f64();
    let limit = if km1 <= a_f {
        TauLimit::Zero
    } else {
        TauLimit::Positive((km1 - a_f) / km1)
    };
    let target = limit.value();
    let mut streak = 0;
    let mut converged_at = None;
    for (i, v) in values.iter().enumerate() {
        if (v.to_f64() - target).abs() < LIMIT_TOLERANCE {
            streak += 1;
            if streak == LIMIT_RUN {
                converged_at = Some(i + 2 - LIMIT_RUN);
                break;
            }
        } else {
            streak = 0;
        }
    }
    Ok(TauRun {
        values,
        limit,
        converged_at,
    })
}

/// Lengths of the consecutive monotone non-increasing runs of `values`.
pub fn monotone_run_lengths<T: PartialOrd>(values: &[T]) -> Vec<usize> {
    let mut runs = Vec::new();
    if values.is_empty() {
        return runs;
    }
    let mut len = 1;
    for pair in values.windows(2) {
        if pair[1] <= pair[0] {
            len += 1;
        } else {
            runs.push(len);
            len = 1;
        }
    }
    runs.push(len);
    runs
}
