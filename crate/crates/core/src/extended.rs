//! Non-negative reals extended with a `+∞` sentinel.

use std::cmp::Ordering;
use std::fmt;

/// A non-negative real number or an unbounded value.
///
/// Used for SSP coefficients whose constraint set is all of `R+`, for the
/// forward-Euler step size of a state with zero wave speed, and for the
/// `r` quantities of the third-order certificate that are undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Unbounded,
}

impl Extended {
    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Unbounded => None,
        }
    }

    /// Replace an unbounded value by `cap`; finite values above `cap` are clipped too.
    pub fn capped(self, cap: f64) -> f64 {
        match self {
            Extended::Finite(v) => v.min(cap),
            Extended::Unbounded => cap,
        }
    }

    pub fn min(self, other: Extended) -> Extended {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl From<f64> for Extended {
    fn from(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            Extended::Unbounded
        } else {
            Extended::Finite(v)
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
            (Extended::Finite(_), Extended::Unbounded) => Some(Ordering::Less),
            (Extended::Unbounded, Extended::Finite(_)) => Some(Ordering::Greater),
            (Extended::Unbounded, Extended::Unbounded) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Unbounded => f.write_str("inf"),
        }
    }
}
