use super::FormulaError;
use crate::extended::Extended;

/// Cubic whose real root bounds the SSP coefficient when the optimal formula
/// uses `β_j, β_{j+1}, β_{k-1}`:
///
/// `P(x) = ΔaΔb x³ - (ΔaΔb + Δa + Δb) x² + 2(Δa + Δb + 1) x - 6`.
fn eval(da: f64, db: f64, x: f64) -> (f64, f64) {
    let c3 = da * db;
    let c2 = -(da * db + da + db);
    let c1 = 2.0 * (da + db + 1.0);
    let value = ((c3 * x + c2) * x + c1) * x - 6.0;
    let slope = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    (value, slope)
}

/// True when the cubic has a unique real root.
pub(crate) fn has_unique_root(da: f64, db: f64) -> bool {
    db * db - (da + 1.0) * db + 3.0 * da > 0.0 || da < 5.0 + 2.0 * 6f64.sqrt()
}

/// Unique real root of the cubic for `Δ_j = da`, `Δ_{j+1} = db`, or
/// [`Extended::Unbounded`] when uniqueness fails.
///
/// Requires `1 < db < da`. Every real root is positive and `P(0) = -6`, so
/// the root is bracketed in `(0, x_hi)` for `x_hi` grown until `P(x_hi) > 0`;
/// bisection then narrows the bracket and Newton polishes inside it.
pub fn cubic_root(da: f64, db: f64) -> Result<Extended, FormulaError> {
    if !(1.0 < db && db < da) || !da.is_finite() {
        return Err(FormulaError::Domain(format!(
            "cubic root needs 1 < Delta_(j+1) < Delta_j, got Delta_j = {da}, Delta_(j+1) = {db}"
        )));
    }
    if !has_unique_root(da, db) {
        return Ok(Extended::Unbounded);
    }

    let mut lo = 0.0;
    let mut hi = 6.0 / (2.0 * (da + db + 1.0));
    while eval(da, db, hi).0 <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(da, db, mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-6 * hi {
            break;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let (value, slope) = eval(da, db, x);
        if value == 0.0 {
            break;
        }
        if value < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - value / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 1e-16 * x || hi - lo <= 4.0 * f64::EPSILON * x {
            break;
        }
    }
    Ok(Extended::Finite(x))
}
