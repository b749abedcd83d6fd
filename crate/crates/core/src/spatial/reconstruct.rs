//! Cell-interface reconstructions.

/// Jiang–Shu regularization of the WENO5 smoothness indicators.
pub const WENO_EPSILON: f64 = 1e-6;

fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

/// Monotonized-central limited slope of the middle cell of `window`.
pub fn mc_reconstruct(window: [f64; 3]) -> f64 {
    let [um, u0, up] = window;
    minmod3(2.0 * (u0 - um), 2.0 * (up - u0), 0.5 * (up - um))
}

/// WENO5 value at the right face of the centre cell, biased to the left.
fn weno5_right_face(v: [f64; 5]) -> f64 {
    let q0 = (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0;
    let q1 = (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0;
    let q2 = (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0;

    let b0 = 13.0 / 12.0 * (v[0] - 2.0 * v[1] + v[2]).powi(2)
        + 0.25 * (v[0] - 4.0 * v[1] + 3.0 * v[2]).powi(2);
    let b1 = 13.0 / 12.0 * (v[1] - 2.0 * v[2] + v[3]).powi(2) + 0.25 * (v[1] - v[3]).powi(2);
    let b2 = 13.0 / 12.0 * (v[2] - 2.0 * v[3] + v[4]).powi(2)
        + 0.25 * (3.0 * v[2] - 4.0 * v[3] + v[4]).powi(2);

    let a0 = 0.1 / (WENO_EPSILON + b0).powi(2);
    let a1 = 0.6 / (WENO_EPSILON + b1).powi(2);
    let a2 = 0.3 / (WENO_EPSILON + b2).powi(2);
    (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)
}

/// WENO5 (Jiang–Shu) interface values of the centre cell of `window`:
/// `(left face, right face)`.
pub fn weno5_reconstruct(window: [f64; 5]) -> (f64, f64) {
    let right = weno5_right_face(window);
    let [a, b, c, d, e] = window;
    let left = weno5_right_face([e, d, c, b, a]);
    (left, right)
}
