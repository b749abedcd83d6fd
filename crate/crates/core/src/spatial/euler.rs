//! Ideal-gas 1D Euler equations in conserved variables `(ρ, ρv, E)`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub density: f64,
    pub velocity: f64,
    pub pressure: f64,
}

impl Primitive {
    pub fn from_conserved(u: [f64; 3], gamma: f64) -> Self {
        let density = u[0];
        let velocity = u[1] / density;
        let pressure = (gamma - 1.0) * (u[2] - 0.5 * density * velocity * velocity);
        Self {
            density,
            velocity,
            pressure,
        }
    }

    pub fn to_conserved(self, gamma: f64) -> [f64; 3] {
        let m = self.density * self.velocity;
        [
            self.density,
            m,
            self.pressure / (gamma - 1.0) + 0.5 * m * self.velocity,
        ]
    }

    pub fn is_physical(&self) -> bool {
        self.density > 0.0 && self.pressure > 0.0 && self.density.is_finite() && self.pressure.is_finite()
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.pressure / self.density).sqrt()
    }

    pub fn flux(&self, gamma: f64) -> [f64; 3] {
        let u = self.to_conserved(gamma);
        [
            u[1],
            u[1] * self.velocity + self.pressure,
            (u[2] + self.pressure) * self.velocity,
        ]
    }
}

/// HLL flux with Davis wave-speed estimates.
pub fn hll_flux(left: Primitive, right: Primitive, gamma: f64) -> [f64; 3] {
    let cl = left.sound_speed(gamma);
    let cr = right.sound_speed(gamma);
    let sl = (left.velocity - cl).min(right.velocity - cr);
    let sr = (left.velocity + cl).max(right.velocity + cr);
    let fl = left.flux(gamma);
    let fr = right.flux(gamma);
    if sl >= 0.0 {
        return fl;
    }
    if sr <= 0.0 {
        return fr;
    }
    let ul = left.to_conserved(gamma);
    let ur = right.to_conserved(gamma);
    let inv = 1.0 / (sr - sl);
    std::array::from_fn(|c| (sr * fl[c] - sl * fr[c] + sl * sr * (ur[c] - ul[c])) * inv)
}

/// Right (columns) and left (rows) eigenvector matrices of the flux Jacobian
/// at state `p`, ordered by eigenvalue `v - c, v, v + c`.
pub fn eigenvectors(p: Primitive, gamma: f64) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let v = p.velocity;
    let c = p.sound_speed(gamma);
    let e = p.to_conserved(gamma)[2];
    let h = (e + p.pressure) / p.density;
    let right = [
        [1.0, 1.0, 1.0],
        [v - c, v, v + c],
        [h - v * c, 0.5 * v * v, h + v * c],
    ];
    let b1 = (gamma - 1.0) / (c * c);
    let b2 = 0.5 * b1 * v * v;
    let left = [
        [0.5 * (b2 + v / c), -0.5 * (b1 * v + 1.0 / c), 0.5 * b1],
        [1.0 - b2, b1 * v, -b1],
        [0.5 * (b2 - v / c), -0.5 * (b1 * v - 1.0 / c), 0.5 * b1],
    ];
    (right, left)
}

pub fn mat_vec(m: &[[f64; 3]; 3], x: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|r| m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2])
}

/// Average of two states in primitive variables, used to linearize at an interface.
pub fn interface_state(a: Primitive, b: Primitive) -> Primitive {
    Primitive {
        density: 0.5 * (a.density + b.density),
        velocity: 0.5 * (a.velocity + b.velocity),
        pressure: 0.5 * (a.pressure + b.pressure),
    }
}
