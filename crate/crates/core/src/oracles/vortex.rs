//! Isentropic vortex advected by a uniform stream on a periodic box.

use serde::{Deserialize, Serialize};

use crate::state::PrimitiveState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsentropicVortex {
    pub gamma: f64,
    pub strength: f64,
    pub center: (f64, f64),
    pub velocity: (f64, f64),
    /// Periodic box `[x0, x0 + lx] x [y0, y0 + ly]`.
    pub origin: (f64, f64),
    pub period: (f64, f64),
}

impl Default for IsentropicVortex {
    fn default() -> Self {
        IsentropicVortex {
            gamma: 1.4,
            strength: 5.0,
            center: (5.0, 5.0),
            velocity: (1.0, 1.0),
            origin: (0.0, 0.0),
            period: (10.0, 10.0),
        }
    }
}

fn wrap(d: f64, l: f64) -> f64 {
    d - l * (d / l).round()
}

impl IsentropicVortex {
    /// Exact solution: the initial vortex translated by `velocity * t`.
    pub fn sample(&self, x: f64, y: f64, t: f64) -> PrimitiveState {
        let g = self.gamma;
        let dx = wrap(x - self.center.0 - self.velocity.0 * t, self.period.0);
        let dy = wrap(y - self.center.1 - self.velocity.1 * t, self.period.1);
        let r2 = dx * dx + dy * dy;
        let b = self.strength;
        let pi = std::f64::consts::PI;
        let e = (0.5 * (1.0 - r2)).exp();
        let du = -b / (2.0 * pi) * dy * e;
        let dv = b / (2.0 * pi) * dx * e;
        let temp = 1.0 - (g - 1.0) * b * b / (8.0 * g * pi * pi) * e * e;
        let rho = temp.powf(1.0 / (g - 1.0));
        PrimitiveState::new(rho, self.velocity.0 + du, self.velocity.1 + dv, rho.powf(g))
    }
}
