//! Self-similar rotating flow with a one-point vacuum (critical rotation).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::PrimitiveState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurricaneExact {
    /// Entropy constant in `p = A rho^gamma`.
    pub a: f64,
    pub v0: f64,
    pub rho0: f64,
    pub gamma: f64,
}

impl HurricaneExact {
    pub const GAMMA: f64 = 2.0;

    /// Exact formulas exist only for `v0 = sqrt(2) c0` with `gamma = 2`.
    pub fn new(a: f64, v0: f64, rho0: f64) -> Result<Self> {
        let h = HurricaneExact {
            a,
            v0,
            rho0,
            gamma: Self::GAMMA,
        };
        if !(a > 0.0 && rho0 > 0.0) {
            return Err(Error::Config("hurricane needs A > 0 and rho0 > 0".into()));
        }
        let critical = 2f64.sqrt() * h.sound_speed0();
        if (v0 - critical).abs() > 1e-12 * critical {
            return Err(Error::Unsupported(format!(
                "exact hurricane solution requires v0 = sqrt(2) c0 = {critical}, got {v0}"
            )));
        }
        Ok(h)
    }

    /// `p'(rho0) = gamma A rho0^(gamma - 1)`.
    pub fn dp_drho0(&self) -> f64 {
        self.gamma * self.a * self.rho0.powf(self.gamma - 1.0)
    }

    pub fn sound_speed0(&self) -> f64 {
        self.dp_drho0().sqrt()
    }

    /// Radius separating the near field from the far field.
    pub fn matching_radius(&self, t: f64) -> f64 {
        2.0 * t * self.sound_speed0()
    }

    pub fn sample(&self, x: f64, y: f64, t: f64) -> PrimitiveState {
        let dp = self.dp_drho0();
        let r = (x * x + y * y).sqrt();
        if r < self.matching_radius(t) {
            let rho = r * r / (8.0 * self.a * t * t);
            PrimitiveState::new(rho, (x + y) / (2.0 * t), (-x + y) / (2.0 * t), self.a * rho.powf(self.gamma))
        } else {
            let p = self.a * self.rho0.powf(self.gamma);
            if r == 0.0 {
                return PrimitiveState::new(self.rho0, 0.0, 0.0, p);
            }
            let (c, s) = (x / r, y / r);
            let root = (2.0 * dp).sqrt() * (r * r - 2.0 * t * t * dp).sqrt();
            let u = (2.0 * t * dp * c + root * s) / r;
            let v = (2.0 * t * dp * s - root * c) / r;
            PrimitiveState::new(self.rho0, u, v, p)
        }
    }
}
