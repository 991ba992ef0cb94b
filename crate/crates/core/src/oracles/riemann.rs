//! Exact solution of the one-dimensional Riemann problem for a polytropic gas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Location, Result};
use crate::state::PrimitiveState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannSolution1D {
    pub left: PrimitiveState,
    pub right: PrimitiveState,
    pub gamma: f64,
    /// Star-region pressure and velocity; zero when `vacuum` is set.
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_l: f64,
    pub rho_star_r: f64,
    pub left_wave: WaveKind,
    pub right_wave: WaveKind,
    /// The data generate a vacuum between two rarefactions.
    pub vacuum: bool,
}

const MAX_ITER: usize = 200;
const TOL: f64 = 1e-12;

fn sound_speed(q: &PrimitiveState, gamma: f64) -> f64 {
    (gamma * q.p / q.rho).sqrt()
}

/// `f_K(p)` for one side and its derivative.
fn side_function(p: f64, q: &PrimitiveState, gamma: f64) -> (f64, f64) {
    if p > q.p {
        let a = 2.0 / ((gamma + 1.0) * q.rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * q.p;
        let s = (a / (p + b)).sqrt();
        ((p - q.p) * s, s * (1.0 - 0.5 * (p - q.p) / (p + b)))
    } else {
        let c = sound_speed(q, gamma);
        let ratio = p / q.p;
        let f = 2.0 * c / (gamma - 1.0) * (ratio.powf((gamma - 1.0) / (2.0 * gamma)) - 1.0);
        let df = ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (q.rho * c);
        (f, df)
    }
}

/// `f(p) = f_L(p) + f_R(p) + u_R - u_L`, increasing in `p`.
pub fn pressure_function(p: f64, left: &PrimitiveState, right: &PrimitiveState, gamma: f64) -> (f64, f64) {
    let (fl, dl) = side_function(p, left, gamma);
    let (fr, dr) = side_function(p, right, gamma);
    (fl + fr + (right.u - left.u), dl + dr)
}

fn check_input(q: &PrimitiveState) -> Result<()> {
    if q.rho > 0.0 && q.p > 0.0 && q.rho.is_finite() && q.p.is_finite() && q.u.is_finite() {
        Ok(())
    } else {
        Err(Error::Inadmissible {
            location: Location::Unknown,
            rho: q.rho,
            p: q.p,
        })
    }
}

/// Solves the Riemann problem with a Newton iteration on `f(p) = 0`,
/// safeguarded by a bracketing interval so every iterate stays in it.
pub fn exact_riemann(left: PrimitiveState, right: PrimitiveState, gamma: f64) -> Result<RiemannSolution1D> {
    check_input(&left)?;
    check_input(&right)?;
    let cl = sound_speed(&left, gamma);
    let cr = sound_speed(&right, gamma);
    let mut sol = RiemannSolution1D {
        left,
        right,
        gamma,
        p_star: 0.0,
        u_star: 0.0,
        rho_star_l: 0.0,
        rho_star_r: 0.0,
        left_wave: WaveKind::Rarefaction,
        right_wave: WaveKind::Rarefaction,
        vacuum: false,
    };
    if 2.0 * (cl + cr) / (gamma - 1.0) <= right.u - left.u {
        sol.vacuum = true;
        return Ok(sol);
    }

    // Bracket: f(0+) < 0 without vacuum; grow the upper end until f > 0.
    let mut lo = 0.0;
    let mut hi = left.p.max(right.p);
    while pressure_function(hi, &left, &right, gamma).0 < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    // Two-rarefaction guess.
    let e = (gamma - 1.0) / (2.0 * gamma);
    let num = cl + cr - 0.5 * (gamma - 1.0) * (right.u - left.u);
    let den = cl / left.p.powf(e) + cr / right.p.powf(e);
    let mut p = (num / den).powf(1.0 / e);
    if !(p > lo && p < hi) {
        p = 0.5 * (lo + hi);
    }

    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let (f, df) = pressure_function(p, &left, &right, gamma);
        residual = f.abs();
        if residual < TOL {
            break;
        }
        if f < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let newton = p - f / df;
        p = if newton > lo && newton < hi && df > 0.0 {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            residual = pressure_function(p, &left, &right, gamma).0.abs();
            break;
        }
    }
    if !(residual < TOL) {
        // Accept round-off limited convergence when the bracket has collapsed.
        if !(hi - lo <= 4.0 * f64::EPSILON * hi) {
            return Err(Error::NoConvergence { residual });
        }
    }

    let (fl, _) = side_function(p, &left, gamma);
    let (fr, _) = side_function(p, &right, gamma);
    sol.p_star = p;
    sol.u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
    let g = (gamma - 1.0) / (gamma + 1.0);
    let star_density = |q: &PrimitiveState| -> (f64, WaveKind) {
        let ratio = p / q.p;
        if p > q.p {
            (q.rho * (ratio + g) / (g * ratio + 1.0), WaveKind::Shock)
        } else {
            (q.rho * ratio.powf(1.0 / gamma), WaveKind::Rarefaction)
        }
    };
    (sol.rho_star_l, sol.left_wave) = star_density(&left);
    (sol.rho_star_r, sol.right_wave) = star_density(&right);
    Ok(sol)
}

impl RiemannSolution1D {
    pub fn sound_speed_l(&self) -> f64 {
        sound_speed(&self.left, self.gamma)
    }

    pub fn sound_speed_r(&self) -> f64 {
        sound_speed(&self.right, self.gamma)
    }

    /// Speed of the left shock (if any).
    pub fn left_shock_speed(&self) -> f64 {
        let g = self.gamma;
        self.left.u - self.sound_speed_l() * ((g + 1.0) / (2.0 * g) * self.p_star / self.left.p + (g - 1.0) / (2.0 * g)).sqrt()
    }

    /// Speed of the right shock (if any).
    pub fn right_shock_speed(&self) -> f64 {
        let g = self.gamma;
        self.right.u + self.sound_speed_r() * ((g + 1.0) / (2.0 * g) * self.p_star / self.right.p + (g - 1.0) / (2.0 * g)).sqrt()
    }

    /// Head and tail speeds of the left rarefaction.
    pub fn left_fan(&self) -> (f64, f64) {
        let c_star = self.sound_speed_l() * (self.p_star / self.left.p).powf((self.gamma - 1.0) / (2.0 * self.gamma));
        (self.left.u - self.sound_speed_l(), self.u_star - c_star)
    }

    /// Head and tail speeds of the right rarefaction.
    pub fn right_fan(&self) -> (f64, f64) {
        let c_star = self.sound_speed_r() * (self.p_star / self.right.p).powf((self.gamma - 1.0) / (2.0 * self.gamma));
        (self.right.u + self.sound_speed_r(), self.u_star + c_star)
    }

    /// Outermost wave speeds `(leftmost, rightmost)`.
    pub fn extreme_speeds(&self) -> (f64, f64) {
        if self.vacuum {
            return (self.left.u - self.sound_speed_l(), self.right.u + self.sound_speed_r());
        }
        let a = match self.left_wave {
            WaveKind::Shock => self.left_shock_speed(),
            WaveKind::Rarefaction => self.left_fan().0,
        };
        let b = match self.right_wave {
            WaveKind::Shock => self.right_shock_speed(),
            WaveKind::Rarefaction => self.right_fan().0,
        };
        (a, b)
    }

    /// Solution at similarity coordinate `xi = (x - x0) / t`. The tangential
    /// velocity is carried by the contact.
    pub fn sample(&self, xi: f64) -> PrimitiveState {
        let g = self.gamma;
        let (l, r) = (self.left, self.right);
        let (cl, cr) = (self.sound_speed_l(), self.sound_speed_r());
        if self.vacuum {
            let tail_l = l.u + 2.0 * cl / (g - 1.0);
            let tail_r = r.u - 2.0 * cr / (g - 1.0);
            return if xi <= l.u - cl {
                l
            } else if xi < tail_l {
                left_fan_state(&l, cl, g, xi)
            } else if xi <= tail_r {
                PrimitiveState::new(0.0, 0.5 * (tail_l + tail_r), 0.0, 0.0)
            } else if xi < r.u + cr {
                right_fan_state(&r, cr, g, xi)
            } else {
                r
            };
        }
        if xi <= self.u_star {
            match self.left_wave {
                WaveKind::Shock => {
                    if xi <= self.left_shock_speed() {
                        l
                    } else {
                        PrimitiveState::new(self.rho_star_l, self.u_star, l.v, self.p_star)
                    }
                }
                WaveKind::Rarefaction => {
                    let (head, tail) = self.left_fan();
                    if xi <= head {
                        l
                    } else if xi >= tail {
                        PrimitiveState::new(self.rho_star_l, self.u_star, l.v, self.p_star)
                    } else {
                        left_fan_state(&l, cl, g, xi)
                    }
                }
            }
        } else {
            match self.right_wave {
                WaveKind::Shock => {
                    if xi >= self.right_shock_speed() {
                        r
                    } else {
                        PrimitiveState::new(self.rho_star_r, self.u_star, r.v, self.p_star)
                    }
                }
                WaveKind::Rarefaction => {
                    let (head, tail) = self.right_fan();
                    if xi >= head {
                        r
                    } else if xi <= tail {
                        PrimitiveState::new(self.rho_star_r, self.u_star, r.v, self.p_star)
                    } else {
                        right_fan_state(&r, cr, g, xi)
                    }
                }
            }
        }
    }

    /// Solution at `(x, t)` for an initial jump at `x0`.
    pub fn sample_at(&self, x: f64, t: f64, x0: f64) -> PrimitiveState {
        if t <= 0.0 {
            return if x < x0 { self.left } else { self.right };
        }
        self.sample((x - x0) / t)
    }
}

fn left_fan_state(l: &PrimitiveState, cl: f64, g: f64, xi: f64) -> PrimitiveState {
    let c = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * (l.u - xi));
    let u = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * l.u + xi);
    let rho = l.rho * (c / cl).powf(2.0 / (g - 1.0));
    let p = l.p * (c / cl).powf(2.0 * g / (g - 1.0));
    PrimitiveState::new(rho, u, l.v, p)
}

fn right_fan_state(r: &PrimitiveState, cr: f64, g: f64, xi: f64) -> PrimitiveState {
    let c = 2.0 / (g + 1.0) * (cr - 0.5 * (g - 1.0) * (r.u - xi));
    let u = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * r.u + xi);
    let rho = r.rho * (c / cr).powf(2.0 / (g - 1.0));
    let p = r.p * (c / cr).powf(2.0 * g / (g - 1.0));
    PrimitiveState::new(rho, u, r.v, p)
}
