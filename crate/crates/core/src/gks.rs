//! Second-order gas-kinetic (BGK) interface flux.
//!
//! All moments are taken with respect to a Maxwellian normalised to unit
//! density: `<.>` below means `(1/rho) * integral(. g dXi)`. The flux is
//! evaluated in the interface-normal frame: `u` is the normal velocity and the
//! momentum component `mx` of the states is normal to the interface.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Location, Result};
use crate::state::{ConservedState, GasModel};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Equilibrium distribution parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellianState {
    pub rho: f64,
    /// `rho / (2 p)`.
    pub lam: f64,
    pub u: f64,
    pub v: f64,
    pub k_internal: f64,
}

impl MaxwellianState {
    pub fn from_conserved(w: &ConservedState, gas: &GasModel) -> Result<Self> {
        let rho = w.rho;
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Inadmissible {
                location: Location::Unknown,
                rho,
                p: f64::NAN,
            });
        }
        let u = w.mx / rho;
        let v = w.my / rho;
        let internal = w.e - 0.5 * (w.mx * u + w.my * v);
        let lam = (gas.k_internal + 2.0) * rho / (4.0 * internal);
        if !(lam > 0.0) || !lam.is_finite() {
            return Err(Error::Inadmissible {
                location: Location::Unknown,
                rho,
                p: (gas.gamma - 1.0) * internal,
            });
        }
        Ok(MaxwellianState {
            rho,
            lam,
            u,
            v,
            k_internal: gas.k_internal,
        })
    }

    pub fn pressure(&self) -> f64 {
        self.rho / (2.0 * self.lam)
    }

    pub fn moments(&self) -> MomentTable {
        moment_table(self)
    }
}

/// One-dimensional velocity moments `<c^n>` for `n = 0..=6`.
pub type Moments1d = [f64; 7];

/// Closed-form velocity moments of a unit-density Maxwellian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTable {
    pub u_full: Moments1d,
    /// Moments restricted to `u > 0`.
    pub u_pos: Moments1d,
    /// Moments restricted to `u < 0`.
    pub u_neg: Moments1d,
    pub v_full: Moments1d,
    /// `<xi^2>` and `<xi^4>` over the internal degrees of freedom.
    pub xi2: f64,
    pub xi4: f64,
}

#[inline]
fn full_moments(mean: f64, lam: f64) -> Moments1d {
    let mut m = [0.0; 7];
    m[0] = 1.0;
    m[1] = mean;
    let inv = 0.5 / lam;
    for n in 0..5 {
        m[n + 2] = mean * m[n + 1] + (n + 1) as f64 * inv * m[n];
    }
    m
}

/// Moments over `c > 0`. The `c < 0` half of a Maxwellian with mean `U` is the
/// mirror image of the `c > 0` half of one with mean `-U`.
#[inline]
fn positive_half_moments(mean: f64, lam: f64) -> Moments1d {
    let mut m = [0.0; 7];
    let s = lam.sqrt();
    m[0] = 0.5 * libm::erfc(-s * mean);
    m[1] = mean * m[0] + 0.5 * (-lam * mean * mean).exp() / (SQRT_PI * s);
    let inv = 0.5 / lam;
    for n in 0..5 {
        m[n + 2] = mean * m[n + 1] + (n + 1) as f64 * inv * m[n];
    }
    m
}

#[inline]
fn negative_half_moments(mean: f64, lam: f64) -> Moments1d {
    let mut m = positive_half_moments(-mean, lam);
    for n in (1..7).step_by(2) {
        m[n] = -m[n];
    }
    m
}

pub fn moment_table(m: &MaxwellianState) -> MomentTable {
    moment_table_with(m, true, true)
}

/// Moment table with only the requested half-space moments filled in.
fn moment_table_with(m: &MaxwellianState, pos: bool, neg: bool) -> MomentTable {
    let k = m.k_internal;
    MomentTable {
        u_full: full_moments(m.u, m.lam),
        u_pos: if pos { positive_half_moments(m.u, m.lam) } else { [0.0; 7] },
        u_neg: if neg { negative_half_moments(m.u, m.lam) } else { [0.0; 7] },
        v_full: full_moments(m.v, m.lam),
        xi2: 0.5 * k / m.lam,
        xi4: 0.25 * (k * k + 2.0 * k) / (m.lam * m.lam),
    }
}

/// The moment tables needed for one integral: u-moments (full or half), v-moments
/// and the internal-energy moments.
#[derive(Clone, Copy)]
struct Moments<'a> {
    u: &'a Moments1d,
    v: &'a Moments1d,
    xi2: f64,
    xi4: f64,
}

impl MomentTable {
    fn full(&self) -> Moments<'_> {
        Moments {
            u: &self.u_full,
            v: &self.v_full,
            xi2: self.xi2,
            xi4: self.xi4,
        }
    }
    fn pos(&self) -> Moments<'_> {
        Moments {
            u: &self.u_pos,
            v: &self.v_full,
            xi2: self.xi2,
            xi4: self.xi4,
        }
    }
    fn neg(&self) -> Moments<'_> {
        Moments {
            u: &self.u_neg,
            v: &self.v_full,
            xi2: self.xi2,
            xi4: self.xi4,
        }
    }
}

impl Moments<'_> {
    /// `<u^n v^m psi>`.
    #[inline]
    fn psi(&self, n: usize, m: usize) -> [f64; 4] {
        let (u, v) = (self.u, self.v);
        [
            u[n] * v[m],
            u[n + 1] * v[m],
            u[n] * v[m + 1],
            0.5 * (u[n + 2] * v[m] + u[n] * v[m + 2] + u[n] * v[m] * self.xi2),
        ]
    }

    /// `<xi^2 u^n v^m psi>`.
    #[inline]
    fn psi_xi2(&self, n: usize, m: usize) -> [f64; 4] {
        let (u, v) = (self.u, self.v);
        let x2 = self.xi2;
        [
            u[n] * v[m] * x2,
            u[n + 1] * v[m] * x2,
            u[n] * v[m + 1] * x2,
            0.5 * (u[n + 2] * v[m] * x2 + u[n] * v[m + 2] * x2 + u[n] * v[m] * self.xi4),
        ]
    }

    /// `<a u^n v^m psi>` for `a = a1 + a2 u + a3 v + a4 (u^2 + v^2 + xi^2)/2`.
    #[inline]
    fn with_slope(&self, a: &MicroSlope, n: usize, m: usize) -> [f64; 4] {
        let g0 = self.psi(n, m);
        let gu = self.psi(n + 1, m);
        let gv = self.psi(n, m + 1);
        let guu = self.psi(n + 2, m);
        let gvv = self.psi(n, m + 2);
        let gxx = self.psi_xi2(n, m);
        let c = &a.0;
        let mut out = [0.0; 4];
        for k in 0..4 {
            out[k] = c[0] * g0[k] + c[1] * gu[k] + c[2] * gv[k] + 0.5 * c[3] * (guu[k] + gvv[k] + gxx[k]);
        }
        out
    }
}

/// Coefficients of `a = c1 + c2 u + c3 v + c4 (u^2 + v^2 + xi^2)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MicroSlope(pub [f64; 4]);

/// Solves `<a psi> = b` for the microscopic slope `a`, where `b` is a
/// derivative of the conserved variables already divided by the density.
pub fn micro_slope_normalized(b: [f64; 4], m: &MaxwellianState) -> MicroSlope {
    let (u, v, lam, k) = (m.u, m.v, m.lam, m.k_internal);
    let q2 = u * u + v * v;
    let r4 = 4.0 * lam * lam / (k + 2.0)
        * (2.0 * b[3] - 2.0 * u * b[1] - 2.0 * v * b[2] + b[0] * (q2 - (k + 2.0) / (2.0 * lam)));
    let r3 = 2.0 * lam * (b[2] - v * b[0]) - v * r4;
    let r2 = 2.0 * lam * (b[1] - u * b[0]) - u * r4;
    let r1 = b[0] - u * r2 - v * r3 - 0.5 * r4 * (q2 + (k + 2.0) / (2.0 * lam));
    MicroSlope([r1, r2, r3, r4])
}

/// Microscopic slope reproducing the macroscopic derivative `dw` of the state
/// whose equilibrium is `m`.
pub fn micro_slope(dw: &ConservedState, m: &MaxwellianState) -> MicroSlope {
    let inv = 1.0 / m.rho;
    micro_slope_normalized(
        [dw.rho * inv, dw.mx * inv, dw.my * inv, dw.e * inv],
        m,
    )
}

/// `<a psi>`, the (density-normalised) macroscopic vector a slope encodes.
pub fn slope_moments(a: &MicroSlope, table: &MomentTable) -> [f64; 4] {
    table.full().with_slope(a, 0, 0)
}

/// Time coefficient `A` making `<(a1 u + a2 v + A) psi g> = 0`.
fn time_slope(a1: &MicroSlope, a2: &MicroSlope, m: &MaxwellianState, table: &MomentTable) -> MicroSlope {
    let full = table.full();
    let x = full.with_slope(a1, 1, 0);
    let y = full.with_slope(a2, 0, 1);
    micro_slope_normalized([-(x[0] + y[0]), -(x[1] + y[1]), -(x[2] + y[2]), -(x[3] + y[3])], m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionTimeModel {
    pub eps_base: f64,
    pub c_jump: f64,
}

impl Default for CollisionTimeModel {
    fn default() -> Self {
        CollisionTimeModel {
            eps_base: 0.05,
            c_jump: 1.0,
        }
    }
}

/// `tau = eps dt + C |p_l - p_r| / (p_l + p_r) dt`.
pub fn collision_time(p_l: f64, p_r: f64, dt: f64, model: &CollisionTimeModel) -> f64 {
    model.eps_base * dt + model.c_jump * ((p_l - p_r) / (p_l + p_r)).abs() * dt
}

/// Interface conserved state from the compatibility condition: the `u > 0`
/// half of the left equilibrium plus the `u < 0` half of the right one.
pub fn interface_state(
    gl: &MaxwellianState,
    gr: &MaxwellianState,
    gas: &GasModel,
) -> Result<(ConservedState, MaxwellianState)> {
    let tl = moment_table_with(gl, true, false);
    let tr = moment_table_with(gr, false, true);
    interface_state_from_tables(gl, &tl, gr, &tr, gas)
}

fn interface_state_from_tables(
    gl: &MaxwellianState,
    tl: &MomentTable,
    gr: &MaxwellianState,
    tr: &MomentTable,
    gas: &GasModel,
) -> Result<(ConservedState, MaxwellianState)> {
    let a = tl.pos().psi(0, 0);
    let b = tr.neg().psi(0, 0);
    let w0 = ConservedState::new(
        gl.rho * a[0] + gr.rho * b[0],
        gl.rho * a[1] + gr.rho * b[1],
        gl.rho * a[2] + gr.rho * b[2],
        gl.rho * a[3] + gr.rho * b[3],
    );
    let g0 = MaxwellianState::from_conserved(&w0, gas)?;
    Ok((w0, g0))
}

/// Everything the kinetic flux needs at one interface point, in the normal frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxInput {
    pub wl: ConservedState,
    pub wr: ConservedState,
    /// Normal derivatives of the left/right states.
    pub dwl_n: ConservedState,
    pub dwr_n: ConservedState,
    /// Tangential derivatives of the left/right states.
    pub dwl_t: ConservedState,
    pub dwr_t: ConservedState,
    /// Normal and tangential derivatives used by the equilibrium part.
    pub dw0_n: ConservedState,
    pub dw0_t: ConservedState,
}

impl FluxInput {
    /// First-order data: constant states, no slopes.
    pub fn constant(wl: ConservedState, wr: ConservedState) -> Self {
        FluxInput {
            wl,
            wr,
            ..Default::default()
        }
    }
}

/// Time weights of the five distribution terms integrated over `[0, delta]`.
#[derive(Debug, Clone, Copy)]
struct TimeWeights {
    eq: f64,
    eq_slope: f64,
    eq_time: f64,
    init: f64,
    init_slope: f64,
}

fn time_weights(delta: f64, tau: f64) -> TimeWeights {
    if tau <= 0.0 {
        return TimeWeights {
            eq: delta,
            eq_slope: 0.0,
            eq_time: 0.5 * delta * delta,
            init: 0.0,
            init_slope: 0.0,
        };
    }
    let e = (-delta / tau).exp();
    let one_m_e = -(-delta / tau).exp_m1();
    TimeWeights {
        eq: delta - tau * one_m_e,
        eq_slope: -tau * delta * (1.0 + e) + 2.0 * tau * tau * one_m_e,
        eq_time: 0.5 * delta * delta - tau * delta + tau * tau * one_m_e,
        init: tau * one_m_e,
        init_slope: 2.0 * tau * tau * one_m_e - tau * delta * e,
    }
}

/// Flux moments of the pieces of the interface distribution, each already
/// multiplied by the density of the Maxwellian it belongs to.
#[derive(Debug, Clone, Copy)]
struct FluxPieces {
    eq: [f64; 4],
    eq_slope: [f64; 4],
    eq_time: [f64; 4],
    init: [f64; 4],
    init_slope: [f64; 4],
    init_time: [f64; 4],
}

fn flux_pieces(input: &FluxInput, gas: &GasModel) -> Result<FluxPieces> {
    let gl = MaxwellianState::from_conserved(&input.wl, gas)?;
    let gr = MaxwellianState::from_conserved(&input.wr, gas)?;
    let tl = moment_table_with(&gl, true, false);
    let tr = moment_table_with(&gr, false, true);
    let (_, g0) = interface_state_from_tables(&gl, &tl, &gr, &tr, gas)?;
    let t0 = moment_table_with(&g0, false, false);

    let a1 = micro_slope(&input.dw0_n, &g0);
    let a2 = micro_slope(&input.dw0_t, &g0);
    let at = time_slope(&a1, &a2, &g0, &t0);
    let full = t0.full();
    let eq = scale(g0.rho, full.psi(1, 0));
    let eq_slope = scale(g0.rho, add(full.with_slope(&a1, 2, 0), full.with_slope(&a2, 1, 1)));
    let eq_time = scale(g0.rho, full.with_slope(&at, 1, 0));

    let side = |g: &MaxwellianState, t: &MomentTable, half: Moments<'_>, dn: &ConservedState, dt: &ConservedState| {
        let b1 = micro_slope(dn, g);
        let b2 = micro_slope(dt, g);
        let bt = time_slope(&b1, &b2, g, t);
        (
            scale(g.rho, half.psi(1, 0)),
            scale(g.rho, add(half.with_slope(&b1, 2, 0), half.with_slope(&b2, 1, 1))),
            scale(g.rho, half.with_slope(&bt, 1, 0)),
        )
    };
    let (l0, ls, lt) = side(&gl, &tl, tl.pos(), &input.dwl_n, &input.dwl_t);
    let (r0, rs, rt) = side(&gr, &tr, tr.neg(), &input.dwr_n, &input.dwr_t);
    Ok(FluxPieces {
        eq,
        eq_slope,
        eq_time,
        init: add(l0, r0),
        init_slope: add(ls, rs),
        init_time: add(lt, rt),
    })
}

#[inline]
fn add(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

#[inline]
fn scale(s: f64, a: [f64; 4]) -> [f64; 4] {
    [s * a[0], s * a[1], s * a[2], s * a[3]]
}

fn integrate(p: &FluxPieces, delta: f64, tau: f64) -> [f64; 4] {
    let w = time_weights(delta, tau);
    let mut out = [0.0; 4];
    for k in 0..4 {
        let eq = w.eq * p.eq[k] + w.eq_slope * p.eq_slope[k] + w.eq_time * p.eq_time[k];
        // The left and right halves enter as one summed term so that the
        // result does not depend on which side is called "left".
        let init = w.init * p.init[k] - w.init_slope * p.init_slope[k] - tau * w.init * p.init_time[k];
        out[k] = eq + init;
    }
    out
}

/// Time integral of the interface flux over `[0, delta]`.
pub fn time_integrated_flux(input: &FluxInput, gas: &GasModel, tau: f64, delta: f64) -> Result<[f64; 4]> {
    let pieces = flux_pieces(input, gas)?;
    Ok(integrate(&pieces, delta, tau))
}

/// Linear-in-time flux `F + dF/dt (t - t_n)` over one stage.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InterfaceFluxExpansion {
    pub f0: [f64; 4],
    pub ft: [f64; 4],
    /// Integral over the full horizon.
    pub int_full: [f64; 4],
    /// Integral over half the horizon.
    pub int_half: [f64; 4],
}

/// Solves `F h + dF h^2/2 = int_full`, `F h/2 + dF h^2/8 = int_half`.
pub fn flux_expansion(int_half: [f64; 4], int_full: [f64; 4], horizon: f64) -> InterfaceFluxExpansion {
    let mut f0 = [0.0; 4];
    let mut ft = [0.0; 4];
    for k in 0..4 {
        f0[k] = (4.0 * int_half[k] - int_full[k]) / horizon;
        ft[k] = 4.0 * (int_full[k] - 2.0 * int_half[k]) / (horizon * horizon);
    }
    InterfaceFluxExpansion {
        f0,
        ft,
        int_full,
        int_half,
    }
}

/// Collisionless flux of two constant states: the `u > 0` half of the left
/// Maxwellian plus the `u < 0` half of the right one, constant in time.
pub fn free_transport_flux(
    wl: &ConservedState,
    wr: &ConservedState,
    gas: &GasModel,
    horizon: f64,
) -> Result<InterfaceFluxExpansion> {
    let gl = MaxwellianState::from_conserved(wl, gas)?;
    let gr = MaxwellianState::from_conserved(wr, gas)?;
    let tl = moment_table_with(&gl, true, false);
    let tr = moment_table_with(&gr, false, true);
    let f = add(scale(gl.rho, tl.pos().psi(1, 0)), scale(gr.rho, tr.neg().psi(1, 0)));
    Ok(flux_expansion(scale(0.5 * horizon, f), scale(horizon, f), horizon))
}

/// Collision time from the reconstructed pressures, then both time integrals
/// and the linear flux fit over `horizon`. `dt` is the step size entering the
/// collision time.
pub fn gks_flux(
    input: &FluxInput,
    gas: &GasModel,
    model: &CollisionTimeModel,
    dt: f64,
    horizon: f64,
) -> Result<InterfaceFluxExpansion> {
    let pl = input.wl.pressure(gas);
    let pr = input.wr.pressure(gas);
    let tau = collision_time(pl, pr, dt, model);
    let pieces = flux_pieces(input, gas)?;
    let full = integrate(&pieces, horizon, tau);
    let half = integrate(&pieces, 0.5 * horizon, tau);
    Ok(flux_expansion(half, full, horizon))
}

/// Analytic Euler flux in the normal direction.
pub fn euler_flux(w: &ConservedState, gas: &GasModel) -> [f64; 4] {
    let p = w.pressure(gas);
    let u = w.mx / w.rho;
    [w.mx, w.mx * u + p, w.my * u, (w.e + p) * u]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PrimitiveState;

    fn gas() -> GasModel {
        GasModel::new(1.4)
    }

    fn state(rho: f64, u: f64, v: f64, p: f64) -> ConservedState {
        PrimitiveState::new(rho, u, v, p).to_conserved(&gas()).unwrap()
    }

    #[test]
    fn static_gas_lambda() {
        let m = MaxwellianState::from_conserved(&state(1.0, 0.0, 0.0, 1.0), &gas()).unwrap();
        assert!((m.lam - 0.5).abs() < 1e-15);
        let t = moment_table(&m);
        assert_eq!(t.u_full[0], 1.0);
        assert_eq!(t.u_full[1], 0.0);
        assert_eq!(t.u_full[3], 0.0);
        assert_eq!(t.u_full[5], 0.0);
    }

    #[test]
    fn half_moment_of_unit_gaussian() {
        let m = MaxwellianState {
            rho: 1.0,
            lam: 1.0,
            u: 0.0,
            v: 0.0,
            k_internal: 3.0,
        };
        let t = moment_table(&m);
        assert!((t.u_pos[1] - 0.5 / SQRT_PI).abs() < 1e-16);
        assert!((t.u_pos[0] - 0.5).abs() < 1e-16);
    }

    #[test]
    fn moments_reproduce_state() {
        let w = state(2.0, 1.0, -0.3, 0.8);
        let m = MaxwellianState::from_conserved(&w, &gas()).unwrap();
        let t = moment_table(&m);
        let psi = t.full().psi(0, 0);
        let back = [m.rho * psi[0], m.rho * psi[1], m.rho * psi[2], m.rho * psi[3]];
        for (a, b) in back.iter().zip(w.to_array()) {
            assert!((a - b).abs() < 1e-14 * b.abs().max(1.0));
        }
    }

    #[test]
    fn collision_time_examples() {
        let model = CollisionTimeModel::default();
        assert!((collision_time(1.0, 1.0, 0.01, &model) - 5e-4).abs() < 1e-18);
        assert!((collision_time(3.0, 1.0, 0.01, &model) - 5.5e-3).abs() < 1e-17);
        let a = collision_time(1.0 + 1e-12, 1.0, 0.01, &model);
        assert!((a - 5e-4).abs() < 1e-14);
    }

    #[test]
    fn expansion_examples() {
        let c = [1.0, -2.0, 0.5, 3.0];
        let b = [0.2, 0.1, -4.0, 1.0];
        let h = 0.01;
        let int = |d: f64| -> [f64; 4] { std::array::from_fn(|k| c[k] * d + 0.5 * b[k] * d * d) };
        let e = flux_expansion(int(0.5 * h), int(h), h);
        for k in 0..4 {
            assert!((e.f0[k] - c[k]).abs() < 1e-12);
            assert!((e.ft[k] - b[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn uniform_state_gives_euler_flux() {
        let g = gas();
        for w in [state(1.0, 0.0, 0.0, 1.0), state(0.5, 1.3, -0.7, 2.0), state(3.0, -2.0, 0.4, 0.1)] {
            let input = FluxInput::constant(w, w);
            let model = CollisionTimeModel::default();
            let e = gks_flux(&input, &g, &model, 0.01, 0.01).unwrap();
            let exact = euler_flux(&w, &g);
            for k in 0..4 {
                assert!((e.f0[k] - exact[k]).abs() < 1e-12 * (1.0 + exact[k].abs()), "{k}");
                assert!(e.ft[k].abs() < 1e-9);
            }
        }
    }

    #[test]
    fn interface_state_of_equal_and_mirror_states() {
        let g = gas();
        let w = state(1.2, 0.4, 0.1, 0.9);
        let m = MaxwellianState::from_conserved(&w, &g).unwrap();
        let (w0, _) = interface_state(&m, &m, &g).unwrap();
        for (a, b) in w0.to_array().iter().zip(w.to_array()) {
            assert!((a - b).abs() < 1e-14);
        }
        let l = MaxwellianState::from_conserved(&state(1.2, 0.4, 0.1, 0.9), &g).unwrap();
        let r = MaxwellianState::from_conserved(&state(1.2, -0.4, 0.1, 0.9), &g).unwrap();
        let (w0, _) = interface_state(&l, &r, &g).unwrap();
        assert_eq!(w0.mx, 0.0);
    }
}
