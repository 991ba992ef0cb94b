//! Two-stage fourth-order time stepping of the finite-volume operator,
//! boundary conditions, time-step control and the gravity source.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Location, Result};
use crate::gks::{self, CollisionTimeModel, FluxInput, InterfaceFluxExpansion, MaxwellianState};
use crate::reconstruction::{self, InterfaceRecon, ReconstructionMode, WenoConfig};
use crate::state::{ConservedState, Field, GasModel, Grid, PrimitiveState, GHOST};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryKind {
    /// Zero-gradient extrapolation.
    Outflow,
    /// Mirror with the normal velocity reversed.
    Reflective,
    /// Prescribed primitive state in every ghost cell.
    Fixed(PrimitiveState),
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConditions {
    pub x_lo: BoundaryKind,
    pub x_hi: BoundaryKind,
    pub y_lo: BoundaryKind,
    pub y_hi: BoundaryKind,
}

impl BoundaryConditions {
    pub fn all(kind: BoundaryKind) -> Self {
        BoundaryConditions {
            x_lo: kind,
            x_hi: kind,
            y_lo: kind,
            y_hi: kind,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let periodic = |k: &BoundaryKind| matches!(k, BoundaryKind::Periodic);
        if periodic(&self.x_lo) != periodic(&self.x_hi) || periodic(&self.y_lo) != periodic(&self.y_hi) {
            return Err(Error::Config("periodic boundaries must come in matched pairs".into()));
        }
        Ok(())
    }
}

/// Right-hand side source term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SourceModel {
    None,
    /// Uniform body force `g` in +y: `S = (0, 0, rho g, rho V g)`.
    Gravity { g: f64 },
}

impl SourceModel {
    pub fn evaluate(&self, w: &ConservedState) -> [f64; 4] {
        match *self {
            SourceModel::None => [0.0; 4],
            SourceModel::Gravity { g } => [0.0, 0.0, w.rho * g, w.my * g],
        }
    }

    /// Time derivative of the source given the full time derivative `dwdt`
    /// of the cell state.
    pub fn time_derivative(&self, dwdt: &[f64; 4]) -> [f64; 4] {
        match *self {
            SourceModel::None => [0.0; 4],
            SourceModel::Gravity { g } => [0.0, 0.0, dwdt[0] * g, dwdt[2] * g],
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, SourceModel::None)
    }
}

/// Numerical-method settings shared by every stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub weno: WenoConfig,
    pub mode: ReconstructionMode,
    pub collision: CollisionTimeModel,
    pub cfl: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            weno: WenoConfig::default(),
            mode: ReconstructionMode::Characteristic,
            collision: CollisionTimeModel::default(),
            cfl: 0.4,
        }
    }
}

/// Writes every ghost cell from the interior according to `bc`.
pub fn fill_ghosts(field: &mut Field, bc: &BoundaryConditions, gas: &GasModel) {
    let g = field.grid;
    let nx = g.nx as isize;
    let gh = GHOST as isize;
    for j in 0..g.ny as isize {
        for k in 0..gh {
            let lo = ghost_value(field, bc.x_lo, gas, (-1 - k, j), (k, j), (nx - 1 - k, j), Axis::X);
            field.set(-1 - k, j, lo);
            let hi = ghost_value(field, bc.x_hi, gas, (nx + k, j), (nx - 1 - k, j), (k, j), Axis::X);
            field.set(nx + k, j, hi);
        }
    }
    if g.is_1d() {
        return;
    }
    let ny = g.ny as isize;
    for i in -gh..nx + gh {
        for k in 0..gh {
            let lo = ghost_value(field, bc.y_lo, gas, (i, -1 - k), (i, k), (i, ny - 1 - k), Axis::Y);
            field.set(i, -1 - k, lo);
            let hi = ghost_value(field, bc.y_hi, gas, (i, ny + k), (i, ny - 1 - k), (i, k), Axis::Y);
            field.set(i, ny + k, hi);
        }
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

fn ghost_value(
    field: &Field,
    kind: BoundaryKind,
    gas: &GasModel,
    ghost: (isize, isize),
    mirror: (isize, isize),
    wrap: (isize, isize),
    axis: Axis,
) -> ConservedState {
    match kind {
        BoundaryKind::Outflow => {
            // Nearest interior cell along the normal.
            let (gi, gj) = ghost;
            let g = field.grid;
            match axis {
                Axis::X => field.get(gi.clamp(0, g.nx as isize - 1), gj),
                Axis::Y => field.get(gi, gj.clamp(0, g.ny as isize - 1)),
            }
        }
        BoundaryKind::Reflective => {
            let mut w = field.get(mirror.0, mirror.1);
            match axis {
                Axis::X => w.mx = -w.mx,
                Axis::Y => w.my = -w.my,
            }
            w
        }
        BoundaryKind::Fixed(q) => q.to_conserved_unchecked(gas),
        BoundaryKind::Periodic => field.get(wrap.0, wrap.1),
    }
}

/// `cfl * min over cells of min(dx / (|u| + c), dy / (|v| + c))`.
pub fn stable_dt(field: &Field, gas: &GasModel, cfl: f64) -> Result<f64> {
    let g = field.grid;
    let mut dt = f64::INFINITY;
    for (i, j, w) in field.interior() {
        let q = w.to_primitive(gas).ok().filter(|q| q.p > 0.0).ok_or_else(|| Error::Inadmissible {
            location: Location::Cell {
                i: i as isize,
                j: j as isize,
            },
            rho: w.rho,
            p: w.pressure(gas),
        })?;
        let c = q.sound_speed(gas);
        dt = dt.min(g.dx / (q.u.abs() + c));
        if !g.is_1d() {
            dt = dt.min(g.dy / (q.v.abs() + c));
        }
    }
    Ok(cfl * dt)
}

/// Counters and per-cell markers of first-order reconstruction fallbacks.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunStats {
    pub fallbacks: u64,
    /// Per interior cell: number of fallbacks on its faces, row-major.
    #[serde(skip)]
    pub fallback_map: Vec<u32>,
}

impl RunStats {
    pub fn new(grid: &Grid) -> Self {
        RunStats {
            fallbacks: 0,
            fallback_map: vec![0; grid.nx * grid.ny],
        }
    }

    fn mark(&mut self, grid: &Grid, i: isize, j: isize) {
        if i >= 0 && j >= 0 && (i as usize) < grid.nx && (j as usize) < grid.ny {
            self.fallback_map[j as usize * grid.nx + i as usize] += 1;
        }
    }
}

/// The semi-discrete operator and its time derivative at every interior cell,
/// plus the net outward boundary flux (rate and its time derivative).
#[derive(Debug, Clone)]
pub struct OperatorOutput {
    pub l: Vec<[f64; 4]>,
    pub lt: Vec<[f64; 4]>,
    pub boundary_out: [f64; 4],
    pub boundary_out_t: [f64; 4],
}

struct SweepResult {
    /// `(nx + 1)` interface fluxes per row, rows `0..ny`.
    fluxes: Vec<InterfaceFluxExpansion>,
    fallbacks: Vec<(isize, isize)>,
}

/// Fluxes through every x-interface of `field` (ghosts must be filled).
fn x_sweep(
    field: &Field,
    gas: &GasModel,
    scheme: &SchemeConfig,
    dt: f64,
    horizon: f64,
    low_order: &(dyn Fn(isize, isize) -> bool + Sync),
) -> Result<SweepResult> {
    let g = field.grid;
    let nx = g.nx;
    let two_d = !g.is_1d();
    let pad = g.padded_nx();
    let row_lo: isize = if two_d { -2 } else { 0 };
    let row_hi: isize = if two_d { g.ny as isize + 2 } else { 1 };

    // Normal reconstruction of every needed row.
    let recon: Vec<Vec<InterfaceRecon>> = (row_lo..row_hi)
        .into_par_iter()
        .map(|j| {
            let start = field.index(-(GHOST as isize), j);
            let cells = &field.raw()[start..start + pad];
            let mut out = Vec::with_capacity(nx + 1);
            reconstruction::reconstruct_line(cells, g.dx, &scheme.weno, scheme.mode, gas, &mut out);
            out
        })
        .collect();

    // Equilibrium interface states along each line, for tangential slopes.
    let w0_lines: Vec<Vec<ConservedState>> = if two_d {
        recon
            .par_iter()
            .map(|row| row.iter().map(|r| line_equilibrium(r, gas)).collect())
            .collect()
    } else {
        Vec::new()
    };

    let rows: Vec<Result<(Vec<InterfaceFluxExpansion>, Vec<(isize, isize)>)>> = (0..g.ny as isize)
        .into_par_iter()
        .map(|j| {
            let mut fluxes = Vec::with_capacity(nx + 1);
            let mut fallbacks = Vec::new();
            let r = (j - row_lo) as usize;
            for k in 0..=nx {
                let here = &recon[r][k];
                let first_order = low_order(k as isize - 1, j) || low_order(k as isize, j);
                if here.fallback || first_order {
                    fallbacks.push((k as isize, j));
                }
                let flux = if first_order {
                    gks::free_transport_flux(&field.get(k as isize - 1, j), &field.get(k as isize, j), gas, horizon)
                } else if two_d {
                    let stencil: [&InterfaceRecon; 5] = std::array::from_fn(|m| &recon[r - 2 + m][k]);
                    let w0s: [ConservedState; 5] = std::array::from_fn(|m| w0_lines[r - 2 + m][k]);
                    let (fl, fb) = gauss_face_flux(&stencil, &w0s, gas, scheme, g.dy, dt, horizon);
                    if fb {
                        fallbacks.push((k as isize, j));
                    }
                    fl
                } else {
                    let input = FluxInput {
                        wl: here.wl,
                        wr: here.wr,
                        dwl_n: here.dwl,
                        dwr_n: here.dwr,
                        dw0_n: here.s1,
                        ..Default::default()
                    };
                    gks::gks_flux(&input, gas, &scheme.collision, dt, horizon)
                };
                let flux = match flux {
                    Err(Error::Inadmissible { .. }) if !first_order => {
                        if fallbacks.last() != Some(&(k as isize, j)) {
                            fallbacks.push((k as isize, j));
                        }
                        gks::free_transport_flux(&field.get(k as isize - 1, j), &field.get(k as isize, j), gas, horizon)
                    }
                    other => other,
                };
                let flux = flux.map_err(|e| {
                    e.at(Location::XFace {
                        i: k as isize - 1,
                        j,
                    })
                })?;
                fluxes.push(flux);
            }
            Ok((fluxes, fallbacks))
        })
        .collect();

    let mut fluxes = Vec::with_capacity((nx + 1) * g.ny);
    let mut fallbacks = Vec::new();
    for row in rows {
        let (f, fb) = row?;
        fluxes.extend(f);
        fallbacks.extend(fb);
    }
    Ok(SweepResult { fluxes, fallbacks })
}

/// Interface state of the line-averaged reconstruction, used only to build
/// tangential derivatives of the equilibrium part.
fn line_equilibrium(r: &InterfaceRecon, gas: &GasModel) -> ConservedState {
    let pair = MaxwellianState::from_conserved(&r.wl, gas)
        .and_then(|gl| MaxwellianState::from_conserved(&r.wr, gas).map(|gr| (gl, gr)));
    match pair.and_then(|(gl, gr)| gks::interface_state(&gl, &gr, gas)) {
        Ok((w0, _)) => w0,
        Err(_) => {
            let a = r.wl.to_array();
            let b = r.wr.to_array();
            ConservedState::from_array(std::array::from_fn(|k| 0.5 * (a[k] + b[k])))
        }
    }
}

/// Two-point Gauss quadrature of the flux along one x-face. Returns the
/// averaged expansion and whether the tangential reconstruction fell back to
/// the line averages.
fn gauss_face_flux(
    stencil: &[&InterfaceRecon; 5],
    w0s: &[ConservedState; 5],
    gas: &GasModel,
    scheme: &SchemeConfig,
    dy: f64,
    dt: f64,
    horizon: f64,
) -> (Result<InterfaceFluxExpansion>, bool) {
    let cfg = &scheme.weno;
    let col = |get: &dyn Fn(&InterfaceRecon) -> ConservedState| -> [[f64; 4]; 5] {
        std::array::from_fn(|m| get(stencil[m]).to_array())
    };
    let (wl, dwl) = (col(&|r| r.wl), col(&|r| r.dwl));
    let (wr, dwr) = (col(&|r| r.wr), col(&|r| r.dwr));
    let s1 = col(&|r| r.s1);
    let w0: [[f64; 4]; 5] = std::array::from_fn(|m| w0s[m].to_array());

    // [lower, upper] Gauss-point data per quantity.
    let mut wl_g = [[0.0; 4]; 2];
    let mut wl_t = [[0.0; 4]; 2];
    let mut wr_g = [[0.0; 4]; 2];
    let mut wr_t = [[0.0; 4]; 2];
    let mut dwl_g = [[0.0; 4]; 2];
    let mut dwr_g = [[0.0; 4]; 2];
    let mut s1_g = [[0.0; 4]; 2];
    let mut w0_t = [[0.0; 4]; 2];
    let pick = |v: &[[f64; 4]; 5], c: usize| [v[0][c], v[1][c], v[2][c], v[3][c], v[4][c]];
    for c in 0..4 {
        // Weights follow the smoothness of the states; the slopes reuse them.
        for (val, dep, out_v, out_t, out_dep) in [
            (&wl, &dwl, &mut wl_g, &mut wl_t, &mut dwl_g),
            (&wr, &dwr, &mut wr_g, &mut wr_t, &mut dwr_g),
        ] {
            let sv = pick(val, c);
            let gw = reconstruction::gauss_weights(&sv, cfg);
            let ((vl, tl), (vu, tu)) = reconstruction::gauss_apply(&sv, &gw, dy);
            let (dl, du) = reconstruction::gauss_apply_values(&pick(dep, c), &gw);
            out_v[0][c] = vl;
            out_v[1][c] = vu;
            out_t[0][c] = tl;
            out_t[1][c] = tu;
            out_dep[0][c] = dl;
            out_dep[1][c] = du;
        }
        let sv = pick(&w0, c);
        let gw = reconstruction::gauss_weights(&sv, cfg);
        let (tl, tu) = reconstruction::gauss_apply_slopes(&sv, &gw, dy);
        let (sl, su) = reconstruction::gauss_apply_values(&pick(&s1, c), &gw);
        w0_t[0][c] = tl;
        w0_t[1][c] = tu;
        s1_g[0][c] = sl;
        s1_g[1][c] = su;
    }
    let cs = ConservedState::from_array;

    let centre = stencil[2];
    let mut fell_back = centre.fallback;
    let mut point = |wl: ConservedState,
                     wr: ConservedState,
                     dwl: ConservedState,
                     dwr: ConservedState,
                     dwl_t: ConservedState,
                     dwr_t: ConservedState,
                     s1: ConservedState,
                     dw0_t: ConservedState| {
        let mut input = FluxInput {
            wl,
            wr,
            dwl_n: dwl,
            dwr_n: dwr,
            dwl_t,
            dwr_t,
            dw0_n: s1,
            dw0_t,
        };
        if !wl.is_admissible(gas) || !wr.is_admissible(gas) {
            fell_back = true;
            input = FluxInput {
                wl: centre.wl,
                wr: centre.wr,
                dwl_n: centre.dwl,
                dwr_n: centre.dwr,
                dw0_n: centre.s1,
                ..Default::default()
            };
        }
        gks::gks_flux(&input, gas, &scheme.collision, dt, horizon)
    };
    let lo = point(cs(wl_g[0]), cs(wr_g[0]), cs(dwl_g[0]), cs(dwr_g[0]), cs(wl_t[0]), cs(wr_t[0]), cs(s1_g[0]), cs(w0_t[0]));
    let hi = point(cs(wl_g[1]), cs(wr_g[1]), cs(dwl_g[1]), cs(dwr_g[1]), cs(wl_t[1]), cs(wr_t[1]), cs(s1_g[1]), cs(w0_t[1]));
    let result = lo.and_then(|a| {
        hi.map(|b| {
            let avg = |x: [f64; 4], y: [f64; 4]| std::array::from_fn(|k| 0.5 * (x[k] + y[k]));
            InterfaceFluxExpansion {
                f0: avg(a.f0, b.f0),
                ft: avg(a.ft, b.ft),
                int_full: avg(a.int_full, b.int_full),
                int_half: avg(a.int_half, b.int_half),
            }
        })
    });
    (result, fell_back)
}

/// Copy of a 2D field with x and y (and the two momenta) exchanged.
fn transposed(field: &Field) -> Field {
    let g = field.grid;
    let tg = Grid {
        nx: g.ny,
        ny: g.nx,
        dx: g.dy,
        dy: g.dx,
        x0: g.y0,
        y0: g.x0,
    };
    let mut t = Field::new(tg);
    let gh = GHOST as isize;
    for j in -gh..g.ny as isize + gh {
        for i in -gh..g.nx as isize + gh {
            t.set(j, i, field.get(i, j).transposed());
        }
    }
    t
}

/// Evaluates `L` and `dL/dt` for every interior cell. Ghost cells of `field`
/// must already be filled. `horizon` is the length of the stage over which the
/// interface flux is fitted linearly; `dt` is the step size.
pub fn spatial_operator(
    field: &Field,
    gas: &GasModel,
    scheme: &SchemeConfig,
    source: &SourceModel,
    dt: f64,
    horizon: f64,
    low_order: Option<&[bool]>,
    stats: &mut RunStats,
) -> Result<OperatorOutput> {
    let g = field.grid;
    let nx = g.nx;
    let ny = g.ny;
    let marked = |i: isize, j: isize| -> bool {
        match low_order {
            Some(m) if i >= 0 && j >= 0 && (i as usize) < nx && (j as usize) < ny => m[j as usize * nx + i as usize],
            _ => false,
        }
    };
    let xs = x_sweep(field, gas, scheme, dt, horizon, &marked)?;
    for &(k, j) in &xs.fallbacks {
        stats.fallbacks += 1;
        stats.mark(&g, k - 1, j);
        stats.mark(&g, k, j);
    }
    let ys = if g.is_1d() {
        None
    } else {
        let t = transposed(field);
        let ys = x_sweep(&t, gas, scheme, dt, horizon, &|i, j| marked(j, i))?;
        for &(k, i) in &ys.fallbacks {
            stats.fallbacks += 1;
            stats.mark(&g, i, k - 1);
            stats.mark(&g, i, k);
        }
        Some(ys)
    };

    let swap = |f: [f64; 4]| [f[0], f[2], f[1], f[3]];
    let mut l = vec![[0.0; 4]; nx * ny];
    let mut lt = vec![[0.0; 4]; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let fl = &xs.fluxes[j * (nx + 1) + i];
            let fr = &xs.fluxes[j * (nx + 1) + i + 1];
            let mut div = [0.0; 4];
            let mut div_t = [0.0; 4];
            match &ys {
                None => {
                    for k in 0..4 {
                        div[k] = (fr.f0[k] - fl.f0[k]) / g.dx;
                        div_t[k] = (fr.ft[k] - fl.ft[k]) / g.dx;
                    }
                }
                Some(ys) => {
                    let gb = &ys.fluxes[i * (ny + 1) + j];
                    let gt = &ys.fluxes[i * (ny + 1) + j + 1];
                    let (gb0, gt0, gbt, gtt) = (swap(gb.f0), swap(gt.f0), swap(gb.ft), swap(gt.ft));
                    for k in 0..4 {
                        div[k] = (fr.f0[k] - fl.f0[k]) / g.dx + (gt0[k] - gb0[k]) / g.dy;
                        div_t[k] = (fr.ft[k] - fl.ft[k]) / g.dx + (gtt[k] - gbt[k]) / g.dy;
                    }
                }
            }
            let w = field.get(i as isize, j as isize);
            let s = source.evaluate(&w);
            let cell = j * nx + i;
            for k in 0..4 {
                l[cell][k] = -div[k] + s[k];
            }
            let st = source.time_derivative(&l[cell]);
            for k in 0..4 {
                lt[cell][k] = -div_t[k] + st[k];
            }
        }
    }

    // Net outward flux through the domain boundary, per unit time.
    let mut out = [0.0; 4];
    let mut out_t = [0.0; 4];
    for j in 0..ny {
        let a = &xs.fluxes[j * (nx + 1)];
        let b = &xs.fluxes[j * (nx + 1) + nx];
        for k in 0..4 {
            out[k] += (b.f0[k] - a.f0[k]) * g.dy;
            out_t[k] += (b.ft[k] - a.ft[k]) * g.dy;
        }
    }
    if let Some(ys) = &ys {
        for i in 0..nx {
            let a = &ys.fluxes[i * (ny + 1)];
            let b = &ys.fluxes[i * (ny + 1) + ny];
            let (a0, b0, at, bt) = (swap(a.f0), swap(b.f0), swap(a.ft), swap(b.ft));
            for k in 0..4 {
                out[k] += (b0[k] - a0[k]) * g.dx;
                out_t[k] += (bt[k] - at[k]) * g.dx;
            }
        }
    }
    Ok(OperatorOutput {
        l,
        lt,
        boundary_out: out,
        boundary_out_t: out_t,
    })
}

/// Outcome of one two-stage step.
#[derive(Debug, Clone)]
pub struct StepReport {
    /// Conserved quantities that left through the boundary during the step.
    pub boundary_outflow: [f64; 4],
    /// Integral of the source over the domain and the step.
    pub source_integral: [f64; 4],
}

/// `w + dt/2 L + dt^2/8 dL/dt`.
#[inline]
pub fn midpoint_update(w: f64, l: f64, lt: f64, dt: f64) -> f64 {
    w + 0.5 * dt * l + 0.125 * dt * dt * lt
}

/// `w + dt L(w) + dt^2/6 (dL/dt(w) + 2 dL/dt(w*))`.
#[inline]
pub fn final_update(w: f64, l: f64, lt: f64, lt_mid: f64, dt: f64) -> f64 {
    w + dt * l + dt * dt / 6.0 * (lt + 2.0 * lt_mid)
}

/// The intermediate state `w* = w + dt/2 L + dt^2/8 dL/dt` (ghosts left empty).
pub fn intermediate_state(field: &Field, op: &OperatorOutput, dt: f64) -> Field {
    let g = field.grid;
    let mut out = field.clone();
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = j * g.nx + i;
            let w = field.get(i as isize, j as isize).to_array();
            let n: [f64; 4] = std::array::from_fn(|k| midpoint_update(w[k], op.l[c][k], op.lt[c][k], dt));
            out.set(i as isize, j as isize, ConservedState::from_array(n));
        }
    }
    out
}

/// Marks the inadmissible interior cells of `field` in `mask`; returns how
/// many were newly marked and the first offending cell.
fn mark_inadmissible(field: &Field, gas: &GasModel, mask: &mut [bool]) -> (usize, Option<Error>) {
    let nx = field.grid.nx;
    let mut added = 0;
    let mut first = None;
    for (i, j, w) in field.interior() {
        if !w.is_admissible(gas) {
            if first.is_none() {
                first = Some(Error::Inadmissible {
                    location: Location::Cell {
                        i: i as isize,
                        j: j as isize,
                    },
                    rho: w.rho,
                    p: w.pressure(gas),
                });
            }
            if !mask[j * nx + i] {
                mask[j * nx + i] = true;
                added += 1;
            }
        }
    }
    (added, first)
}

/// Widens every marked cell of `mask` to its face neighbours.
fn dilate(mask: &mut [bool], nx: usize, ny: usize) {
    let src = mask.to_vec();
    for j in 0..ny {
        for i in 0..nx {
            if src[j * nx + i] {
                if i > 0 {
                    mask[j * nx + i - 1] = true;
                }
                if i + 1 < nx {
                    mask[j * nx + i + 1] = true;
                }
                if j > 0 {
                    mask[(j - 1) * nx + i] = true;
                }
                if j + 1 < ny {
                    mask[(j + 1) * nx + i] = true;
                }
            }
        }
    }
}

/// Maximum number of first-order retries of one step.
pub const MAX_STEP_RETRIES: usize = 4;

/// Advances `field` by `dt` with the two-stage fourth-order update.
///
/// If a stage produces an inadmissible cell, the step is redone with the
/// collisionless flux of the piecewise-constant cell states on every face of
/// the offending cells; the mask widens to neighbours on later retries. Every
/// face evaluated this way counts as a fallback. After
/// [`MAX_STEP_RETRIES`] retries the inadmissible state is returned as an
/// error and `field` is left untouched.
pub fn step_s2o4(
    field: &mut Field,
    gas: &GasModel,
    scheme: &SchemeConfig,
    bc: &BoundaryConditions,
    source: &SourceModel,
    dt: f64,
    stats: &mut RunStats,
) -> Result<StepReport> {
    let g = field.grid;
    fill_ghosts(field, bc, gas);
    let mut mask: Vec<bool> = Vec::new();
    let mut attempt = 0;
    loop {
        let low = if mask.is_empty() { None } else { Some(mask.as_slice()) };
        let mut local = RunStats::new(&g);
        match try_step(field, gas, scheme, bc, source, dt, low, &mut local)? {
            Ok((next, report)) => {
                *field = next;
                stats.fallbacks += local.fallbacks;
                for (a, b) in stats.fallback_map.iter_mut().zip(&local.fallback_map) {
                    *a += b;
                }
                return Ok(report);
            }
            Err(bad) => {
                if mask.is_empty() {
                    mask = vec![false; g.nx * g.ny];
                }
                let (added, err) = mark_inadmissible(&bad, gas, &mut mask);
                attempt += 1;
                if attempt > MAX_STEP_RETRIES {
                    return Err(err.expect("rejected stage has an inadmissible cell"));
                }
                if added == 0 || attempt >= 2 {
                    dilate(&mut mask, g.nx, g.ny);
                }
            }
        }
    }
}

/// One attempt of the two-stage update. The inner `Err` carries the stage
/// field that contained an inadmissible cell.
#[allow(clippy::too_many_arguments)]
fn try_step(
    field: &Field,
    gas: &GasModel,
    scheme: &SchemeConfig,
    bc: &BoundaryConditions,
    source: &SourceModel,
    dt: f64,
    low: Option<&[bool]>,
    stats: &mut RunStats,
) -> Result<std::result::Result<(Field, StepReport), Field>> {
    let g = field.grid;
    let op1 = spatial_operator(field, gas, scheme, source, dt, dt, low, stats)?;
    let mut mid = intermediate_state(field, &op1, dt);
    if mid.check_admissible(gas).is_err() {
        return Ok(Err(mid));
    }
    fill_ghosts(&mut mid, bc, gas);
    let op2 = spatial_operator(&mid, gas, scheme, source, dt, dt, low, stats)?;

    let c1 = dt * dt / 6.0;
    let mut next = field.clone();
    let mut src_n = vec![[0.0; 4]; g.nx * g.ny];
    let mut src_t = vec![[0.0; 4]; g.nx * g.ny];
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = j * g.nx + i;
            let w = field.get(i as isize, j as isize);
            let a = w.to_array();
            let n: [f64; 4] = std::array::from_fn(|k| final_update(a[k], op1.l[c][k], op1.lt[c][k], op2.lt[c][k], dt));
            if !source.is_none() {
                let s1 = source.evaluate(&w);
                let st1 = source.time_derivative(&op1.l[c]);
                let st2 = source.time_derivative(&op2.l[c]);
                src_n[c] = s1;
                src_t[c] = std::array::from_fn(|k| st1[k] + 2.0 * st2[k]);
            }
            next.set(i as isize, j as isize, ConservedState::from_array(n));
        }
    }
    if next.check_admissible(gas).is_err() {
        return Ok(Err(next));
    }

    let boundary_outflow: [f64; 4] =
        std::array::from_fn(|k| dt * op1.boundary_out[k] + c1 * (op1.boundary_out_t[k] + 2.0 * op2.boundary_out_t[k]));
    let vol = g.cell_volume();
    let mut source_integral = [0.0; 4];
    if !source.is_none() {
        let a = crate::state::pairwise_sum4(&src_n);
        let b = crate::state::pairwise_sum4(&src_t);
        source_integral = std::array::from_fn(|k| (dt * a[k] + c1 * b[k]) * vol);
    }
    Ok(Ok((
        next,
        StepReport {
            boundary_outflow,
            source_integral,
        },
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasModel {
        GasModel::new(1.4)
    }

    #[test]
    fn reflective_ghost_mirrors_normal_velocity() {
        let g = Grid::new_2d(4, 4, (0.0, 1.0), (0.0, 1.0));
        let w = PrimitiveState::new(1.0, 0.3, 0.1, 1.0).to_conserved(&gas()).unwrap();
        let mut f = Field::uniform(g, w);
        fill_ghosts(&mut f, &BoundaryConditions::all(BoundaryKind::Reflective), &gas());
        let q = f.primitive(-1, 1, &gas()).unwrap();
        assert!((q.u + 0.3).abs() < 1e-15 && (q.v - 0.1).abs() < 1e-15);
        let q = f.primitive(1, 4, &gas()).unwrap();
        assert!((q.v + 0.1).abs() < 1e-15 && (q.u - 0.3).abs() < 1e-15);
    }

    #[test]
    fn fixed_and_periodic_ghosts() {
        let g = Grid::new_2d(4, 3, (0.0, 1.0), (0.0, 1.0));
        let mut f = Field::from_fn(g, |i, j| ConservedState::new(1.0 + i as f64 + 10.0 * j as f64, 0.0, 0.0, 100.0));
        let bc = BoundaryConditions {
            x_lo: BoundaryKind::Periodic,
            x_hi: BoundaryKind::Periodic,
            y_lo: BoundaryKind::Outflow,
            y_hi: BoundaryKind::Fixed(PrimitiveState::new(1.0, 0.0, 0.0, 2.5)),
        };
        fill_ghosts(&mut f, &bc, &gas());
        assert_eq!(f.get(-1, 1), f.get(3, 1));
        assert_eq!(f.get(-3, 2), f.get(1, 2));
        assert_eq!(f.get(4, 0), f.get(0, 0));
        assert_eq!(f.get(2, -2), f.get(2, 0));
        let top = f.primitive(1, 3, &gas()).unwrap();
        assert_eq!(top, PrimitiveState::new(1.0, 0.0, 0.0, 2.5));
    }

    #[test]
    fn stable_dt_of_static_gas() {
        let g = Grid::new_2d(4, 4, (0.0, 0.04), (0.0, 0.04));
        let f = Field::uniform(g, ConservedState::new(1.0, 0.0, 0.0, 2.5));
        let dt = stable_dt(&f, &gas(), 0.4).unwrap();
        assert!((dt - 0.4 * 0.01 / 1.4f64.sqrt()).abs() < 1e-15);
        assert!((dt - 3.3806e-3).abs() < 1e-7);
    }

    #[test]
    fn faster_flow_never_increases_dt() {
        let g = Grid::new_2d(3, 3, (0.0, 1.0), (0.0, 1.0));
        let slow = PrimitiveState::new(1.0, 0.3, -0.2, 1.0);
        let fast = PrimitiveState::new(1.0, 0.6, -0.4, 1.0);
        let a = stable_dt(&Field::uniform(g, slow.to_conserved(&gas()).unwrap()), &gas(), 0.4).unwrap();
        let b = stable_dt(&Field::uniform(g, fast.to_conserved(&gas()).unwrap()), &gas(), 0.4).unwrap();
        assert!(b <= a);
    }

    #[test]
    fn one_dimensional_dt_ignores_dy() {
        let mut g = Grid::new_1d(10, (0.0, 1.0));
        let f = Field::uniform(g, ConservedState::new(1.0, 0.0, 0.0, 2.5));
        let a = stable_dt(&f, &gas(), 0.4).unwrap();
        g.dy = 1e-9;
        let f = Field::uniform(g, ConservedState::new(1.0, 0.0, 0.0, 2.5));
        assert_eq!(stable_dt(&f, &gas(), 0.4).unwrap(), a);
    }

    #[test]
    fn gravity_source_values() {
        let src = SourceModel::Gravity { g: 1.0 };
        let w = ConservedState::new(2.0, 0.0, 0.0, 5.0);
        assert_eq!(src.evaluate(&w), [0.0, 0.0, 2.0, 0.0]);
        let w = ConservedState::new(2.0, 0.0, 2.0 * 0.3, 5.0);
        assert_eq!(src.evaluate(&w), [0.0, 0.0, 2.0, 0.6]);
        assert_eq!(src.time_derivative(&[0.0, 0.0, 2.0, 0.0]), [0.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn periodic_pairs_are_validated() {
        let bc = BoundaryConditions {
            x_lo: BoundaryKind::Periodic,
            x_hi: BoundaryKind::Outflow,
            y_lo: BoundaryKind::Outflow,
            y_hi: BoundaryKind::Outflow,
        };
        assert!(bc.validate().is_err());
        assert!(BoundaryConditions::all(BoundaryKind::Periodic).validate().is_ok());
    }

    #[test]
    fn receding_cold_streams_use_free_transport() {
        let gas = gas();
        let g = Grid::new_1d(40, (0.0, 1.0));
        let mut f = Field::from_fn(g, |i, _| {
            let u = if i < 20 { -40.0 } else { 40.0 };
            PrimitiveState::new(1.0, u, 0.0, 0.01).to_conserved(&gas).unwrap()
        });
        let bc = BoundaryConditions::all(BoundaryKind::Outflow);
        let scheme = SchemeConfig::default();
        let mut stats = RunStats::new(&g);
        let dt = stable_dt(&f, &gas, scheme.cfl).unwrap();
        step_s2o4(&mut f, &gas, &scheme, &bc, &SourceModel::None, dt, &mut stats).unwrap();
        assert!(stats.fallbacks > 0);
        assert!(f.check_admissible(&gas).is_ok());
    }
}
