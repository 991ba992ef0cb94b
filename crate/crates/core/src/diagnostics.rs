//! Scalar diagnostics computed from a field snapshot.

use crate::cases::CaseSpec;
use crate::error::Result;
use crate::integrator::RunStats;
use crate::oracles::{exact_riemann, Region};
use crate::state::{ConservedState, Field, GasModel, Grid};

fn max_abs4(w: &ConservedState) -> f64 {
    w.to_array().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn field_scale(field: &Field) -> f64 {
    field.interior().fold(0.0f64, |m, (_, _, w)| m.max(max_abs4(&w))).max(f64::MIN_POSITIVE)
}

/// Largest deviation from invariance under a 90 degree rotation about the
/// domain centre, relative to the largest conserved magnitude. Needs a
/// square mesh.
pub fn rotation_symmetry_error(field: &Field) -> f64 {
    let g = field.grid;
    if g.nx != g.ny {
        return f64::INFINITY;
    }
    let n = g.nx as isize;
    let mut err = 0.0f64;
    for (i, j, w) in field.interior() {
        let (i, j) = (i as isize, j as isize);
        let r = field.get(n - 1 - j, i);
        let expect = [w.rho, -w.my, w.mx, w.e];
        for (a, b) in r.to_array().iter().zip(expect) {
            err = err.max((a - b).abs());
        }
    }
    err / field_scale(field)
}

/// Largest deviation from symmetry about the diagonal `x = y`.
pub fn diagonal_symmetry_error(field: &Field) -> f64 {
    let g = field.grid;
    if g.nx != g.ny {
        return f64::INFINITY;
    }
    let mut err = 0.0f64;
    for (i, j, w) in field.interior() {
        let t = field.get(j as isize, i as isize).transposed();
        for (a, b) in t.to_array().iter().zip(w.to_array()) {
            err = err.max((a - b).abs());
        }
    }
    err / field_scale(field)
}

/// Minimum density and the cell holding it.
pub fn min_density(field: &Field) -> (f64, usize, usize) {
    field
        .interior()
        .fold((f64::INFINITY, 0, 0), |m, (i, j, w)| if w.rho < m.0 { (w.rho, i, j) } else { m })
}

/// Density L1 error over the cells selected by `mask(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Error {
    /// `sum |rho - rho_ref| dV / sum dV`.
    pub mean: f64,
    /// `sum |rho - rho_ref| / sum |rho_ref|`.
    pub relative: f64,
    pub cells: usize,
}

pub fn density_l1(field: &Field, reference: &Field, mask: impl Fn(f64, f64) -> bool) -> L1Error {
    let g = field.grid;
    let (mut num, mut den, mut cells) = (0.0, 0.0, 0usize);
    for (i, j, w) in field.interior() {
        let (x, y) = (g.x_center(i as isize), g.y_center(j as isize));
        if !mask(x, y) {
            continue;
        }
        let r = reference.get(i as isize, j as isize).rho;
        num += (w.rho - r).abs();
        den += r.abs();
        cells += 1;
    }
    L1Error {
        mean: if cells > 0 { num / cells as f64 } else { 0.0 },
        relative: if den > 0.0 { num / den } else { 0.0 },
        cells,
    }
}

/// Density L1 error against the case oracle at time `t`, over the region
/// where the oracle is meaningful for that case.
pub fn oracle_l1_error(spec: &CaseSpec, field: &Field, t: f64) -> Result<L1Error> {
    let reference = crate::cases::oracle_field(spec, field.grid, t)?;
    if let Some(h) = spec.hurricane_exact() {
        // Near-field disk, kept inside the domain.
        let r = h.matching_radius(t).min(1.0);
        return Ok(density_l1(field, &reference, |x, y| x * x + y * y <= r * r));
    }
    if let Some(p) = spec.pressureless_reference() {
        return Ok(density_l1(field, &reference, |x, y| {
            matches!(p.classify(x, y, t), Region::Corner(_))
        }));
    }
    Ok(density_l1(field, &reference, |_, _| true))
}

/// Comparison of a vortex-sheet run with its pressureless limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressurelessCheck {
    /// Minimum density over cells in the reference vacuum region.
    pub vacuum_min_density: f64,
    pub vacuum_cells: usize,
    /// Largest relative density deviation from the corner value over cells
    /// at least `margin` away from every reference edge.
    pub far_max_relative_deviation: f64,
    pub far_cells: usize,
}

pub fn pressureless_check(spec: &CaseSpec, field: &Field, t: f64, margin: f64) -> Option<PressurelessCheck> {
    let p = spec.pressureless_reference()?;
    let g = field.grid;
    let mut out = PressurelessCheck {
        vacuum_min_density: f64::INFINITY,
        vacuum_cells: 0,
        far_max_relative_deviation: 0.0,
        far_cells: 0,
    };
    for (i, j, w) in field.interior() {
        let (x, y) = (g.x_center(i as isize), g.y_center(j as isize));
        match p.classify(x, y, t) {
            Region::Vacuum => {
                out.vacuum_min_density = out.vacuum_min_density.min(w.rho);
                out.vacuum_cells += 1;
            }
            Region::Corner(k) => {
                let far = [(-margin, -margin), (-margin, margin), (margin, -margin), (margin, margin)]
                    .iter()
                    .all(|(a, b)| p.classify(x + a, y + b, t) == Region::Corner(k));
                if far {
                    let rho = p.corners[k - 1].rho;
                    out.far_max_relative_deviation = out.far_max_relative_deviation.max((w.rho - rho).abs() / rho);
                    out.far_cells += 1;
                }
            }
            _ => {}
        }
    }
    Some(out)
}

/// Density along the first row, as `(x, rho)` pairs.
pub fn density_row(field: &Field, j: usize) -> Vec<(f64, f64)> {
    let g = field.grid;
    (0..g.nx).map(|i| (g.x_center(i as isize), field.get(i as isize, j as isize).rho)).collect()
}

/// Rightmost position where a 1D density profile crosses `level`, linearly
/// interpolated between cell centres.
pub fn rightmost_crossing(profile: &[(f64, f64)], level: f64) -> Option<f64> {
    profile.windows(2).rev().find_map(|w| {
        let ((x0, a), (x1, b)) = (w[0], w[1]);
        if (a - level) * (b - level) <= 0.0 && a != b {
            Some(x0 + (level - a) / (b - a) * (x1 - x0))
        } else {
            None
        }
    })
}

/// Measured and exact positions of the contact and the right-moving shock
/// of a 1D Riemann run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePositions {
    pub contact: f64,
    pub contact_exact: f64,
    pub shock: f64,
    pub shock_exact: f64,
    /// Mean density between contact and shock, away from both.
    pub post_shock_density: f64,
    pub post_shock_density_exact: f64,
}

pub fn riemann_wave_positions(spec: &CaseSpec, field: &Field, t: f64) -> Option<WavePositions> {
    let (left, right, x0) = match spec.initial {
        crate::cases::InitialCondition::ExactRiemann { left, right, x0, .. } => (left, right, x0),
        _ => return None,
    };
    let sol = exact_riemann(left, right, spec.gamma).ok()?;
    let profile = density_row(field, 0);
    let shock_exact = x0 + sol.right_shock_speed() * t;
    let contact_exact = x0 + sol.u_star * t;
    let shock = rightmost_crossing(&profile, 0.5 * (sol.rho_star_r + right.rho))?;
    let contact = rightmost_crossing(&profile, 0.5 * (sol.rho_star_l + sol.rho_star_r))?;
    let (a, b) = (contact + 0.25 * (shock - contact), shock - 0.25 * (shock - contact));
    let plateau: Vec<f64> = profile.iter().filter(|(x, _)| *x > a && *x < b).map(|p| p.1).collect();
    let post = if plateau.is_empty() {
        f64::NAN
    } else {
        plateau.iter().sum::<f64>() / plateau.len() as f64
    };
    Some(WavePositions {
        contact,
        contact_exact,
        shock,
        shock_exact,
        post_shock_density: post,
        post_shock_density_exact: sol.rho_star_r,
    })
}

/// Position of the strongest pressure jump between neighbouring cells of row 0.
pub fn strongest_pressure_jump(field: &Field, gas: &GasModel) -> Option<f64> {
    let g = field.grid;
    let p: Vec<f64> = (0..g.nx).map(|i| field.get(i as isize, 0).pressure(gas)).collect();
    if p.len() < 2 {
        return None;
    }
    let (k, _) = p
        .windows(2)
        .enumerate()
        .map(|(k, w)| (k, (w[1] - w[0]).abs()))
        .fold((0, -1.0), |m, c| if c.1 > m.1 { c } else { m });
    Some(0.5 * (g.x_center(k as isize) + g.x_center(k as isize + 1)))
}

/// Half the density range over `[a, b]` on row 0.
pub fn oscillation_amplitude(field: &Field, a: f64, b: f64) -> f64 {
    let (lo, hi) = density_row(field, 0)
        .into_iter()
        .filter(|(x, _)| *x >= a && *x <= b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, r)| (lo.min(r), hi.max(r)));
    if lo.is_finite() {
        0.5 * (hi - lo)
    } else {
        0.0
    }
}

/// Behind-shock oscillation amplitude of a shock/entropy-wave run: the
/// window spans 2 length units behind the strongest pressure jump, ending
/// 0.2 before it.
pub fn post_shock_oscillation(field: &Field, gas: &GasModel) -> f64 {
    match strongest_pressure_jump(field, gas) {
        Some(s) => oscillation_amplitude(field, s - 2.0, s - 0.2),
        None => 0.0,
    }
}

/// Vertical extent of the mixing zone: the distance between the top face of
/// the highest cell denser than `level` and the bottom face of the lowest
/// lighter cell. Zero for a flat interface.
pub fn mixing_width(field: &Field, level: f64) -> f64 {
    let g = field.grid;
    let (mut heavy_top, mut light_bottom) = (f64::NEG_INFINITY, f64::INFINITY);
    for (_, j, w) in field.interior() {
        let y = g.y_center(j as isize);
        if w.rho > level {
            heavy_top = heavy_top.max(y);
        } else {
            light_bottom = light_bottom.min(y);
        }
    }
    (heavy_top - light_bottom + g.dy).max(0.0)
}

/// Largest relative pressure jump between neighbouring cells.
pub fn max_pressure_jump(field: &Field, gas: &GasModel) -> f64 {
    let g = field.grid;
    let mut m = 0.0f64;
    for (i, j, w) in field.interior() {
        let p = w.pressure(gas);
        let mut check = |q: f64| m = m.max((p - q).abs() / p.min(q).max(f64::MIN_POSITIVE));
        if i + 1 < g.nx {
            check(field.get(i as isize + 1, j as isize).pressure(gas));
        }
        if j + 1 < g.ny {
            check(field.get(i as isize, j as isize + 1).pressure(gas));
        }
    }
    m
}

/// Total fallback count over the cells whose centres satisfy `pred(x, y)`.
pub fn fallbacks_in(stats: &RunStats, grid: &Grid, pred: impl Fn(f64, f64) -> bool) -> u64 {
    let mut n = 0u64;
    for (c, &k) in stats.fallback_map.iter().enumerate() {
        let (i, j) = (c % grid.nx, c / grid.nx);
        if k > 0 && pred(grid.x_center(i as isize), grid.y_center(j as isize)) {
            n += k as u64;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::{case_four_shocks, case_hurricane, HurricaneRegime};

    #[test]
    fn initial_fields_are_symmetric() {
        let c = case_hurricane(HurricaneRegime::Critical);
        let f = c.initial_field(c.grid_with((40, 40))).unwrap();
        assert_eq!(rotation_symmetry_error(&f), 0.0);
        let c = case_four_shocks();
        let f = c.initial_field(c.grid_with((50, 50))).unwrap();
        assert_eq!(diagonal_symmetry_error(&f), 0.0);
        assert!(rotation_symmetry_error(&f) > 0.1);
    }

    #[test]
    fn crossing_interpolates() {
        let p = [(0.0, 4.0), (1.0, 2.0), (2.0, 1.0)];
        assert_eq!(rightmost_crossing(&p, 1.5), Some(1.5));
        assert_eq!(rightmost_crossing(&p, 3.0), Some(0.5));
        assert_eq!(rightmost_crossing(&p, 9.0), None);
    }

    #[test]
    fn mixing_width_of_interfaces() {
        let g = Grid::new_2d(2, 10, (0.0, 1.0), (0.0, 1.0));
        let f = Field::from_fn(g, |_, j| ConservedState::new(if j < 5 { 2.0 } else { 1.0 }, 0.0, 0.0, 3.0));
        assert!(mixing_width(&f, 1.5).abs() < 1e-12);
        let f = Field::from_fn(g, |i, j| ConservedState::new(if j < 5 + 2 * i { 2.0 } else { 1.0 }, 0.0, 0.0, 3.0));
        assert!((mixing_width(&f, 1.5) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn l1_against_itself_is_zero() {
        let c = case_hurricane(HurricaneRegime::Critical);
        let f = c.initial_field(c.grid_with((20, 20))).unwrap();
        let e = density_l1(&f, &f, |_, _| true);
        assert_eq!((e.mean, e.relative, e.cells), (0.0, 0.0, 400));
    }
}
