//! Benchmark-scale acceptance checks. Each test writes one line
//! `PASS|FAIL | name | detail | wall` straight to stderr, then asserts.

use std::io::Write;
use std::time::Instant;

use euler_bench::cases::case_by_name;
use euler_bench::diagnostics as diag;
use euler_bench::integrator::{
    self, final_update, midpoint_update, BoundaryConditions, BoundaryKind, RunStats, SchemeConfig, SourceModel,
};
use euler_bench::oracles::exact_riemann;
use euler_bench::reconstruction::WenoVariant;
use euler_bench::run::{convergence, LambdaRule, MeshSpec, RunConfig, Simulation};
use euler_bench::state::{field_totals, Field, GasModel, Grid, PrimitiveState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(name: &str, pass: bool, detail: &str, start: Instant) {
    let line = format!(
        "{} | {name} | {detail} | {:.1} s\n",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{name}: {detail}");
}

fn simulate(name: &str, mesh: Option<MeshSpec>, tweak: impl FnOnce(&mut RunConfig)) -> Simulation {
    let mut cfg = RunConfig::for_case(name);
    cfg.mesh = mesh;
    tweak(&mut cfg);
    let spec = case_by_name(name).unwrap();
    let grid = match cfg.mesh {
        Some(m) => spec.grid_with(m.resolve(&spec)),
        None => spec.grid(),
    };
    let mut sim = Simulation::new(spec.clone(), grid, cfg.scheme(grid.dx)).unwrap();
    sim.advance_to(cfg.t_end.unwrap_or(spec.t_end)).unwrap();
    sim
}

fn order_study(cfg: &mut RunConfig) {
    cfg.weno = WenoVariant::Z;
    cfg.eps_base = 0.0;
}

#[test]
fn free_stream_is_preserved() {
    let start = Instant::now();
    let gas = GasModel::new(1.4);
    let g = Grid::new_2d(64, 64, (0.0, 1.0), (0.0, 1.0));
    let moving = PrimitiveState::new(1.3, 0.4, -0.7, 0.9);
    let resting = PrimitiveState::new(1.3, 0.0, 0.0, 0.9);
    let scheme = SchemeConfig::default();
    let mut worst = 0.0f64;
    for (kind, q) in [
        (BoundaryKind::Outflow, moving),
        (BoundaryKind::Periodic, moving),
        (BoundaryKind::Fixed(moving), moving),
        (BoundaryKind::Reflective, resting),
    ] {
        let w0 = q.to_conserved(&gas).unwrap();
        let scale = w0.to_array().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut f = Field::uniform(g, w0);
        let bc = BoundaryConditions::all(kind);
        let mut stats = RunStats::new(&g);
        for _ in 0..100 {
            let dt = integrator::stable_dt(&f, &gas, scheme.cfl).unwrap();
            integrator::step_s2o4(&mut f, &gas, &scheme, &bc, &SourceModel::None, dt, &mut stats).unwrap();
        }
        for (_, _, w) in f.interior() {
            for (a, b) in w.to_array().iter().zip(w0.to_array()) {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    report(
        "free-stream 64x64, 100 steps, 4 BC kinds",
        worst < 1e-12,
        &format!("max relative drift {worst:.2e} (< 1e-12)"),
        start,
    );
}

#[test]
fn periodic_smooth_field_conserves_mass_and_energy() {
    let start = Instant::now();
    let gas = GasModel::new(1.4);
    let g = Grid::new_2d(128, 128, (0.0, 1.0), (0.0, 1.0));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut modes = || -> Vec<(f64, f64, f64, f64)> {
        (0..4)
            .map(|_| {
                (
                    rng.gen_range(1..=3) as f64,
                    rng.gen_range(-3..=3) as f64,
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(0.02..0.075),
                )
            })
            .collect()
    };
    let (mr, mu, mv, mp) = (modes(), modes(), modes(), modes());
    let eval = |m: &[(f64, f64, f64, f64)], x: f64, y: f64| {
        m.iter()
            .map(|(kx, ky, ph, a)| a * (std::f64::consts::TAU * (kx * x + ky * y) + ph).sin())
            .sum::<f64>()
    };
    let mut f = Field::from_fn(g, |i, j| {
        let (x, y) = (g.x_center(i as isize), g.y_center(j as isize));
        PrimitiveState::new(
            1.0 + eval(&mr, x, y),
            0.5 + 2.0 * eval(&mu, x, y),
            -0.3 + 2.0 * eval(&mv, x, y),
            1.0 + eval(&mp, x, y),
        )
        .to_conserved(&gas)
        .unwrap()
    });
    let t0 = field_totals(&f);
    let scheme = SchemeConfig::default();
    let bc = BoundaryConditions::all(BoundaryKind::Periodic);
    let mut stats = RunStats::new(&g);
    for _ in 0..200 {
        let dt = integrator::stable_dt(&f, &gas, scheme.cfl).unwrap();
        integrator::step_s2o4(&mut f, &gas, &scheme, &bc, &SourceModel::None, dt, &mut stats).unwrap();
    }
    let t1 = field_totals(&f);
    let dm = ((t1.mass - t0.mass) / t0.mass).abs();
    let de = ((t1.energy - t0.energy) / t0.energy).abs();
    report(
        "conservation 128x128 periodic, 200 steps",
        dm < 1e-11 && de < 1e-11,
        &format!("mass {dm:.2e}, energy {de:.2e} (< 1e-11)"),
        start,
    );
}

#[test]
fn temporal_order_is_four() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &a in &[-2.0, -0.5, 0.3, 1.0, 2.5] {
        for &dt in &[0.5, 0.1, 0.01] {
            let w = 1.7;
            let mid = midpoint_update(w, a * w, a * a * w, dt);
            let next = final_update(w, a * w, a * a * w, a * a * mid, dt);
            let z: f64 = a * dt;
            let taylor = w * (1.0 + z + z * z / 2.0 + z.powi(3) / 6.0 + z.powi(4) / 24.0);
            worst = worst.max((next - taylor).abs() / taylor.abs());
        }
    }

    // Fixed 64x64 mesh, dt halved twice; the differences between successive
    // solutions shrink at the temporal rate.
    let spec = case_by_name("isentropic-vortex").unwrap();
    let grid = spec.grid_with((64, 64));
    let mut cfg = RunConfig::for_case("isentropic-vortex");
    order_study(&mut cfg);
    let scheme = cfg.scheme(grid.dx);
    let t_end = 1.0;
    let probe = Simulation::new(spec.clone(), grid, scheme).unwrap();
    let dt0 = integrator::stable_dt(&probe.field, &probe.gas, scheme.cfl).unwrap();
    let n0 = (t_end / dt0).ceil() as usize;
    let solve = |n: usize| {
        let mut sim = Simulation::new(spec.clone(), grid, scheme).unwrap();
        for _ in 0..n {
            sim.step(t_end / n as f64).unwrap();
        }
        sim.field
    };
    let fields: Vec<Field> = [n0, 2 * n0, 4 * n0].iter().map(|&n| solve(n)).collect();
    let diff = |a: &Field, b: &Field| diag::density_l1(a, b, |_, _| true).mean;
    let (e1, e2) = (diff(&fields[0], &fields[1]), diff(&fields[1], &fields[2]));
    let order = (e1 / e2).log2();
    report(
        "temporal order: Taylor exactness and vortex dt refinement",
        worst < 1e-14 && order >= 3.5,
        &format!(
            "Taylor residual {worst:.1e} (< 1e-14); steps {n0}/{}/{}, differences {e1:.3e}/{e2:.3e}, order {order:.2} (>= 3.5)",
            2 * n0,
            4 * n0
        ),
        start,
    );
}

#[test]
fn spatial_order_is_above_four_and_a_half() {
    let start = Instant::now();
    let mut cfg = RunConfig::for_case("isentropic-vortex");
    order_study(&mut cfg);
    let rows = convergence(&cfg, &[MeshSpec::Cells(32), MeshSpec::Cells(64), MeshSpec::Cells(128)]).unwrap();
    let finest = rows[2].order.unwrap();
    let text: Vec<String> = rows
        .iter()
        .map(|r| match r.order {
            Some(o) => format!("{}: {:.3e} (order {o:.2})", r.nx, r.l1),
            None => format!("{}: {:.3e}", r.nx, r.l1),
        })
        .collect();
    report(
        "spatial order, isentropic vortex WENO-Z 32/64/128",
        finest >= 4.5,
        &format!("{}; finest pair {finest:.2} (>= 4.5)", text.join(", ")),
        start,
    );
}

/// Star state by plain bisection on the pressure balance, written
/// independently of the library solver.
fn bisection_star(l: PrimitiveState, r: PrimitiveState, g: f64) -> (f64, f64, f64, f64) {
    let f = |p: f64, s: &PrimitiveState| {
        if p > s.p {
            let a = 2.0 / ((g + 1.0) * s.rho);
            let b = (g - 1.0) / (g + 1.0) * s.p;
            (p - s.p) * (a / (p + b)).sqrt()
        } else {
            let c = (g * s.p / s.rho).sqrt();
            2.0 * c / (g - 1.0) * ((p / s.p).powf((g - 1.0) / (2.0 * g)) - 1.0)
        }
    };
    let balance = |p: f64| f(p, &l) + f(p, &r) + r.u - l.u;
    let (mut lo, mut hi) = (1e-12, 1e6);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let u = 0.5 * (l.u + r.u) + 0.5 * (f(p, &r) - f(p, &l));
    let star_rho = |s: &PrimitiveState| {
        if p > s.p {
            let k = (g - 1.0) / (g + 1.0);
            s.rho * (p / s.p + k) / (k * p / s.p + 1.0)
        } else {
            s.rho * (p / s.p).powf(1.0 / g)
        }
    };
    (p, u, star_rho(&l), star_rho(&r))
}

#[test]
fn exact_riemann_matches_bisection_and_expected_densities() {
    let start = Instant::now();
    let l = PrimitiveState::new(10000.0, 0.0, 0.0, 10000.0);
    let r = PrimitiveState::new(1.0, 0.0, 0.0, 1.0);
    let sol = exact_riemann(l, r, 1.4).unwrap();
    let (p, u, rl, rr) = bisection_star(l, r, 1.4);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let agree = [rel(sol.p_star, p), rel(sol.u_star, u), rel(sol.rho_star_l, rl), rel(sol.rho_star_r, rr)]
        .into_iter()
        .fold(0.0f64, f64::max);
    let tail_ok = rel(sol.rho_star_l, 100.0) <= 0.1;
    let shock_ok = rel(sol.rho_star_r, 8.0) <= 0.1;
    report(
        "exact Riemann star state for 10000:1 data",
        agree < 1e-10 && tail_ok && shock_ok,
        &format!(
            "bisection agreement {agree:.1e} (< 1e-10); rarefaction tail {:.3} (~100: {}), post-shock {:.3} (~8: {})",
            sol.rho_star_l,
            if tail_ok { "ok" } else { "no" },
            sol.rho_star_r,
            if shock_ok { "ok" } else { "no" }
        ),
        start,
    );
}

#[test]
fn large_density_ratio_waves() {
    let start = Instant::now();
    let sim = simulate("large-density-ratio", None, |_| {});
    let w = diag::riemann_wave_positions(&sim.spec, &sim.field, sim.t).unwrap();
    let dx = sim.field.grid.dx;
    let dc = (w.contact - w.contact_exact).abs() / dx;
    let ds = (w.shock - w.shock_exact).abs() / dx;
    let post = (w.post_shock_density - 8.0).abs() / 8.0;
    report(
        "large density ratio, dx = 1/200, t = 12",
        dc <= 3.0 && ds <= 3.0 && post <= 0.1,
        &format!(
            "contact off {dc:.2} cells, shock off {ds:.2} cells (<= 3); post-shock density {:.3} vs 8 ({:.0}% off, <= 10%), exact {:.3}",
            w.post_shock_density,
            100.0 * post,
            w.post_shock_density_exact
        ),
        start,
    );
}

#[test]
fn hurricane_critical_matches_exact_solution() {
    let start = Instant::now();
    let sim = simulate("hurricane-critical", None, |_| {});
    let e = diag::oracle_l1_error(&sim.spec, &sim.field, sim.t).unwrap();
    let (rho_min, _, _) = diag::min_density(&sim.field);
    let sym = diag::rotation_symmetry_error(&sim.field);
    report(
        "hurricane critical 200x200 on [-1,1]^2, t = 0.1",
        e.relative < 5e-2 && rho_min >= 0.0 && sym < 1e-10,
        &format!(
            "relative L1 {:.3e} on {} disk cells (< 5e-2); min density {rho_min:.3e} (>= 0); rotation symmetry {sym:.1e} (< 1e-10); fallbacks {}",
            e.relative, e.cells, sim.stats.fallbacks
        ),
        start,
    );
}

#[test]
fn hurricane_high_and_low_complete() {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["hurricane-high", "hurricane-low"] {
        let sim = simulate(name, None, |_| {});
        let sym = diag::rotation_symmetry_error(&sim.field);
        let (rho_min, _, _) = diag::min_density(&sim.field);
        pass &= sym < 1e-10;
        parts.push(format!(
            "{name}: t = {}, symmetry {sym:.1e}, min density {rho_min:.2e}, fallbacks {}",
            sim.t, sim.stats.fallbacks
        ));
    }
    report("hurricane high/low 200x200", pass, &parts.join("; "), start);
}

#[test]
fn same_sign_vortex_sheets_approach_pressureless_limit() {
    let start = Instant::now();
    let sim = simulate("vortex-sheets-same:p0=0.1", None, |_| {});
    // Far from every translated edge by the largest corner sound speed times t.
    let c = sim
        .spec
        .pressureless_reference()
        .unwrap()
        .corners
        .iter()
        .map(|k| (1.4 * 0.1 / k.rho).sqrt())
        .fold(0.0f64, f64::max);
    let check = diag::pressureless_check(&sim.spec, &sim.field, sim.t, c * sim.t).unwrap();
    report(
        "pressureless limit, same sign, p0 = 0.1, 400x400, t = 0.35",
        check.vacuum_min_density < 1e-2 && check.far_max_relative_deviation < 0.02,
        &format!(
            "vacuum min density {:.2e} over {} cells (< 1e-2); far-quadrant deviation {:.2}% over {} cells (< 2%)",
            check.vacuum_min_density,
            check.vacuum_cells,
            100.0 * check.far_max_relative_deviation,
            check.far_cells
        ),
        start,
    );
}

#[test]
fn four_shocks_stay_symmetric() {
    let start = Instant::now();
    let sim = simulate("four-shocks", None, |_| {});
    let sym = diag::diagonal_symmetry_error(&sim.field);
    let q1 = diag::fallbacks_in(&sim.stats, &sim.field.grid, |x, y| x > 0.8 && y > 0.8);
    report(
        "four shocks 400x400, t = 0.8",
        sym < 1e-10 && q1 == 0,
        &format!("x = y symmetry {sym:.1e} (< 1e-10); quadrant-1 fallbacks {q1} (= 0); total {}", sim.stats.fallbacks),
        start,
    );
}

#[test]
fn titarev_toro_zplus_beats_js() {
    let start = Instant::now();
    let name = "titarev-toro";
    let reference = simulate(name, Some(MeshSpec::Cells(4000)), |c| c.weno = WenoVariant::Z);
    let js = simulate(name, None, |c| c.weno = WenoVariant::Js);
    let zp = simulate(name, None, |c| {
        c.weno = WenoVariant::ZPlus;
        c.lambda = LambdaRule::DxPower(0.75);
    });
    let coarse: Vec<f64> = (0..1000)
        .map(|i| (0..4).map(|k| reference.field.get(4 * i + k, 0).rho).sum::<f64>() / 4.0)
        .collect();
    let l1 = |f: &Field| (0..1000).map(|i| (f.get(i as isize, 0).rho - coarse[i]).abs()).sum::<f64>() * f.grid.dx;
    let (ejs, ezp) = (l1(&js.field), l1(&zp.field));
    let gas = js.gas;
    report(
        "Titarev-Toro 1000 cells, t = 5",
        ezp < ejs,
        &format!(
            "L1 to 4000-cell reference: Z+ {ezp:.4e} vs JS {ejs:.4e} (Z+ < JS); post-shock amplitude Z+ {:.4} JS {:.4}",
            diag::post_shock_oscillation(&zp.field, &gas),
            diag::post_shock_oscillation(&js.field, &gas)
        ),
        start,
    );
}

#[test]
fn rayleigh_taylor_mixes_and_conserves_mass() {
    let start = Instant::now();
    let sim = simulate("rayleigh-taylor", Some(MeshSpec::Spacing(1.0 / 200.0)), |c| c.t_end = Some(1.75));
    let width = diag::mixing_width(&sim.field, 1.5);
    let drift = sim.conservation_drift()[0].abs();
    report(
        "Rayleigh-Taylor 50x200, t = 1.75",
        width > 0.05 && drift < 1e-11,
        &format!("mixing width {width:.3} (> 0.05); mass drift {drift:.2e} (< 1e-11); fallbacks {}", sim.stats.fallbacks),
        start,
    );
}
