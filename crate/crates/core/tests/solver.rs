use euler_bench::integrator::{self, BoundaryConditions, BoundaryKind, RunStats, SchemeConfig, SourceModel};
use euler_bench::oracles::exact_riemann;
use euler_bench::state::{field_totals, Field, GasModel, Grid, PrimitiveState};

fn sod_field(n: usize, gas: &GasModel) -> Field {
    let g = Grid::new_1d(n, (0.0, 1.0));
    Field::from_fn(g, |i, _| {
        let x = g.x_center(i as isize);
        let q = if x < 0.5 {
            PrimitiveState::new(1.0, 0.0, 0.0, 1.0)
        } else {
            PrimitiveState::new(0.125, 0.0, 0.0, 0.1)
        };
        q.to_conserved(gas).unwrap()
    })
}

#[test]
fn sod_tube_matches_exact_solution() {
    let gas = GasModel::new(1.4);
    let mut f = sod_field(200, &gas);
    let scheme = SchemeConfig::default();
    let bc = BoundaryConditions::all(BoundaryKind::Outflow);
    let mut stats = RunStats::new(&f.grid);
    let mut t = 0.0;
    let t_end = 0.2;
    while t < t_end {
        let dt = integrator::stable_dt(&f, &gas, scheme.cfl).unwrap().min(t_end - t);
        integrator::step_s2o4(&mut f, &gas, &scheme, &bc, &SourceModel::None, dt, &mut stats).unwrap();
        t += dt;
    }
    let exact = exact_riemann(
        PrimitiveState::new(1.0, 0.0, 0.0, 1.0),
        PrimitiveState::new(0.125, 0.0, 0.0, 0.1),
        1.4,
    )
    .unwrap();
    let mut l1 = 0.0;
    for i in 0..200 {
        let x = f.grid.x_center(i);
        let q = f.primitive(i, 0, &gas).unwrap();
        l1 += (q.rho - exact.sample_at(x, t, 0.5).rho).abs() * f.grid.dx;
    }
    println!("sod L1(rho) = {l1:.3e}");
    assert!(l1 < 4e-3, "L1 = {l1}");
}

#[test]
fn uniform_flow_is_preserved_in_two_dimensions() {
    let gas = GasModel::new(1.4);
    let g = Grid::new_2d(16, 16, (0.0, 1.0), (0.0, 1.0));
    let w = PrimitiveState::new(1.3, 0.4, -0.7, 0.9).to_conserved(&gas).unwrap();
    let mut f = Field::uniform(g, w);
    let scheme = SchemeConfig::default();
    let mut stats = RunStats::new(&g);
    for kind in [BoundaryKind::Outflow, BoundaryKind::Periodic] {
        let bc = BoundaryConditions::all(kind);
        for _ in 0..5 {
            let dt = integrator::stable_dt(&f, &gas, 0.4).unwrap();
            integrator::step_s2o4(&mut f, &gas, &scheme, &bc, &SourceModel::None, dt, &mut stats).unwrap();
        }
    }
    let a = w.to_array();
    for (_, _, c) in f.interior() {
        let c = c.to_array();
        for k in 0..4 {
            assert!((c[k] - a[k]).abs() <= 1e-12 * a[k].abs().max(1.0));
        }
    }
    let tot = field_totals(&f);
    assert!((tot.mass - 1.3).abs() < 1e-12);
}
