//! Run driver: configuration, time loop, outputs and manifests.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cases::{case_by_name, CaseSpec, DiagnosticKind};
use crate::diagnostics as diag;
use crate::error::{Error, Result};
use crate::gks::CollisionTimeModel;
use crate::integrator::{stable_dt, step_s2o4, RunStats, SchemeConfig};
use crate::io::{append_diagnostic, sha256_hex, slug, write_atomic, Snapshot};
use crate::reconstruction::{ReconstructionMode, WenoConfig, WenoVariant};
use crate::state::{field_totals, Field, GasModel, Grid, Totals};

/// Mesh selection overriding a case default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeshSpec {
    /// Cells along x; y scaled to keep square cells.
    Cells(usize),
    /// Uniform spacing in both directions.
    Spacing(f64),
    Dims(usize, usize),
}

impl MeshSpec {
    pub fn resolve(&self, spec: &CaseSpec) -> (usize, usize) {
        match *self {
            MeshSpec::Cells(n) => {
                if spec.is_1d() {
                    (n, 1)
                } else {
                    let h = (spec.x_range.1 - spec.x_range.0) / n as f64;
                    (n, ((spec.y_range.1 - spec.y_range.0) / h).round().max(1.0) as usize)
                }
            }
            MeshSpec::Spacing(h) => spec.mesh_for_spacing(h),
            MeshSpec::Dims(nx, ny) => {
                if spec.is_1d() {
                    (nx, 1)
                } else {
                    (nx, ny)
                }
            }
        }
    }
}

impl FromStr for MeshSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("invalid mesh `{s}` (expected 1/400, 0.0025, 200x200 or 1000)"));
        if let Some((a, b)) = s.split_once('/') {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if !(a > 0.0 && b > 0.0) {
                return Err(bad());
            }
            return Ok(MeshSpec::Spacing(a / b));
        }
        if let Some((a, b)) = s.split_once(['x', 'X']) {
            let nx: usize = a.trim().parse().map_err(|_| bad())?;
            let ny: usize = b.trim().parse().map_err(|_| bad())?;
            if nx == 0 || ny == 0 {
                return Err(bad());
            }
            return Ok(MeshSpec::Dims(nx, ny));
        }
        if let Ok(n) = s.parse::<usize>() {
            return if n > 0 { Ok(MeshSpec::Cells(n)) } else { Err(bad()) };
        }
        match s.parse::<f64>() {
            Ok(h) if h > 0.0 && h < 1.0 => Ok(MeshSpec::Spacing(h)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for MeshSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshSpec::Cells(n) => write!(f, "{n}"),
            MeshSpec::Spacing(h) => write!(f, "{h}"),
            MeshSpec::Dims(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

/// How the Z+ parameter `lambda` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LambdaRule {
    Fixed(f64),
    /// `lambda = dx^power`.
    DxPower(f64),
}

impl LambdaRule {
    pub fn value(&self, dx: f64) -> f64 {
        match *self {
            LambdaRule::Fixed(v) => v,
            LambdaRule::DxPower(p) => dx.powf(p),
        }
    }
}

impl FromStr for LambdaRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("invalid lambda rule `{s}` (expected a number or dx^<power>)"));
        if let Some(p) = s.strip_prefix("dx^") {
            return Ok(LambdaRule::DxPower(p.parse().map_err(|_| bad())?));
        }
        s.parse().map(LambdaRule::Fixed).map_err(|_| bad())
    }
}

impl fmt::Display for LambdaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaRule::Fixed(v) => write!(f, "{v}"),
            LambdaRule::DxPower(p) => write!(f, "dx^{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Binary,
    Both,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "binary" | "bin" => Ok(OutputFormat::Binary),
            "both" => Ok(OutputFormat::Both),
            other => Err(Error::Config(format!("unknown output format `{other}` (csv, binary, both)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub case: String,
    pub mesh: Option<MeshSpec>,
    pub weno: WenoVariant,
    pub lambda: LambdaRule,
    pub weno_epsilon: f64,
    pub mode: ReconstructionMode,
    pub cfl: f64,
    pub t_end: Option<f64>,
    pub output_times: Option<Vec<f64>>,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    pub eps_base: f64,
    pub c_jump: f64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = CollisionTimeModel::default();
        RunConfig {
            case: "isentropic-vortex".into(),
            mesh: None,
            weno: WenoVariant::Js,
            lambda: LambdaRule::DxPower(0.75),
            weno_epsilon: WenoConfig::default().epsilon,
            mode: ReconstructionMode::Characteristic,
            cfl: 0.4,
            t_end: None,
            output_times: None,
            out_dir: PathBuf::from("out"),
            threads: None,
            eps_base: c.eps_base,
            c_jump: c.c_jump,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn for_case(case: &str) -> Self {
        RunConfig {
            case: case.to_string(),
            ..Default::default()
        }
    }

    pub fn scheme(&self, dx: f64) -> SchemeConfig {
        SchemeConfig {
            weno: WenoConfig {
                epsilon: self.weno_epsilon,
                ..WenoConfig::new(self.weno).with_lambda(self.lambda.value(dx))
            },
            mode: self.mode,
            collision: CollisionTimeModel {
                eps_base: self.eps_base,
                c_jump: self.c_jump,
            },
            cfl: self.cfl,
        }
    }

    /// Applies one `key = value` setting, using the CLI flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<f64> {
            v.parse()
                .map_err(|_| Error::Config(format!("invalid number `{v}` for `{key}`")))
        };
        match key {
            "case" => self.case = value.to_string(),
            "mesh" | "cells" => self.mesh = Some(value.parse()?),
            "weno" => self.weno = value.parse().map_err(Error::Config)?,
            "lambda" => self.lambda = value.parse()?,
            "weno-epsilon" => self.weno_epsilon = num(value)?,
            "mode" | "recon" => self.mode = value.parse().map_err(Error::Config)?,
            "cfl" => self.cfl = num(value)?,
            "t-end" => self.t_end = Some(num(value)?),
            "output-times" => {
                self.output_times = Some(value.split(',').map(|v| num(v.trim())).collect::<Result<Vec<_>>>()?)
            }
            "out" | "out-dir" => self.out_dir = PathBuf::from(value),
            "threads" => {
                self.threads = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Config(format!("invalid thread count `{value}`")))?,
                )
            }
            "eps-base" => self.eps_base = num(value)?,
            "c-jump" => self.c_jump = num(value)?,
            "format" => self.format = value.parse()?,
            other => return Err(Error::Config(format!("unknown setting `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        case_by_name(&self.case)?;
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("cfl must be in (0, 1], got {}", self.cfl)));
        }
        if !(self.weno_epsilon > 0.0) || self.eps_base < 0.0 || self.c_jump < 0.0 {
            return Err(Error::Config("epsilon and collision-time parameters must be non-negative".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        Ok(())
    }
}

/// Worker count: explicit setting, then `EULER_BENCH_THREADS`, then all cores.
pub fn worker_count(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var("EULER_BENCH_THREADS").ok().and_then(|v| v.parse().ok()))
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// A case being advanced in time, with conservation bookkeeping.
pub struct Simulation {
    pub spec: CaseSpec,
    pub gas: GasModel,
    pub scheme: SchemeConfig,
    pub field: Field,
    pub t: f64,
    pub steps: u64,
    pub stats: RunStats,
    pub initial_totals: Totals,
    /// Conserved amounts that left through the boundary so far.
    pub outflow: [f64; 4],
    /// Integrated source contributions so far.
    pub source_total: [f64; 4],
}

impl Simulation {
    pub fn new(spec: CaseSpec, grid: Grid, scheme: SchemeConfig) -> Result<Self> {
        spec.boundary.validate()?;
        let field = spec.initial_field(grid)?;
        Ok(Simulation::from_field(spec, field, scheme))
    }

    pub fn from_field(spec: CaseSpec, field: Field, scheme: SchemeConfig) -> Self {
        let gas = spec.gas();
        let stats = RunStats::new(&field.grid);
        Simulation {
            t: spec.t_start,
            initial_totals: field_totals(&field),
            gas,
            scheme,
            field,
            steps: 0,
            stats,
            outflow: [0.0; 4],
            source_total: [0.0; 4],
            spec,
        }
    }

    /// One step of size `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        let r = step_s2o4(
            &mut self.field,
            &self.gas,
            &self.scheme,
            &self.spec.boundary,
            &self.spec.source,
            dt,
            &mut self.stats,
        )
        .map_err(|e| Error::StepFailure {
            case: self.spec.id.to_string(),
            time: self.t,
            source: Box::new(e),
        })?;
        for k in 0..4 {
            self.outflow[k] += r.boundary_outflow[k];
            self.source_total[k] += r.source_integral[k];
        }
        self.t += dt;
        self.steps += 1;
        Ok(())
    }

    /// Steps at the stable size until `t_target`, shortening the last step.
    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        while self.t < t_target * (1.0 - 1e-14) - 1e-300 {
            let mut dt = stable_dt(&self.field, &self.gas, self.scheme.cfl)?;
            if self.t + dt >= t_target {
                dt = t_target - self.t;
            }
            self.step(dt)?;
            if self.t > t_target - 1e-14 * t_target.abs().max(1.0) {
                self.t = t_target;
            }
        }
        Ok(())
    }

    /// `(now + outflow - source - initial) / |initial|` per component; a
    /// component that starts near zero is scaled by the largest one instead.
    pub fn conservation_drift(&self) -> [f64; 4] {
        let now = field_totals(&self.field).to_array();
        let init = self.initial_totals.to_array();
        let scale = init.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        std::array::from_fn(|k| {
            let d = if init[k].abs() > 1e-12 * scale { init[k].abs() } else { scale };
            (now[k] + self.outflow[k] - self.source_total[k] - init[k]) / d
        })
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot::from_field(&self.spec.id.to_string(), self.t, &self.field, &self.gas)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub t: f64,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub time: f64,
    pub message: String,
    pub last_good_snapshot: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub setup_s: f64,
    pub stepping_s: f64,
    pub output_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: RunConfig,
    pub case: CaseSpec,
    pub grid: Grid,
    pub version: String,
    pub workers: usize,
    pub wall_time: PhaseTimes,
    pub steps: u64,
    pub final_time: f64,
    /// Relative drift of mass, x-momentum, y-momentum and energy, corrected
    /// for boundary flux and sources.
    pub conservation_drift: [f64; 4],
    pub fallback_count: u64,
    pub outputs: Vec<OutputRecord>,
    pub diagnostics: Vec<String>,
    pub failure: Option<FailureRecord>,
}

impl RunManifest {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}

fn write_snapshot(dir: &Path, snap: &Snapshot, format: OutputFormat, tag: &str) -> Result<Vec<OutputRecord>> {
    let stem = format!("{}_{tag}", slug(&snap.case));
    let mut out = Vec::new();
    let mut put = |ext: &str, bytes: Vec<u8>| -> Result<()> {
        let path = dir.join(format!("{stem}.{ext}"));
        write_atomic(&path, &bytes)?;
        out.push(OutputRecord {
            t: snap.t,
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    };
    if format != OutputFormat::Binary {
        put("csv", snap.to_csv().into_bytes())?;
    }
    if format != OutputFormat::Csv {
        put("bin", snap.to_binary())?;
    }
    Ok(out)
}

/// Appends one row per requested diagnostic; returns the files touched.
pub fn write_diagnostics(dir: &Path, sim: &Simulation) -> Result<Vec<PathBuf>> {
    let (f, t, gas, g) = (&sim.field, sim.t, &sim.gas, sim.field.grid);
    let mut files = Vec::new();
    for kind in &sim.spec.diagnostics {
        let name = kind.name();
        let path = match kind {
            DiagnosticKind::ContourField => continue,
            DiagnosticKind::LineProfile => {
                let j = g.ny / 2;
                let rows: Vec<Vec<f64>> = (0..g.nx)
                    .map(|i| {
                        let w = f.get(i as isize, j as isize);
                        let u = if w.rho > 0.0 { w.mx / w.rho } else { 0.0 };
                        vec![t, g.x_center(i as isize), w.rho, u, w.pressure(gas)]
                    })
                    .collect();
                append_diagnostic(dir, name, &["t", "x", "rho", "u", "p"], &rows)?
            }
            DiagnosticKind::SymmetryRotation => {
                append_diagnostic(dir, name, &["t", "error"], &[vec![t, diag::rotation_symmetry_error(f)]])?
            }
            DiagnosticKind::SymmetryDiagonal => {
                append_diagnostic(dir, name, &["t", "error"], &[vec![t, diag::diagonal_symmetry_error(f)]])?
            }
            DiagnosticKind::MinDensity => {
                let (m, i, j) = diag::min_density(f);
                let row = vec![t, m, g.x_center(i as isize), g.y_center(j as isize)];
                append_diagnostic(dir, name, &["t", "rho_min", "x", "y"], &[row])?
            }
            DiagnosticKind::TotalConservation => {
                let tot = field_totals(f).to_array();
                let d = sim.conservation_drift();
                let mut row = vec![t];
                row.extend(tot);
                row.extend(d);
                let cols = [
                    "t", "mass", "mx", "my", "energy", "drift_mass", "drift_mx", "drift_my", "drift_energy",
                ];
                append_diagnostic(dir, name, &cols, &[row])?
            }
            DiagnosticKind::OracleL1Error => {
                let e = diag::oracle_l1_error(&sim.spec, f, t)?;
                let row = vec![t, e.mean, e.relative, e.cells as f64];
                append_diagnostic(dir, name, &["t", "l1_mean", "l1_relative", "cells"], &[row])?
            }
            DiagnosticKind::OscillationAmplitude => {
                append_diagnostic(dir, name, &["t", "amplitude"], &[vec![t, diag::post_shock_oscillation(f, gas)]])?
            }
            DiagnosticKind::MixingWidth => {
                append_diagnostic(dir, name, &["t", "width"], &[vec![t, diag::mixing_width(f, 1.5)]])?
            }
            DiagnosticKind::ShockIndicator => append_diagnostic(
                dir,
                name,
                &["t", "max_relative_pressure_jump"],
                &[vec![t, diag::max_pressure_jump(f, gas)]],
            )?,
        };
        if !files.contains(&path) {
            files.push(path);
        }
    }
    Ok(files)
}

fn time_tag(t: f64) -> String {
    format!("t{t}")
}

/// Resolves the case, mesh and output times of a configuration.
pub fn prepare(config: &RunConfig) -> Result<(CaseSpec, Grid, Vec<f64>)> {
    config.validate()?;
    let mut spec = case_by_name(&config.case)?;
    if let Some(t) = config.t_end {
        if !(t > spec.t_start) {
            return Err(Error::Config(format!("t_end {t} must exceed the start time {}", spec.t_start)));
        }
        spec.t_end = t;
    }
    let mesh = config.mesh.map(|m| m.resolve(&spec)).unwrap_or(spec.mesh);
    if mesh.0 < 5 || (!spec.is_1d() && mesh.1 < 5) {
        return Err(Error::Config(format!("mesh {}x{} is too small", mesh.0, mesh.1)));
    }
    let grid = spec.grid_with(mesh);
    let mut times: Vec<f64> = config
        .output_times
        .clone()
        .unwrap_or_else(|| spec.output_times.clone())
        .into_iter()
        .filter(|&t| t > spec.t_start && t <= spec.t_end)
        .collect();
    if !times.contains(&spec.t_end) {
        times.push(spec.t_end);
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();
    Ok((spec, grid, times))
}

/// Executes a configured run, writing snapshots, diagnostics and a manifest
/// into `config.out_dir`. A step failure is recorded in the manifest together
/// with a snapshot of the last good state.
pub fn run(config: &RunConfig) -> Result<RunManifest> {
    let t0 = Instant::now();
    let (spec, grid, times) = prepare(config)?;
    let dir = config.out_dir.clone();
    std::fs::create_dir_all(&dir)?;
    let workers = worker_count(config.threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let scheme = config.scheme(grid.dx);
    let mut sim = Simulation::new(spec.clone(), grid, scheme)?;
    let setup_s = t0.elapsed().as_secs_f64();

    let (mut stepping, mut output_s) = (0.0, 0.0);
    let mut outputs = Vec::new();
    let mut diag_files: Vec<PathBuf> = Vec::new();
    let mut failure = None;
    for &t_out in &times {
        let before = sim.field.clone();
        let t_before = sim.t;
        let s = Instant::now();
        let r = pool.install(|| sim.advance_to(t_out));
        stepping += s.elapsed().as_secs_f64();
        let s = Instant::now();
        match r {
            Ok(()) => {
                outputs.extend(write_snapshot(&dir, &sim.snapshot(), config.format, &time_tag(t_out))?);
                for p in write_diagnostics(&dir, &sim)? {
                    if !diag_files.contains(&p) {
                        diag_files.push(p);
                    }
                }
                output_s += s.elapsed().as_secs_f64();
            }
            Err(e) => {
                // `sim.field` may be partially updated; keep the last state
                // that passed the admissibility checks.
                let last = if sim.field.check_admissible(&sim.gas).is_ok() {
                    sim.snapshot()
                } else {
                    Snapshot::from_field(&spec.id.to_string(), t_before, &before, &sim.gas)
                };
                let rec = write_snapshot(&dir, &last, config.format, "last-good")?;
                let time = match &e {
                    Error::StepFailure { time, .. } => *time,
                    _ => sim.t,
                };
                failure = Some(FailureRecord {
                    time,
                    message: e.to_string(),
                    last_good_snapshot: rec.first().map(|r| r.path.clone()),
                });
                outputs.extend(rec);
                output_s += s.elapsed().as_secs_f64();
                break;
            }
        }
    }

    let manifest = RunManifest {
        config: config.clone(),
        case: spec,
        grid,
        version: env!("CARGO_PKG_VERSION").to_string(),
        workers,
        wall_time: PhaseTimes {
            setup_s,
            stepping_s: stepping,
            output_s,
        },
        steps: sim.steps,
        final_time: sim.t,
        conservation_drift: sim.conservation_drift(),
        fallback_count: sim.stats.fallbacks,
        outputs,
        diagnostics: diag_files.iter().map(|p| p.display().to_string()).collect(),
        failure,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&dir.join("manifest.json"), json.as_bytes())?;
    Ok(manifest)
}

/// Oracle field of `case` on its (or the given) mesh at time `t`.
pub fn reference_snapshot(case: &str, mesh: Option<MeshSpec>, t: Option<f64>) -> Result<Snapshot> {
    let spec = case_by_name(case)?;
    if !spec.id.has_oracle() {
        return Err(crate::cases::oracle_state(&spec, 0.0, 0.0, 0.0).unwrap_err());
    }
    let grid = spec.grid_with(mesh.map(|m| m.resolve(&spec)).unwrap_or(spec.mesh));
    let t = t.unwrap_or(spec.t_end);
    let field = crate::cases::oracle_field(&spec, grid, t)?;
    Ok(Snapshot::from_field(&spec.id.to_string(), t, &field, &spec.gas()))
}

/// Writes the oracle snapshot to `path` (binary when it ends in `.bin`).
pub fn emit_reference(case: &str, mesh: Option<MeshSpec>, t: Option<f64>, path: &Path) -> Result<Snapshot> {
    let snap = reference_snapshot(case, mesh, t)?;
    let bytes = if path.extension().is_some_and(|e| e == "bin") {
        snap.to_binary()
    } else {
        snap.to_csv().into_bytes()
    };
    write_atomic(path, &bytes)?;
    Ok(snap)
}

pub fn compare_files(a: &Path, b: &Path) -> Result<crate::io::Norms> {
    crate::io::compare(&Snapshot::read(a)?, &Snapshot::read(b)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub l1: f64,
    /// Observed order from the previous row.
    pub order: Option<f64>,
}

/// Runs `config` on each mesh to the case end time and reports the oracle
/// density L1 error (cell mean) with observed orders.
pub fn convergence(config: &RunConfig, meshes: &[MeshSpec]) -> Result<Vec<ConvergenceRow>> {
    let (spec, _, _) = prepare(config)?;
    if !spec.id.has_oracle() {
        return Err(crate::cases::oracle_state(&spec, 0.0, 0.0, 0.0).unwrap_err());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(config.threads))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for m in meshes {
        let grid = spec.grid_with(m.resolve(&spec));
        let mut sim = Simulation::new(spec.clone(), grid, config.scheme(grid.dx))?;
        pool.install(|| sim.advance_to(spec.t_end))?;
        let e = diag::oracle_l1_error(&spec, &sim.field, sim.t)?;
        let order = rows.last().map(|p| (p.l1 / e.mean).ln() / (p.dx / grid.dx).ln());
        rows.push(ConvergenceRow {
            nx: grid.nx,
            ny: grid.ny,
            dx: grid.dx,
            l1: e.mean,
            order,
        });
    }
    Ok(rows)
}
