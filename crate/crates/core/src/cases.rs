//! Registry of benchmark problems.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{BoundaryConditions, BoundaryKind, SourceModel};
use crate::oracles::{cell_average, exact_riemann, CornerState, HurricaneExact, IsentropicVortex, PressurelessReference, VortexSign};
use crate::state::{Field, GasModel, Grid, PrimitiveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HurricaneRegime {
    Critical,
    High,
    Low,
}

impl HurricaneRegime {
    pub fn v0(self) -> f64 {
        match self {
            HurricaneRegime::Critical => 10.0,
            HurricaneRegime::High => 12.5,
            HurricaneRegime::Low => 7.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RarefactionStrength {
    Strong,
    Weak,
}

/// Stable identifier of a benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CaseId {
    TitarevToro,
    LargeDensityRatio,
    LargeDensityRatioMild,
    Hurricane(HurricaneRegime),
    VortexSheets { sign: VortexSign, p0: f64 },
    Rarefaction(RarefactionStrength),
    FourShocks,
    RayleighTaylor,
    IsentropicVortex,
}

pub const SAME_SIGN_P0: [f64; 5] = [1.0, 0.5, 0.25, 0.15, 0.1];
pub const OPPOSITE_SIGN_P0: [f64; 5] = [1.0, 0.75, 0.5, 0.3, 0.2];

impl CaseId {
    /// Every registered case, with each vortex-sheet pressure listed.
    pub fn all() -> Vec<CaseId> {
        let mut v = vec![
            CaseId::TitarevToro,
            CaseId::LargeDensityRatio,
            CaseId::LargeDensityRatioMild,
            CaseId::Hurricane(HurricaneRegime::Critical),
            CaseId::Hurricane(HurricaneRegime::High),
            CaseId::Hurricane(HurricaneRegime::Low),
        ];
        for p0 in SAME_SIGN_P0 {
            v.push(CaseId::VortexSheets {
                sign: VortexSign::Same,
                p0,
            });
        }
        for p0 in OPPOSITE_SIGN_P0 {
            v.push(CaseId::VortexSheets {
                sign: VortexSign::Opposite,
                p0,
            });
        }
        v.extend([
            CaseId::Rarefaction(RarefactionStrength::Strong),
            CaseId::Rarefaction(RarefactionStrength::Weak),
            CaseId::FourShocks,
            CaseId::RayleighTaylor,
            CaseId::IsentropicVortex,
        ]);
        v
    }

    pub fn has_oracle(&self) -> bool {
        matches!(
            self,
            CaseId::LargeDensityRatio
                | CaseId::LargeDensityRatioMild
                | CaseId::Hurricane(HurricaneRegime::Critical)
                | CaseId::VortexSheets { .. }
                | CaseId::IsentropicVortex
        )
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseId::TitarevToro => f.write_str("titarev-toro"),
            CaseId::LargeDensityRatio => f.write_str("large-density-ratio"),
            CaseId::LargeDensityRatioMild => f.write_str("large-density-ratio-mild"),
            CaseId::Hurricane(HurricaneRegime::Critical) => f.write_str("hurricane-critical"),
            CaseId::Hurricane(HurricaneRegime::High) => f.write_str("hurricane-high"),
            CaseId::Hurricane(HurricaneRegime::Low) => f.write_str("hurricane-low"),
            CaseId::VortexSheets {
                sign: VortexSign::Same,
                p0,
            } => write!(f, "vortex-sheets-same:p0={p0}"),
            CaseId::VortexSheets {
                sign: VortexSign::Opposite,
                p0,
            } => write!(f, "vortex-sheets-opposite:p0={p0}"),
            CaseId::Rarefaction(RarefactionStrength::Strong) => f.write_str("rarefaction-strong"),
            CaseId::Rarefaction(RarefactionStrength::Weak) => f.write_str("rarefaction-weak"),
            CaseId::FourShocks => f.write_str("four-shocks"),
            CaseId::RayleighTaylor => f.write_str("rayleigh-taylor"),
            CaseId::IsentropicVortex => f.write_str("isentropic-vortex"),
        }
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let simple = match s {
            "titarev-toro" => Some(CaseId::TitarevToro),
            "large-density-ratio" => Some(CaseId::LargeDensityRatio),
            "large-density-ratio-mild" => Some(CaseId::LargeDensityRatioMild),
            "hurricane-critical" => Some(CaseId::Hurricane(HurricaneRegime::Critical)),
            "hurricane-high" => Some(CaseId::Hurricane(HurricaneRegime::High)),
            "hurricane-low" => Some(CaseId::Hurricane(HurricaneRegime::Low)),
            "rarefaction-strong" => Some(CaseId::Rarefaction(RarefactionStrength::Strong)),
            "rarefaction-weak" => Some(CaseId::Rarefaction(RarefactionStrength::Weak)),
            "four-shocks" => Some(CaseId::FourShocks),
            "rayleigh-taylor" => Some(CaseId::RayleighTaylor),
            "isentropic-vortex" => Some(CaseId::IsentropicVortex),
            _ => None,
        };
        if let Some(c) = simple {
            return Ok(c);
        }
        for (prefix, sign, allowed) in [
            ("vortex-sheets-same", VortexSign::Same, &SAME_SIGN_P0),
            ("vortex-sheets-opposite", VortexSign::Opposite, &OPPOSITE_SIGN_P0),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                let p0 = match rest.strip_prefix(":p0=") {
                    Some(v) => v
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("invalid p0 in `{s}`")))?,
                    None if rest.is_empty() => allowed[0],
                    None => return Err(Error::Config(format!("unknown case `{s}`"))),
                };
                if !allowed.contains(&p0) {
                    return Err(Error::Config(format!("p0 = {p0} is not one of {allowed:?} for {prefix}")));
                }
                return Ok(CaseId::VortexSheets { sign, p0 });
            }
        }
        Err(Error::Config(format!(
            "unknown case `{s}`; known cases: {}",
            CaseId::all().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        )))
    }
}

impl TryFrom<String> for CaseId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CaseId> for String {
    fn from(c: CaseId) -> String {
        c.to_string()
    }
}

/// How initial cell values are obtained from the initial-condition function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sampling {
    /// Value at the cell centre.
    Point,
    /// Gauss-quadrature cell average of the conserved variables.
    CellAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitialCondition {
    /// Shock-entropy wave interaction: `left` for `x <= x_jump`, otherwise
    /// `(1 + amplitude sin(wavenumber x), 0, 1)`.
    ShockEntropy {
        left: PrimitiveState,
        x_jump: f64,
        amplitude: f64,
        wavenumber: f64,
    },
    /// Exact solution of a Riemann problem at time `t0` after the jump at `x0`.
    ExactRiemann {
        left: PrimitiveState,
        right: PrimitiveState,
        x0: f64,
        t0: f64,
    },
    Hurricane { a: f64, v0: f64, rho0: f64 },
    /// Four constant quadrants, numbered counterclockwise from `x > xc, y > yc`.
    Quadrants { corner: (f64, f64), states: [PrimitiveState; 4] },
    /// Two stratified layers split at `y_interface` with a velocity perturbation.
    RayleighTaylor { y_interface: f64, amplitude: f64, wavenumber: f64 },
    Vortex(IsentropicVortex),
}

impl InitialCondition {
    pub fn sample(&self, x: f64, y: f64, gamma: f64) -> PrimitiveState {
        match *self {
            InitialCondition::ShockEntropy {
                left,
                x_jump,
                amplitude,
                wavenumber,
            } => {
                if x <= x_jump {
                    left
                } else {
                    PrimitiveState::new(1.0 + amplitude * (wavenumber * x).sin(), 0.0, 0.0, 1.0)
                }
            }
            InitialCondition::ExactRiemann { left, right, x0, t0 } => {
                let sol = exact_riemann(left, right, gamma).expect("registered Riemann data are admissible");
                sol.sample_at(x, t0, x0)
            }
            InitialCondition::Hurricane { a, v0, rho0 } => {
                let r = (x * x + y * y).sqrt();
                let p = a * rho0.powf(gamma);
                if r == 0.0 {
                    return PrimitiveState::new(rho0, 0.0, 0.0, p);
                }
                // (v0 sin(theta), -v0 cos(theta)) with theta the polar angle.
                PrimitiveState::new(rho0, v0 * (y / r), -v0 * (x / r), p)
            }
            InitialCondition::Quadrants { corner, states } => {
                let right = x > corner.0;
                let up = y > corner.1;
                match (right, up) {
                    (true, true) => states[0],
                    (false, true) => states[1],
                    (false, false) => states[2],
                    (true, false) => states[3],
                }
            }
            InitialCondition::RayleighTaylor {
                y_interface,
                amplitude,
                wavenumber,
            } => {
                let (rho, p) = if y <= y_interface {
                    (2.0, 2.0 * y + 1.0)
                } else {
                    (1.0, y + 1.5)
                };
                let c = (gamma * p / rho).sqrt();
                PrimitiveState::new(rho, 0.0, -amplitude * c * (wavenumber * x).cos(), p)
            }
            InitialCondition::Vortex(v) => v.sample(x, y, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    LineProfile,
    ContourField,
    SymmetryRotation,
    SymmetryDiagonal,
    MinDensity,
    TotalConservation,
    OracleL1Error,
    OscillationAmplitude,
    MixingWidth,
    ShockIndicator,
}

impl DiagnosticKind {
    pub fn name(self) -> &'static str {
        match self {
            DiagnosticKind::LineProfile => "line-profile",
            DiagnosticKind::ContourField => "contour-field",
            DiagnosticKind::SymmetryRotation => "symmetry-rotation",
            DiagnosticKind::SymmetryDiagonal => "symmetry-diagonal",
            DiagnosticKind::MinDensity => "min-density",
            DiagnosticKind::TotalConservation => "total-conservation",
            DiagnosticKind::OracleL1Error => "oracle-l1-error",
            DiagnosticKind::OscillationAmplitude => "oscillation-amplitude",
            DiagnosticKind::MixingWidth => "mixing-width",
            DiagnosticKind::ShockIndicator => "shock-indicator",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub id: CaseId,
    pub x_range: (f64, f64),
    /// Ignored for one-dimensional cases.
    pub y_range: (f64, f64),
    /// `ny == 1` marks a one-dimensional case.
    pub mesh: (usize, usize),
    pub gamma: f64,
    pub initial: InitialCondition,
    pub sampling: Sampling,
    pub boundary: BoundaryConditions,
    pub source: SourceModel,
    pub t_start: f64,
    pub t_end: f64,
    pub output_times: Vec<f64>,
    pub diagnostics: Vec<DiagnosticKind>,
    /// Settings chosen for this artifact rather than taken from the
    /// benchmark's original description.
    pub notes: Vec<String>,
}

impl CaseSpec {
    pub fn is_1d(&self) -> bool {
        self.mesh.1 == 1
    }

    pub fn gas(&self) -> GasModel {
        GasModel::new(self.gamma)
    }

    pub fn grid(&self) -> Grid {
        self.grid_with(self.mesh)
    }

    pub fn grid_with(&self, mesh: (usize, usize)) -> Grid {
        if self.is_1d() {
            Grid::new_1d(mesh.0, self.x_range)
        } else {
            Grid::new_2d(mesh.0, mesh.1, self.x_range, self.y_range)
        }
    }

    /// Mesh with spacing `h` in both directions.
    pub fn mesh_for_spacing(&self, h: f64) -> (usize, usize) {
        let nx = ((self.x_range.1 - self.x_range.0) / h).round() as usize;
        if self.is_1d() {
            (nx, 1)
        } else {
            (nx, ((self.y_range.1 - self.y_range.0) / h).round() as usize)
        }
    }

    pub fn initial_state(&self, x: f64, y: f64) -> PrimitiveState {
        self.initial.sample(x, y, self.gamma)
    }

    /// The initial field on `grid`.
    pub fn initial_field(&self, grid: Grid) -> Result<Field> {
        let gas = self.gas();
        let f = |x: f64, y: f64| self.initial_state(x, y);
        let field = Field::from_fn(grid, |i, j| {
            let (xc, yc) = (grid.x_center(i as isize), grid.y_center(j as isize));
            match self.sampling {
                Sampling::Point => f(xc, yc).to_conserved_unchecked(&gas),
                Sampling::CellAverage => cell_average(&f, &gas, xc, yc, grid.dx, grid.dy, !grid.is_1d()),
            }
        });
        field.check_admissible(&gas)?;
        Ok(field)
    }

    /// The pressureless-limit reference of vortex-sheet cases.
    pub fn pressureless_reference(&self) -> Option<PressurelessReference> {
        match (self.id, self.initial) {
            (CaseId::VortexSheets { sign, .. }, InitialCondition::Quadrants { corner, states }) => {
                let corners = states.map(|q| CornerState {
                    rho: q.rho,
                    u: q.u,
                    v: q.v,
                });
                PressurelessReference::new(sign, corners, corner.0, corner.1).ok()
            }
            _ => None,
        }
    }

    /// Exact hurricane solution (critical regime only).
    pub fn hurricane_exact(&self) -> Option<HurricaneExact> {
        match self.initial {
            InitialCondition::Hurricane { a, v0, rho0 } => HurricaneExact::new(a, v0, rho0).ok(),
            _ => None,
        }
    }

    /// Serialises the complete specification.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("case specs are serialisable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

fn prim(rho: f64, u: f64, v: f64, p: f64) -> PrimitiveState {
    PrimitiveState::new(rho, u, v, p)
}

pub fn case_titarev_toro() -> CaseSpec {
    CaseSpec {
        id: CaseId::TitarevToro,
        x_range: (-5.0, 5.0),
        y_range: (0.0, 1.0),
        mesh: (1000, 1),
        gamma: 1.4,
        initial: InitialCondition::ShockEntropy {
            left: prim(1.515695, 0.523346, 0.0, 1.805),
            x_jump: -4.5,
            amplitude: 0.1,
            wavenumber: 20.0 * std::f64::consts::PI,
        },
        sampling: Sampling::CellAverage,
        boundary: BoundaryConditions::all(BoundaryKind::Outflow),
        source: SourceModel::None,
        t_start: 0.0,
        t_end: 5.0,
        output_times: vec![5.0],
        diagnostics: vec![DiagnosticKind::LineProfile, DiagnosticKind::OscillationAmplitude],
        notes: vec![],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityRatioVariant {
    Primary,
    Milder,
}

/// Cells per unit length of the original unit-interval problem.
pub const DENSITY_RATIO_CELLS_PER_UNIT: usize = 200;

pub fn case_large_density_ratio(variant: DensityRatioVariant) -> CaseSpec {
    let left = prim(10000.0, 0.0, 0.0, 10000.0);
    let (id, right) = match variant {
        DensityRatioVariant::Primary => (CaseId::LargeDensityRatio, prim(1.0, 0.0, 0.0, 1.0)),
        DensityRatioVariant::Milder => (CaseId::LargeDensityRatioMild, prim(1000.0, 0.0, 0.0, 1000.0)),
    };
    let (x0, t0, t_end) = (0.3, 1.2, 12.0);
    let sol = exact_riemann(left, right, 1.4).expect("admissible data");
    let (smin, smax) = sol.extreme_speeds();
    // Keep every wave inside the domain until t_end, at the original spacing.
    let lo = (x0 + smin * t_end - 0.5).min(0.0).floor();
    let hi = (x0 + smax * t_end + 0.5).max(1.0).ceil();
    let cells = ((hi - lo) as usize) * DENSITY_RATIO_CELLS_PER_UNIT;
    CaseSpec {
        id,
        x_range: (lo, hi),
        y_range: (0.0, 1.0),
        mesh: (cells, 1),
        gamma: 1.4,
        initial: InitialCondition::ExactRiemann { left, right, x0, t0 },
        sampling: Sampling::CellAverage,
        boundary: BoundaryConditions::all(BoundaryKind::Outflow),
        source: SourceModel::None,
        t_start: t0,
        t_end,
        output_times: vec![t_end],
        diagnostics: vec![DiagnosticKind::LineProfile, DiagnosticKind::OracleL1Error],
        notes: vec![format!(
            "domain enlarged to [{lo}, {hi}] so all waves stay interior until t = {t_end}; spacing 1/{DENSITY_RATIO_CELLS_PER_UNIT}"
        )],
    }
}

pub fn case_hurricane(regime: HurricaneRegime) -> CaseSpec {
    let t_end = match regime {
        HurricaneRegime::High => 0.08,
        _ => 0.1,
    };
    let mut diagnostics = vec![
        DiagnosticKind::ContourField,
        DiagnosticKind::MinDensity,
        DiagnosticKind::SymmetryRotation,
    ];
    if regime == HurricaneRegime::Critical {
        diagnostics.push(DiagnosticKind::OracleL1Error);
    }
    CaseSpec {
        id: CaseId::Hurricane(regime),
        x_range: (-1.0, 1.0),
        y_range: (-1.0, 1.0),
        mesh: (200, 200),
        gamma: 2.0,
        initial: InitialCondition::Hurricane {
            a: 25.0,
            v0: regime.v0(),
            rho0: 1.0,
        },
        sampling: Sampling::Point,
        boundary: BoundaryConditions::all(BoundaryKind::Outflow),
        source: SourceModel::None,
        t_start: 0.0,
        t_end,
        output_times: vec![t_end],
        diagnostics,
        notes: vec![format!("domain [-1,1]^2 and t_end = {t_end} chosen for this artifact")],
    }
}

pub fn case_vortex_sheets(sign: VortexSign, p0: f64) -> Result<CaseSpec> {
    let allowed = match sign {
        VortexSign::Same => &SAME_SIGN_P0,
        VortexSign::Opposite => &OPPOSITE_SIGN_P0,
    };
    if !allowed.contains(&p0) {
        return Err(Error::Config(format!("p0 = {p0} is not one of {allowed:?}")));
    }
    // Same sign: U1 = U2 > U3 = U4 and V2 = V3 > V1 = V4 (vacuum in the limit).
    let (u_top, u_bottom) = match sign {
        VortexSign::Same => (0.75, -0.75),
        VortexSign::Opposite => (-0.75, 0.75),
    };
    let states = [
        prim(1.0, u_top, -0.5, p0),
        prim(2.0, u_top, 0.5, p0),
        prim(1.0, u_bottom, 0.5, p0),
        prim(3.0, u_bottom, -0.5, p0),
    ];
    let (t_end, h) = match sign {
        VortexSign::Same => (0.35, if p0 >= 0.25 { 1.0 / 1500.0 } else { 1.0 / 400.0 }),
        VortexSign::Opposite => (if p0 == 0.2 { 0.28 } else { 0.25 }, 1.0 / 1500.0),
    };
    let n = (1.0f64 / h).round() as usize;
    let mut diagnostics = vec![DiagnosticKind::ContourField, DiagnosticKind::OracleL1Error];
    if sign == VortexSign::Same {
        diagnostics.push(DiagnosticKind::MinDensity);
    }
    Ok(CaseSpec {
        id: CaseId::VortexSheets { sign, p0 },
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        mesh: (n, n),
        gamma: 1.4,
        initial: InitialCondition::Quadrants {
            corner: (0.5, 0.5),
            states,
        },
        sampling: Sampling::Point,
        boundary: BoundaryConditions::all(BoundaryKind::Outflow),
        source: SourceModel::None,
        t_start: 0.0,
        t_end,
        output_times: vec![t_end],
        diagnostics,
        notes: vec!["quadrant velocities ordered so that the limit has the stated structure".into()],
    })
}

pub fn case_rarefaction_interaction(strength: RarefactionStrength) -> CaseSpec {
    let states = match strength {
        RarefactionStrength::Strong => [
            prim(1.0, 0.6233, 0.6233, 1.5),
            prim(0.389, -0.6233, 0.6233, 0.4),
            prim(1.0, -0.6233, -0.6233, 1.5),
            prim(0.389, 0.6233, -0.6233, 0.4),
        ],
        RarefactionStrength::Weak => [
            prim(1.0, 0.0312, 0.0312, 0.5),
            prim(0.927, -0.0312, 0.0312, 0.45),
            prim(1.0, -0.0312, -0.0312, 0.5),
            prim(0.927, 0.0312, -0.0312, 0.45),
        ],
    };
    CaseSpec {
        id: CaseId::Rarefaction(strength),
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        mesh: (400, 400),
        gamma: 1.4,
        initial: InitialCondition::Quadrants {
            corner: (0.5, 0.5),
            states,
        },
        sampling: Sampling::Point,
        boundary: BoundaryConditions::all(BoundaryKind::Outflow),
        source: SourceModel::None,
        t_start: 0.0,
        t_end: 0.3,
        output_times: vec![0.3],
        diagnostics: vec![DiagnosticKind::ContourField, DiagnosticKind::ShockIndicator],
        notes: vec!["artifact-chosen end time t = 0.3".into()],
    }
}

pub fn case_four_shocks() -> CaseSpec {
    CaseSpec {
        id: CaseId::FourShocks,
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        mesh: (400, 400),
        gamma: 1.4,
        initial: InitialCondition::Quadrants {
            corner: (0.8, 0.8),
            states: [
                prim(1.5, 0.0, 0.0, 1.5),
                prim(0.5323, 1.206, 0.0, 0.3),
                prim(0.138, 1.206, 1.206, 0.029),
                prim(0.5323, 0.0, 1.206, 0.3),
            ],
        },
        sampling: Sampling::Point,
        boundary: BoundaryConditions::all(BoundaryKind::Outflow),
        source: SourceModel::None,
        t_start: 0.0,
        t_end: 0.8,
        output_times: vec![0.8],
        diagnostics: vec![DiagnosticKind::ContourField, DiagnosticKind::SymmetryDiagonal],
        notes: vec!["artifact-chosen end time t = 0.8; desk mesh 1/400 (full reproduction 1/1000)".into()],
    }
}

pub fn case_rayleigh_taylor() -> CaseSpec {
    let gamma = 5.0 / 3.0;
    CaseSpec {
        id: CaseId::RayleighTaylor,
        x_range: (0.0, 0.25),
        y_range: (0.0, 1.0),
        mesh: (100, 400),
        gamma,
        initial: InitialCondition::RayleighTaylor {
            y_interface: 0.5,
            amplitude: 0.025,
            wavenumber: 8.0 * std::f64::consts::PI,
        },
        sampling: Sampling::CellAverage,
        boundary: BoundaryConditions {
            x_lo: BoundaryKind::Reflective,
            x_hi: BoundaryKind::Reflective,
            y_lo: BoundaryKind::Fixed(prim(2.0, 0.0, 0.0, 1.0)),
            y_hi: BoundaryKind::Fixed(prim(1.0, 0.0, 0.0, 2.5)),
        },
        source: SourceModel::Gravity { g: 1.0 },
        t_start: 0.0,
        t_end: 2.5,
        output_times: vec![1.75, 2.0, 2.25, 2.5],
        diagnostics: vec![
            DiagnosticKind::ContourField,
            DiagnosticKind::TotalConservation,
            DiagnosticKind::MixingWidth,
        ],
        notes: vec!["desk mesh 1/400 (full reproduction 1/800 and 1/1600)".into()],
    }
}

pub fn case_isentropic_vortex() -> CaseSpec {
    let v = IsentropicVortex::default();
    CaseSpec {
        id: CaseId::IsentropicVortex,
        x_range: (0.0, 10.0),
        y_range: (0.0, 10.0),
        mesh: (64, 64),
        gamma: v.gamma,
        initial: InitialCondition::Vortex(v),
        sampling: Sampling::CellAverage,
        boundary: BoundaryConditions::all(BoundaryKind::Periodic),
        source: SourceModel::None,
        t_start: 0.0,
        t_end: 2.0,
        output_times: vec![2.0],
        diagnostics: vec![DiagnosticKind::OracleL1Error, DiagnosticKind::TotalConservation],
        notes: vec!["smooth convergence case added for order verification".into()],
    }
}

pub fn case(id: CaseId) -> Result<CaseSpec> {
    Ok(match id {
        CaseId::TitarevToro => case_titarev_toro(),
        CaseId::LargeDensityRatio => case_large_density_ratio(DensityRatioVariant::Primary),
        CaseId::LargeDensityRatioMild => case_large_density_ratio(DensityRatioVariant::Milder),
        CaseId::Hurricane(r) => case_hurricane(r),
        CaseId::VortexSheets { sign, p0 } => case_vortex_sheets(sign, p0)?,
        CaseId::Rarefaction(s) => case_rarefaction_interaction(s),
        CaseId::FourShocks => case_four_shocks(),
        CaseId::RayleighTaylor => case_rayleigh_taylor(),
        CaseId::IsentropicVortex => case_isentropic_vortex(),
    })
}

pub fn case_by_name(name: &str) -> Result<CaseSpec> {
    case(name.parse()?)
}

/// Exact solution of an oracle-backed case at `(x, y, t)`.
pub fn oracle_state(spec: &CaseSpec, x: f64, y: f64, t: f64) -> Result<PrimitiveState> {
    match (spec.id, spec.initial) {
        (CaseId::LargeDensityRatio | CaseId::LargeDensityRatioMild, InitialCondition::ExactRiemann { left, right, x0, .. }) => {
            Ok(exact_riemann(left, right, spec.gamma)?.sample_at(x, t, x0))
        }
        (CaseId::Hurricane(_), _) => {
            let h = spec
                .hurricane_exact()
                .ok_or_else(|| Error::Unsupported(format!("{} has no exact solution", spec.id)))?;
            Ok(h.sample(x, y, t))
        }
        (CaseId::VortexSheets { .. }, InitialCondition::Quadrants { states, .. }) => {
            let r = spec
                .pressureless_reference()
                .ok_or_else(|| Error::Config("invalid vortex-sheet data".into()))?;
            let p0 = states[0].p;
            Ok(match r.classify(x, y, t) {
                crate::oracles::Region::Corner(k) => {
                    let c = r.corners[k - 1];
                    PrimitiveState::new(c.rho, c.u, c.v, p0)
                }
                _ => PrimitiveState::new(0.0, 0.0, 0.0, 0.0),
            })
        }
        (CaseId::IsentropicVortex, InitialCondition::Vortex(v)) => Ok(v.sample(x, y, t)),
        _ => Err(Error::Unsupported(format!(
            "case `{}` has no oracle; oracle-backed cases: {}",
            spec.id,
            CaseId::all()
                .iter()
                .filter(|c| c.has_oracle())
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

/// Oracle field on `grid` at time `t`, in conserved variables, sampled like
/// the initial field. Vacuum and singular regions are stored as zero density.
pub fn oracle_field(spec: &CaseSpec, grid: Grid, t: f64) -> Result<Field> {
    let gas = spec.gas();
    // Probe once to surface unsupported cases as errors.
    oracle_state(spec, grid.x_center(0), grid.y_center(0), t)?;
    let exact = |x: f64, y: f64| oracle_state(spec, x, y, t).unwrap_or(PrimitiveState::new(0.0, 0.0, 0.0, 0.0));
    Ok(Field::from_fn(grid, |i, j| {
        let (x, y) = (grid.x_center(i as isize), grid.y_center(j as isize));
        match spec.sampling {
            Sampling::Point => exact(x, y).to_conserved_unchecked(&gas),
            Sampling::CellAverage => cell_average(&exact, &gas, x, y, grid.dx, grid.dy, !grid.is_1d()),
        }
    }))
}
