//! Gas model, conserved/primitive variables and the ghost-padded uniform grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Location, Result};

/// Ghost-layer width on every side of the interior.
pub const GHOST: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    pub gamma: f64,
    /// Internal degrees of freedom of the two-dimensional kinetic model.
    pub k_internal: f64,
}

impl GasModel {
    pub fn new(gamma: f64) -> Self {
        assert!(gamma > 1.0, "specific heat ratio must exceed 1, got {gamma}");
        GasModel {
            gamma,
            k_internal: (4.0 - 2.0 * gamma) / (gamma - 1.0),
        }
    }
}

/// Cell values `(rho, rho U, rho V, rho E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConservedState {
    pub rho: f64,
    pub mx: f64,
    pub my: f64,
    pub e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl ConservedState {
    pub const fn new(rho: f64, mx: f64, my: f64, e: f64) -> Self {
        ConservedState { rho, mx, my, e }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        ConservedState::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.rho, self.mx, self.my, self.e]
    }

    pub fn pressure(&self, gas: &GasModel) -> f64 {
        (gas.gamma - 1.0) * (self.e - 0.5 * (self.mx * self.mx + self.my * self.my) / self.rho)
    }

    pub fn is_admissible(&self, gas: &GasModel) -> bool {
        self.rho > 0.0 && self.rho.is_finite() && {
            let p = self.pressure(gas);
            p > 0.0 && p.is_finite()
        }
    }

    pub fn to_primitive(&self, gas: &GasModel) -> Result<PrimitiveState> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Inadmissible {
                location: Location::Unknown,
                rho: self.rho,
                p: f64::NAN,
            });
        }
        let u = self.mx / self.rho;
        let v = self.my / self.rho;
        let p = (gas.gamma - 1.0) * (self.e - 0.5 * (self.mx * u + self.my * v));
        if !p.is_finite() {
            return Err(Error::Inadmissible {
                location: Location::Unknown,
                rho: self.rho,
                p,
            });
        }
        Ok(PrimitiveState {
            rho: self.rho,
            u,
            v,
            p,
        })
    }

    /// Swaps the roles of the two velocity components.
    #[inline]
    pub fn transposed(self) -> Self {
        ConservedState::new(self.rho, self.my, self.mx, self.e)
    }
}

impl PrimitiveState {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        PrimitiveState { rho, u, v, p }
    }

    pub fn to_conserved(&self, gas: &GasModel) -> Result<ConservedState> {
        if !(self.rho > 0.0) || !(self.p > 0.0) || !self.u.is_finite() || !self.v.is_finite() {
            return Err(Error::Inadmissible {
                location: Location::Unknown,
                rho: self.rho,
                p: self.p,
            });
        }
        Ok(self.to_conserved_unchecked(gas))
    }

    /// Conversion without admissibility checks; used for vacuum-adjacent
    /// reference states where `rho` or `p` may be exactly zero.
    pub fn to_conserved_unchecked(&self, gas: &GasModel) -> ConservedState {
        let mx = self.rho * self.u;
        let my = self.rho * self.v;
        let e = 0.5 * (mx * self.u + my * self.v) + self.p / (gas.gamma - 1.0);
        ConservedState::new(self.rho, mx, my, e)
    }

    pub fn sound_speed(&self, gas: &GasModel) -> f64 {
        (gas.gamma * self.p / self.rho).sqrt()
    }
}

/// Uniform structured grid. Cell `(i, j)` with `0 <= i < nx`, `0 <= j < ny`
/// is centred at `(x0 + (i + 1/2) dx, y0 + (j + 1/2) dy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
}

impl Grid {
    pub fn new_2d(nx: usize, ny: usize, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Grid {
            nx,
            ny,
            dx: (x_range.1 - x_range.0) / nx as f64,
            dy: (y_range.1 - y_range.0) / ny as f64,
            x0: x_range.0,
            y0: y_range.0,
        }
    }

    /// A one-dimensional grid: a single row of cells, with `dy = 1`.
    pub fn new_1d(nx: usize, x_range: (f64, f64)) -> Self {
        Grid {
            nx,
            ny: 1,
            dx: (x_range.1 - x_range.0) / nx as f64,
            dy: 1.0,
            x0: x_range.0,
            y0: 0.0,
        }
    }

    pub fn is_1d(&self) -> bool {
        self.ny == 1
    }

    pub fn ghost(&self) -> usize {
        GHOST
    }

    /// Centres are measured from the domain midpoint so that grids symmetric
    /// about the origin have exactly antisymmetric coordinates.
    pub fn x_center(&self, i: isize) -> f64 {
        let mid = self.x0 + 0.5 * self.nx as f64 * self.dx;
        mid + (i as f64 + 0.5 - 0.5 * self.nx as f64) * self.dx
    }

    pub fn y_center(&self, j: isize) -> f64 {
        if self.is_1d() {
            0.0
        } else {
            let mid = self.y0 + 0.5 * self.ny as f64 * self.dy;
            mid + (j as f64 + 0.5 - 0.5 * self.ny as f64) * self.dy
        }
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.nx as f64 * self.dx
    }

    pub fn y_max(&self) -> f64 {
        self.y0 + self.ny as f64 * self.dy
    }

    /// Number of ghost layers in y: none for 1D grids.
    pub fn ghost_y(&self) -> usize {
        if self.is_1d() {
            0
        } else {
            GHOST
        }
    }

    pub fn padded_nx(&self) -> usize {
        self.nx + 2 * GHOST
    }

    pub fn padded_ny(&self) -> usize {
        self.ny + 2 * self.ghost_y()
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy
    }
}

/// Cell-averaged conserved variables on the interior plus ghost layers.
///
/// Indices passed to [`Field::get`] are interior-relative: `(0, 0)` is the
/// first interior cell and ghosts have negative or `>= n` indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    data: Vec<ConservedState>,
}

impl Field {
    pub fn new(grid: Grid) -> Self {
        Field {
            grid,
            data: vec![ConservedState::default(); grid.padded_nx() * grid.padded_ny()],
        }
    }

    pub fn uniform(grid: Grid, w: ConservedState) -> Self {
        Field {
            grid,
            data: vec![w; grid.padded_nx() * grid.padded_ny()],
        }
    }

    /// Builds the interior from a per-cell function of `(i, j)`.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(usize, usize) -> ConservedState) -> Self {
        let mut field = Field::new(grid);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                field.set(i as isize, j as isize, f(i, j));
            }
        }
        field
    }

    #[inline]
    pub fn index(&self, i: isize, j: isize) -> usize {
        let gx = GHOST as isize;
        let gy = self.grid.ghost_y() as isize;
        ((j + gy) as usize) * self.grid.padded_nx() + (i + gx) as usize
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> ConservedState {
        self.data[self.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, w: ConservedState) {
        let k = self.index(i, j);
        self.data[k] = w;
    }

    pub fn raw(&self) -> &[ConservedState] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [ConservedState] {
        &mut self.data
    }

    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, ConservedState)> + '_ {
        let g = self.grid;
        (0..g.ny).flat_map(move |j| (0..g.nx).map(move |i| (i, j, self.get(i as isize, j as isize))))
    }

    pub fn primitive(&self, i: isize, j: isize, gas: &GasModel) -> Result<PrimitiveState> {
        self.get(i, j)
            .to_primitive(gas)
            .map_err(|e| e.at(Location::Cell { i, j }))
    }

    /// First interior cell that is not admissible, if any.
    pub fn check_admissible(&self, gas: &GasModel) -> Result<()> {
        for (i, j, w) in self.interior() {
            if !w.is_admissible(gas) {
                return Err(Error::Inadmissible {
                    location: Location::Cell {
                        i: i as isize,
                        j: j as isize,
                    },
                    rho: w.rho,
                    p: w.pressure(gas),
                });
            }
        }
        Ok(())
    }
}

/// Integrals of the conserved variables over the interior cells.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Totals {
    pub mass: f64,
    pub mx: f64,
    pub my: f64,
    pub energy: f64,
}

impl Totals {
    pub fn to_array(self) -> [f64; 4] {
        [self.mass, self.mx, self.my, self.energy]
    }
}

/// Sums `w dx dy` over the interior in a fixed pairwise-tree order so the
/// result does not depend on how the field was produced.
pub fn field_totals(field: &Field) -> Totals {
    let g = field.grid;
    let vol = g.cell_volume();
    let cells: Vec<[f64; 4]> = field.interior().map(|(_, _, w)| w.to_array()).collect();
    let s = pairwise_sum4(&cells);
    Totals {
        mass: s[0] * vol,
        mx: s[1] * vol,
        my: s[2] * vol,
        energy: s[3] * vol,
    }
}

pub fn pairwise_sum4(v: &[[f64; 4]]) -> [f64; 4] {
    match v.len() {
        0 => [0.0; 4],
        1 => v[0],
        n if n <= 16 => v.iter().fold([0.0; 4], |mut acc, x| {
            for k in 0..4 {
                acc[k] += x[k];
            }
            acc
        }),
        n => {
            let (a, b) = v.split_at(n / 2);
            let sa = pairwise_sum4(a);
            let sb = pairwise_sum4(b);
            [sa[0] + sb[0], sa[1] + sb[1], sa[2] + sb[2], sa[3] + sb[3]]
        }
    }
}
