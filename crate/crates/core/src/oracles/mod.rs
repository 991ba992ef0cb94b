//! Closed-form and independently computed reference solutions.

pub mod hurricane;
pub mod pressureless;
pub mod riemann;
pub mod vortex;

pub use hurricane::HurricaneExact;
pub use pressureless::{CornerState, PressurelessReference, Region, VortexSign};
pub use riemann::{exact_riemann, RiemannSolution1D, WaveKind};
pub use vortex::IsentropicVortex;

use crate::state::{ConservedState, GasModel, PrimitiveState};

/// Gauss-Legendre nodes and weights on `[-1/2, 1/2]` (weights sum to 1).
const GAUSS4: [(f64, f64); 4] = [
    (-0.430_568_155_797_026_3, 0.173_927_422_568_726_93),
    (-0.169_990_521_792_428_13, 0.326_072_577_431_273_07),
    (0.169_990_521_792_428_13, 0.326_072_577_431_273_07),
    (0.430_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// Average of the conserved variables of `f` over the cell centred at
/// `(xc, yc)` with sizes `(dx, dy)`, by 4-point Gauss quadrature per
/// direction (only along x when `two_d` is false).
pub fn cell_average(
    f: &dyn Fn(f64, f64) -> PrimitiveState,
    gas: &GasModel,
    xc: f64,
    yc: f64,
    dx: f64,
    dy: f64,
    two_d: bool,
) -> ConservedState {
    let mut acc = [0.0; 4];
    let ys: &[(f64, f64)] = if two_d { &GAUSS4 } else { &[(0.0, 1.0)] };
    for &(sy, wy) in ys {
        for &(sx, wx) in &GAUSS4 {
            let w = f(xc + sx * dx, yc + sy * dy).to_conserved_unchecked(gas).to_array();
            for k in 0..4 {
                acc[k] += wx * wy * w[k];
            }
        }
    }
    ConservedState::from_array(acc)
}
