//! Finite-volume solver for the compressible Euler equations in one and two
//! dimensions, built on a two-stage fourth-order gas-kinetic flux with fifth
//! order WENO reconstruction, plus benchmark problems and exact references.

pub mod cases;
pub mod diagnostics;
pub mod error;
pub mod gks;
pub mod io;
pub mod integrator;
pub mod oracles;
pub mod reconstruction;
pub mod run;
pub mod state;

pub use error::{Error, Location, Result};
pub use state::{ConservedState, Field, GasModel, Grid, PrimitiveState};
