//! Cubic nontwist area-preserving map and its interpolating Hamiltonian.
//!
//! The map acts on the annulus `T x R`:
//!
//! ```text
//! y' = y + k sin x
//! x' = x + F(a, b; y')   (mod 2pi),    F(a, b; y) = y - a y^2 + b y^3
//! ```
//!
//! The crate is split along the lines of the analysis:
//!
//! * [`map`]: the map, its lift, orbits, rotation numbers and twist diagnostics.
//! * [`hamiltonian`]: the interpolating Hamiltonian, its vector field and the
//!   symmetric equilibria with their linear stability.
//! * [`reconnection`]: equal-energy residuals for the three chains, a bracketing
//!   root finder and regime labels along a `b` sweep.
//! * [`flow`]: RK4 integration of the Hamiltonian flow, separatrix tracing,
//!   marching-squares level sets, meander detection and chain topology probes.

pub mod error;
pub mod flow;
pub mod hamiltonian;
pub mod map;
pub mod params;
pub mod reconnection;
pub mod trace;

pub use error::{Error, Result};
pub use params::{normalize_angle, LiftPoint, Params, PhasePoint};
pub use trace::{Trace, TraceMeta, TraceSource};

pub(crate) const TAU: f64 = std::f64::consts::TAU;
