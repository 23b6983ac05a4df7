//! Continuous-time picture: the Hamiltonian flow and the geometry built on it.

mod contour;
mod integrate;
mod meander;
mod portrait;
mod separatrix;
mod topology;

pub use contour::{cell_variation, level_curves, march, Polyline};
pub use integrate::{default_drift_budget, integrate, integrate_with_budget, rk4_step, Direction};
pub use meander::{is_meander, is_meander_with, MeanderTolerance};
pub use portrait::{default_seeds, portrait, Portrait, PortraitSettings, SeedFailure};
pub use separatrix::{separatrices, Approach, Branch, BranchKind, SeparatrixBundle, SeparatrixSettings, TerminalEvent};
pub use topology::{chain_topology, Topology, TopologyReport, TopologySettings};

use serde::{Deserialize, Serialize};

use crate::hamiltonian::equilibria;
use crate::{Error, Params, Result, TAU};

/// Rectangular region of the phase cylinder with a sampling grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let w = Window { x_min, x_max, y_min, y_max, nx, ny };
        w.validate()?;
        Ok(w)
    }

    /// Full angle range `[0, 2pi]` over `[y_min, y_max]`.
    pub fn annulus(y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        Window::new(0.0, TAU, y_min, y_max, nx, ny)
    }

    /// Full angle range with the `y`-span of the equilibria padded by `0.5` on each side.
    pub fn around_equilibria(p: &Params, nx: usize, ny: usize) -> Result<Self> {
        let ys: Vec<f64> = match equilibria(p) {
            Ok(eq) => eq.iter().map(|e| e.position.y).collect(),
            Err(_) => vec![0.0],
        };
        let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Window::annulus(lo - 0.5, hi + 0.5, nx, ny)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidArgument { name: "window", reason });
        if ![self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite()) {
            return bad("bounds must be finite".into());
        }
        if !(self.x_min < self.x_max) {
            return bad(format!("x_min {} must be below x_max {}", self.x_min, self.x_max));
        }
        if !(self.y_min < self.y_max) {
            return bad(format!("y_min {} must be below y_max {}", self.y_min, self.y_max));
        }
        if self.nx < 2 || self.ny < 2 {
            return bad(format!("grid {}x{} needs at least 2 nodes per axis", self.nx, self.ny));
        }
        Ok(())
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains_y(&self, y: f64) -> bool {
        y >= self.y_min && y <= self.y_max
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.dx().hypot(self.dy())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_validation() {
        assert!(Window::annulus(0.0, 1.0, 2, 2).is_ok());
        assert!(Window::annulus(1.0, 1.0, 10, 10).is_err());
        assert!(Window::annulus(0.0, 1.0, 1, 10).is_err());
        assert!(Window::new(1.0, 0.0, 0.0, 1.0, 10, 10).is_err());
        assert!(Window::annulus(0.0, f64::INFINITY, 10, 10).is_err());
    }

    #[test]
    fn window_around_equilibria() {
        let w = Window::around_equilibria(&Params::figure(0.5), 100, 100).unwrap();
        assert!((w.y_min + 0.5).abs() < 1e-12);
        assert!((w.y_max - 2.5).abs() < 1e-12);
    }
}
