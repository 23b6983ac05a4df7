use serde::{Deserialize, Serialize};

use crate::hamiltonian::field_at;
use crate::trace::{Trace, TraceMeta, TraceSource};
use crate::{Error, Params, PhasePoint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(&self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// `1e-8 (1 + |H(start)|) sqrt(n_steps)`.
pub fn default_drift_budget(h_start: f64, n_steps: usize) -> f64 {
    1e-8 * (1.0 + h_start.abs()) * (n_steps as f64).sqrt()
}

/// One classical RK4 step of `X_H` with signed step `h` on the unwrapped cylinder.
#[inline]
pub fn rk4_step(p: &Params, x: f64, y: f64, h: f64) -> (f64, f64) {
    let (k1x, k1y) = field_at(p, x, y);
    let (k2x, k2y) = field_at(p, x + 0.5 * h * k1x, y + 0.5 * h * k1y);
    let (k3x, k3y) = field_at(p, x + 0.5 * h * k2x, y + 0.5 * h * k2y);
    let (k4x, k4y) = field_at(p, x + h * k3x, y + h * k3y);
    let w = h / 6.0;
    (x + w * (k1x + 2.0 * (k2x + k3x) + k4x), y + w * (k1y + 2.0 * (k2y + k3y) + k4y))
}

/// Fixed-step RK4 integration of `+-X_H` with the default drift budget.
pub fn integrate(p: &Params, start: PhasePoint, dt: f64, n_steps: usize, dir: Direction) -> Result<Trace> {
    let start = PhasePoint::new(start.x, start.y);
    let h0 = crate::hamiltonian::energy(p, start).0;
    integrate_with_budget(p, start, dt, n_steps, dir, default_drift_budget(h0, n_steps))
}

/// As [`integrate`], failing with [`Error::EnergyDrift`] when `max |H - H(start)|`
/// exceeds `budget`.
pub fn integrate_with_budget(
    p: &Params,
    start: PhasePoint,
    dt: f64,
    n_steps: usize,
    dir: Direction,
    budget: f64,
) -> Result<Trace> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument { name: "dt", reason: format!("must be positive, got {dt}") });
    }
    if n_steps == 0 {
        return Err(Error::InvalidArgument { name: "n_steps", reason: "need at least one step".into() });
    }
    let h = dir.sign() * dt;
    let start = PhasePoint::new(start.x, start.y);
    let (mut x, mut y) = (start.x, start.y);
    let mut points = Vec::with_capacity(n_steps + 1);
    points.push(start);
    for _ in 0..n_steps {
        (x, y) = rk4_step(p, x, y, h);
        points.push(PhasePoint::new(x, y));
    }
    let mut meta = TraceMeta::new(*p);
    meta.dt = Some(dt);
    meta.steps = Some(n_steps);
    meta.drift_budget = Some(budget);
    let trace = Trace::new(TraceSource::Flow, meta, points);
    check_drift(&trace, budget)?;
    Ok(trace)
}

pub(crate) fn check_drift(trace: &Trace, budget: f64) -> Result<()> {
    let drift = trace.max_drift();
    if drift > budget || !drift.is_finite() {
        return Err(Error::EnergyDrift { drift, budget, steps: trace.len() - 1 });
    }
    Ok(())
}
