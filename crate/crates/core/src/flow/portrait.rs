use serde::{Deserialize, Serialize};

use super::integrate::{integrate, Direction};
use super::separatrix::{separatrices, SeparatrixBundle, SeparatrixSettings};
use super::Window;
use crate::hamiltonian::equilibria;
use crate::trace::{Trace, TraceMeta, TraceSource};
use crate::{Error, Params, PhasePoint, Result, TAU};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitSettings {
    pub dt: f64,
    /// Total integration time per seed, split evenly between backward and forward.
    pub time: f64,
    pub separatrices: bool,
    pub separatrix: SeparatrixSettings,
}

impl Default for PortraitSettings {
    fn default() -> Self {
        PortraitSettings {
            dt: 0.1,
            time: 400.0,
            separatrices: true,
            separatrix: SeparatrixSettings { dt: 0.1, max_steps: 20_000, ..SeparatrixSettings::default() },
        }
    }
}

impl PortraitSettings {
    /// Same integration times with step `dt` for both seeds and separatrices.
    pub fn with_dt(self, dt: f64) -> Self {
        let span = self.separatrix.dt * self.separatrix.max_steps as f64;
        let separatrix = SeparatrixSettings { dt, max_steps: (span / dt).round().max(1.0) as usize, ..self.separatrix };
        PortraitSettings { dt, separatrix, ..self }
    }

    pub fn steps_per_half(&self) -> usize {
        ((0.5 * self.time / self.dt).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedFailure {
    pub seed_index: usize,
    pub seed: PhasePoint,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Portrait {
    /// Seed traces in seed order, followed by separatrix branches in equilibrium order.
    pub traces: Vec<Trace>,
    pub bundles: Vec<SeparatrixBundle>,
    pub failures: Vec<SeedFailure>,
}

/// Evenly spaced seeds on both symmetry lines plus a row at `x = pi/2`.
pub fn default_seeds(w: &Window, per_line: usize) -> Vec<PhasePoint> {
    let mut seeds = Vec::with_capacity(3 * per_line);
    for x in [0.0, std::f64::consts::PI, 0.25 * TAU] {
        for i in 0..per_line {
            let y = w.y_min + (i as f64 + 0.5) * w.height() / per_line as f64;
            seeds.push(PhasePoint::new(x, y));
        }
    }
    seeds
}

fn seed_trace(p: &Params, seed: PhasePoint, settings: &PortraitSettings) -> Result<Trace> {
    let n = settings.steps_per_half();
    let back = integrate(p, seed, settings.dt, n, Direction::Backward)?;
    let fwd = integrate(p, seed, settings.dt, n, Direction::Forward)?;
    let mut points: Vec<PhasePoint> = back.points.into_iter().rev().collect();
    points.extend_from_slice(&fwd.points[1..]);
    let mut meta = TraceMeta::new(*p);
    meta.dt = Some(settings.dt);
    meta.steps = Some(2 * n);
    meta.drift_budget = fwd.meta.drift_budget;
    Ok(Trace::new(TraceSource::Flow, meta, points))
}

/// Flow traces through every seed plus the separatrices of all hyperbolic equilibria
/// inside the window. Per-seed integration failures are collected, not fatal.
pub fn portrait(p: &Params, w: &Window, seeds: &[PhasePoint], settings: &PortraitSettings) -> Result<Portrait> {
    w.validate()?;
    if !(settings.dt > 0.0 && settings.time > 0.0) {
        return Err(Error::InvalidArgument {
            name: "portrait settings",
            reason: "dt and time must be positive".into(),
        });
    }

    let run = |s: &PhasePoint| seed_trace(p, *s, settings);
    #[cfg(feature = "parallel")]
    let results: Vec<Result<Trace>> = {
        use rayon::prelude::*;
        seeds.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<Trace>> = seeds.iter().map(run).collect();

    let mut traces = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(t) => traces.push(t),
            Err(e) => failures.push(SeedFailure { seed_index: i, seed: seeds[i], error: e.to_string() }),
        }
    }

    let mut bundles = Vec::new();
    if settings.separatrices {
        let saddles: Vec<_> = match equilibria(p) {
            Ok(eq) => eq.into_iter().filter(|e| e.is_hyperbolic() && w.contains_y(e.position.y)).collect(),
            Err(_) => Vec::new(),
        };
        let mut sep = settings.separatrix.clone();
        sep.window.get_or_insert(*w);
        for s in &saddles {
            let bundle = separatrices(p, s, &sep)?;
            traces.extend(bundle.branches.iter().map(|b| b.trace.clone()));
            bundles.push(bundle);
        }
    }
    Ok(Portrait { traces, bundles, failures })
}
