use serde::{Deserialize, Serialize};

use super::integrate::{check_drift, default_drift_budget, rk4_step};
use super::Window;
use crate::hamiltonian::{energy, equilibria, saddle_directions, Equilibrium, Label};
use crate::trace::{Trace, TraceMeta, TraceSource};
use crate::{Error, Params, PhasePoint, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatrixSettings {
    /// Seed offset from the saddle; defaults to `1e-6 (1 + |y_saddle|)`.
    pub eps: Option<f64>,
    /// Radius of the arrival balls; defaults to `10 eps`.
    pub arrival_radius: Option<f64>,
    pub dt: f64,
    pub max_steps: usize,
    /// Branches stop when they leave the `y`-range of this window.
    /// Defaults to the equilibria span padded by `0.5`.
    pub window: Option<Window>,
    /// Keep every `record_stride`-th sample (the terminal sample is always kept).
    pub record_stride: usize,
}

impl Default for SeparatrixSettings {
    fn default() -> Self {
        SeparatrixSettings {
            eps: None,
            arrival_radius: None,
            dt: 0.02,
            max_steps: 200_000,
            window: None,
            record_stride: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    UnstablePlus,
    UnstableMinus,
    StablePlus,
    StableMinus,
}

impl BranchKind {
    pub const ALL: [BranchKind; 4] =
        [BranchKind::UnstablePlus, BranchKind::UnstableMinus, BranchKind::StablePlus, BranchKind::StableMinus];

    pub fn is_unstable(&self) -> bool {
        matches!(self, BranchKind::UnstablePlus | BranchKind::UnstableMinus)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BranchKind::UnstablePlus => "unstable+",
            BranchKind::UnstableMinus => "unstable-",
            BranchKind::StablePlus => "stable+",
            BranchKind::StableMinus => "stable-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalEvent {
    ReturnedToSaddle,
    ReachedOtherSaddle(Label),
    LeftWindow,
    StepBudget,
}

/// Closest distance a branch came to another hyperbolic equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approach {
    pub label: Label,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub kind: BranchKind,
    pub trace: Trace,
    pub terminal: TerminalEvent,
    pub closest_approach: Vec<Approach>,
}

impl Branch {
    pub fn approach_to(&self, label: Label) -> Option<f64> {
        self.closest_approach.iter().find(|a| a.label == label).map(|a| a.distance)
    }
}

/// The four invariant-manifold branches of a saddle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatrixBundle {
    pub saddle: Equilibrium,
    pub eps: f64,
    pub arrival_radius: f64,
    pub branches: Vec<Branch>,
}

impl SeparatrixBundle {
    pub fn branch(&self, kind: BranchKind) -> &Branch {
        self.branches.iter().find(|b| b.kind == kind).expect("bundle holds all four branches")
    }
}

/// Traces `W^u` (forward in time) and `W^s` (backward in time) of a hyperbolic equilibrium.
///
/// Each branch is seeded at `saddle +- eps v` with `v` the unit eigenvector and stops on
/// the first of: re-entering the arrival ball of its own saddle after leaving it, entering the
/// arrival ball of another hyperbolic equilibrium, leaving the window, or the step budget.
/// Distances are measured on the cylinder, so `2pi`-translates of a saddle count as that saddle.
pub fn separatrices(p: &Params, saddle: &Equilibrium, settings: &SeparatrixSettings) -> Result<SeparatrixBundle> {
    let (_, unstable, stable) = saddle_directions(p, saddle.position)?;
    if !(settings.dt > 0.0) || settings.max_steps == 0 || settings.record_stride == 0 {
        return Err(Error::InvalidArgument {
            name: "separatrix settings",
            reason: "dt, max_steps and record_stride must be positive".into(),
        });
    }
    let eps = settings.eps.unwrap_or(1e-6 * (1.0 + saddle.position.y.abs()));
    let arrival = settings.arrival_radius.unwrap_or(10.0 * eps);
    let window = match settings.window {
        Some(w) => w,
        None => Window::around_equilibria(p, 2, 2)?,
    };
    let others: Vec<Equilibrium> =
        equilibria(p)?.into_iter().filter(|e| e.is_hyperbolic() && e.label != saddle.label).collect();

    let mut branches = Vec::with_capacity(4);
    for kind in BranchKind::ALL {
        let (v, sign, h) = match kind {
            BranchKind::UnstablePlus => (unstable, 1.0, settings.dt),
            BranchKind::UnstableMinus => (unstable, -1.0, settings.dt),
            BranchKind::StablePlus => (stable, 1.0, -settings.dt),
            BranchKind::StableMinus => (stable, -1.0, -settings.dt),
        };
        let seed = (saddle.position.x + sign * eps * v[0], saddle.position.y + sign * eps * v[1]);
        branches.push(trace_branch(p, saddle, &others, kind, seed, h, arrival, &window, settings)?);
    }
    Ok(SeparatrixBundle { saddle: *saddle, eps, arrival_radius: arrival, branches })
}

#[allow(clippy::too_many_arguments)]
fn trace_branch(
    p: &Params,
    saddle: &Equilibrium,
    others: &[Equilibrium],
    kind: BranchKind,
    seed: (f64, f64),
    h: f64,
    arrival: f64,
    window: &Window,
    settings: &SeparatrixSettings,
) -> Result<Branch> {
    let (mut x, mut y) = seed;
    let mut points = vec![PhasePoint::new(x, y)];
    let mut closest: Vec<Approach> =
        others.iter().map(|e| Approach { label: e.label, distance: f64::INFINITY }).collect();
    let mut departed = false;
    let mut terminal = TerminalEvent::StepBudget;
    let mut steps = 0;

    while steps < settings.max_steps {
        (x, y) = rk4_step(p, x, y, h);
        steps += 1;
        let pt = PhasePoint::new(x, y);
        let last = steps == settings.max_steps;

        let mut event = None;
        if !window.contains_y(y) {
            event = Some(TerminalEvent::LeftWindow);
        }
        let d_self = pt.distance(&saddle.position);
        if d_self > arrival {
            departed = true;
        } else if departed && event.is_none() {
            event = Some(TerminalEvent::ReturnedToSaddle);
        }
        for (c, e) in closest.iter_mut().zip(others) {
            let d = pt.distance(&e.position);
            c.distance = c.distance.min(d);
            if d <= arrival && event.is_none() {
                event = Some(TerminalEvent::ReachedOtherSaddle(e.label));
            }
        }
        if event.is_some() || last || steps % settings.record_stride == 0 {
            points.push(pt);
        }
        if let Some(ev) = event {
            terminal = ev;
            break;
        }
    }

    let mut meta = TraceMeta::new(*p);
    let h0 = energy(p, points[0]).0;
    let budget = default_drift_budget(h0, steps);
    meta.dt = Some(h.abs());
    meta.steps = Some(steps);
    meta.drift_budget = Some(budget);
    meta.window = Some(*window);
    meta.label = Some(format!("{} {}", saddle.label.as_str(), kind.as_str()));
    let trace = Trace::new(TraceSource::Separatrix, meta, points);
    check_drift(&trace, budget)?;
    Ok(Branch { kind, trace, terminal, closest_approach: closest })
}
