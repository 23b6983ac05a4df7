use serde::{Deserialize, Serialize};

use crate::flow::Window;
use crate::hamiltonian::energy;
use crate::{Params, PhasePoint, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceSource {
    MapOrbit,
    Flow,
    Contour,
    Separatrix,
}

impl TraceSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceSource::MapOrbit => "map_orbit",
            TraceSource::Flow => "flow",
            TraceSource::Contour => "contour",
            TraceSource::Separatrix => "separatrix",
        }
    }
}

impl std::str::FromStr for TraceSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "map_orbit" => Ok(TraceSource::MapOrbit),
            "flow" => Ok(TraceSource::Flow),
            "contour" => Ok(TraceSource::Contour),
            "separatrix" => Ok(TraceSource::Separatrix),
            other => Err(format!("unknown trace source `{other}`")),
        }
    }
}

/// Settings a trace was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub params: Params,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    /// Allowed `max |H - H(start)|` for integrated traces.
    pub drift_budget: Option<f64>,
    pub window: Option<Window>,
    pub label: Option<String>,
}

impl TraceMeta {
    pub fn new(params: Params) -> Self {
        TraceMeta { params, dt: None, steps: None, drift_budget: None, window: None, label: None }
    }
}

/// Ordered polyline of phase points with the Hamiltonian value at every sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub points: Vec<PhasePoint>,
    pub energies: Vec<f64>,
    pub source: TraceSource,
    pub meta: TraceMeta,
}

impl Trace {
    /// Builds a trace, evaluating the energy at every point.
    ///
    /// Panics if `points` is empty.
    pub fn new(source: TraceSource, meta: TraceMeta, points: Vec<PhasePoint>) -> Self {
        assert!(!points.is_empty(), "a trace needs at least one point");
        let energies = points.iter().map(|pt| energy(&meta.params, *pt).0).collect();
        Trace { points, energies, source, meta }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> PhasePoint {
        self.points[0]
    }

    pub fn last(&self) -> PhasePoint {
        self.points[self.points.len() - 1]
    }

    /// `max |H(p_i) - H(p_0)|`.
    pub fn max_drift(&self) -> f64 {
        let h0 = self.energies[0];
        self.energies.iter().fold(0.0, |m, h| m.max((h - h0).abs()))
    }

    /// The `x` samples made continuous by adding `+-2pi` whenever consecutive
    /// samples jump by more than `pi`.
    pub fn unwrapped_x(&self) -> Vec<f64> {
        unwrap_angles(self.points.iter().map(|p| p.x))
    }
}

pub(crate) fn unwrap_angles(xs: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for x in xs {
        if let Some(p) = prev {
            let jump = x - p;
            if jump > std::f64::consts::PI {
                offset -= TAU;
            } else if jump < -std::f64::consts::PI {
                offset += TAU;
            }
        }
        prev = Some(x);
        out.push(x + offset);
    }
    out
}
