use serde::{Deserialize, Serialize};

use super::separatrix::{separatrices, SeparatrixSettings, TerminalEvent};
use super::Window;
use crate::hamiltonian::{chain_saddle, Chain, Equilibrium};
use crate::reconnection::ChainPair;
use crate::{Error, Params, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Separated,
    Connected,
    Ambiguous,
}

impl Topology {
    pub fn as_str(&self) -> &'static str {
        match self {
            Topology::Separated => "separated",
            Topology::Connected => "connected",
            Topology::Ambiguous => "ambiguous",
        }
    }
}

/// Settings for [`chain_topology`].
///
/// The arrival radius has to absorb the parameter rounding of a threshold: a manifold
/// at `b` off the true threshold by `db` misses the other saddle by roughly
/// `sqrt(2 |dH| / k)` with `dH ~ db`, about `6e-3` for a five-digit `b` at `k = 0.018`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySettings {
    pub arrival_radius: f64,
    pub separation_floor: f64,
    pub eps: Option<f64>,
    pub dt: f64,
    pub max_steps: usize,
}

impl Default for TopologySettings {
    fn default() -> Self {
        TopologySettings { arrival_radius: 0.05, separation_floor: 0.2, eps: None, dt: 0.02, max_steps: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub verdict: Topology,
    /// Closest approach of any unstable branch of one saddle to the other saddle.
    pub min_approach: f64,
    pub saddles: (Equilibrium, Equilibrium),
}

fn pair_chains(pair: ChainPair) -> (Chain, Chain) {
    match pair {
        ChainPair::OneTwo => (Chain::I, Chain::II),
        ChainPair::TwoThree => (Chain::II, Chain::III),
    }
}

/// Whether the unstable manifold of one chain's saddle lands on the other chain's saddle.
///
/// `connected` when any unstable branch enters the arrival ball of the other saddle,
/// `separated` when no branch comes closer than `separation_floor`, `ambiguous` otherwise.
pub fn chain_topology(p: &Params, pair: ChainPair, settings: &TopologySettings) -> Result<TopologyReport> {
    let (ca, cb) = pair_chains(pair);
    let saddle = |c: Chain| -> Result<Equilibrium> {
        chain_saddle(p, c)?.ok_or_else(|| Error::domain(format!("chain {} has no hyperbolic point", c.as_str())))
    };
    let (sa, sb) = (saddle(ca)?, saddle(cb)?);
    let lo = sa.position.y.min(sb.position.y);
    let hi = sa.position.y.max(sb.position.y);
    let pad = 0.5 * (hi - lo).max(1.0);
    let window = Window::annulus(lo - pad, hi + pad, 2, 2)?;
    let sep = SeparatrixSettings {
        eps: settings.eps,
        arrival_radius: Some(settings.arrival_radius),
        dt: settings.dt,
        max_steps: settings.max_steps,
        window: Some(window),
        record_stride: 64,
    };

    let mut min_approach = f64::INFINITY;
    let mut connected = false;
    for (from, to) in [(&sa, &sb), (&sb, &sa)] {
        let bundle = separatrices(p, from, &sep)?;
        for br in bundle.branches.iter().filter(|b| b.kind.is_unstable()) {
            if let Some(d) = br.approach_to(to.label) {
                min_approach = min_approach.min(d);
            }
            connected |= br.terminal == TerminalEvent::ReachedOtherSaddle(to.label);
        }
    }
    let verdict = if connected {
        Topology::Connected
    } else if min_approach >= settings.separation_floor {
        Topology::Separated
    } else {
        Topology::Ambiguous
    };
    Ok(TopologyReport { verdict, min_approach, saddles: (sa, sb) })
}
