use nontwist::flow::{chain_topology, TopologySettings};
use nontwist::hamiltonian::equilibria;
use nontwist::reconnection::{regime, residual_i_ii, residual_ii_iii, ChainPair};
use nontwist::{Error, Params};

use super::{out_dir, Output};
use crate::config::RunConfig;
use crate::dataset::{Cell, Dataset, Provenance};
use crate::error::Result;

pub const SCHEMA: &str = "nontwist.scan/1";
/// Sentinel for every derived column at `b = 0`.
pub const SINGULAR_B: &str = "singular_b";
/// Sentinel for quantities that need chains II and III when `a^2 < 4b`.
pub const CHAINS_ABSENT: &str = "chains_absent";

fn residual_cell(r: nontwist::Result<f64>) -> Result<Cell> {
    match r {
        Ok(v) => Ok(Cell::from(v)),
        Err(Error::Domain(_)) => Ok(Cell::from(CHAINS_ABSENT)),
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_scan(cfg: &RunConfig) -> Result<Output> {
    let mut columns =
        vec!["b", "equilibrium_count", "residual_I_II", "residual_II_III", "regime_I_II", "regime_II_III"];
    if cfg.topology {
        columns.push("chain_topology_II_III");
    }
    let mut d = Dataset::new(SCHEMA, &columns, Provenance::new(cfg.echo()));
    let topo = TopologySettings::default();
    for b in cfg.scan_values() {
        if b == 0.0 {
            let mut row = vec![Cell::from(b)];
            row.extend((1..columns.len()).map(|_| Cell::from(SINGULAR_B)));
            d.push(row);
            continue;
        }
        let p = Params::new(cfg.a, b, cfg.k)?;
        let (r12, r23) = regime(cfg.a, cfg.k, b)?;
        let mut row = vec![
            Cell::from(b),
            Cell::from(equilibria(&p)?.len()),
            residual_cell(residual_i_ii(cfg.a, b, cfg.k))?,
            residual_cell(residual_ii_iii(cfg.a, b, cfg.k))?,
            Cell::from(r12.regime.as_str()),
            Cell::from(r23.regime.as_str()),
        ];
        if cfg.topology {
            row.push(match chain_topology(&p, ChainPair::TwoThree, &topo) {
                Ok(r) => Cell::from(r.verdict.as_str()),
                Err(e) if e.is_domain() => Cell::from(CHAINS_ABSENT),
                Err(e) => return Err(e.into()),
            });
        }
        d.push(row);
    }
    let mut out = Output::default();
    out.csv(out_dir(cfg).join("scan.csv"), &d);
    Ok(out)
}
