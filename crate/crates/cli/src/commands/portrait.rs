use std::fs;
use std::path::Path;

use nontwist::flow::{default_seeds, portrait, PortraitSettings, Window};
use nontwist::hamiltonian::equilibria;
use nontwist::reconnection::regime;
use nontwist::{Params, PhasePoint};
use serde_json::{json, Value};

use super::{out_dir, Output};
use crate::config::RunConfig;
use crate::dataset::{Cell, Dataset, Provenance};
use crate::error::{CliError, Result};
use crate::svg;

pub const SCHEMA_TRACES: &str = "nontwist.portrait.traces/1";
pub const SCHEMA_EQUILIBRIA: &str = "nontwist.portrait.equilibria/1";
pub const SEEDS_PER_LINE: usize = 12;

fn read_seeds(path: &Path) -> Result<Vec<PhasePoint>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config("seeds", format!("cannot read {}: {e}", path.display())))?;
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut seeds = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::config("seeds", e.to_string()))?;
        let nums: Vec<Option<f64>> = rec.iter().map(|f| f.parse().ok()).collect();
        match nums.as_slice() {
            [Some(x), Some(y)] => seeds.push(PhasePoint::new(*x, *y)),
            // a leading `x,y` header is fine
            [None, None] if i == 0 => {}
            _ => return Err(CliError::config("seeds", format!("line {}: expected `x,y`", i + 1))),
        }
    }
    Ok(seeds)
}

pub fn cmd_portrait(cfg: &RunConfig) -> Result<Output> {
    let p = Params::new(cfg.a, cfg.b.expect("validated"), cfg.k)?;
    let eq = equilibria(&p)?;
    let (nx, ny) = cfg.res;
    let w = match cfg.window {
        Some((x0, x1, y0, y1)) => Window::new(x0, x1, y0, y1, nx, ny)?,
        None => Window::around_equilibria(&p, nx, ny)?,
    };
    let seeds = match &cfg.seeds {
        Some(path) => read_seeds(path)?,
        None => default_seeds(&w, SEEDS_PER_LINE),
    };
    let settings = PortraitSettings { time: cfg.dt * cfg.steps as f64, ..PortraitSettings::default().with_dt(cfg.dt) };
    let result = portrait(&p, &w, &seeds, &settings)?;
    if !seeds.is_empty() && result.failures.len() == seeds.len() {
        return Err(CliError::Numerical(format!(
            "all {} seeds exceeded their drift budget; first: {}",
            seeds.len(),
            result.failures[0].error
        )));
    }

    let mut prov = Provenance::new(cfg.echo());
    prov.details.insert("seeds".into(), Value::from(seeds.len()));
    prov.details.insert("window".into(), json!(w));
    prov.details.insert("failures".into(), json!(result.failures));
    let mut traces = Dataset::new(SCHEMA_TRACES, &["trace_id", "source", "x", "y", "H"], prov.clone());
    for (id, t) in result.traces.iter().enumerate() {
        for (q, h) in t.points.iter().zip(&t.energies) {
            traces.push(vec![
                Cell::from(id),
                Cell::from(t.source.as_str()),
                Cell::from(q.x),
                Cell::from(q.y),
                Cell::from(*h),
            ]);
        }
    }

    let mut eq_prov = Provenance::new(cfg.echo());
    let regimes = match regime(cfg.a, cfg.k, p.b()) {
        Ok((r12, r23)) => json!({ "I_II": r12.regime.as_str(), "II_III": r23.regime.as_str() }),
        Err(e) => json!({ "note": e.to_string() }),
    };
    eq_prov.details.insert("regime".into(), regimes);
    let mut eq_table =
        Dataset::new(SCHEMA_EQUILIBRIA, &["label", "chain", "x", "y", "stability", "lambda_sq"], eq_prov);
    for e in &eq {
        eq_table.push(vec![
            Cell::from(e.label.as_str()),
            Cell::from(e.chain.as_str()),
            Cell::from(e.position.x),
            Cell::from(e.position.y),
            Cell::from(e.stability.as_str()),
            Cell::from(e.eigenvalue_squared),
        ]);
    }

    let dir = out_dir(cfg);
    let mut out = Output::default();
    out.csv(dir.join("traces.csv"), &traces);
    out.json(dir.join("equilibria.json"), eq_table.to_json());
    if let Some(path) = &cfg.svg {
        let title = format!("a={} b={} k={}", p.a(), p.b(), p.k());
        out.files.push((path.clone(), svg::render(&w, &result.traces, &eq, &title).into_bytes()));
    }
    for f in &result.failures {
        out.notes.push(format!("seed {} ({}, {}): {}", f.seed_index, f.seed.x, f.seed.y, f.error));
    }
    Ok(out)
}
