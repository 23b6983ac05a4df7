use nontwist::reconnection::{
    default_triple_range, thresholds_i_ii, thresholds_ii_iii, triple_point, ScanSettings, ThresholdReport, TriplePoint,
};
use serde::{Deserialize, Serialize};

use super::Output;
use crate::config::RunConfig;
use crate::dataset::Provenance;
use crate::error::Result;

pub const SCHEMA: &str = "nontwist.thresholds/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdsDoc {
    pub schema: String,
    pub a: f64,
    pub k: f64,
    pub b_range: Option<(f64, f64)>,
    #[serde(rename = "I_II")]
    pub i_ii: Option<ThresholdReport>,
    #[serde(rename = "II_III")]
    pub ii_iii: Option<ThresholdReport>,
    pub triple: Option<TriplePoint>,
    pub provenance: Provenance,
}

pub fn cmd_thresholds(cfg: &RunConfig) -> Result<Output> {
    let settings = ScanSettings::default();
    let (i_ii, ii_iii) = match cfg.b_range {
        Some((lo, hi)) => (
            Some(thresholds_i_ii(cfg.a, cfg.k, lo, hi, &settings)?),
            Some(thresholds_ii_iii(cfg.a, cfg.k, lo, hi, &settings)?),
        ),
        None => (None, None),
    };
    let triple = if cfg.triple {
        let (lo, hi) = default_triple_range(cfg.a);
        Some(triple_point(cfg.a, lo, hi, &settings)?)
    } else {
        None
    };
    let doc = ThresholdsDoc {
        schema: SCHEMA.to_string(),
        a: cfg.a,
        k: cfg.k,
        b_range: cfg.b_range,
        i_ii,
        ii_iii,
        triple,
        provenance: Provenance::new(cfg.echo()),
    };
    let text = serde_json::to_string_pretty(&doc).expect("finite values");
    let mut out = Output { stdout: Some(format!("{text}\n")), ..Output::default() };
    if let Some(dir) = &cfg.out {
        out.json(dir.join("thresholds.json"), text);
    }
    Ok(out)
}
