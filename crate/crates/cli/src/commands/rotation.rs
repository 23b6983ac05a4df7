use nontwist::map::{
    extremal_rotation_numbers, rotation_profile, twist_derivative, twist_regions, twistless_circles, TwistSign,
    TwistlessCircles,
};
use nontwist::{Error, Params};
use serde::{Deserialize, Serialize};

use super::{out_dir, Output};
use crate::config::{sample_points, RunConfig};
use crate::dataset::{Cell, Dataset, Provenance};
use crate::error::Result;

pub const SCHEMA: &str = "nontwist.rotation/1";
pub const SCHEMA_SUMMARY: &str = "nontwist.rotation.summary/1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremal {
    /// The `54 pi b^2` closed forms.
    pub rho_c1: f64,
    pub rho_c2: f64,
}

/// A twist region; `None` bounds are unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub sign: TwistSign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationDoc {
    pub schema: String,
    pub a: f64,
    pub b: f64,
    pub twistless: Option<TwistlessCircles>,
    pub extremal: Option<Extremal>,
    /// Why the twistless block is missing.
    pub note: Option<String>,
    pub twist_regions: Vec<Region>,
    pub provenance: Provenance,
}

pub fn cmd_rotation(cfg: &RunConfig) -> Result<Output> {
    let b = cfg.b.expect("validated");
    let p = Params::new(cfg.a, b, 0.0)?;
    let (lo, hi) = cfg.y_range;
    let n = cfg.samples;

    let mut d = Dataset::new(SCHEMA, &["y", "F", "F_over_2pi", "F_prime"], Provenance::new(cfg.echo()));
    for y in sample_points(lo, hi, n) {
        let f = rotation_profile(&p, y);
        d.push(vec![
            Cell::from(y),
            Cell::from(f),
            Cell::from(f / std::f64::consts::TAU),
            Cell::from(twist_derivative(&p, y)),
        ]);
    }

    let (twistless, extremal, note) = match (twistless_circles(&p), extremal_rotation_numbers(&p)) {
        (Ok(c), Ok((rho_c1, rho_c2))) => (Some(c), Some(Extremal { rho_c1, rho_c2 }), None),
        (Err(Error::Domain(m)), _) | (_, Err(Error::Domain(m))) => (None, None, Some(m)),
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    };
    let doc = RotationDoc {
        schema: SCHEMA_SUMMARY.to_string(),
        a: cfg.a,
        b,
        twistless,
        extremal,
        note,
        twist_regions: twist_regions(&p)
            .into_iter()
            .map(|r| Region {
                lo: Some(r.lo).filter(|v| v.is_finite()),
                hi: Some(r.hi).filter(|v| v.is_finite()),
                sign: r.sign,
            })
            .collect(),
        provenance: Provenance::new(cfg.echo()),
    };

    let dir = out_dir(cfg);
    let mut out = Output::default();
    out.csv(dir.join("rotation.csv"), &d);
    out.json(dir.join("rotation.json"), serde_json::to_string_pretty(&doc).expect("finite values"));
    if let Some(n) = &doc.note {
        out.notes.push(n.clone());
    }
    Ok(out)
}
