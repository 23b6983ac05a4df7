//! Browser bindings. Each exported function returns a JSON document for the page script.
//!
//! The `*_json` functions hold the logic and return `Result<String, String>` so they
//! can be tested natively; the `#[wasm_bindgen]` wrappers only convert the error.

use nontwist::flow::{default_seeds, portrait, PortraitSettings, Window};
use nontwist::hamiltonian::equilibria;
use nontwist::map::{rotation_profile, twist_derivative, twistless_circles};
use nontwist::reconnection::{
    default_triple_range, regime, thresholds_i_ii, thresholds_ii_iii, triple_point, ScanSettings,
};
use nontwist::Params;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn params(a: f64, b: f64, k: f64) -> Result<Params, String> {
    Params::new(a, b, k).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Polyline {
    source: &'static str,
    /// Interleaved `x0, y0, x1, y1, ...`.
    xy: Vec<f64>,
}

/// Flow lines, separatrices and equilibria for the given parameters.
pub fn portrait_json(a: f64, b: f64, k: f64, seeds_per_line: usize, time: f64) -> Result<String, String> {
    let p = params(a, b, k)?;
    let eq = equilibria(&p).map_err(|e| e.to_string())?;
    let w = Window::around_equilibria(&p, 2, 2).map_err(|e| e.to_string())?;
    let settings = PortraitSettings { time, ..PortraitSettings::default() };
    let out = portrait(&p, &w, &default_seeds(&w, seeds_per_line), &settings).map_err(|e| e.to_string())?;
    let lines: Vec<Polyline> = out
        .traces
        .iter()
        .map(|t| Polyline { source: t.source.as_str(), xy: t.points.iter().flat_map(|q| [q.x, q.y]).collect() })
        .collect();
    let regime = regime(a, k, b).ok().map(|(r12, r23)| json!({ "I_II": r12.regime, "II_III": r23.regime }));
    Ok(json!({
        "window": w,
        "traces": lines,
        "equilibria": eq,
        "regime": regime,
        "failed_seeds": out.failures.len(),
    })
    .to_string())
}

/// Reconnection thresholds in `[b_lo, b_hi]` and the triple point for `a`.
pub fn thresholds_json(a: f64, k: f64, b_lo: f64, b_hi: f64) -> Result<String, String> {
    let s = ScanSettings { subintervals: 2000, ..ScanSettings::default() };
    let r12 = thresholds_i_ii(a, k, b_lo, b_hi, &s).map_err(|e| e.to_string())?;
    let r23 = thresholds_ii_iii(a, k, b_lo, b_hi, &s).map_err(|e| e.to_string())?;
    let (lo, hi) = default_triple_range(a);
    let triple = triple_point(a, lo, hi, &s).ok();
    Ok(json!({ "I_II": r12.roots, "II_III": r23.roots, "triple": triple }).to_string())
}

/// `F(y)` and `F'(y)` on `n` points of `[y_lo, y_hi]` with the twistless circles, if any.
pub fn rotation_json(a: f64, b: f64, y_lo: f64, y_hi: f64, n: usize) -> Result<String, String> {
    let p = params(a, b, 0.0)?;
    if !(y_lo < y_hi) || n < 2 {
        return Err(format!("need y_lo < y_hi and n >= 2, got {y_lo}, {y_hi}, {n}"));
    }
    let ys: Vec<f64> = (0..n).map(|i| y_lo + (y_hi - y_lo) * i as f64 / (n - 1) as f64).collect();
    let f: Vec<f64> = ys.iter().map(|&y| rotation_profile(&p, y)).collect();
    let df: Vec<f64> = ys.iter().map(|&y| twist_derivative(&p, y)).collect();
    let (circles, note) = match twistless_circles(&p) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(json!({ "y": ys, "F": f, "F_prime": df, "twistless": circles, "note": note }).to_string())
}

#[wasm_bindgen]
pub fn phase_portrait(a: f64, b: f64, k: f64, seeds_per_line: usize, time: f64) -> Result<String, JsError> {
    portrait_json(a, b, k, seeds_per_line, time).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn thresholds(a: f64, k: f64, b_lo: f64, b_hi: f64) -> Result<String, JsError> {
    thresholds_json(a, k, b_lo, b_hi).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn rotation(a: f64, b: f64, y_lo: f64, y_hi: f64, n: usize) -> Result<String, JsError> {
    rotation_json(a, b, y_lo, y_hi, n).map_err(|e| JsError::new(&e))
}
