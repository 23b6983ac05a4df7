use serde::{Deserialize, Serialize};

use crate::trace::Trace;
use crate::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanderTolerance {
    pub x_tol: f64,
    pub y_tol: f64,
}

impl MeanderTolerance {
    /// `x_tol = 2pi / 1000`, `y_tol = 1e-3` of the window height (or of the trace's own
    /// `y`-extent when it carries no window).
    pub fn for_trace(t: &Trace) -> Self {
        let height = match t.meta.window {
            Some(w) => w.height(),
            None => {
                let lo = t.points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
                let hi = t.points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
                if hi > lo {
                    hi - lo
                } else {
                    1.0
                }
            }
        };
        MeanderTolerance { x_tol: TAU / 1000.0, y_tol: 1e-3 * height }
    }
}

/// Whether the trace, in unwrapped `x`, fails to be the graph of a function of `x`.
pub fn is_meander(t: &Trace) -> bool {
    is_meander_with(t, MeanderTolerance::for_trace(t))
}

/// True when the unwrapped `x` sequence folds back by more than `x_tol`, or when two
/// samples lie within `x_tol` of each other in `x` but more than `y_tol` apart in `y`.
/// Traces with fewer than three points are never meanders.
pub fn is_meander_with(t: &Trace, tol: MeanderTolerance) -> bool {
    if t.len() < 3 {
        return false;
    }
    let xs = t.unwrapped_x();
    folds(&xs, tol.x_tol) || shares_abscissa(&xs, t.points.iter().map(|p| p.y), tol)
}

fn folds(xs: &[f64], x_tol: f64) -> bool {
    let (mut hi, mut lo) = (xs[0], xs[0]);
    let (mut fell, mut rose) = (false, false);
    for &x in &xs[1..] {
        fell |= x < hi - x_tol;
        rose |= x > lo + x_tol;
        hi = hi.max(x);
        lo = lo.min(x);
    }
    // monotone curves only ever move away from one running extreme
    fell && rose
}

fn shares_abscissa(xs: &[f64], ys: impl Iterator<Item = f64>, tol: MeanderTolerance) -> bool {
    let mut pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (i, &(x, y)) in pts.iter().enumerate() {
        for &(x2, y2) in &pts[i + 1..] {
            if x2 - x > tol.x_tol {
                break;
            }
            if (y2 - y).abs() > tol.y_tol {
                return true;
            }
        }
    }
    false
}
