//! The cubic nontwist map, its lift, orbits and twist diagnostics.

use serde::{Deserialize, Serialize};

use crate::trace::{Trace, TraceMeta, TraceSource};
use crate::{normalize_angle, Error, LiftPoint, Params, PhasePoint, Result, TAU};

/// The rotation number function `F(a, b; y) = y - a y^2 + b y^3`.
pub fn rotation_profile(p: &Params, y: f64) -> f64 {
    y * (1.0 - y * (p.a() - p.b() * y))
}

/// `F'(y) = 1 - 2 a y + 3 b y^2`. Its sign is the local twist sign.
pub fn twist_derivative(p: &Params, y: f64) -> f64 {
    1.0 - y * (2.0 * p.a() - 3.0 * p.b() * y)
}

// Shared by `step` and `lift_step` so both perform identical arithmetic.
#[inline]
fn advance(p: &Params, x: f64, y: f64) -> (f64, f64) {
    let y_next = y + p.k() * x.sin();
    (x + rotation_profile(p, y_next), y_next)
}

/// One iterate of the map. `y'` is computed first and then used in the angle update.
pub fn step(p: &Params, pt: PhasePoint) -> PhasePoint {
    let (x, y) = advance(p, pt.x, pt.y);
    PhasePoint { x: normalize_angle(x), y }
}

/// One iterate of the lifted map on `R^2`.
pub fn lift_step(p: &Params, pt: LiftPoint) -> LiftPoint {
    let (raw, y) = advance(p, pt.angle, pt.y);
    let angle = normalize_angle(raw);
    let turns = ((raw - angle) / TAU).round() as i64;
    LiftPoint { turns: pt.turns + turns, angle, y }
}

/// The first `n` iterates of `pt`, `n + 1` points including the start.
pub fn orbit(p: &Params, pt: PhasePoint, n: usize) -> Trace {
    let mut points = Vec::with_capacity(n + 1);
    let mut cur = PhasePoint::new(pt.x, pt.y);
    points.push(cur);
    for _ in 0..n {
        cur = step(p, cur);
        points.push(cur);
    }
    let mut meta = TraceMeta::new(*p);
    meta.steps = Some(n);
    Trace::new(TraceSource::MapOrbit, meta, points)
}

/// Finite-`n` estimate `(X_n - X_0) / (2 pi n)` of the rotation number.
///
/// No extrapolation is attempted.
pub fn rotation_number_numeric(p: &Params, pt: PhasePoint, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument { name: "n", reason: "need at least one iterate".into() });
    }
    let start = PhasePoint::new(pt.x, pt.y).lift();
    let mut cur = start;
    for _ in 0..n {
        cur = lift_step(p, cur);
    }
    let turns = (cur.turns - start.turns) as f64;
    Ok(((cur.angle - start.angle) / TAU + turns) / n as f64)
}

/// The two shearless circles of the unperturbed map and their rotation numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistlessCircles {
    /// `(a + sqrt(a^2 - 3b)) / 3b`
    pub y_c1: f64,
    /// `(a - sqrt(a^2 - 3b)) / 3b`
    pub y_c2: f64,
    pub rho_c1: f64,
    pub rho_c2: f64,
}

fn twistless_guard(p: &Params) -> Result<f64> {
    if p.b() == 0.0 {
        return Err(Error::domain("b = 0: F is quadratic with a single shearless circle y = 1/(2a)"));
    }
    let disc = p.a() * p.a() - 3.0 * p.b();
    if disc < 0.0 {
        return Err(Error::domain(format!("a^2 - 3b = {disc} < 0: the map is twist everywhere")));
    }
    Ok(disc.sqrt())
}

/// Circles where `F'` vanishes. At `a^2 = 3b` both collapse onto `y = a / 3b`.
pub fn twistless_circles(p: &Params) -> Result<TwistlessCircles> {
    let root = twistless_guard(p)?;
    let denom = 3.0 * p.b();
    let y_c1 = (p.a() + root) / denom;
    let y_c2 = (p.a() - root) / denom;
    Ok(TwistlessCircles {
        y_c1,
        y_c2,
        rho_c1: rotation_profile(p, y_c1) / TAU,
        rho_c2: rotation_profile(p, y_c2) / TAU,
    })
}

/// Closed-form rotation numbers on `C1` and `C2`.
///
/// Evaluates the `54 pi b^2` expressions term by term; they equal `F(y_Ci) / 2pi`.
pub fn extremal_rotation_numbers(p: &Params) -> Result<(f64, f64)> {
    let s = twistless_guard(p)?;
    let (a, b) = (p.a(), p.b());
    let a2 = a * a;
    let a3 = a2 * a;
    let denom = 54.0 * std::f64::consts::PI * b * b;
    let c1 = (-2.0 * a3 - 3.0 * a2 * s + 9.0 * a * b + (a2 + 6.0 * b) * s) / denom;
    let c2 = (-2.0 * a3 + 3.0 * a2 * s + 9.0 * a * b - (a2 + 6.0 * b) * s) / denom;
    Ok((c1, c2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistSign {
    Positive,
    Negative,
}

/// An interval of `y` on which the unperturbed twist has constant sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistRegion {
    pub lo: f64,
    pub hi: f64,
    pub sign: TwistSign,
}

/// Partition of the real line by the sign of `F'`. The roots of `F'` split it;
/// the sign on each piece is read off `F'` at an interior point.
pub fn twist_regions(p: &Params) -> Vec<TwistRegion> {
    let mut cuts = vec![f64::NEG_INFINITY];
    if let Ok(c) = twistless_circles(p) {
        let (lo, hi) = if c.y_c1 < c.y_c2 { (c.y_c1, c.y_c2) } else { (c.y_c2, c.y_c1) };
        cuts.push(lo);
        if hi > lo {
            cuts.push(hi);
        }
    } else if p.b() == 0.0 {
        cuts.push(1.0 / (2.0 * p.a()));
    }
    cuts.push(f64::INFINITY);

    let mut out: Vec<TwistRegion> = Vec::new();
    for w in cuts.windows(2) {
        let probe = match (w[0].is_finite(), w[1].is_finite()) {
            (true, true) => 0.5 * (w[0] + w[1]),
            (false, true) => w[1] - 1.0,
            (true, false) => w[0] + 1.0,
            (false, false) => 0.0,
        };
        let sign = if twist_derivative(p, probe) >= 0.0 { TwistSign::Positive } else { TwistSign::Negative };
        match out.last_mut() {
            // a double root does not change the sign
            Some(last) if last.sign == sign => last.hi = w[1],
            _ => out.push(TwistRegion { lo: w[0], hi: w[1], sign }),
        }
    }
    out
}
