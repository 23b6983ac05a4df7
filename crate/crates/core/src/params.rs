use serde::{Deserialize, Serialize};

use crate::{Error, Result, TAU};

/// Reduces an angle to `[0, 2pi)` with a floor-based reduction.
pub fn normalize_angle(x: f64) -> f64 {
    let r = x - TAU * (x / TAU).floor();
    // tiny negative inputs round up to exactly 2pi
    if !(0.0..TAU).contains(&r) {
        0.0
    } else {
        r
    }
}

/// Shape parameters `a`, `b` and perturbation amplitude `k`.
///
/// `a > 0` and `k >= 0` are enforced on construction. `b` is unrestricted here;
/// formulas that divide by `b` or take `sqrt(a^2 - 4b)` guard themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct Params {
    a: f64,
    b: f64,
    k: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    k: f64,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.a, raw.b, raw.k)
    }
}

impl From<Params> for RawParams {
    fn from(p: Params) -> Self {
        RawParams { a: p.a, b: p.b, k: p.k }
    }
}

impl Params {
    pub fn new(a: f64, b: f64, k: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && k.is_finite()) {
            return Err(Error::domain(format!("non-finite parameters a={a}, b={b}, k={k}")));
        }
        if a <= 0.0 {
            return Err(Error::domain(format!("a must be positive, got {a}")));
        }
        if k < 0.0 {
            return Err(Error::domain(format!("k must be non-negative, got {k}")));
        }
        Ok(Params { a, b, k })
    }

    /// The reference parameters `a = 1.5`, `k = 0.018` at the given `b`.
    pub fn figure(b: f64) -> Self {
        Params { a: 1.5, b, k: 0.018 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn with_b(self, b: f64) -> Result<Self> {
        Params::new(self.a, b, self.k)
    }

    pub fn with_k(self, k: f64) -> Result<Self> {
        Params::new(self.a, self.b, k)
    }

    /// `a^2 - 3b >= 0`: the unperturbed map has twistless circles.
    pub fn is_nontwist(&self) -> bool {
        self.a * self.a - 3.0 * self.b >= 0.0
    }

    /// `a^2 - 4b`, the discriminant of `b y^2 - a y + 1`.
    pub fn chain_discriminant(&self) -> f64 {
        self.a * self.a - 4.0 * self.b
    }
}

/// A point of the annulus with `x` in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Self {
        PhasePoint { x: normalize_angle(x), y }
    }

    pub fn lift(self) -> LiftPoint {
        LiftPoint { turns: 0, angle: self.x, y: self.y }
    }

    /// Euclidean distance with `x` measured on the circle.
    pub fn distance(&self, other: &PhasePoint) -> f64 {
        let mut dx = (self.x - other.x).abs();
        if dx > std::f64::consts::PI {
            dx = TAU - dx;
        }
        dx.hypot(self.y - other.y)
    }
}

/// A point of the universal cover `R^2`.
///
/// The unwrapped angle is `angle + 2pi * turns` with `angle` in `[0, 2pi)`.
/// Keeping the integer part separately means the projection of a lifted orbit
/// is bit-for-bit the orbit of the annulus map, however many turns it makes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftPoint {
    pub turns: i64,
    pub angle: f64,
    pub y: f64,
}

impl LiftPoint {
    pub fn new(x: f64, y: f64) -> Self {
        let turns = (x / TAU).floor();
        let angle = normalize_angle(x);
        // normalize_angle may snap 2pi - tiny to 0 and lose a turn
        let turns =
            if angle == 0.0 && x - turns * TAU > std::f64::consts::PI { turns as i64 + 1 } else { turns as i64 };
        LiftPoint { turns, angle, y }
    }

    /// The unwrapped angle `X`.
    pub fn unwrapped(&self) -> f64 {
        self.angle + TAU * self.turns as f64
    }

    pub fn project(&self) -> PhasePoint {
        PhasePoint { x: self.angle, y: self.y }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guards() {
        assert!(Params::new(0.0, 1.0, 0.1).is_err());
        assert!(Params::new(-1.0, 1.0, 0.1).is_err());
        assert!(Params::new(1.0, 1.0, -0.1).is_err());
        assert!(Params::new(1.0, f64::NAN, 0.1).is_err());
        assert!(Params::new(1.5, 0.0, 0.0).is_ok());
    }

    #[test]
    fn nontwist_flag() {
        assert!(Params::new(1.5, 0.75, 0.0).unwrap().is_nontwist());
        assert!(!Params::new(1.5, 0.8, 0.0).unwrap().is_nontwist());
        assert!(Params::new(1.5, -4.0, 0.0).unwrap().is_nontwist());
    }

    #[test]
    fn angle_reduction() {
        assert_eq!(normalize_angle(0.0), 0.0);
        assert_eq!(normalize_angle(TAU), 0.0);
        assert_eq!(normalize_angle(-1e-300), 0.0);
        assert!((normalize_angle(-1.0) - (TAU - 1.0)).abs() < 1e-15);
        assert!((normalize_angle(7.0) - (7.0 - TAU)).abs() < 1e-15);
    }

    #[test]
    fn lift_round_trip() {
        for &x in &[-20.0, -TAU, -1e-300, 0.0, 3.0, TAU, 100.0] {
            let l = LiftPoint::new(x, 0.5);
            assert!((l.unwrapped() - x).abs() < 1e-12, "{x} -> {}", l.unwrapped());
            assert!((0.0..TAU).contains(&l.angle));
        }
    }

    #[test]
    fn periodic_distance() {
        let p = PhasePoint::new(0.01, 0.0);
        let q = PhasePoint::new(TAU - 0.01, 0.0);
        assert!((p.distance(&q) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn serde_rejects_bad_params() {
        assert!(Params::try_from(RawParams { a: -1.0, b: 0.5, k: 0.1 }).is_err());
    }
}
