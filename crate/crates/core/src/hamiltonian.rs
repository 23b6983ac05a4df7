//! The interpolating Hamiltonian
//! `H(x, y) = -y^2/2 + a y^3/3 - b y^4/4 - k cos x`, its vector field
//! `X_H = (F(y), k sin x)`, the reversing involution `R(x, y) = (-x, y)` and the
//! equilibria on the symmetry lines `x = 0` and `x = pi`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::map::{rotation_profile, twist_derivative};
use crate::{Error, Params, PhasePoint, Result};

/// Threshold on `|lambda^2|` below which an equilibrium counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Energy(pub f64);

pub fn energy(p: &Params, pt: PhasePoint) -> Energy {
    Energy(potential(p, pt.y) - p.k() * pt.x.cos())
}

/// The `y`-part of the Hamiltonian, `-y^2/2 + a y^3/3 - b y^4/4`.
pub fn potential(p: &Params, y: f64) -> f64 {
    let y2 = y * y;
    y2 * (-0.5 + y * (p.a() / 3.0 - p.b() * y / 4.0))
}

/// `(dx/dt, dy/dt) = (-dH/dy, dH/dx) = (F(y), k sin x)`.
pub fn vector_field(p: &Params, pt: PhasePoint) -> (f64, f64) {
    field_at(p, pt.x, pt.y)
}

#[inline]
pub(crate) fn field_at(p: &Params, x: f64, y: f64) -> (f64, f64) {
    (rotation_profile(p, y), p.k() * x.sin())
}

/// Linearization `[[0, F'(y)], [k cos x, 0]]`, row-major.
pub fn jacobian(p: &Params, pt: PhasePoint) -> [[f64; 2]; 2] {
    [[0.0, twist_derivative(p, pt.y)], [p.k() * pt.x.cos(), 0.0]]
}

/// `lambda^2 = k cos x F'(y)`, the squared eigenvalue of the jacobian.
pub fn eigenvalue_squared(p: &Params, pt: PhasePoint) -> f64 {
    let j = jacobian(p, pt);
    j[0][1] * j[1][0]
}

/// The reversing involution `R(x, y) = (-x mod 2pi, y)`.
pub fn reversal(pt: PhasePoint) -> PhasePoint {
    PhasePoint::new(-pt.x, pt.y)
}

/// A line `x = x0` fixed by `R`; only `x0 = 0` and `x0 = pi` qualify.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryLine {
    x0: f64,
}

impl SymmetryLine {
    pub const ZERO: SymmetryLine = SymmetryLine { x0: 0.0 };
    pub const PI: SymmetryLine = SymmetryLine { x0: PI };

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn contains(&self, pt: PhasePoint) -> bool {
        pt.x == self.x0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Elliptic,
    Hyperbolic,
    Degenerate,
}

impl Stability {
    pub fn classify(lambda_sq: f64) -> Self {
        if lambda_sq.abs() <= DEGENERACY_TOL {
            Stability::Degenerate
        } else if lambda_sq > 0.0 {
            Stability::Hyperbolic
        } else {
            Stability::Elliptic
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Elliptic => "elliptic",
            Stability::Hyperbolic => "hyperbolic",
            Stability::Degenerate => "degenerate",
        }
    }
}

/// Chain membership, keyed to the algebraic `y`-root rather than vertical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chain {
    I,
    II,
    III,
}

impl Chain {
    pub fn as_str(&self) -> &'static str {
        match self {
            Chain::I => "I",
            Chain::II => "II",
            Chain::III => "III",
        }
    }
}

/// Positional names. `A` and `B` are the merged II/III points at `a^2 = 4b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    A,
    B,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::P1 => "P1",
            Label::P2 => "P2",
            Label::P3 => "P3",
            Label::P4 => "P4",
            Label::P5 => "P5",
            Label::P6 => "P6",
            Label::A => "A",
            Label::B => "B",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub position: PhasePoint,
    pub stability: Stability,
    pub eigenvalue_squared: f64,
    pub chain: Chain,
    pub label: Label,
}

impl Equilibrium {
    fn at(p: &Params, x: f64, y: f64, chain: Chain, label: Label) -> Self {
        let position = PhasePoint { x, y };
        let eigenvalue_squared = eigenvalue_squared(p, position);
        Equilibrium { position, stability: Stability::classify(eigenvalue_squared), eigenvalue_squared, chain, label }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.stability == Stability::Hyperbolic
    }
}

/// The nonzero `y`-roots `(y_minus, y_plus)` of `b y^2 - a y + 1`, i.e.
/// `(a -+ sqrt(a^2 - 4b)) / 2b`, or `None` when `a^2 < 4b`.
///
/// `y_minus` is evaluated as `2 / (a + sqrt(a^2 - 4b))`, which avoids cancellation for small `b`.
pub fn chain_roots(p: &Params) -> Result<Option<(f64, f64)>> {
    let b = p.b();
    if b == 0.0 {
        return Err(Error::domain("b = 0: chains II and III are at infinity"));
    }
    let disc = p.chain_discriminant();
    if is_double_root(p) {
        let y = p.a() / (2.0 * b);
        return Ok(Some((y, y)));
    }
    if disc < 0.0 {
        return Ok(None);
    }
    let s = disc.sqrt();
    Ok(Some((2.0 / (p.a() + s), (p.a() + s) / (2.0 * b))))
}

fn is_double_root(p: &Params) -> bool {
    p.chain_discriminant().abs() <= 4.0 * f64::EPSILON * p.a() * p.a()
}

/// All equilibria on the symmetry lines, in label order.
///
/// Six points when `a^2 > 4b`, four (`P1`, `P2`, `A`, `B`) when `a^2 = 4b`, two otherwise.
/// Stability always comes from `lambda^2`; for `b < 0` the chain III pair is swapped
/// relative to the `P5h`/`P6e` naming.
pub fn equilibria(p: &Params) -> Result<Vec<Equilibrium>> {
    let roots = chain_roots(p)?;
    let mut out =
        vec![Equilibrium::at(p, 0.0, 0.0, Chain::I, Label::P1), Equilibrium::at(p, PI, 0.0, Chain::I, Label::P2)];
    match roots {
        Some((y, _)) if is_double_root(p) => {
            out.push(Equilibrium::at(p, 0.0, y, Chain::II, Label::A));
            out.push(Equilibrium::at(p, PI, y, Chain::II, Label::B));
        }
        Some((y_minus, y_plus)) => {
            out.push(Equilibrium::at(p, 0.0, y_minus, Chain::II, Label::P3));
            out.push(Equilibrium::at(p, PI, y_minus, Chain::II, Label::P4));
            out.push(Equilibrium::at(p, 0.0, y_plus, Chain::III, Label::P5));
            out.push(Equilibrium::at(p, PI, y_plus, Chain::III, Label::P6));
        }
        None => {}
    }
    Ok(out)
}

/// The hyperbolic equilibrium of a chain, if it exists.
pub fn chain_saddle(p: &Params, chain: Chain) -> Result<Option<Equilibrium>> {
    Ok(equilibria(p)?.into_iter().find(|e| e.chain == chain && e.is_hyperbolic()))
}

/// Unit eigen-directions of a saddle: `(lambda, unstable, stable)` with `lambda > 0`.
pub fn saddle_directions(p: &Params, pt: PhasePoint) -> Result<(f64, [f64; 2], [f64; 2])> {
    let j = jacobian(p, pt);
    let lambda_sq = j[0][1] * j[1][0];
    if !(lambda_sq > DEGENERACY_TOL) {
        return Err(Error::DegenerateSaddle(format!("lambda^2 = {lambda_sq:e} at ({}, {})", pt.x, pt.y)));
    }
    let lambda = lambda_sq.sqrt();
    // J v = lambda v with first row 0*v1 + F' v2 = lambda v1 gives v = (F', lambda)
    let unit = |v: [f64; 2]| {
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    };
    Ok((lambda, unit([j[0][1], lambda]), unit([j[0][1], -lambda])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(a: f64, b: f64, k: f64) -> Params {
        Params::new(a, b, k).unwrap()
    }

    #[test]
    fn energy_examples() {
        let p = Params::figure(0.5);
        assert_eq!(energy(&p, PhasePoint::new(0.0, 0.0)).0, -0.018);
        assert_eq!(energy(&p, PhasePoint::new(PI, 0.0)).0, 0.018);
        // term by term: -1/2 + 1.5/3 - 0.5/4 + 0.018
        let oracle = -0.5 + 1.5 / 3.0 - 0.5 / 4.0 + 0.018;
        assert_abs_diff_eq!(energy(&p, PhasePoint::new(PI, 1.0)).0, oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(oracle, -0.107, epsilon = 1e-15);
    }

    #[test]
    fn field_examples() {
        let p = Params::figure(0.5);
        assert_eq!(vector_field(&p, PhasePoint::new(0.0, 0.0)), (0.0, 0.0));
        let (dx, dy) = vector_field(&p, PhasePoint::new(PI / 2.0, 0.2));
        assert_abs_diff_eq!(dx, 0.144, epsilon = 1e-15);
        assert_abs_diff_eq!(dy, 0.018, epsilon = 1e-15);
    }

    #[test]
    fn jacobian_examples() {
        let p = Params::figure(0.5);
        let j = jacobian(&p, PhasePoint::new(0.0, 0.0));
        assert_eq!(j, [[0.0, 1.0], [0.018, 0.0]]);
        assert_eq!(j[0][0] + j[1][1], 0.0);
        let (lambda, _, _) = saddle_directions(&p, PhasePoint::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(lambda, 0.134164, epsilon = 1e-6);
        assert_abs_diff_eq!(lambda, 0.018f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn eigenvectors_are_eigenvectors() {
        let p = Params::figure(0.5);
        let pt = PhasePoint::new(PI, 1.0);
        let (lambda, u, s) = saddle_directions(&p, pt).unwrap();
        let j = jacobian(&p, pt);
        for (v, l) in [(u, lambda), (s, -lambda)] {
            let jv = [j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]];
            assert_abs_diff_eq!(jv[0], l * v[0], epsilon = 1e-15);
            assert_abs_diff_eq!(jv[1], l * v[1], epsilon = 1e-15);
        }
        assert!(saddle_directions(&p, PhasePoint::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn six_equilibria_at_half() {
        let eq = equilibria(&Params::figure(0.5)).unwrap();
        let want = [
            (0.0, 0.0, Stability::Hyperbolic),
            (PI, 0.0, Stability::Elliptic),
            (0.0, 1.0, Stability::Elliptic),
            (PI, 1.0, Stability::Hyperbolic),
            (0.0, 2.0, Stability::Hyperbolic),
            (PI, 2.0, Stability::Elliptic),
        ];
        assert_eq!(eq.len(), 6);
        for (e, (x, y, s)) in eq.iter().zip(want) {
            assert_eq!(e.position.x, x);
            assert_abs_diff_eq!(e.position.y, y, epsilon = 1e-14);
            assert_eq!(e.stability, s, "{:?}", e.label);
        }
        let chains: Vec<_> = eq.iter().map(|e| e.chain).collect();
        assert_eq!(chains, [Chain::I, Chain::I, Chain::II, Chain::II, Chain::III, Chain::III]);
    }

    #[test]
    fn four_equilibria_at_double_root() {
        let eq = equilibria(&Params::figure(0.5625)).unwrap();
        assert_eq!(eq.len(), 4);
        for e in &eq[2..] {
            assert_eq!(e.stability, Stability::Degenerate);
            assert_abs_diff_eq!(e.position.y, 4.0 / 3.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e.position.y, 1.0 / 0.5625f64.sqrt(), epsilon = 1e-12);
        }
        assert_eq!((eq[2].label, eq[3].label), (Label::A, Label::B));
    }

    #[test]
    fn two_equilibria_beyond_double_root() {
        let eq = equilibria(&Params::figure(0.6)).unwrap();
        assert_eq!(eq.len(), 2);
        assert_eq!(eq[0].position, PhasePoint::new(0.0, 0.0));
        assert_eq!(eq[1].position, PhasePoint::new(PI, 0.0));
    }

    #[test]
    fn b_zero_is_domain_error() {
        assert!(equilibria(&params(1.5, 0.0, 0.018)).unwrap_err().is_domain());
    }

    #[test]
    fn chain_three_swaps_for_negative_b() {
        let eq = equilibria(&Params::figure(-4.0)).unwrap();
        let p5 = eq.iter().find(|e| e.label == Label::P5).unwrap();
        let p6 = eq.iter().find(|e| e.label == Label::P6).unwrap();
        assert!(p5.position.y < 0.0);
        assert_eq!(p5.stability, Stability::Elliptic);
        assert_eq!(p6.stability, Stability::Hyperbolic);
        let saddle = chain_saddle(&Params::figure(-4.0), Chain::III).unwrap().unwrap();
        assert_eq!(saddle.label, Label::P6);
    }

    #[test]
    fn reversal_examples() {
        assert_eq!(reversal(PhasePoint::new(0.0, 0.4)), PhasePoint::new(0.0, 0.4));
        assert_eq!(reversal(PhasePoint::new(PI, 0.4)).y, 0.4);
        assert_abs_diff_eq!(reversal(PhasePoint::new(PI, 0.4)).x, PI, epsilon = 1e-15);
        let r = reversal(PhasePoint::new(1.0, 0.3));
        assert_abs_diff_eq!(r.x, 2.0 * PI - 1.0, epsilon = 1e-15);
        assert_eq!(r.y, 0.3);
        assert!(SymmetryLine::ZERO.contains(PhasePoint::new(0.0, 1.0)));
        assert!(SymmetryLine::PI.contains(PhasePoint::new(PI, 1.0)));
    }
}
