//! Reconnection thresholds of the three chains.
//!
//! Two chains reconnect when their hyperbolic equilibria sit on the same energy
//! level. For the I-II pair (`P1h`, `P4h`) and the II-III pair (`P4h`, `P5h`) that
//! condition reduces to closed-form residuals in `(a, b, k)`; eliminating `k`
//! between them gives the triple-reconnection curve in `(a, b)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `|residual| <= RECONNECTION_TOL` is reported as being at reconnection.
pub const RECONNECTION_TOL: f64 = 1e-9;

/// Maximum allowed `|residual_I_II|` at the triple point.
pub const TRIPLE_CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainPair {
    #[serde(rename = "I_II")]
    OneTwo,
    #[serde(rename = "II_III")]
    TwoThree,
}

impl ChainPair {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChainPair::OneTwo => "I_II",
            ChainPair::TwoThree => "II_III",
        }
    }
}

impl std::str::FromStr for ChainPair {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "I_II" | "I-II" => Ok(ChainPair::OneTwo),
            "II_III" | "II-III" => Ok(ChainPair::TwoThree),
            _ => Err(format!("unknown chain pair `{s}` (expected I_II or II_III)")),
        }
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("a must be positive, got {a}")))
    }
}

/// `sqrt(a^2 - 4b)` with the guards shared by all residuals.
fn surd(a: f64, b: f64) -> Result<f64> {
    check_a(a)?;
    if b == 0.0 {
        return Err(Error::domain("b = 0 is a singular point of the reconnection residuals"));
    }
    let disc = a * a - 4.0 * b;
    if disc < -4.0 * f64::EPSILON * a * a {
        return Err(Error::domain(format!("a^2 - 4b = {disc} < 0: chains II and III do not exist")));
    }
    Ok(disc.max(0.0).sqrt())
}

/// `6b^2 + a^4 - 6a^2 b + 48 b^3 k + 4ab s - a^3 s` with `s = sqrt(a^2 - 4b)`.
///
/// Vanishes exactly when `H(P1h) = H(P4h)`; it equals `-24 b^3 (H(P1h) - H(P4h))`.
pub fn residual_i_ii(a: f64, b: f64, k: f64) -> Result<f64> {
    let s = surd(a, b)?;
    let a2 = a * a;
    Ok(6.0 * b * b + a2 * a2 - 6.0 * a2 * b + 48.0 * b * b * b * k + 4.0 * a * b * s - a2 * a * s)
}

/// The `k` at which chains II and III reconnect: `a (a^2 - 4b)^{3/2} / (24 b^3)`.
pub fn k_of_b_ii_iii(a: f64, b: f64) -> Result<f64> {
    let s = surd(a, b)?;
    Ok(a * s * s * s / (24.0 * b * b * b))
}

/// `k - k_of_b_ii_iii(a, b)`, which equals `(H(P4h) - H(P5h)) / 2`.
pub fn residual_ii_iii(a: f64, b: f64, k: f64) -> Result<f64> {
    Ok(k - k_of_b_ii_iii(a, b)?)
}

/// `a^4 - 6a^2 b + 6b^2 + a (a^2 - 4b)^{3/2}`: zero on the triple-reconnection curve.
pub fn triple_residual(a: f64, b: f64) -> Result<f64> {
    let s = surd(a, b)?;
    let a2 = a * a;
    Ok(a2 * a2 - 6.0 * a2 * b + 6.0 * b * b + a * s * s * s)
}

/// Scan and bisection settings for [`solve_threshold`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    pub subintervals: usize,
    /// Bisection stops once the bracket is no wider than this.
    pub tol: f64,
    /// Isolated singular points. Grid cells within half a cell of a hole are never bracketed.
    pub holes: Vec<f64>,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings { subintervals: 10_000, tol: 1e-12, holes: vec![0.0] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub b: f64,
    pub residual: f64,
    /// Scan cell the root was bracketed in; its endpoint residuals have opposite signs.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

fn grid_values<F>(f: &F, lo: f64, hi: f64, n: usize) -> Vec<(f64, Option<f64>)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let at = |i: usize| {
        let b = if i == n { hi } else { lo + (hi - lo) * (i as f64) / (n as f64) };
        (b, f(b).ok().filter(|v| v.is_finite()))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..=n).into_par_iter().map(at).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..=n).map(at).collect()
    }
}

/// Sign-change scan over `[lo, hi]` followed by bisection of every bracket.
///
/// Points where `f` errors (outside its domain) break the scan. Returns the
/// roots in ascending order, or an empty list when no sign change is found.
pub fn solve_threshold<F>(f: F, lo: f64, hi: f64, settings: &ScanSettings) -> Result<Vec<Root>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    if settings.subintervals == 0 || !(settings.tol > 0.0) {
        return Err(Error::InvalidArgument {
            name: "settings",
            reason: "need at least one subinterval and a positive tolerance".into(),
        });
    }
    let n = settings.subintervals;
    let half_cell = 0.5 * (hi - lo) / n as f64;
    let grid = grid_values(&f, lo, hi, n);
    let near_hole = |l: f64, r: f64| settings.holes.iter().any(|&h| h >= l - half_cell && h <= r + half_cell);

    let mut roots = Vec::new();
    for (i, &(b, v)) in grid.iter().enumerate() {
        if v == Some(0.0) && !near_hole(b, b) {
            roots.push(Root { b, residual: 0.0, bracket: (b, b), iterations: 0 });
            continue;
        }
        let Some(&(b_next, v_next)) = grid.get(i + 1) else { break };
        let (Some(fl), Some(fr)) = (v, v_next) else { continue };
        if fl == 0.0 || fr == 0.0 || (fl < 0.0) == (fr < 0.0) || near_hole(b, b_next) {
            continue;
        }
        roots.push(bisect(&f, b, b_next, fl, settings.tol)?);
    }
    Ok(roots)
}

fn bisect<F>(f: &F, lo: f64, hi: f64, f_lo: f64, tol: f64) -> Result<Root>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut l, mut r, mut fl) = (lo, hi, f_lo);
    let mut iterations = 0;
    while r - l > tol && iterations < 200 {
        let mid = 0.5 * (l + r);
        if mid <= l || mid >= r {
            break;
        }
        let fm = f(mid)?;
        iterations += 1;
        if fm == 0.0 {
            return Ok(Root { b: mid, residual: 0.0, bracket: (lo, hi), iterations });
        }
        if (fm < 0.0) == (fl < 0.0) {
            l = mid;
            fl = fm;
        } else {
            r = mid;
        }
    }
    let b = 0.5 * (l + r);
    Ok(Root { b, residual: f(b)?, bracket: (lo, hi), iterations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdKind {
    #[serde(rename = "I_II")]
    OneTwo,
    #[serde(rename = "II_III")]
    TwoThree,
    #[serde(rename = "triple")]
    Triple,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub kind: ThresholdKind,
    pub a: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<f64>,
    pub roots: Vec<Root>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_triple: Option<f64>,
}

/// All `b` in `[lo, hi]` where chains I and II reconnect at fixed `(a, k)`.
pub fn thresholds_i_ii(a: f64, k: f64, lo: f64, hi: f64, settings: &ScanSettings) -> Result<ThresholdReport> {
    check_a(a)?;
    let roots = solve_threshold(|b| residual_i_ii(a, b, k), lo, hi, settings)?;
    Ok(ThresholdReport { kind: ThresholdKind::OneTwo, a, k: Some(k), roots, k_triple: None })
}

/// All `b` in `[lo, hi]` where chains II and III reconnect at fixed `(a, k)`.
pub fn thresholds_ii_iii(a: f64, k: f64, lo: f64, hi: f64, settings: &ScanSettings) -> Result<ThresholdReport> {
    check_a(a)?;
    let roots = solve_threshold(|b| residual_ii_iii(a, b, k), lo, hi, settings)?;
    Ok(ThresholdReport { kind: ThresholdKind::TwoThree, a, k: Some(k), roots, k_triple: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriplePoint {
    pub b: f64,
    pub k: f64,
    pub root: Root,
    /// `residual_I_II(a, b, k)` at the returned pair.
    pub residual_i_ii: f64,
}

/// Default search interval for the triple point. Substituting `b = a^2 beta` makes
/// the triple curve `a`-independent, so the interval scales with `a^2`.
pub fn default_triple_range(a: f64) -> (f64, f64) {
    (0.01 * a * a, 0.25 * a * a)
}

/// Solves the triple curve for `b`, then takes `k = k_of_b_ii_iii(a, b)` and checks
/// that the I-II residual also vanishes there.
pub fn triple_point(a: f64, b_lo: f64, b_hi: f64, settings: &ScanSettings) -> Result<TriplePoint> {
    check_a(a)?;
    let roots = solve_threshold(|b| triple_residual(a, b), b_lo, b_hi, settings)?;
    let root = *roots.first().ok_or(Error::NoRoot { what: "triple_residual", lo: b_lo, hi: b_hi })?;
    let k = k_of_b_ii_iii(a, root.b)?;
    let r = residual_i_ii(a, root.b, k)?;
    if !(r.abs() <= TRIPLE_CROSS_CHECK_TOL) {
        return Err(Error::CrossCheck(format!(
            "residual_I_II({a}, {}, {k}) = {r:e} exceeds {TRIPLE_CROSS_CHECK_TOL:e}",
            root.b
        )));
    }
    Ok(TriplePoint { b: root.b, k, root, residual_i_ii: r })
}

pub fn triple_report(a: f64, b_lo: f64, b_hi: f64, settings: &ScanSettings) -> Result<ThresholdReport> {
    let t = triple_point(a, b_lo, b_hi, settings)?;
    Ok(ThresholdReport { kind: ThresholdKind::Triple, a, k: None, roots: vec![t.root], k_triple: Some(t.k) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    DimerisedPair,
    AtReconnection,
    BirkhoffPair,
    ChainsAbsent,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::DimerisedPair => "dimerised_pair",
            Regime::AtReconnection => "at_reconnection",
            Regime::BirkhoffPair => "birkhoff_pair",
            Regime::ChainsAbsent => "chains_absent",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dimerised_pair" => Ok(Regime::DimerisedPair),
            "at_reconnection" => Ok(Regime::AtReconnection),
            "birkhoff_pair" => Ok(Regime::BirkhoffPair),
            "chains_absent" => Ok(Regime::ChainsAbsent),
            _ => Err(format!("unknown regime `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeLabel {
    pub b: f64,
    pub chain_pair: ChainPair,
    pub regime: Regime,
}

/// Regime of the I-II and II-III pairs at `b`.
///
/// Orientation is calibrated on the `a = 1.5, k = 0.018` sweep: the I-II pair is
/// dimerised below its threshold (`b = -4`) and Birkhoff above it; the II-III pair is
/// Birkhoff below its threshold (`b = 0.5`) and dimerised above it (`b = 0.54`).
/// In energy terms, I-II is dimerised iff `H(P1h) < H(P4h)`, i.e. `b * residual_I_II > 0`,
/// and II-III is dimerised iff `H(P4h) > H(P5h)`, i.e. `residual_II_III > 0`.
pub fn regime(a: f64, k: f64, b: f64) -> Result<(RegimeLabel, RegimeLabel)> {
    if b == 0.0 {
        return Err(Error::domain("b = 0 is a singular point of the reconnection residuals"));
    }
    let label = |chain_pair, regime| RegimeLabel { b, chain_pair, regime };
    let (r12, r23) = match (residual_i_ii(a, b, k), residual_ii_iii(a, b, k)) {
        (Ok(r12), Ok(r23)) => (r12, r23),
        (Err(Error::Domain(_)), _) | (_, Err(Error::Domain(_))) if a > 0.0 => {
            return Ok((
                label(ChainPair::OneTwo, Regime::ChainsAbsent),
                label(ChainPair::TwoThree, Regime::ChainsAbsent),
            ))
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let classify = |r: f64, oriented: f64| {
        if r.abs() <= RECONNECTION_TOL {
            Regime::AtReconnection
        } else if oriented > 0.0 {
            Regime::DimerisedPair
        } else {
            Regime::BirkhoffPair
        }
    };
    Ok((label(ChainPair::OneTwo, classify(r12, r12 * b.signum())), label(ChainPair::TwoThree, classify(r23, r23))))
}
