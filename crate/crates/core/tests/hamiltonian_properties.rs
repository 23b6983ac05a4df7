use std::f64::consts::{PI, TAU};

use nontwist::hamiltonian::{energy, equilibria, reversal, vector_field, Chain, Equilibrium, Label, Stability};
use nontwist::{Params, PhasePoint};
use proptest::prelude::*;

// Oracle written out term by term.
fn h_oracle(a: f64, b: f64, k: f64, x: f64, y: f64) -> f64 {
    -0.5 * y * y + a * y.powi(3) / 3.0 - b * y.powi(4) / 4.0 - k * x.cos()
}

fn params() -> impl Strategy<Value = Params> {
    (0.2f64..3.0, -3.0f64..3.0, 0.0f64..0.5).prop_map(|(a, b, k)| Params::new(a, b, k).unwrap())
}

fn by_label(eq: &[Equilibrium], l: Label) -> Equilibrium {
    *eq.iter().find(|e| e.label == l).unwrap()
}

fn alternates(eq: &[Equilibrium], x0: f64) -> bool {
    let mut line: Vec<_> = eq.iter().filter(|e| e.position.x == x0).collect();
    line.sort_by(|l, r| l.position.y.total_cmp(&r.position.y));
    line.windows(2).all(|w| w[0].stability != w[1].stability)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn energy_matches_oracle(p in params(), x in 0.0f64..TAU, y in -2.0f64..2.0) {
        let want = h_oracle(p.a(), p.b(), p.k(), x, y);
        prop_assert!((energy(&p, PhasePoint::new(x, y)).0 - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn field_is_symplectic_gradient(p in params(), x in 0.0f64..TAU, y in -2.0f64..2.0) {
        let d = 1e-5;
        let h = |x: f64, y: f64| h_oracle(p.a(), p.b(), p.k(), x, y);
        let dh_dx = (h(x + d, y) - h(x - d, y)) / (2.0 * d);
        let dh_dy = (h(x, y + d) - h(x, y - d)) / (2.0 * d);
        let (fx, fy) = vector_field(&p, PhasePoint::new(x, y));
        prop_assert!((fx + dh_dy).abs() <= 1e-6 * (1.0 + fx.abs()));
        prop_assert!((fy - dh_dx).abs() <= 1e-6 * (1.0 + fy.abs()));
    }

    #[test]
    fn reversal_symmetry(p in params(), x in 0.0f64..TAU, y in -2.0f64..2.0) {
        let pt = PhasePoint::new(x, y);
        let r = reversal(pt);
        prop_assert!((energy(&p, r).0 - energy(&p, pt).0).abs() <= 1e-12);
        let (fx, fy) = vector_field(&p, pt);
        let (gx, gy) = vector_field(&p, r);
        prop_assert!((gx - fx).abs() <= 1e-12 && (gy + fy).abs() <= 1e-12);
        prop_assert!(reversal(r).distance(&pt) <= 1e-12);
    }

    #[test]
    fn equilibria_are_zeros_of_the_field(p in params()) {
        for e in equilibria(&p).unwrap() {
            let (fx, fy) = vector_field(&p, e.position);
            let scale = 1.0 + e.position.y.abs().powi(3);
            prop_assert!(fx.abs() <= 1e-12 * scale && fy.abs() <= 1e-12, "{e:?}");
        }
    }

    #[test]
    fn count_law(p in params()) {
        prop_assume!(p.b() != 0.0);
        let n = equilibria(&p).unwrap().len();
        let disc = p.chain_discriminant();
        prop_assert_eq!(n, if disc > 0.0 { 6 } else { 2 });
    }

    #[test]
    fn labelled_pattern_for_positive_b(a in 0.5f64..3.0, frac in 0.001f64..0.99, k in 0.001f64..0.1) {
        let p = Params::new(a, frac * a * a / 4.0, k).unwrap();
        let eq = equilibria(&p).unwrap();
        let want = [
            Stability::Hyperbolic,
            Stability::Elliptic,
            Stability::Elliptic,
            Stability::Hyperbolic,
            Stability::Hyperbolic,
            Stability::Elliptic,
        ];
        prop_assert_eq!(eq.iter().map(|e| e.stability).collect::<Vec<_>>(), want.to_vec());
    }

    #[test]
    fn alternation_for_negative_b(a in 0.5f64..3.0, b in -5.0f64..-0.01, k in 0.001f64..0.1) {
        let p = Params::new(a, b, k).unwrap();
        let eq = equilibria(&p).unwrap();
        prop_assert_eq!(eq.len(), 6);
        prop_assert!(alternates(&eq, 0.0) && alternates(&eq, PI));
        for chain in [Chain::I, Chain::II, Chain::III] {
            let pair: Vec<_> = eq.iter().filter(|e| e.chain == chain).collect();
            prop_assert_eq!(pair.len(), 2);
            prop_assert_ne!(pair[0].stability, pair[1].stability);
        }
        // chain III swaps relative to the positive-b naming
        prop_assert_eq!(by_label(&eq, Label::P5).stability, Stability::Elliptic);
    }
}

#[test]
fn census_along_the_b_sequence() {
    let bs = [-4.0, -1.9538, -0.5, 0.3, 0.5, 0.53168, 0.54, 0.5625, 0.6];
    let counts = [6, 6, 6, 6, 6, 6, 6, 4, 2];
    for (b, n) in bs.iter().zip(counts) {
        assert_eq!(equilibria(&Params::figure(*b)).unwrap().len(), n, "b = {b}");
    }
    let eq = equilibria(&Params::figure(0.5625)).unwrap();
    for l in [Label::A, Label::B] {
        let e = by_label(&eq, l);
        assert!((e.position.y - 4.0 / 3.0).abs() <= 1e-12);
        assert_eq!(e.stability, Stability::Degenerate);
    }
}
