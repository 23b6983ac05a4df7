use std::f64::consts::PI;

use nontwist::flow::{
    cell_variation, default_seeds, integrate, is_meander, level_curves, portrait, separatrices, BranchKind, Direction,
    PortraitSettings, SeparatrixSettings, TerminalEvent, Window,
};
use nontwist::hamiltonian::{energy, equilibria, saddle_directions, vector_field, Label};
use nontwist::{Params, PhasePoint, Trace, TraceMeta, TraceSource};

fn saddle(p: &Params, l: Label) -> nontwist::hamiltonian::Equilibrium {
    equilibria(p).unwrap().into_iter().find(|e| e.label == l).unwrap()
}

#[test]
fn contour_seeds_stay_on_their_level() {
    let p = Params::figure(-4.0);
    let w = Window::annulus(-1.2, 1.0, 150, 150).unwrap();
    let h = -0.0124;
    let tol = cell_variation(&p, &w);
    for c in level_curves(&p, h, &w).unwrap() {
        for seed in c.points.iter().step_by(25) {
            let t = integrate(&p, *seed, 0.01, 1000, Direction::Forward).unwrap();
            assert!(t.energies.iter().all(|e| (e - h).abs() <= tol));
        }
    }
}

#[test]
fn dimerised_band_contour_is_a_meander() {
    let p = Params::figure(-4.0);
    let h1 = energy(&p, saddle(&p, Label::P1).position).0;
    let h4 = energy(&p, saddle(&p, Label::P4).position).0;
    let w = Window::annulus(-1.2, 1.0, 400, 400).unwrap();
    let curves = level_curves(&p, 0.5 * (h1 + h4), &w).unwrap();
    assert!(curves.iter().any(is_meander));
}

#[test]
fn flat_and_vertical_polylines() {
    let meta = TraceMeta::new(Params::figure(0.5));
    let flat: Vec<_> = (0..50).map(|i| PhasePoint::new(0.1 * i as f64, 0.3)).collect();
    assert!(!is_meander(&Trace::new(TraceSource::Contour, meta.clone(), flat)));
    let vertical: Vec<_> = (0..50).map(|i| PhasePoint::new(1.0, 0.01 * i as f64)).collect();
    assert!(is_meander(&Trace::new(TraceSource::Contour, meta, vertical)));
}

#[test]
fn separatrix_seeds_follow_eigenvectors() {
    let p = Params::figure(0.5);
    let s = saddle(&p, Label::P4);
    let (_, unstable, stable) = saddle_directions(&p, s.position).unwrap();
    let bundle = separatrices(&p, &s, &SeparatrixSettings::default()).unwrap();
    for br in &bundle.branches {
        let v = if br.kind.is_unstable() { unstable } else { stable };
        let seed = br.trace.first();
        let (fx, fy) = vector_field(&p, seed);
        let norm = fx.hypot(fy);
        let cos = ((fx * v[0] + fy * v[1]) / norm).abs();
        assert!(cos.min(1.0).acos() <= 0.1, "{:?}", br.kind);
        let h0 = energy(&p, s.position).0;
        assert!(br.trace.energies.iter().all(|e| (e - h0).abs() <= 1e-6));
    }
}

#[test]
fn homoclinic_loop_of_the_origin_saddle() {
    // b = -4: the I/II pair is dimerised, so W^u(P1) closes back on P1
    let p = Params::figure(-4.0);
    let bundle = separatrices(&p, &saddle(&p, Label::P1), &SeparatrixSettings::default()).unwrap();
    let returned = BranchKind::ALL
        .iter()
        .filter(|k| k.is_unstable())
        .any(|k| bundle.branch(*k).terminal == TerminalEvent::ReturnedToSaddle);
    assert!(returned, "{:?}", bundle.branches.iter().map(|b| b.terminal).collect::<Vec<_>>());
}

#[test]
fn default_portrait_conserves_energy() {
    let p = Params::figure(0.5);
    let w = Window::around_equilibria(&p, 200, 200).unwrap();
    let seeds = default_seeds(&w, 12);
    let worst = |dt: f64| {
        let s = PortraitSettings::default().with_dt(dt);
        let out = portrait(&p, &w, &seeds, &s).unwrap();
        assert!(out.failures.is_empty());
        out.traces.iter().map(|t| t.max_drift()).fold(0.0, f64::max)
    };
    let coarse = PortraitSettings::default().dt;
    let (d1, d2) = (worst(coarse), worst(0.5 * coarse));
    assert!(d1 <= 1e-8, "{d1}");
    assert!(d1 / d2 >= 12.0, "{d1} / {d2}");
}

#[test]
fn portrait_saddles_sit_on_three_rows() {
    let p = Params::figure(0.5);
    let w = Window::around_equilibria(&p, 50, 50).unwrap();
    let out = portrait(&p, &w, &default_seeds(&w, 6), &PortraitSettings::default()).unwrap();
    let mut rows: Vec<f64> = out.bundles.iter().map(|b| b.saddle.position.y).collect();
    rows.sort_by(f64::total_cmp);
    assert_eq!(rows.len(), 3);
    for (got, want) in rows.iter().zip([0.0, 1.0, 2.0]) {
        assert!((got - want).abs() <= 1e-12);
    }
    assert!(out.bundles.iter().all(|b| b.saddle.position.x == 0.0 || b.saddle.position.x == PI));
}
