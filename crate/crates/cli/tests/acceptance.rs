//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use nontwist::flow::{chain_topology, is_meander, level_curves, Topology, TopologySettings, Window};
use nontwist::hamiltonian::{energy, equilibria, Label, Stability};
use nontwist::map::{extremal_rotation_numbers, orbit, rotation_number_numeric, rotation_profile, twistless_circles};
use nontwist::reconnection::{residual_i_ii, ChainPair};
use nontwist::{Params, PhasePoint};
use nontwist_cli::commands::ThresholdsDoc;
use nontwist_cli::dataset::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn cli(args: &[&str]) -> Result<(Vec<u8>, Duration), String> {
    let t0 = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_nontwist")).args(args).output().map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok((out.stdout, elapsed))
}

fn thresholds(args: &[&str]) -> Result<(ThresholdsDoc, Duration), String> {
    let (stdout, t) = cli(args)?;
    Ok((serde_json::from_slice(&stdout).map_err(|e| e.to_string())?, t))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_first_threshold() -> Check {
    let (doc, t) = thresholds(&["thresholds", "--a", "1.5", "--k", "0.018", "--b-range", "-3:-1"])?;
    let roots = doc.i_ii.ok_or("no I_II block")?.roots;
    ensure(roots.len() == 1, format!("{} roots", roots.len()))?;
    let b = roots[0].b;
    ensure((b + 1.9538).abs() <= 1e-3, format!("root {b}"))?;
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("b_1rec = {b:.7} in {t:.2?}"))
}

fn c2_second_threshold() -> Check {
    let (doc, t) = thresholds(&["thresholds", "--a", "1.5", "--k", "0.018", "--b-range", "0.4:0.56"])?;
    let roots = doc.ii_iii.ok_or("no II_III block")?.roots;
    ensure(roots.len() == 1, format!("{} roots", roots.len()))?;
    let b = roots[0].b;
    ensure((b - 0.53168).abs() <= 1e-4, format!("root {b}"))?;
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("b_2rec = {b:.7} in {t:.2?}"))
}

fn c3_triple_point() -> Check {
    let (doc, _) = thresholds(&["thresholds", "--a", "1.5", "--triple"])?;
    let t = doc.triple.ok_or("no triple block")?;
    ensure((t.b - 0.5).abs() <= 1e-9, format!("b = {}", t.b))?;
    ensure((t.k - 0.0625).abs() <= 1e-9, format!("k = {}", t.k))?;
    let r = residual_i_ii(1.5, t.b, t.k).map_err(|e| e.to_string())?;
    ensure(r.abs() <= 1e-9, format!("residual_I_II = {r:e}"))?;
    Ok(format!("(b, k) = ({}, {}), residual {r:.1e}", t.b, t.k))
}

fn c4_census() -> Check {
    let bs = [-4.0, -1.9538, -0.5, 0.3, 0.5, 0.53168, 0.54, 0.5625, 0.6];
    let want = [6, 6, 6, 6, 6, 6, 6, 4, 2];
    let got: Vec<usize> = bs
        .iter()
        .map(|&b| equilibria(&Params::figure(b)).map(|e| e.len()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(got == want, format!("counts {got:?}"))?;
    let eq = equilibria(&Params::figure(0.5625)).map_err(|e| e.to_string())?;
    for e in eq.iter().filter(|e| matches!(e.label, Label::A | Label::B)) {
        ensure((e.position.y - 4.0 / 3.0).abs() <= 1e-12, format!("{:?} at y = {}", e.label, e.position.y))?;
    }
    Ok(format!("counts {got:?}"))
}

fn c5_stability() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = Stability::Hyperbolic;
    let e = Stability::Elliptic;
    for _ in 0..50 {
        let a = rng.gen_range(0.5..3.0);
        let b = rng.gen_range(0.0..a * a / 4.0);
        let k = rng.gen_range(1e-6..=0.1);
        if b == 0.0 {
            continue;
        }
        let p = Params::new(a, b, k).map_err(|e| e.to_string())?;
        let got: Vec<_> = equilibria(&p).map_err(|e| e.to_string())?.iter().map(|q| q.stability).collect();
        ensure(got == [h, e, e, h, h, e], format!("(a, b, k) = ({a}, {b}, {k}): {got:?}"))?;
    }
    for _ in 0..50 {
        let a = rng.gen_range(0.5..3.0);
        let b = -rng.gen_range(1e-3..5.0);
        let k = rng.gen_range(1e-6..=0.1);
        let p = Params::new(a, b, k).map_err(|e| e.to_string())?;
        let eq = equilibria(&p).map_err(|e| e.to_string())?;
        for x0 in [0.0, PI] {
            let mut line: Vec<_> = eq.iter().filter(|q| q.position.x == x0).collect();
            line.sort_by(|l, r| l.position.y.total_cmp(&r.position.y));
            let alternates = line.windows(2).all(|w| w[0].stability != w[1].stability);
            ensure(alternates, format!("(a, b, k) = ({a}, {b}, {k}) on x = {x0}"))?;
        }
    }
    Ok("50 positive-b patterns and 50 negative-b alternations".into())
}

fn c6_topology() -> Check {
    let t0 = Instant::now();
    let mut seen = Vec::new();
    for (b, want) in [(0.50, Topology::Separated), (0.53168, Topology::Connected), (0.54, Topology::Separated)] {
        let r = chain_topology(&Params::figure(b), ChainPair::TwoThree, &TopologySettings::default())
            .map_err(|e| e.to_string())?;
        ensure(r.verdict == want, format!("b = {b}: {:?} (min approach {:.3e})", r.verdict, r.min_approach))?;
        seen.push(r.verdict.as_str());
    }
    let t = t0.elapsed();
    ensure(t < Duration::from_secs(30), format!("took {t:?}"))?;
    Ok(format!("{} in {t:.2?}", seen.join(" -> ")))
}

fn worst_drift(dir: &std::path::Path, dt: &str, steps: &str) -> Result<f64, String> {
    let d = dir.to_str().unwrap();
    cli(&["portrait", "--a", "1.5", "--b", "0.5", "--k", "0.018", "--dt", dt, "--steps", steps, "--out", d])?;
    let data = Dataset::read_csv(fs::read(dir.join("traces.csv")).map_err(|e| e.to_string())?.as_slice())
        .map_err(|e| e.to_string())?;
    let failures = &data.provenance.details["failures"];
    ensure(failures.as_array().is_some_and(|f| f.is_empty()), format!("failed seeds: {failures}"))?;
    let (id, h) = (data.column("trace_id").unwrap(), data.column("H").unwrap());
    let mut worst: f64 = 0.0;
    let mut current = (f64::NAN, 0.0);
    for row in &data.rows {
        let (tid, hv) = (row[id].as_f64().unwrap(), row[h].as_f64().unwrap());
        if tid != current.0 {
            current = (tid, hv);
        }
        worst = worst.max((hv - current.1).abs());
    }
    Ok(worst)
}

fn c7_energy() -> Check {
    let (d1, d2) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
    let coarse = worst_drift(d1.path(), "0.1", "4000")?;
    let fine = worst_drift(d2.path(), "0.05", "8000")?;
    ensure(coarse <= 1e-8, format!("worst |dH| = {coarse:e}"))?;
    ensure(coarse / fine >= 12.0, format!("halving dt: {coarse:e} -> {fine:e}"))?;
    Ok(format!("worst |dH| {coarse:.2e}, halved dt {fine:.2e} (x{:.1})", coarse / fine))
}

fn c8_rotation_number() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b, y) = (rng.gen_range(0.1..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0));
        let p = Params::new(a, b, 0.0).map_err(|e| e.to_string())?;
        let want = rotation_profile(&p, y) / (2.0 * PI);
        for n in [1, 1000] {
            let got = rotation_number_numeric(&p, PhasePoint::new(rng.gen_range(0.0..2.0 * PI), y), n)
                .map_err(|e| e.to_string())?;
            worst = worst.max((got - want).abs());
        }
    }
    ensure(worst <= 1e-12, format!("worst error {worst:e}"))?;
    Ok(format!("worst error {worst:.1e}"))
}

fn c9_closed_forms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a: f64 = rng.gen_range(0.5..3.0);
        // |b| >= 0.05: the closed forms cancel catastrophically as b -> 0
        let b = if rng.gen_bool(0.5) { -rng.gen_range(0.05..3.0) } else { rng.gen_range(0.05..0.999 * a * a / 3.0) };
        let p = Params::new(a, b, 0.0).map_err(|e| e.to_string())?;
        let c = twistless_circles(&p).map_err(|e| e.to_string())?;
        let (f1, f2) = extremal_rotation_numbers(&p).map_err(|e| e.to_string())?;
        for (closed, direct) in [(f1, c.rho_c1), (f2, c.rho_c2)] {
            worst = worst.max((closed - direct).abs() / direct.abs());
        }
    }
    ensure(worst <= 1e-10, format!("worst relative error {worst:e}"))?;
    Ok(format!("worst relative error {worst:.1e}"))
}

fn c10_meanders() -> Check {
    let p = Params::figure(-4.0);
    let eq = equilibria(&p).map_err(|e| e.to_string())?;
    let h_of = |l: Label| energy(&p, eq.iter().find(|e| e.label == l).unwrap().position).0;
    let level = 0.5 * (h_of(Label::P1) + h_of(Label::P4));
    let w = Window::annulus(-1.2, 1.0, 400, 400).map_err(|e| e.to_string())?;
    let curves = level_curves(&p, level, &w).map_err(|e| e.to_string())?;
    let meanders = curves.iter().filter(|c| is_meander(c)).count();
    ensure(meanders > 0, format!("none of {} level curves folds", curves.len()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let q = Params::new(rng.gen_range(0.5..3.0), rng.gen_range(-3.0..3.0), 0.0).map_err(|e| e.to_string())?;
        let start = PhasePoint::new(rng.gen_range(0.0..2.0 * PI), rng.gen_range(-2.0..2.0));
        ensure(!is_meander(&orbit(&q, start, 500)), format!("k = 0 orbit from {start:?} flagged"))?;
    }
    Ok(format!("H = {level:.6}: {meanders} meander(s); 100 unperturbed circles are graphs"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("first reconnection threshold", c1_first_threshold),
        ("second reconnection threshold", c2_second_threshold),
        ("triple reconnection point", c3_triple_point),
        ("equilibrium census", c4_census),
        ("stability pattern", c5_stability),
        ("reconnection topology", c6_topology),
        ("energy conservation", c7_energy),
        ("rotation number oracle", c8_rotation_number),
        ("extremal rotation cross-check", c9_closed_forms),
        ("meander detection", c10_meanders),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
