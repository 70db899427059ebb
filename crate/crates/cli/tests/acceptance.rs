//! Acceptance suite: the exit criteria of the verification lab, one test
//! per criterion, each printing a pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned in code. Sampling is seeded; two runs see
//! identical points.

use grwlab_core::catalog::{all_entries, fixture_hypersurfaces, make_named, FixtureKind};
use grwlab_core::corpus::build_corpus;
use grwlab_core::expr::{eval, eval_f64, parse};
use grwlab_core::fd::fd_derivative;
use grwlab_core::identities::{cmc_ncc_lower_bound, inequality_chain, master_identity};
use grwlab_core::jet::{multi_indices, Jet};
use grwlab_core::spacetime::{AmbientPoint, Spacetime, WarpFunction};
use grwlab_core::theorems::{angle_bound_check, support_conclusion, thm2_bound, ConditionStatus};
use grwlab_core::{FiberMetric, GraphHypersurface};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const FLEET_SEED: u64 = 42;

fn verdict(criterion: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {criterion}: {status} ({detail})");
    assert!(pass, "{criterion}: {detail}");
}

fn chart_points(m: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..m).map(|_| rng.random_range(-0.9..0.9)).collect())
        .collect()
}

#[test]
fn criterion_01_slice_exactness() {
    let start = Instant::now();
    let mut worst_h = 0.0f64;
    let mut worst_a = 0.0f64;
    let mut worst_angle = 0.0f64;
    for entry in all_entries(2).unwrap() {
        for &t0 in &entry.slice_times {
            let slice = GraphHypersurface::new(
                entry.spacetime.clone(),
                grwlab_core::Expr::literal(t0),
            )
            .unwrap();
            let [r, r1, _, _] = entry.spacetime.warp().derivs(t0).unwrap();
            let expect = r1 / r;
            for x in chart_points(2, 9, 1) {
                let pg = slice.frame_at(&x).unwrap();
                worst_h = worst_h.max((pg.mean_curvature - expect).abs());
                for i in 0..2 {
                    for j in 0..2 {
                        let want = if i == j { -expect } else { 0.0 };
                        worst_a = worst_a.max((pg.shape[i][j] - want).abs());
                    }
                }
                worst_angle = worst_angle.max(pg.sinh2_phi.abs());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "01 slice-exactness",
        worst_h <= 1e-12 && worst_a <= 1e-12 && worst_angle == 0.0 && elapsed < 1.0,
        format!(
            "max |H - rho'/rho| = {worst_h:.2e}, max |A + (rho'/rho)I| = {worst_a:.2e}, max sinh^2 = {worst_angle:e}, {elapsed:.3}s"
        ),
    );
}

#[test]
fn criterion_02_slice_anchors() {
    let mut details = Vec::new();
    let mut pass = true;
    let steady = make_named("steady_state", 2, None).unwrap();
    for &t0 in &steady.slice_times {
        let slice = GraphHypersurface::new(
            steady.spacetime.clone(),
            grwlab_core::Expr::literal(t0),
        )
        .unwrap();
        let h = slice.frame_at(&[0.3, -0.2]).unwrap().mean_curvature;
        pass &= (h - 1.0).abs() <= 1e-12;
        details.push(format!("steady@{t0}: H = {h}"));
    }
    let eds = make_named("einstein_de_sitter", 2, None).unwrap();
    let slice =
        GraphHypersurface::new(eds.spacetime.clone(), grwlab_core::Expr::literal(1.0)).unwrap();
    let h = slice.frame_at(&[0.3, -0.2]).unwrap().mean_curvature;
    pass &= (h - 2.0 / 3.0).abs() <= 1e-12;
    details.push(format!("eds@1: H = {h}"));
    for a in [1.0, 2.0] {
        let rad = make_named("radiation", 2, Some(a)).unwrap();
        let slice =
            GraphHypersurface::new(rad.spacetime.clone(), grwlab_core::Expr::literal(1.0))
                .unwrap();
        let h = slice.frame_at(&[0.3, -0.2]).unwrap().mean_curvature;
        pass &= (h - 0.5).abs() <= 1e-12;
        details.push(format!("radiation(a={a})@1: H = {h}"));
    }
    verdict("02 slice-anchors", pass, details.join("; "));
}

#[test]
fn criterion_03_connection_and_ricci_consistency() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for entry in all_entries(2).unwrap() {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        let (lo, hi) = entry.t_range;
        for _ in 0..100 {
            let t = rng.random_range(lo..hi);
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-0.9..0.9)).collect();
            let p = AmbientPoint::new(t, x);
            // Route agreement at the stricter internal threshold. The
            // call is itself the check: disagreement is a fault.
            entry.spacetime.christoffel_both(&p, 1e-8).unwrap();
            for k in 0..2 {
                let mut v = vec![0.0; 2];
                v[k] = 1.0;
                let (a, b) = entry.spacetime.oneill_residuals(&p, &v).unwrap();
                worst = worst.max(a.abs()).max(b.abs());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "03 connection-ricci-consistency",
        worst <= 1e-8 && elapsed < 10.0,
        format!("max closed-form residual {worst:.2e} over 100 pts x 4 spacetimes, {elapsed:.2}s"),
    );
}

#[test]
fn criterion_04_conformal_field_law() {
    let mut worst = 0.0f64;
    for entry in all_entries(2).unwrap() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let (lo, hi) = entry.t_range;
        for _ in 0..100 {
            let t = rng.random_range(lo..hi);
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-0.9..0.9)).collect();
            let p = AmbientPoint::new(t, x);
            for dir in 0..3 {
                worst = worst.max(entry.spacetime.conformal_residual(&p, dir).unwrap());
            }
        }
    }
    verdict(
        "04 conformal-field",
        worst < 1e-9,
        format!("max residual {worst:.2e} over all coordinate directions"),
    );
}

#[test]
fn criterion_05_master_identity() {
    let start = Instant::now();
    let mut worst_rel = 0.0f64;
    let mut worst_fd = 0.0f64;
    let mut fixtures_run = 0usize;
    for entry in all_entries(2).unwrap() {
        for fixture in fixture_hypersurfaces(&entry, FLEET_SEED).unwrap() {
            fixtures_run += 1;
            let points = chart_points(2, 100, 500 + fixtures_run as u64);
            for x in &points {
                let frame = fixture.hypersurface.chart_frame(x).unwrap();
                let r = master_identity(&frame, 1e-6).unwrap();
                worst_rel = worst_rel.max(r.rel_residual);
            }
            // Finite-difference corroboration of the left-side Laplacian
            // on a 10-point spot check.
            for x in points.iter().take(10) {
                let frame = fixture.hypersurface.chart_frame(x).unwrap();
                let jet_lap = frame.laplace_beltrami(&frame.cosh).unwrap();
                let mh = fixture.hypersurface.clone();
                let field = move |y: &[f64]| mh.cosh_value(y);
                let fd_lap = fixture.hypersurface.fd_laplacian(x, &field, 1e-3).unwrap();
                worst_fd =
                    worst_fd.max((jet_lap - fd_lap).abs() / jet_lap.abs().max(1.0));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        "05 master-identity",
        worst_rel < 1e-6 && worst_fd < 1e-3 && elapsed < 60.0,
        format!(
            "max relative residual {worst_rel:.2e} on {fixtures_run} fixtures x 100 pts, max FD deviation {worst_fd:.2e}, {elapsed:.1}s"
        ),
    );
}

#[test]
fn criterion_06_inequality_decomposition() {
    let mut worst_decomp = 0.0f64;
    let mut min_margin = f64::INFINITY;
    for entry in all_entries(2).unwrap() {
        for fixture in fixture_hypersurfaces(&entry, FLEET_SEED).unwrap() {
            for x in chart_points(2, 100, 606) {
                let frame = fixture.hypersurface.chart_frame(&x).unwrap();
                let r = inequality_chain(&frame, 1e-6, 1e-8).unwrap();
                let decomp = r
                    .terms
                    .iter()
                    .find(|(n, _)| n == "decomposition_residual")
                    .unwrap()
                    .1;
                let scale = r
                    .terms
                    .iter()
                    .map(|(_, v)| v.abs())
                    .fold(1.0f64, f64::max);
                worst_decomp = worst_decomp.max(decomp.abs() / scale);
                min_margin = min_margin.min(r.margin.unwrap());
            }
        }
    }
    verdict(
        "06 inequality-decomposition",
        worst_decomp <= 1e-8 && min_margin >= -1e-6,
        format!("max decomposition residual {worst_decomp:.2e}, min margin {min_margin:.2e}"),
    );
}

#[test]
fn criterion_07_lower_bound_on_cmc_fixtures() {
    let mut min_margin = f64::INFINITY;
    let mut hyper_h_spread = 0.0f64;
    for entry in all_entries(2).unwrap() {
        for fixture in fixture_hypersurfaces(&entry, FLEET_SEED).unwrap() {
            if !fixture.exact_cmc() {
                continue;
            }
            let mut h_min = f64::INFINITY;
            let mut h_max = f64::NEG_INFINITY;
            for x in chart_points(2, 100, 707) {
                let frame = fixture.hypersurface.chart_frame(&x).unwrap();
                let r = cmc_ncc_lower_bound(&fixture.hypersurface, &frame, 1e-6, 1e-6).unwrap();
                assert!(r.asserted, "{} must pass its gates", fixture.name);
                min_margin = min_margin.min(r.margin.unwrap());
                h_min = h_min.min(frame.h_v);
                h_max = h_max.max(frame.h_v);
            }
            if fixture.kind == FixtureKind::Hyperboloid {
                hyper_h_spread = (h_max - h_min).abs().max((h_max - 1.0).abs());
            }
        }
    }
    verdict(
        "07 cmc-lower-bound",
        min_margin >= -1e-6 && hyper_h_spread <= 1e-8,
        format!("min margin {min_margin:.2e}, hyperboloid H spread {hyper_h_spread:.2e}"),
    );
}

#[test]
fn criterion_08_convergence_condition_ledger() {
    let mut details = Vec::new();
    let mut pass = true;

    let steady = make_named("steady_state", 2, None).unwrap();
    let mut worst_steady = 0.0f64;
    for k in 0..=8 {
        let t = -1.0 + 0.25 * k as f64;
        let p = AmbientPoint::new(t, vec![0.1, 0.1]);
        worst_steady = worst_steady.max(
            steady
                .spacetime
                .ncc_margin(&p, &[1.0, 0.0])
                .unwrap()
                .abs(),
        );
    }
    pass &= worst_steady <= 1e-12;
    details.push(format!("steady |margin| <= {worst_steady:.1e}"));

    for name in ["einstein_de_sitter", "radiation"] {
        let entry = make_named(name, 2, None).unwrap();
        let mut min = f64::INFINITY;
        for k in 0..=14 {
            let t = 0.5 + 0.25 * k as f64;
            let p = AmbientPoint::new(t, vec![0.1, 0.1]);
            min = min.min(entry.spacetime.ncc_margin(&p, &[1.0, 0.0]).unwrap());
        }
        pass &= min > 0.0;
        details.push(format!("{name} min margin {min:.3} on t in [0.5, 4]"));
    }

    let cosh_warp = Spacetime::new(
        WarpFunction::new(parse("cosh(t)").unwrap(), f64::NEG_INFINITY, f64::INFINITY).unwrap(),
        FiberMetric::euclidean(2).unwrap(),
    );
    let p0 = AmbientPoint::new(0.0, vec![0.1, 0.1]);
    let violated = cosh_warp.ncc_margin(&p0, &[1.0, 0.0]).unwrap();
    pass &= (violated + 2.0).abs() <= 1e-9;
    details.push(format!("cosh warp margin at 0: {violated}"));

    // The timelike condition fails along d_t in the steady state while
    // the null condition holds: the conditions genuinely differ.
    let tcc = steady
        .spacetime
        .tcc_check(&p0, &[1.0, 0.0, 0.0])
        .unwrap();
    pass &= (tcc + 2.0).abs() <= 1e-8 && worst_steady <= 1e-12;
    details.push(format!("steady Ric(dt,dt) = {tcc} with null margin 0"));

    verdict("08 convergence-ledger", pass, details.join("; "));
}

#[test]
fn criterion_09_angle_bound_table() {
    let mut pass = thm2_bound(2) == 0.0 && thm2_bound(3) == 3.0 && thm2_bound(4) == 8.0;
    let mut flagged = Vec::new();
    for entry in all_entries(2).unwrap() {
        for fixture in fixture_hypersurfaces(&entry, FLEET_SEED).unwrap() {
            let sample = chart_points(2, 25, 909);
            let report = angle_bound_check(&fixture.hypersurface, &sample).unwrap();
            if matches!(report.conditions[0].status, ConditionStatus::FailsAt { .. }) {
                pass = false;
                flagged.push(format!("{}/{}", entry.name, fixture.name));
            }
        }
    }
    verdict(
        "09 angle-bound-table",
        pass,
        format!(
            "bounds (0, 3, 8) exact; false violations: {}",
            if flagged.is_empty() {
                "none".to_string()
            } else {
                flagged.join(", ")
            }
        ),
    );
}

#[test]
fn criterion_10_support_conclusion() {
    let mut worst_exact = 0.0f64;
    for entry in all_entries(2).unwrap() {
        for fixture in fixture_hypersurfaces(&entry, FLEET_SEED).unwrap() {
            if !fixture.exact_cmc() {
                continue;
            }
            for x in chart_points(2, 25, 1010) {
                let frame = fixture.hypersurface.chart_frame(&x).unwrap();
                worst_exact = worst_exact.max((frame.rho[1] * frame.sinh2_v).abs());
            }
        }
    }
    let steady = make_named("steady_state", 2, None).unwrap();
    let tilted =
        GraphHypersurface::new(steady.spacetime.clone(), parse("0.3 * x1").unwrap()).unwrap();
    let sample = chart_points(2, 49, 1011);
    let report = support_conclusion(&tilted, &sample).unwrap();
    let witness_value = match &report.conditions[0].status {
        ConditionStatus::FailsAt { value, .. } => *value,
        other => panic!("tilted graph must fail the support conclusion, got {other:?}"),
    };
    verdict(
        "10 support-conclusion",
        worst_exact <= 1e-12 && witness_value >= 0.09 - 1e-6,
        format!(
            "max |rho' sinh^2| on exact fixtures {worst_exact:.1e}; tilted witness value {witness_value:.4}"
        ),
    );
}

#[test]
fn criterion_11_jet_oracle_coherence() {
    let corpus = build_corpus(2024, 17);
    assert!(corpus.len() >= 200);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for entry in &corpus {
        let m = entry.vars.len();
        let jets = Jet::coordinates(&entry.point, 3);
        let env: Vec<(&str, Jet)> = entry
            .vars
            .iter()
            .zip(&jets)
            .map(|(n, j)| (n.as_str(), j.clone()))
            .collect();
        let shape = grwlab_core::JetShape { nvars: m, order: 3 };
        let jet = eval(&entry.expr, &env, &shape).unwrap();
        let expr = entry.expr.clone();
        let vars = entry.vars.clone();
        let field = move |x: &[f64]| {
            let env: Vec<(&str, f64)> =
                vars.iter().zip(x).map(|(n, &v)| (n.as_str(), v)).collect();
            eval_f64(&expr, &env)
        };
        for idx in multi_indices(m, 3) {
            let deg: usize = idx.iter().map(|&e| e as usize).sum();
            if deg == 0 {
                continue;
            }
            let h = if deg <= 2 { 1e-3 } else { 1e-2 };
            let fd = fd_derivative(&field, &entry.point, &idx, h).unwrap();
            let jv = jet.derivative_value(&idx);
            worst = worst.max((jv - fd).abs() / jv.abs().max(fd.abs()).max(1.0));
            checked += 1;
        }
    }
    verdict(
        "11 jet-oracle-coherence",
        worst < 1e-4,
        format!(
            "worst relative deviation {worst:.2e} over {checked} coefficients of {} expressions",
            corpus.len()
        ),
    );
}

#[test]
fn criterion_12_run_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.toml");
    std::fs::write(
        &config_path,
        r#"
[spacetime]
name = "steady_state"
dimension = 2

[[hypersurface]]
fixture = "random_graphs"

[sampling]
mode = "random"
counts = [60]
seed = 271828

[checks]
names = ["clap1", "clap2", "laps", "ncc", "he2"]
"#,
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_grwlab");
    let mut outputs = Vec::new();
    for (run, jobs) in [("a", "1"), ("b", "3")] {
        let out_dir = dir.path().join(run);
        let status = std::process::Command::new(bin)
            .arg("run")
            .arg(&config_path)
            .arg("--out")
            .arg(&out_dir)
            .arg("--jobs")
            .arg(jobs)
            .status()
            .unwrap();
        assert!(status.success(), "run {run} failed");
        outputs.push(std::fs::read(out_dir.join("points.csv")).unwrap());
    }
    let identical = outputs[0] == outputs[1];
    verdict(
        "12 run-determinism",
        identical && !outputs[0].is_empty(),
        format!(
            "two runs, different thread counts: {} bytes each, bytewise {}",
            outputs[0].len(),
            if identical { "identical" } else { "DIFFERENT" }
        ),
    );
}
