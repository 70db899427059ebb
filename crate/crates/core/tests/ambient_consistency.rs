//! Ambient consistency: connection routes agree on seeded samples,
//! Lorentzian signature, Ricci symmetry and the first Bianchi identity
//! for the ambient curvature, the conformal-field law, and the
//! equivalence of the null-convergence margin with log-convexity of the
//! warping function on flat fibers.
#![allow(clippy::needless_range_loop)]

mod common;

use common::{random_sample, random_times};
use grwlab_core::catalog::all_entries;
use grwlab_core::expr::parse;
use grwlab_core::fiber::FiberMetric;
use grwlab_core::spacetime::{AmbientPoint, Spacetime, WarpFunction};
use grwlab_core::Error;

#[test]
fn connection_routes_agree_on_100_points_each() {
    for entry in all_entries(2).unwrap() {
        let times = random_times(&entry, 100, 901);
        let points = random_sample(&entry, 100, 902);
        for (t, x) in times.iter().zip(&points) {
            let p = AmbientPoint::new(*t, x.clone());
            entry
                .spacetime
                .christoffel_both(&p, 1e-9)
                .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        }
    }
}

#[test]
fn metric_has_lorentzian_signature() {
    for entry in all_entries(3).unwrap() {
        for (t, x) in random_times(&entry, 20, 903)
            .iter()
            .zip(random_sample(&entry, 20, 904))
        {
            let p = AmbientPoint::new(*t, x.clone());
            let g = entry.spacetime.metric_at(&p).unwrap();
            // Block metric: one negative entry, fiber block positive
            // definite.
            assert!(g[0][0] < 0.0);
            let fiber_block: Vec<Vec<f64>> = (1..4)
                .map(|i| (1..4).map(|j| g[i][j]).collect())
                .collect();
            assert!(grwlab_core::linalg::positive_definite(&fiber_block).is_ok());
        }
    }
}

#[test]
fn ambient_ricci_is_symmetric_and_bianchi_holds() {
    for entry in all_entries(2).unwrap() {
        for (t, x) in random_times(&entry, 10, 905)
            .iter()
            .zip(random_sample(&entry, 10, 906))
        {
            let p = AmbientPoint::new(*t, x.clone());
            let ric = entry.spacetime.ricci_at(&p).unwrap();
            let n = 3;
            for i in 0..n {
                for j in 0..n {
                    let scale = ric[i][j].abs().max(ric[j][i].abs()).max(1.0);
                    assert!(
                        (ric[i][j] - ric[j][i]).abs() / scale < 1e-9,
                        "{}: Ricci asymmetric",
                        entry.name
                    );
                }
            }
            let r = entry.spacetime.riemann_at(&p).unwrap();
            let mut scale = 1.0f64;
            for l in 0..n {
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            scale = scale.max(r[l][k][i][j].abs());
                        }
                    }
                }
            }
            for l in 0..n {
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let s = r[l][k][i][j] + r[l][i][j][k] + r[l][j][k][i];
                            assert!(
                                s.abs() < 1e-9 * scale,
                                "{}: Bianchi residual {s:e}",
                                entry.name
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn conformal_law_on_100_points_each() {
    for entry in all_entries(2).unwrap() {
        for (t, x) in random_times(&entry, 100, 907)
            .iter()
            .zip(random_sample(&entry, 100, 908))
        {
            let p = AmbientPoint::new(*t, x.clone());
            for dir in 0..3 {
                let r = entry.spacetime.conformal_residual(&p, dir).unwrap();
                assert!(r < 1e-9, "{}: residual {r:e} dir {dir} at t={t}", entry.name);
            }
        }
    }
}

#[test]
fn ncc_sign_matches_log_convexity_on_flat_fibers() {
    // On a flat fiber the margin reduces to -m (rho rho'' - rho'^2) |v|^2,
    // so its sign must equal the sign of -(log rho)''.
    let warps = [
        ("exp(t)", f64::NEG_INFINITY, f64::INFINITY),
        ("t^(2/3)", 0.0, f64::INFINITY),
        ("sqrt(2*t)", 0.0, f64::INFINITY),
        ("cosh(t)", f64::NEG_INFINITY, f64::INFINITY),
        ("1 + t^2/10", f64::NEG_INFINITY, f64::INFINITY),
    ];
    for (src, lo, hi) in warps {
        let s = Spacetime::new(
            WarpFunction::new(parse(src).unwrap(), lo, hi).unwrap(),
            FiberMetric::euclidean(2).unwrap(),
        );
        for k in 0..40 {
            let t = if lo.is_finite() {
                0.2 + 0.1 * k as f64
            } else {
                -2.0 + 0.1 * k as f64
            };
            let p = AmbientPoint::new(t, vec![0.0, 0.0]);
            let margin = s.ncc_margin(&p, &[1.0, 0.0]).unwrap();
            let log2 = s.warp().log_second(t).unwrap();
            let rho = s.warp().derivs(t).unwrap()[0];
            // margin = -m rho^2 (log rho)'' on flat fibers.
            let expect = -2.0 * rho * rho * log2;
            assert!(
                (margin - expect).abs() <= 1e-8 * expect.abs().max(1.0),
                "{src} at t={t}: margin {margin} vs {expect}"
            );
            assert!(
                (margin >= -1e-12) == (log2 <= 1e-12),
                "{src} at t={t}: margin {margin}, (log rho)'' {log2}"
            );
        }
    }
}

#[test]
fn ncc_margin_rejects_zero_vectors() {
    let entry = all_entries(2).unwrap().remove(1);
    let p = AmbientPoint::new(0.0, vec![0.1, 0.1]);
    assert!(matches!(
        entry.spacetime.ncc_margin(&p, &[0.0, 0.0]),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn curved_fiber_warped_product_consistency() {
    // A sphere fiber with a nontrivial warp exercises every term of the
    // closed forms at once.
    let s = Spacetime::new(
        WarpFunction::new(parse("1 + t^2/4").unwrap(), f64::NEG_INFINITY, f64::INFINITY).unwrap(),
        FiberMetric::sphere_chart(2).unwrap(),
    );
    for k in 0..20 {
        let t = -1.0 + 0.1 * k as f64;
        let x = vec![0.2 - 0.01 * k as f64, -0.1 + 0.02 * k as f64];
        let p = AmbientPoint::new(t, x);
        s.christoffel_both(&p, 1e-9).unwrap();
        let v = [0.7, 0.3];
        let (a, b) = s.oneill_residuals(&p, &v).unwrap();
        assert!(a.abs() < 1e-8 && b.abs() < 1e-8, "residuals {a:e}, {b:e}");
    }
}
