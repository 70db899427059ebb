//! Named model spacetimes and the fixture hypersurfaces used everywhere
//! as test fleets: slices at interior times, the Lorentz-Minkowski
//! hyperplane and unit hyperboloid, and seeded random cubic graphs scaled
//! into the spacelike margin.

use crate::error::{Error, Result};
use crate::expr::{parse, BinOp, Expr};
use crate::fiber::FiberMetric;
use crate::hypersurface::GraphHypersurface;
use crate::jet::multi_indices;
use crate::spacetime::{Spacetime, WarpFunction};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Catalog names accepted by [`make_named`].
pub const SPACETIME_NAMES: &[&str] = &[
    "minkowski",
    "steady_state",
    "einstein_de_sitter",
    "radiation",
];

/// A fully-built model spacetime with its default sampling geometry.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub citation: String,
    pub spacetime: Arc<Spacetime>,
    /// Interior times for slice fixtures.
    pub slice_times: Vec<f64>,
    /// Default chart sampling box.
    pub chart_box: Vec<(f64, f64)>,
    /// Default interval sampling range for ambient checks.
    pub t_range: (f64, f64),
    /// Center height for random graph fixtures.
    pub graph_center: f64,
}

/// Build a named model spacetime with an m-dimensional flat fiber.
/// `radiation` requires its expansion constant `a > 0`.
pub fn make_named(name: &str, m: usize, param: Option<f64>) -> Result<CatalogEntry> {
    let fiber = FiberMetric::euclidean(m)?;
    let chart_box = vec![(-1.0, 1.0); m];
    match name {
        "minkowski" => Ok(CatalogEntry {
            name: name.into(),
            citation: "Lorentz-Minkowski spacetime".into(),
            spacetime: Arc::new(Spacetime::new(
                WarpFunction::new(parse("1").expect("static"), f64::NEG_INFINITY, f64::INFINITY)?,
                fiber,
            )),
            slice_times: vec![-0.5, 0.0, 0.5],
            chart_box,
            t_range: (-1.0, 1.0),
            graph_center: 0.0,
        }),
        "steady_state" => Ok(CatalogEntry {
            name: name.into(),
            citation: "steady state spacetime".into(),
            spacetime: Arc::new(Spacetime::new(
                WarpFunction::new(
                    parse("exp(t)").expect("static"),
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                )?,
                fiber,
            )),
            slice_times: vec![-0.5, 0.0, 0.5],
            chart_box,
            t_range: (-1.0, 1.0),
            graph_center: 0.0,
        }),
        "einstein_de_sitter" => Ok(CatalogEntry {
            name: name.into(),
            citation: "Einstein-de Sitter spacetime".into(),
            spacetime: Arc::new(Spacetime::new(
                WarpFunction::new(parse("t^(2/3)").expect("static"), 0.0, f64::INFINITY)?,
                fiber,
            )),
            slice_times: vec![0.5, 1.0, 2.0],
            chart_box,
            t_range: (0.5, 4.0),
            graph_center: 1.5,
        }),
        "radiation" => {
            let a = param.unwrap_or(1.0);
            if a <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "radiation model needs a > 0, got {a}"
                )));
            }
            let rho = parse(&format!("sqrt({} * t)", 2.0 * a)).expect("well-formed");
            Ok(CatalogEntry {
                name: name.into(),
                citation: "Robertson-Walker radiation model".into(),
                spacetime: Arc::new(Spacetime::new(
                    WarpFunction::new(rho, 0.0, f64::INFINITY)?,
                    fiber,
                )),
                slice_times: vec![0.5, 1.0, 2.0],
                chart_box,
                t_range: (0.5, 4.0),
                graph_center: 1.5,
            })
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown spacetime `{other}`; known: {}",
            SPACETIME_NAMES.join(", ")
        ))),
    }
}

/// Iterate the whole catalog (radiation with `a = 1`).
pub fn all_entries(m: usize) -> Result<Vec<CatalogEntry>> {
    SPACETIME_NAMES
        .iter()
        .map(|name| make_named(name, m, None))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixtureKind {
    Slice { t0: f64 },
    Hyperplane,
    Hyperboloid,
    RandomGraph { coeffs: Vec<f64> },
}

/// One hypersurface of the test fleet.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub kind: FixtureKind,
    pub hypersurface: GraphHypersurface,
}

impl Fixture {
    /// Exactly constant mean curvature by construction (slices and the
    /// Minkowski hyperboloid; the hyperplane is the maximal case).
    pub fn exact_cmc(&self) -> bool {
        !matches!(self.kind, FixtureKind::RandomGraph { .. })
    }
}

/// Build the fixture fleet for a catalog entry: slices at the entry's
/// interior times, for Minkowski additionally the hyperplane `u = 0` and
/// the unit hyperboloid, and five seeded random cubic graphs.
pub fn fixture_hypersurfaces(entry: &CatalogEntry, seed: u64) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    let host = &entry.spacetime;
    for &t0 in &entry.slice_times {
        out.push(Fixture {
            name: format!("slice@{t0}"),
            kind: FixtureKind::Slice { t0 },
            hypersurface: GraphHypersurface::new(host.clone(), Expr::literal(t0))?,
        });
    }
    if entry.name == "minkowski" {
        out.push(Fixture {
            name: "hyperplane".into(),
            kind: FixtureKind::Hyperplane,
            hypersurface: GraphHypersurface::new(host.clone(), Expr::literal(0.0))?,
        });
        out.push(Fixture {
            name: "hyperboloid".into(),
            kind: FixtureKind::Hyperboloid,
            hypersurface: GraphHypersurface::new(host.clone(), hyperboloid_expr(host.m()))?,
        });
    }
    for k in 0..5 {
        let fixture = random_graph_fixture(entry, seed, k)?;
        out.push(fixture);
    }
    Ok(out)
}

/// `u = sqrt(1 + |x|^2)`, the upper unit hyperboloid.
pub fn hyperboloid_expr(m: usize) -> Expr {
    let mut radicand = Expr::literal(1.0);
    for i in 1..=m {
        let xi = Expr::var(&format!("x{i}"));
        radicand = Expr::binary(
            BinOp::Add,
            radicand,
            Expr::binary(BinOp::Pow, xi, Expr::literal(2.0)),
        );
    }
    Expr::call(crate::carrier::Func::Sqrt, radicand)
}

/// Deterministic random cubic polynomial graph, rescaled so the sampled
/// spacelike ratio `|grad u|/rho(u)` stays at or below 0.9 over the box
/// and the height keeps clear of the interval ends.
fn random_graph_fixture(entry: &CatalogEntry, seed: u64, index: usize) -> Result<Fixture> {
    let m = entry.spacetime.m();
    let host = &entry.spacetime;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9e3779b97f4a7c15u64.wrapping_mul(index as u64 + 1)));
    let monomials: Vec<Vec<u8>> = multi_indices(m, 3)[1..].to_vec(); // degree >= 1
    let raw: Vec<f64> = monomials
        .iter()
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();

    // Sample the polynomial and its gradient over the box to normalize.
    let probe_points: Vec<Vec<f64>> = (0..200)
        .map(|_| {
            entry
                .chart_box
                .iter()
                .map(|&(lo, hi)| rng.random_range(lo + 0.01..hi - 0.01))
                .collect()
        })
        .collect();
    let eval_poly = |coeffs: &[f64], x: &[f64]| -> f64 {
        monomials
            .iter()
            .zip(coeffs)
            .map(|(alpha, c)| {
                c * alpha
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| x[i].powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    };
    let sup_p = probe_points
        .iter()
        .map(|x| eval_poly(&raw, x).abs())
        .fold(1e-9, f64::max);
    let normalized: Vec<f64> = raw.iter().map(|c| c / sup_p).collect();

    // Height amplitude: keep u inside the interval with room to spare.
    let (t_min, t_max) = host.warp().interval();
    let center = entry.graph_center;
    let room = (center - t_min).min(t_max - center);
    let mut amplitude = if room.is_finite() { 0.45 * room } else { 0.5 };

    // Shrink until the sampled spacelike ratio clears the 0.9 threshold.
    let gf_inv_at = |x: &[f64]| -> Result<Vec<Vec<f64>>> {
        crate::linalg::invert(&host.fiber().metric_at(x)?)
    };
    for _ in 0..24 {
        let coeffs: Vec<f64> = normalized.iter().map(|c| c * amplitude).collect();
        let mut ok = true;
        for x in &probe_points {
            let u = center + eval_poly(&coeffs, x);
            if !host.warp().contains(u) {
                ok = false;
                break;
            }
            let rho = host.warp().derivs(u)?[0];
            let grad: Vec<f64> = (0..m)
                .map(|i| {
                    monomials
                        .iter()
                        .zip(&coeffs)
                        .map(|(alpha, c)| {
                            if alpha[i] == 0 {
                                return 0.0;
                            }
                            let mut d = c * alpha[i] as f64;
                            for (k, &e) in alpha.iter().enumerate() {
                                let e = if k == i { e - 1 } else { e };
                                d *= x[k].powi(e as i32);
                            }
                            d
                        })
                        .sum()
                })
                .collect();
            let grad2 = crate::linalg::quad(&gf_inv_at(x)?, &grad, &grad);
            if grad2 > 0.81 * rho * rho {
                ok = false;
                break;
            }
        }
        if ok {
            break;
        }
        amplitude *= 0.75;
    }

    let coeffs: Vec<f64> = normalized.iter().map(|c| c * amplitude).collect();
    let expr = poly_expr(center, &monomials, &coeffs);
    Ok(Fixture {
        name: format!("random3@{index}"),
        kind: FixtureKind::RandomGraph {
            coeffs: coeffs.clone(),
        },
        hypersurface: GraphHypersurface::new(host.clone(), expr)?,
    })
}

/// Build the expression tree `center + sum c_alpha x^alpha`.
fn poly_expr(center: f64, monomials: &[Vec<u8>], coeffs: &[f64]) -> Expr {
    let mut acc = Expr::literal(center);
    for (alpha, &c) in monomials.iter().zip(coeffs) {
        if c == 0.0 {
            continue;
        }
        let mut term = Expr::literal(c.abs());
        for (i, &e) in alpha.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let xi = Expr::var(&format!("x{}", i + 1));
            let factor = if e == 1 {
                xi
            } else {
                Expr::binary(BinOp::Pow, xi, Expr::literal(e as f64))
            };
            term = Expr::binary(BinOp::Mul, term, factor);
        }
        acc = if c < 0.0 {
            Expr::binary(BinOp::Sub, acc, term)
        } else {
            Expr::binary(BinOp::Add, acc, term)
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_entries_build() {
        for name in SPACETIME_NAMES {
            let e = make_named(name, 2, None).unwrap();
            assert_eq!(&e.name, name);
        }
        assert!(make_named("de_sitter_global", 2, None).is_err());
        assert!(make_named("radiation", 2, Some(-1.0)).is_err());
    }

    #[test]
    fn radiation_slice_values() {
        let e = make_named("radiation", 2, Some(2.0)).unwrap();
        let [r, r1, _, _] = e.spacetime.warp().derivs(1.0).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        assert!((r1 / r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn eds_warp_value() {
        let e = make_named("einstein_de_sitter", 3, None).unwrap();
        let [r, ..] = e.spacetime.warp().derivs(8.0).unwrap();
        assert!((r - 4.0).abs() < 1e-12);
    }

    #[test]
    fn minkowski_fleet_counts() {
        let e = make_named("minkowski", 2, None).unwrap();
        let fleet = fixture_hypersurfaces(&e, 42).unwrap();
        assert_eq!(fleet.len(), 10); // 3 slices + hyperplane + hyperboloid + 5 graphs
        let e = make_named("steady_state", 2, None).unwrap();
        assert_eq!(fixture_hypersurfaces(&e, 42).unwrap().len(), 8);
    }

    #[test]
    fn random_graphs_are_deterministic_and_admissible() {
        let e = make_named("einstein_de_sitter", 2, None).unwrap();
        let a = fixture_hypersurfaces(&e, 7).unwrap();
        let b = fixture_hypersurfaces(&e, 7).unwrap();
        for (fa, fb) in a.iter().zip(&b) {
            if let (FixtureKind::RandomGraph { coeffs: ca }, FixtureKind::RandomGraph { coeffs: cb }) =
                (&fa.kind, &fb.kind)
            {
                assert_eq!(ca, cb, "coefficient lists must be bytewise identical");
            }
        }
        // Every fixture admits the grid over the default box.
        for f in &a {
            for &x1 in &[-0.8, 0.0, 0.8] {
                for &x2 in &[-0.8, 0.0, 0.8] {
                    assert!(
                        f.hypersurface.admissible(&[x1, x2]),
                        "{} rejected ({x1}, {x2})",
                        f.name
                    );
                }
            }
        }
    }

    #[test]
    fn different_seed_changes_coefficients() {
        let e = make_named("minkowski", 2, None).unwrap();
        let a = fixture_hypersurfaces(&e, 1).unwrap();
        let b = fixture_hypersurfaces(&e, 2).unwrap();
        let ca = a.iter().find_map(|f| match &f.kind {
            FixtureKind::RandomGraph { coeffs } => Some(coeffs.clone()),
            _ => None,
        });
        let cb = b.iter().find_map(|f| match &f.kind {
            FixtureKind::RandomGraph { coeffs } => Some(coeffs.clone()),
            _ => None,
        });
        assert_ne!(ca, cb);
    }
}
