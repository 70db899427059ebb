//! Riemannian geometry of the fiber `(F, g_F)`: metric, Christoffel
//! symbols, Riemann and Ricci tensors, and sectional-curvature sampling.
//!
//! Built-in constant-curvature fibers use a single conformal chart
//! (stereographic plane for the sphere, Poincare ball for hyperbolic
//! space), so one box-shaped chart domain suffices; custom metrics are
//! symmetric matrices of expressions in `x1..xm`.

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::jet::Jet;
use crate::linalg::{self, JetMatrix, Matrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Margin (in chart coordinates) kept between sample points and the
/// declared chart-box boundary, so finite-difference stencils stay inside.
pub const CHART_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone)]
pub enum FiberKind {
    /// Flat `R^m`.
    Euclidean,
    /// Unit round sphere in its stereographic chart, curvature +1.
    SphereChart,
    /// Hyperbolic space in the Poincare ball chart, curvature -1.
    HyperbolicChart,
    /// User-declared symmetric matrix of expressions in `x1..xm`.
    Custom(Vec<Vec<Expr>>),
}

/// A fiber metric on an m-dimensional chart with box-shaped domain.
#[derive(Debug, Clone)]
pub struct FiberMetric {
    m: usize,
    kind: FiberKind,
    domain: Vec<(f64, f64)>,
    var_names: Vec<String>,
}

fn chart_vars(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

impl FiberMetric {
    pub fn euclidean(m: usize) -> Result<FiberMetric> {
        Self::builtin(m, FiberKind::Euclidean, vec![(-10.0, 10.0); m])
    }

    pub fn sphere_chart(m: usize) -> Result<FiberMetric> {
        Self::builtin(m, FiberKind::SphereChart, vec![(-1.0, 1.0); m])
    }

    pub fn hyperbolic_chart(m: usize) -> Result<FiberMetric> {
        // Box inscribed well inside the unit ball for any m <= 4.
        Self::builtin(m, FiberKind::HyperbolicChart, vec![(-0.4, 0.4); m])
    }

    fn builtin(m: usize, kind: FiberKind, domain: Vec<(f64, f64)>) -> Result<FiberMetric> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "fiber dimension must be at least 2, got {m}"
            )));
        }
        Ok(FiberMetric {
            var_names: chart_vars(m),
            m,
            kind,
            domain,
        })
    }

    /// Custom metric from an m x m matrix of expressions in `x1..xm`.
    pub fn custom(
        m: usize,
        components: Vec<Vec<Expr>>,
        domain: Vec<(f64, f64)>,
    ) -> Result<FiberMetric> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "fiber dimension must be at least 2, got {m}"
            )));
        }
        if components.len() != m || components.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidArgument(format!(
                "custom metric must be {m}x{m}"
            )));
        }
        if domain.len() != m {
            return Err(Error::InvalidArgument(format!(
                "chart domain must list {m} coordinate ranges"
            )));
        }
        if domain.iter().any(|&(lo, hi)| !(lo < hi)) {
            return Err(Error::InvalidArgument(
                "chart domain ranges must be nonempty".into(),
            ));
        }
        let vars = chart_vars(m);
        for row in &components {
            for entry in row {
                for v in entry.free_vars() {
                    if !vars.contains(&v) {
                        return Err(Error::InvalidArgument(format!(
                            "metric entry uses unknown variable `{v}`; allowed: x1..x{m}"
                        )));
                    }
                }
            }
        }
        Ok(FiberMetric {
            var_names: vars,
            m,
            kind: FiberKind::Custom(components),
            domain,
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &FiberKind {
        &self.kind
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn set_domain(&mut self, domain: Vec<(f64, f64)>) -> Result<()> {
        if domain.len() != self.m {
            return Err(Error::InvalidArgument(format!(
                "chart domain must list {} coordinate ranges",
                self.m
            )));
        }
        self.domain = domain;
        Ok(())
    }

    /// True when `x` lies inside the chart box with the sampling margin.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.m
            && x.iter()
                .zip(&self.domain)
                .all(|(&xi, &(lo, hi))| xi >= lo + CHART_MARGIN && xi <= hi - CHART_MARGIN)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if !self.contains(x) {
            return Err(Error::OutOfDomain(format!(
                "chart point {x:?} outside box {:?} (margin {CHART_MARGIN})",
                self.domain
            )));
        }
        Ok(())
    }

    /// Metric components evaluated over arbitrary jet coordinates. The
    /// jets may live in a larger space (e.g. ambient `t, x1..xm`); they
    /// are consumed positionally as `x1..xm`.
    pub fn metric_jets(&self, x: &[Jet]) -> Result<JetMatrix> {
        assert_eq!(x.len(), self.m, "fiber chart arity mismatch");
        let proto = &x[0];
        match &self.kind {
            FiberKind::Euclidean => Ok((0..self.m)
                .map(|i| {
                    (0..self.m)
                        .map(|j| proto.constant_like(if i == j { 1.0 } else { 0.0 }))
                        .collect()
                })
                .collect()),
            FiberKind::SphereChart | FiberKind::HyperbolicChart => {
                let sign = if matches!(self.kind, FiberKind::SphereChart) {
                    1.0
                } else {
                    -1.0
                };
                // Conformal factor 4 / (1 +- |x|^2)^2.
                let mut r2 = proto.constant_like(0.0);
                for xi in x {
                    r2 = r2.add_jet(&xi.mul_jet(xi));
                }
                let base = r2.scale(sign).plus(1.0);
                if matches!(self.kind, FiberKind::HyperbolicChart) && base.value() <= 0.0 {
                    return Err(Error::OutOfDomain(
                        "point outside the Poincare ball".into(),
                    ));
                }
                let lambda = base.mul_jet(&base).recip()?.scale(4.0);
                Ok((0..self.m)
                    .map(|i| {
                        (0..self.m)
                            .map(|j| {
                                if i == j {
                                    lambda.clone()
                                } else {
                                    proto.constant_like(0.0)
                                }
                            })
                            .collect()
                    })
                    .collect())
            }
            FiberKind::Custom(components) => {
                let env: Vec<(&str, Jet)> = self
                    .var_names
                    .iter()
                    .zip(x)
                    .map(|(n, j)| (n.as_str(), j.clone()))
                    .collect();
                let shape = crate::carrier::JetShape {
                    nvars: proto.nvars(),
                    order: proto.order(),
                };
                let mut g = Vec::with_capacity(self.m);
                for row in components {
                    let mut out = Vec::with_capacity(self.m);
                    for entry in row {
                        out.push(expr::eval(entry, &env, &shape)?);
                    }
                    g.push(out);
                }
                // Declared symmetric: verify at this point rather than
                // silently symmetrizing.
                for i in 0..self.m {
                    for j in i + 1..self.m {
                        let a = g[i][j].value();
                        let b = g[j][i].value();
                        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                            return Err(Error::MetricDegenerate {
                                point: vec![],
                                detail: format!(
                                    "custom metric asymmetric: g[{i}][{j}] = {a}, g[{j}][{i}] = {b}"
                                ),
                            });
                        }
                    }
                }
                Ok(g)
            }
        }
    }

    /// Metric matrix at a chart point, with the positive-definiteness
    /// admission test.
    pub fn metric_at(&self, x: &[f64]) -> Result<Matrix> {
        self.check_point(x)?;
        let jets = Jet::coordinates(x, 0);
        let g = self.metric_jets(&jets)?;
        let values: Matrix = g
            .iter()
            .map(|row| row.iter().map(|e| e.value()).collect())
            .collect();
        if let Err(k) = linalg::positive_definite(&values) {
            return Err(Error::MetricDegenerate {
                point: x.to_vec(),
                detail: format!("pivot {k} non-positive"),
            });
        }
        Ok(values)
    }

    /// Christoffel symbols as jets, `Gamma[k][i][j]`, one order below the
    /// input jets.
    pub fn christoffel_jets(&self, x: &[Jet]) -> Result<Vec<JetMatrix>> {
        let g = self.metric_jets(x)?;
        let g_inv = linalg::invert_jets(&g)?;
        christoffel_from_metric(&g, &g_inv, |mat, var| mat.derivative(var))
    }

    /// Christoffel symbol values at a chart point.
    pub fn christoffel_at(&self, x: &[f64]) -> Result<Vec<Matrix>> {
        self.check_point(x)?;
        let jets = Jet::coordinates(x, 1);
        let gamma = self.christoffel_jets(&jets)?;
        Ok(gamma
            .iter()
            .map(|mat| {
                mat.iter()
                    .map(|row| row.iter().map(|e| e.value()).collect())
                    .collect()
            })
            .collect())
    }

    /// Riemann tensor values `R[l][k][i][j]` for `R(d_i, d_j) d_k = R^l_{kij} d_l`.
    pub fn riemann_at(&self, x: &[f64]) -> Result<Vec<Vec<Matrix>>> {
        self.check_point(x)?;
        let jets = Jet::coordinates(x, 2);
        let gamma = self.christoffel_jets(&jets)?;
        Ok(riemann_from_christoffel(&gamma, self.m))
    }

    /// Coordinate Ricci tensor at a chart point, assembled directly from
    /// Christoffel jets (the Riemann-trace route is kept as an
    /// independent test).
    pub fn ricci_at(&self, x: &[f64]) -> Result<Matrix> {
        self.check_point(x)?;
        let jets = Jet::coordinates(x, 2);
        let gamma = self.christoffel_jets(&jets)?;
        Ok(ricci_from_christoffel(&gamma, self.m))
    }

    /// `Ric^F(v, v)` at a chart point.
    pub fn ricci_contract(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        let ric = self.ricci_at(x)?;
        Ok(linalg::quad(&ric, v, v))
    }

    /// Minimum sectional curvature over seeded random 2-planes at `x`.
    pub fn sectional_min_sample(&self, x: &[f64], n_planes: usize, seed: u64) -> Result<f64> {
        let g = self.metric_at(x)?;
        let riemann = self.riemann_at(x)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut min = f64::INFINITY;
        let mut found = 0usize;
        while found < n_planes {
            let v: Vec<f64> = (0..self.m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let w: Vec<f64> = (0..self.m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let vv = linalg::quad(&g, &v, &v);
            let ww = linalg::quad(&g, &w, &w);
            let vw = linalg::quad(&g, &v, &w);
            let area2 = vv * ww - vw * vw;
            if area2 < 1e-9 * vv * ww {
                continue; // nearly collinear draw
            }
            let k = sectional_from_riemann(&g, &riemann, &v, &w) / area2;
            min = min.min(k);
            found += 1;
        }
        Ok(min)
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }
}

/// `g(R(v, w) w, v)` from a coordinate Riemann tensor.
pub fn sectional_from_riemann(
    g: &Matrix,
    riemann: &[Vec<Matrix>],
    v: &[f64],
    w: &[f64],
) -> f64 {
    let m = g.len();
    // R(v, w) w = v^i w^j w^k R^l_{kij} d_l
    let mut rvww = vec![0.0; m];
    for l in 0..m {
        let mut s = 0.0;
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    s += riemann[l][k][i][j] * v[i] * w[j] * w[k];
                }
            }
        }
        rvww[l] = s;
    }
    linalg::quad(g, &rvww, v)
}

/// Levi-Civita connection coefficients from metric jets:
/// `Gamma^k_{ij} = (1/2) g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})`.
///
/// The derivative closure lets the warped-product code reuse this for the
/// ambient metric, where coordinate 0 is time.
pub fn christoffel_from_metric(
    g: &JetMatrix,
    g_inv: &JetMatrix,
    derive: impl Fn(&Jet, usize) -> Jet,
) -> Result<Vec<JetMatrix>> {
    let n = g.len();
    // dg[l][i][j] = d_l g_{ij}
    let dg: Vec<JetMatrix> = (0..n)
        .map(|l| {
            g.iter()
                .map(|row| row.iter().map(|e| derive(e, l)).collect())
                .collect()
        })
        .collect();
    let mut gamma: Vec<JetMatrix> = Vec::with_capacity(n);
    for k in 0..n {
        let mut mat = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut s = dg[0][0][0].constant_like(0.0);
                for l in 0..n {
                    let sum = dg[i][j][l]
                        .add_jet(&dg[j][i][l])
                        .sub_jet(&dg[l][i][j]);
                    s = s.add_jet(&g_inv[k][l].mul_jet(&sum));
                }
                row.push(s.scale(0.5));
            }
            mat.push(row);
        }
        gamma.push(mat);
    }
    Ok(gamma)
}

/// Riemann tensor values from Christoffel jets (order >= 1):
/// `R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
///            + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}`.
pub fn riemann_from_christoffel(gamma: &[JetMatrix], n: usize) -> Vec<Vec<Matrix>> {
    let val = |k: usize, i: usize, j: usize| gamma[k][i][j].value();
    let d = |v: usize, k: usize, i: usize, j: usize| gamma[k][i][j].d1(v);
    let mut r = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = d(i, l, j, k) - d(j, l, i, k);
                    for mm in 0..n {
                        s += val(l, i, mm) * val(mm, j, k) - val(l, j, mm) * val(mm, i, k);
                    }
                    r[l][k][i][j] = s;
                }
            }
        }
    }
    r
}

/// Ricci tensor values by direct contraction of the Christoffel jets:
/// `Ric_{kj} = sum_i R^i_{kij}`.
pub fn ricci_from_christoffel(gamma: &[JetMatrix], n: usize) -> Matrix {
    let val = |k: usize, i: usize, j: usize| gamma[k][i][j].value();
    let d = |v: usize, k: usize, i: usize, j: usize| gamma[k][i][j].d1(v);
    let mut ric = vec![vec![0.0; n]; n];
    for k in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for i in 0..n {
                s += d(i, i, j, k) - d(j, i, i, k);
                for mm in 0..n {
                    s += val(i, i, mm) * val(mm, j, k) - val(i, j, mm) * val(mm, i, k);
                }
            }
            ric[k][j] = s;
        }
    }
    ric
}
