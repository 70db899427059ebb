//! Warped-product spacetime `I x_rho F` with metric
//! `-dt^2 + rho(t)^2 g_F`: ambient metric and connection (generic jet
//! route and warped-product closed form), curvature tensors, the closed
//! conformal field `K = rho d_t`, comoving divergence, and the null/
//! timelike convergence predicates.
//!
//! Curvature conventions: `R(X,Y)Z = \nabla_X \nabla_Y Z - \nabla_Y
//! \nabla_X Z - \nabla_{[X,Y]} Z` with `Ric(Y,Z) = trace(X -> R(X,Y)Z)`.
//! This is the convention under which `Ric(d_t, d_t) = -m rho''/rho` and
//! the Codazzi equation `g(R(X,Y)N, Z) = g((\nabla_Y A)X - (\nabla_X A)Y, Z)`
//! hold simultaneously; both are verified against the generic pipeline in
//! the test suites.

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::fiber::{self, FiberMetric};
use crate::jet::Jet;
use crate::linalg::{self, JetMatrix, Matrix};

/// Margin kept between sampled times and the interval endpoints: ten
/// finite-difference steps, so oracle stencils never leave the interval.
pub const TIME_MARGIN: f64 = 1e-2;

/// The warping function `rho` on an open interval, with derivatives up to
/// third order supplied by a univariate jet.
#[derive(Debug, Clone)]
pub struct WarpFunction {
    rho: Expr,
    t_min: f64,
    t_max: f64,
}

impl WarpFunction {
    /// `t_min`/`t_max` may be infinite for a half-line or the whole line.
    pub fn new(rho: Expr, t_min: f64, t_max: f64) -> Result<WarpFunction> {
        if !(t_min < t_max) {
            return Err(Error::InvalidArgument(format!(
                "empty warp interval ({t_min}, {t_max})"
            )));
        }
        for v in rho.free_vars() {
            if v != "t" {
                return Err(Error::InvalidArgument(format!(
                    "warping function may only use `t`, found `{v}`"
                )));
            }
        }
        Ok(WarpFunction { rho, t_min, t_max })
    }

    pub fn expr(&self) -> &Expr {
        &self.rho
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_min + TIME_MARGIN && t <= self.t_max - TIME_MARGIN
    }

    /// Evaluate `rho` over arbitrary jet input (used with ambient
    /// coordinates or with a graph function's jet alike).
    pub fn eval_jet(&self, t: &Jet) -> Result<Jet> {
        let shape = crate::carrier::JetShape {
            nvars: t.nvars(),
            order: t.order(),
        };
        let out = expr::eval(&self.rho, &[("t", t.clone())], &shape)?;
        if out.value() <= 0.0 {
            return Err(Error::OutOfDomain(format!(
                "warping function non-positive ({}) at t = {}",
                out.value(),
                t.value()
            )));
        }
        Ok(out)
    }

    /// Univariate jet of `rho` at `t`, to the requested order.
    pub fn jet_at(&self, t: f64, order: usize) -> Result<Jet> {
        if !self.contains(t) {
            return Err(Error::OutOfDomain(format!(
                "t = {t} outside warp interval ({}, {}) with margin {TIME_MARGIN}",
                self.t_min, self.t_max
            )));
        }
        let tj = Jet::variable(0, t, 1, order)?;
        self.eval_jet(&tj)
    }

    /// `(rho, rho', rho'', rho''')` at `t`.
    pub fn derivs(&self, t: f64) -> Result<[f64; 4]> {
        let j = self.jet_at(t, 3)?;
        Ok([
            j.value(),
            j.derivative_value(&[1]),
            j.derivative_value(&[2]),
            j.derivative_value(&[3]),
        ])
    }

    /// `(log rho)'' = rho''/rho - (rho'/rho)^2`.
    pub fn log_second(&self, t: f64) -> Result<f64> {
        let [r, r1, r2, _] = self.derivs(t)?;
        Ok(r2 / r - (r1 / r) * (r1 / r))
    }
}

/// A point of the ambient spacetime in coordinates `(t, x^1..x^m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientPoint {
    pub t: f64,
    pub x: Vec<f64>,
}

impl AmbientPoint {
    pub fn new(t: f64, x: Vec<f64>) -> AmbientPoint {
        AmbientPoint { t, x }
    }

    pub fn coords(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(1 + self.x.len());
        c.push(self.t);
        c.extend_from_slice(&self.x);
        c
    }
}

/// The warped product `I x_rho F` of dimension `m + 1`.
#[derive(Debug, Clone)]
pub struct Spacetime {
    warp: WarpFunction,
    fiber: FiberMetric,
}

impl Spacetime {
    pub fn new(warp: WarpFunction, fiber: FiberMetric) -> Spacetime {
        Spacetime { warp, fiber }
    }

    pub fn warp(&self) -> &WarpFunction {
        &self.warp
    }

    pub fn fiber(&self) -> &FiberMetric {
        &self.fiber
    }

    /// Fiber dimension m.
    pub fn m(&self) -> usize {
        self.fiber.dim()
    }

    /// Spacetime dimension m + 1.
    pub fn dim(&self) -> usize {
        self.fiber.dim() + 1
    }

    pub fn admissible(&self, p: &AmbientPoint) -> Result<()> {
        if !self.warp.contains(p.t) {
            return Err(Error::OutOfDomain(format!(
                "t = {} outside warp interval with margin",
                p.t
            )));
        }
        if !self.fiber.contains(&p.x) {
            return Err(Error::OutOfDomain(format!(
                "chart point {:?} outside fiber box with margin",
                p.x
            )));
        }
        Ok(())
    }

    /// Ambient metric components over jet coordinates
    /// `(t, x^1..x^m)`: block `diag(-1, rho(t)^2 g_F)`.
    pub fn metric_jets(&self, coords: &[Jet]) -> Result<JetMatrix> {
        let n = self.dim();
        assert_eq!(coords.len(), n, "ambient coordinate arity mismatch");
        let t = &coords[0];
        let rho = self.warp.eval_jet(t)?;
        let rho2 = rho.mul_jet(&rho);
        let gf = self.fiber.metric_jets(&coords[1..])?;
        let zero = t.constant_like(0.0);
        let mut g = vec![vec![zero; n]; n];
        g[0][0] = t.constant_like(-1.0);
        for i in 0..self.m() {
            for j in 0..self.m() {
                g[1 + i][1 + j] = rho2.mul_jet(&gf[i][j]);
            }
        }
        Ok(g)
    }

    /// Ambient metric values at a point.
    pub fn metric_at(&self, p: &AmbientPoint) -> Result<Matrix> {
        self.admissible(p)?;
        let coords = Jet::coordinates(&p.coords(), 0);
        let g = self.metric_jets(&coords)?;
        Ok(g.iter()
            .map(|row| row.iter().map(|e| e.value()).collect())
            .collect())
    }

    /// Generic Levi-Civita coefficients of the ambient metric as jets in
    /// the ambient coordinates, one order below the input.
    pub fn christoffel_jets(&self, coords: &[Jet]) -> Result<Vec<JetMatrix>> {
        let g = self.metric_jets(coords)?;
        let g_inv = linalg::invert_jets(&g)?;
        fiber::christoffel_from_metric(&g, &g_inv, |mat, var| mat.derivative(var))
    }

    /// Closed-form warped-product coefficients at a point:
    /// `Gamma^t_{ij} = rho rho' g_Fij`, `Gamma^i_{tj} = (rho'/rho) delta`,
    /// fiber block equal to the fiber connection, all others zero.
    pub fn christoffel_closed_at(&self, p: &AmbientPoint) -> Result<Vec<Matrix>> {
        self.admissible(p)?;
        let n = self.dim();
        let m = self.m();
        let [r, r1, _, _] = self.warp.derivs(p.t)?;
        let gf = self.fiber.metric_at(&p.x)?;
        let gamma_f = self.fiber.christoffel_at(&p.x)?;
        let mut gamma = vec![vec![vec![0.0; n]; n]; n];
        for i in 0..m {
            for j in 0..m {
                gamma[0][1 + i][1 + j] = r * r1 * gf[i][j];
                gamma[1 + i][1 + j][0] = if i == j { r1 / r } else { 0.0 };
                gamma[1 + i][0][1 + j] = gamma[1 + i][1 + j][0];
                for k in 0..m {
                    gamma[1 + k][1 + i][1 + j] = gamma_f[k][i][j];
                }
            }
        }
        Ok(gamma)
    }

    /// Connection coefficients computed two ways: the generic jet route
    /// and the warped-product closed form. Disagreement beyond `tol`
    /// (relative to the larger entry, floored at 1) is an internal fault.
    pub fn christoffel_both(
        &self,
        p: &AmbientPoint,
        tol: f64,
    ) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
        self.admissible(p)?;
        let coords = Jet::coordinates(&p.coords(), 1);
        let jets = self.christoffel_jets(&coords)?;
        let n = self.dim();
        let generic: Vec<Matrix> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| (0..n).map(|j| jets[k][i][j].value()).collect())
                    .collect()
            })
            .collect();
        let closed = self.christoffel_closed_at(p)?;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let a = generic[k][i][j];
                    let b = closed[k][i][j];
                    let scale = a.abs().max(b.abs()).max(1.0);
                    if (a - b).abs() > tol * scale {
                        return Err(Error::InternalFault(format!(
                            "connection routes disagree at {:?}: Gamma^{k}_{i}{j} generic {a} vs closed {b}",
                            p.coords()
                        )));
                    }
                }
            }
        }
        Ok((generic, closed))
    }

    /// Ambient Riemann tensor values `R[l][k][i][j]` at a point, from the
    /// generic connection jets.
    pub fn riemann_at(&self, p: &AmbientPoint) -> Result<Vec<Vec<Matrix>>> {
        self.admissible(p)?;
        let coords = Jet::coordinates(&p.coords(), 2);
        let gamma = self.christoffel_jets(&coords)?;
        Ok(fiber::riemann_from_christoffel(&gamma, self.dim()))
    }

    /// Ambient Ricci tensor values at a point, from the generic
    /// connection jets.
    pub fn ricci_at(&self, p: &AmbientPoint) -> Result<Matrix> {
        self.admissible(p)?;
        let coords = Jet::coordinates(&p.coords(), 2);
        let gamma = self.christoffel_jets(&coords)?;
        Ok(fiber::ricci_from_christoffel(&gamma, self.dim()))
    }

    /// Residual of the closed-conformal-field law for `K = rho d_t`:
    /// `|\nabla_X K - rho'(t) X|` (max over components) for an ambient
    /// coordinate-basis direction `X`.
    pub fn conformal_residual(&self, p: &AmbientPoint, direction: usize) -> Result<f64> {
        self.admissible(p)?;
        let n = self.dim();
        if direction >= n {
            return Err(Error::InvalidArgument(format!(
                "direction {direction} out of range for dimension {n}"
            )));
        }
        let coords = Jet::coordinates(&p.coords(), 1);
        let gamma = self.christoffel_jets(&coords)?;
        let [r, r1, _, _] = self.warp.derivs(p.t)?;
        // K = (rho(t), 0, ..., 0); d_alpha K^t = rho' delta_alpha^t.
        let mut max_residual: f64 = 0.0;
        for beta in 0..n {
            let dk = if beta == 0 && direction == 0 { r1 } else { 0.0 };
            let connection = gamma[beta][direction][0].value() * r;
            let target = if beta == direction { r1 } else { 0.0 };
            max_residual = max_residual.max((dk + connection - target).abs());
        }
        Ok(max_residual)
    }

    /// Residuals of the warped-product Ricci closed forms at `p`:
    /// the time-time component against `-m rho''/rho`, and a fiber
    /// direction `v` against
    /// `Ric^F(v,v) + (rho''/rho + (m-1) rho'^2/rho^2) g(w,w)` where `w`
    /// is the fiber lift of `v`.
    pub fn oneill_residuals(&self, p: &AmbientPoint, v: &[f64]) -> Result<(f64, f64)> {
        self.admissible(p)?;
        let m = self.m();
        let ric = self.ricci_at(p)?;
        let [r, r1, r2, _] = self.warp.derivs(p.t)?;
        let res_tt = ric[0][0] + m as f64 * r2 / r;

        let gf = self.fiber.metric_at(&p.x)?;
        let ric_f = self.fiber.ricci_at(&p.x)?;
        let mut ric_vv = 0.0;
        for i in 0..m {
            for j in 0..m {
                ric_vv += ric[1 + i][1 + j] * v[i] * v[j];
            }
        }
        let s2 = r * r * linalg::quad(&gf, v, v); // ambient norm^2 of the lift
        let expected =
            linalg::quad(&ric_f, v, v) + s2 * (r2 / r + (m as f64 - 1.0) * (r1 / r) * (r1 / r));
        Ok((res_tt, ric_vv - expected))
    }

    /// Null-convergence margin at `p` for a fiber tangent `v`:
    /// `Ric^F(v,v) - m (rho rho'' - rho'^2) g_F(v,v)`. The condition
    /// holds at `p` iff this is nonnegative for every `v` (the margin is
    /// quadratic in `v`, so its sign is scale-free).
    pub fn ncc_margin(&self, p: &AmbientPoint, v: &[f64]) -> Result<f64> {
        self.admissible(p)?;
        if v.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidArgument(
                "null-convergence margin needs a nonzero fiber vector".into(),
            ));
        }
        let [r, r1, r2, _] = self.warp.derivs(p.t)?;
        let gf = self.fiber.metric_at(&p.x)?;
        let ric_f = self.fiber.ricci_at(&p.x)?;
        Ok(linalg::quad(&ric_f, v, v)
            - self.m() as f64 * (r * r2 - r1 * r1) * linalg::quad(&gf, v, v))
    }

    /// `div d_t = m rho'(t)/rho(t)`, the expansion rate measured by
    /// comoving observers.
    pub fn div_comoving(&self, t: f64) -> Result<f64> {
        let [r, r1, _, _] = self.warp.derivs(t)?;
        Ok(self.m() as f64 * r1 / r)
    }

    /// `Ric(z, z)` for a timelike `z`; the timelike convergence condition
    /// holds at `p` for `z` iff this is nonnegative.
    pub fn tcc_check(&self, p: &AmbientPoint, z: &[f64]) -> Result<f64> {
        self.admissible(p)?;
        let g = self.metric_at(p)?;
        if linalg::quad(&g, z, z) >= 0.0 {
            return Err(Error::InvalidArgument(
                "timelike convergence check needs a timelike vector".into(),
            ));
        }
        let ric = self.ricci_at(p)?;
        Ok(linalg::quad(&ric, z, z))
    }
}
