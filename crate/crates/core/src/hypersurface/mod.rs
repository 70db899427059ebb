//! Extrinsic geometry of spacelike graphs `t = u(x)` over the fiber
//! chart: induced metric, future unit normal, hyperbolic angle, shape
//! operator, mean curvature, the tangential projections of `d_t` and of
//! the conformal field, and the covariant Hessian of the height function.
//!
//! Everything at a point is computed once into a [`ChartFrame`] holding
//! chart-space jets; the residual checks and identity evaluations read
//! derivatives out of those jets. Tangential vectors are stored by their
//! components in the coordinate tangent basis `X_i = u_i d_t + d_i`.

mod residuals;

pub use residuals::*;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::fd::{fd_gradient, PointFn};
use crate::fiber;
use crate::jet::Jet;
use crate::linalg::{self, JetMatrix, Matrix};
use crate::spacetime::{AmbientPoint, Spacetime};
use std::sync::Arc;

/// Default spacelike margin: admitted points must satisfy
/// `|grad u|^2 <= (1 - eps) rho(u)^2`.
pub const DEFAULT_SPACELIKE_MARGIN: f64 = 1e-6;

/// A graph hypersurface `{(u(x), x)}` in a warped-product spacetime.
#[derive(Debug, Clone)]
pub struct GraphHypersurface {
    host: Arc<Spacetime>,
    u: Expr,
    margin: f64,
}

impl GraphHypersurface {
    pub fn new(host: Arc<Spacetime>, u: Expr) -> Result<GraphHypersurface> {
        let m = host.m();
        let vars = host.fiber().var_names();
        for v in u.free_vars() {
            if !vars.contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "graph function uses unknown variable `{v}`; allowed: x1..x{m}"
                )));
            }
        }
        Ok(GraphHypersurface {
            host,
            u,
            margin: DEFAULT_SPACELIKE_MARGIN,
        })
    }

    pub fn with_margin(mut self, margin: f64) -> GraphHypersurface {
        self.margin = margin;
        self
    }

    pub fn host(&self) -> &Arc<Spacetime> {
        &self.host
    }

    pub fn graph_expr(&self) -> &Expr {
        &self.u
    }

    pub fn m(&self) -> usize {
        self.host.m()
    }

    /// Height `u(x)` at a plain chart point.
    pub fn height(&self, x: &[f64]) -> Result<f64> {
        let env: Vec<(&str, f64)> = self
            .host
            .fiber()
            .var_names()
            .iter()
            .zip(x)
            .map(|(n, &v)| (n.as_str(), v))
            .collect();
        expr::eval_f64(&self.u, &env)
    }

    /// Evaluate the graph function over jet coordinates.
    pub fn height_jet(&self, x_jets: &[Jet]) -> Result<Jet> {
        let env: Vec<(&str, Jet)> = self
            .host
            .fiber()
            .var_names()
            .iter()
            .zip(x_jets)
            .map(|(n, j)| (n.as_str(), j.clone()))
            .collect();
        let shape = crate::carrier::JetShape {
            nvars: x_jets[0].nvars(),
            order: x_jets[0].order(),
        };
        expr::eval(&self.u, &env, &shape)
    }

    /// Admission test only: point in chart box, height inside the
    /// interval, spacelike margin satisfied.
    pub fn admissible(&self, x: &[f64]) -> bool {
        self.chart_frame(x).is_ok()
    }

    /// Full per-point geometry bundle (plain values).
    pub fn frame_at(&self, x: &[f64]) -> Result<PointGeometry> {
        Ok(self.chart_frame(x)?.point_geometry())
    }

    /// Build the jet bundle at a chart point.
    pub fn chart_frame(&self, x: &[f64]) -> Result<ChartFrame> {
        ChartFrame::build(self, x)
    }

    /// Laplace-Beltrami operator of the induced metric applied to a
    /// chart field `f` (jet-evaluable to order >= 2) at `x`.
    pub fn laplacian_on_m(
        &self,
        x: &[f64],
        f: &dyn Fn(&[Jet]) -> Result<Jet>,
    ) -> Result<f64> {
        let frame = self.chart_frame(x)?;
        let x_jets = Jet::coordinates(x, 3);
        let fj = f(&x_jets)?;
        frame.laplace_beltrami(&fj)
    }

    /// Hyperbolic-angle cosine as a plain-valued field (used by the
    /// finite-difference corroboration stencils).
    pub fn cosh_value(&self, x: &[f64]) -> Result<f64> {
        let light = self.light_frame(x)?;
        Ok(light.cosh)
    }

    /// Induced metric values as a field.
    pub fn induced_metric_values(&self, x: &[f64]) -> Result<Matrix> {
        Ok(self.light_frame(x)?.g)
    }

    /// Minimal spacelike data at a point from order-1 jets: enough for
    /// value-level stencil evaluation without the full frame.
    fn light_frame(&self, x: &[f64]) -> Result<LightFrame> {
        if !self.host.fiber().contains(x) {
            return Err(Error::OutOfDomain(format!(
                "chart point {x:?} outside fiber box with margin"
            )));
        }
        let m = self.m();
        let x_jets = Jet::coordinates(x, 1);
        let u = self.height_jet(&x_jets)?;
        let tau = u.value();
        if !self.host.warp().contains(tau) {
            return Err(Error::OutOfDomain(format!(
                "graph height {tau} outside warp interval with margin"
            )));
        }
        let rho = self.host.warp().derivs(tau)?[0];
        let gf = self.host.fiber().metric_at(x)?;
        let gf_inv = linalg::invert(&gf)?;
        let du: Vec<f64> = (0..m).map(|i| u.d1(i)).collect();
        let grad2 = linalg::quad(&gf_inv, &du, &du);
        let bound = (1.0 - self.margin) * rho * rho;
        if grad2 > bound {
            return Err(Error::NotSpacelike {
                point: x.to_vec(),
                grad2,
                bound,
            });
        }
        let sinh2 = grad2 / (rho * rho - grad2);
        let cosh = (1.0 + sinh2).sqrt();
        let mut g = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                g[i][j] = -du[i] * du[j] + rho * rho * gf[i][j];
            }
        }
        Ok(LightFrame { cosh, g })
    }

    /// Finite-difference Laplace-Beltrami oracle: the divergence form
    /// `(1/sqrt det g) d_i (sqrt det g g^{ij} d_j f)` with every
    /// derivative a central difference of plain values.
    pub fn fd_laplacian(&self, x: &[f64], f: &dyn PointFn, h: f64) -> Result<f64> {
        let m = self.m();
        let flux = |y: &[f64]| -> Result<Vec<f64>> {
            let g = self.induced_metric_values(y)?;
            let g_inv = linalg::invert(&g)?;
            let det = det_values(&g);
            let grad = fd_gradient(f, y, h)?;
            Ok((0..m)
                .map(|i| det.sqrt() * (0..m).map(|j| g_inv[i][j] * grad[j]).sum::<f64>())
                .collect())
        };
        let mut div = 0.0;
        for i in 0..m {
            let mut plus = x.to_vec();
            plus[i] += h;
            let mut minus = x.to_vec();
            minus[i] -= h;
            div += (flux(&plus)?[i] - flux(&minus)?[i]) / (2.0 * h);
        }
        let g = self.induced_metric_values(x)?;
        Ok(div / det_values(&g).sqrt())
    }
}

struct LightFrame {
    cosh: f64,
    g: Matrix,
}

fn det_values(g: &Matrix) -> f64 {
    match g.len() {
        1 => g[0][0],
        2 => g[0][0] * g[1][1] - g[0][1] * g[1][0],
        _ => {
            // LU without pivoting is fine: admitted induced metrics are
            // positive definite.
            let n = g.len();
            let mut work = g.to_vec();
            let mut det = 1.0;
            for k in 0..n {
                det *= work[k][k];
                for i in k + 1..n {
                    let f = work[i][k] / work[k][k];
                    for j in k..n {
                        work[i][j] -= f * work[k][j];
                    }
                }
            }
            det
        }
    }
}

/// Per-point geometry of a spacelike graph, plain values.
///
/// Tangential vectors (`dt_t`, `k_t`, `grad_tau`, `grad_h`) are components
/// in the coordinate tangent basis; the normal is in ambient components
/// `(N^t, N^1..N^m)`.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub x: Vec<f64>,
    pub tau: f64,
    pub g: Matrix,
    pub g_inv: Matrix,
    pub normal: Vec<f64>,
    pub cosh_phi: f64,
    pub sinh2_phi: f64,
    pub dt_t: Vec<f64>,
    pub k_t: Vec<f64>,
    pub shape: Matrix,
    pub mean_curvature: f64,
    pub grad_tau: Vec<f64>,
    pub grad_h: Vec<f64>,
    pub grad_h_norm: f64,
    pub hess_tau: Matrix,
    pub hess_tau_norm2: f64,
}

/// Jet bundle at one chart point. Field suffixes: no suffix = chart jets,
/// `_v` = extracted plain values.
pub struct ChartFrame {
    pub x: Vec<f64>,
    pub m: usize,
    /// Graph function, order 3.
    pub u: Jet,
    /// First partials of `u`, order 2.
    pub du: Vec<Jet>,
    /// `(rho, rho', rho'', rho''')` at `tau`.
    pub rho: [f64; 4],
    /// `rho` along the graph, order 3.
    pub rho_u: Jet,
    /// `rho'` along the graph, order 2.
    pub rho_d1_u: Jet,
    /// Fiber metric and inverse at the point, order 3.
    pub gf: JetMatrix,
    pub gf_inv: JetMatrix,
    /// `|grad^F u|^2`, order 2.
    pub grad_norm2: Jet,
    /// `sinh^2 phi` in the cancellation-free ratio form, order 2.
    pub sinh2: Jet,
    /// `cosh phi = sqrt(1 + sinh^2 phi)`, order 2.
    pub cosh: Jet,
    /// Induced metric, inverse, determinant; order 2.
    pub g: JetMatrix,
    pub g_inv: JetMatrix,
    pub det_g: Jet,
    /// Fiber components of the future unit normal, order 2.
    pub n_f: Vec<Jet>,
    /// Tangent-basis components of the projection of `d_t`, order 2.
    pub dtt: Vec<Jet>,
    /// Tangent-basis components of the projection of `K`, order 2.
    pub kt: Vec<Jet>,
    /// Warped-product connection along the graph (closed form),
    /// `gammabar[beta][alpha][gamma]`, order 2.
    pub gammabar: Vec<JetMatrix>,
    /// Shape operator mixed components `A^k_i`, order 1.
    pub shape: JetMatrix,
    /// Mean curvature, order 1.
    pub mean_h: Jet,
    /// Induced connection coefficients `Gamma^k_{ij}`, order 1.
    pub gamma_ind: Vec<JetMatrix>,

    // Plain values derived once.
    pub g_v: Matrix,
    pub g_inv_v: Matrix,
    pub shape_v: Matrix,
    pub gamma_ind_v: Vec<Matrix>,
    pub dtt_v: Vec<f64>,
    pub kt_v: Vec<f64>,
    pub du_v: Vec<f64>,
    pub h_v: f64,
    pub cosh_v: f64,
    pub sinh2_v: f64,
    pub tau: f64,
    /// `(\nabla_{X_i} d_t^T)^k` values, indexed `[i][k]`.
    pub nabla_dtt_v: Matrix,
    /// Covariant Hessian of `tau`, values.
    pub hess_tau_v: Matrix,
    /// `|Hess tau|^2` as the frame trace of `\nabla d_t^T` products.
    pub hess_norm2_geom: f64,
    /// `dH` partial values and `grad H` tangent components.
    pub dh_v: Vec<f64>,
    pub grad_h_v: Vec<f64>,
    pub grad_h_norm: f64,
    /// Ambient metric values at the graph point.
    pub g_bar_v: Matrix,
    /// Generic-route ambient curvature values at the graph point.
    pub ricci_bar_v: Matrix,
    pub riemann_bar_v: Vec<Vec<Matrix>>,
    /// Fiber Ricci values at the point.
    pub ric_f_v: Matrix,
}

impl ChartFrame {
    pub fn build(mh: &GraphHypersurface, x: &[f64]) -> Result<ChartFrame> {
        let host = mh.host();
        let m = mh.m();
        if !host.fiber().contains(x) {
            return Err(Error::OutOfDomain(format!(
                "chart point {x:?} outside fiber box with margin"
            )));
        }
        let x_jets = Jet::coordinates(x, 3);
        let u = mh.height_jet(&x_jets)?;
        let tau = u.value();
        if !host.warp().contains(tau) {
            return Err(Error::OutOfDomain(format!(
                "graph height {tau} outside warp interval with margin"
            )));
        }

        let rho_jet1 = host.warp().jet_at(tau, 3)?;
        let rho = [
            rho_jet1.value(),
            rho_jet1.derivative_value(&[1]),
            rho_jet1.derivative_value(&[2]),
            rho_jet1.derivative_value(&[3]),
        ];
        let rho_u = host.warp().eval_jet(&u)?;
        let rho_d1_u = rho_jet1.derivative(0).compose(std::slice::from_ref(&u));

        let gf = host.fiber().metric_jets(&x_jets)?;
        let gf_values: Matrix = gf
            .iter()
            .map(|row| row.iter().map(|e| e.value()).collect())
            .collect();
        if let Err(k) = linalg::positive_definite(&gf_values) {
            return Err(Error::MetricDegenerate {
                point: x.to_vec(),
                detail: format!("fiber metric pivot {k} non-positive"),
            });
        }
        let gf_inv = linalg::invert_jets(&gf)?;

        let du: Vec<Jet> = (0..m).map(|i| u.derivative(i)).collect();
        let du_v: Vec<f64> = du.iter().map(|j| j.value()).collect();

        let mut grad_norm2 = u.constant_like(0.0).truncated(2);
        for j in 0..m {
            for k in 0..m {
                grad_norm2 = grad_norm2.add_jet(&gf_inv[j][k].mul_jet(&du[j]).mul_jet(&du[k]));
            }
        }

        let rho2_u = rho_u.mul_jet(&rho_u);
        let bound = (1.0 - mh.margin) * rho[0] * rho[0];
        if grad_norm2.value() > bound {
            return Err(Error::NotSpacelike {
                point: x.to_vec(),
                grad2: grad_norm2.value(),
                bound,
            });
        }

        // sinh^2 phi = |grad u|^2 / (rho^2 - |grad u|^2): exactly zero on
        // slices, no cancellation near phi = 0.
        let denom = rho2_u.truncated(2).sub_jet(&grad_norm2);
        let sinh2 = grad_norm2.div_jet(&denom)?;
        let cosh = sinh2.plus(1.0).sqrt()?;

        // Induced metric g_ij = -u_i u_j + rho(u)^2 g_Fij.
        let mut g: JetMatrix = vec![vec![u.constant_like(0.0).truncated(2); m]; m];
        for i in 0..m {
            for j in 0..m {
                g[i][j] = rho2_u
                    .mul_jet(&gf[i][j])
                    .sub_jet(&du[i].mul_jet(&du[j]));
            }
        }
        let g_v: Matrix = g
            .iter()
            .map(|row| row.iter().map(|e| e.value()).collect())
            .collect();
        if linalg::positive_definite(&g_v).is_err() {
            return Err(Error::NotSpacelike {
                point: x.to_vec(),
                grad2: grad_norm2.value(),
                bound,
            });
        }
        let g_inv = linalg::invert_jets(&g)?;
        let det_g = linalg::det_jets(&g)?;

        // Normal N = cosh * (d_t + rho^-2 gf^{jk} u_k d_j); the projection
        // of d_t has tangent components -cosh * N_F.
        let rho2_inv = rho2_u.recip()?;
        let mut n_f = Vec::with_capacity(m);
        let mut dtt = Vec::with_capacity(m);
        for k in 0..m {
            let mut raised = u.constant_like(0.0).truncated(2);
            for j in 0..m {
                raised = raised.add_jet(&gf_inv[k][j].mul_jet(&du[j]));
            }
            let nk = cosh.mul_jet(&rho2_inv).mul_jet(&raised);
            dtt.push(cosh.mul_jet(&nk).neg_jet());
            n_f.push(nk);
        }
        let kt: Vec<Jet> = dtt.iter().map(|d| rho_u.mul_jet(d)).collect();

        // Warped-product connection along the graph, closed form.
        let n = m + 1;
        let zero2 = u.constant_like(0.0).truncated(2);
        let mut gammabar: Vec<JetMatrix> = vec![vec![vec![zero2.clone(); n]; n]; n];
        let rho_rho1 = rho_u.mul_jet(&rho_d1_u);
        let p_of_u = rho_d1_u.div_jet(&rho_u)?;
        let gamma_f = host.fiber().christoffel_jets(&x_jets)?;
        for i in 0..m {
            for j in 0..m {
                gammabar[0][1 + i][1 + j] = rho_rho1.mul_jet(&gf[i][j]);
                if i == j {
                    gammabar[1 + i][0][1 + j] = p_of_u.clone();
                    gammabar[1 + i][1 + j][0] = p_of_u.clone();
                }
                for k in 0..m {
                    gammabar[1 + k][1 + i][1 + j] = gamma_f[k][i][j].clone();
                }
            }
        }

        // Shape operator: A X_i = -(covariant derivative of N along X_i);
        // fiber components give the mixed tensor A^k_i.
        let n_amb: Vec<Jet> = std::iter::once(cosh.clone())
            .chain(n_f.iter().cloned())
            .collect();
        let mut shape: JetMatrix = vec![vec![u.constant_like(0.0).truncated(1); m]; m];
        for i in 0..m {
            for beta in 1..n {
                let mut cov = n_amb[beta].derivative(i);
                for gamma_idx in 0..n {
                    // X_i = u_i d_t + d_{1+i}.
                    let conn = gammabar[beta][0][gamma_idx]
                        .mul_jet(&du[i])
                        .add_jet(&gammabar[beta][1 + i][gamma_idx]);
                    cov = cov.add_jet(&conn.mul_jet(&n_amb[gamma_idx]));
                }
                shape[beta - 1][i] = cov.neg_jet();
            }
        }
        let mut mean_h = u.constant_like(0.0).truncated(1);
        for k in 0..m {
            mean_h = mean_h.add_jet(&shape[k][k]);
        }
        mean_h = mean_h.scale(-1.0 / m as f64);

        let gamma_ind = fiber::christoffel_from_metric(&g, &g_inv, |mat, var| {
            mat.derivative(var)
        })?;

        // Plain values.
        let g_inv_v: Matrix = g_inv
            .iter()
            .map(|row| row.iter().map(|e| e.value()).collect())
            .collect();
        let shape_v: Matrix = shape
            .iter()
            .map(|row| row.iter().map(|e| e.value()).collect())
            .collect();
        let gamma_ind_v: Vec<Matrix> = gamma_ind
            .iter()
            .map(|mat| {
                mat.iter()
                    .map(|row| row.iter().map(|e| e.value()).collect())
                    .collect()
            })
            .collect();
        let dtt_v: Vec<f64> = dtt.iter().map(|j| j.value()).collect();
        let kt_v: Vec<f64> = kt.iter().map(|j| j.value()).collect();
        let h_v = mean_h.value();
        let cosh_v = cosh.value();
        let sinh2_v = sinh2.value();

        // Covariant derivative of the d_t projection and the two Hessian
        // routes.
        let mut nabla_dtt_v = vec![vec![0.0; m]; m];
        for i in 0..m {
            for k in 0..m {
                let mut v = dtt[k].d1(i);
                for l in 0..m {
                    v += gamma_ind_v[k][i][l] * dtt_v[l];
                }
                nabla_dtt_v[i][k] = v;
            }
        }
        let frame_rows = linalg::orthonormal_frame(&g_v, &(0..m).collect::<Vec<_>>())?;
        let hess_norm2_geom = hess_trace_with_frame(&g_v, &nabla_dtt_v, &frame_rows);

        let mut hess_tau_v = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut v = du[i].d1(j);
                for k in 0..m {
                    v -= gamma_ind_v[k][i][j] * du_v[k];
                }
                hess_tau_v[i][j] = v;
            }
        }

        let dh_v: Vec<f64> = (0..m).map(|i| mean_h.d1(i)).collect();
        let grad_h_v = linalg::mat_vec(&g_inv_v, &dh_v);
        let grad_h_norm = linalg::quad(&g_v, &grad_h_v, &grad_h_v).max(0.0).sqrt();

        // Ambient tensors at the graph point from the generic pipeline.
        let ambient = AmbientPoint::new(tau, x.to_vec());
        let g_bar_v = host.metric_at(&ambient)?;
        let ricci_bar_v = host.ricci_at(&ambient)?;
        let riemann_bar_v = host.riemann_at(&ambient)?;
        let ric_f_v = host.fiber().ricci_at(x)?;

        Ok(ChartFrame {
            x: x.to_vec(),
            m,
            u,
            du,
            rho,
            rho_u,
            rho_d1_u,
            gf,
            gf_inv,
            grad_norm2,
            sinh2,
            cosh,
            g,
            g_inv,
            det_g,
            n_f,
            dtt,
            kt,
            gammabar,
            shape,
            mean_h,
            gamma_ind,
            g_v,
            g_inv_v,
            shape_v,
            gamma_ind_v,
            dtt_v,
            kt_v,
            du_v,
            h_v,
            cosh_v,
            sinh2_v,
            tau,
            nabla_dtt_v,
            hess_tau_v,
            hess_norm2_geom,
            dh_v,
            grad_h_v,
            grad_h_norm,
            g_bar_v,
            ricci_bar_v,
            riemann_bar_v,
            ric_f_v,
        })
    }

    /// Ambient components `(V^t, V^1..V^m)` of a tangential vector given
    /// by tangent-basis components.
    pub fn tangent_to_ambient(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m + 1];
        for (i, &vi) in v.iter().enumerate() {
            out[0] += vi * self.du_v[i];
            out[1 + i] = vi;
        }
        out
    }

    /// Ambient components of the unit normal.
    pub fn normal_ambient(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.m + 1];
        out[0] = self.cosh_v;
        for (k, nf) in self.n_f.iter().enumerate() {
            out[1 + k] = nf.value();
        }
        out
    }

    /// Norm of a tangent-basis vector in the induced metric.
    pub fn g_norm(&self, v: &[f64]) -> f64 {
        linalg::g_norm(&self.g_v, v)
    }

    /// Laplace-Beltrami of a chart-field jet (order >= 2) at this point:
    /// `(1/sqrt det g) d_i (sqrt det g g^{ij} d_j f)`.
    pub fn laplace_beltrami(&self, f: &Jet) -> Result<f64> {
        let sqrt_det = self.det_g.sqrt()?;
        let mut div = 0.0;
        for i in 0..self.m {
            let mut flux = f.constant_like(0.0).truncated(1);
            for j in 0..self.m {
                flux = flux.add_jet(
                    &sqrt_det
                        .mul_jet(&self.g_inv[i][j])
                        .mul_jet(&f.derivative(j)),
                );
            }
            div += flux.d1(i);
        }
        Ok(div / sqrt_det.value())
    }

    /// `grad f` tangent components from a chart-field jet (order >= 1).
    pub fn gradient(&self, f: &Jet) -> Vec<f64> {
        let df: Vec<f64> = (0..self.m).map(|j| f.d1(j)).collect();
        linalg::mat_vec(&self.g_inv_v, &df)
    }

    /// `g(grad f, grad f)` from a chart-field jet.
    pub fn grad_norm2_of(&self, f: &Jet) -> f64 {
        let df: Vec<f64> = (0..self.m).map(|j| f.d1(j)).collect();
        linalg::quad(&self.g_inv_v, &df, &df)
    }

    /// `grad tau` tangent components (computed from `u`, not from the
    /// `d_t` projection; the two routes are compared by a residual check).
    pub fn grad_tau(&self) -> Vec<f64> {
        linalg::mat_vec(&self.g_inv_v, &self.du_v)
    }

    pub fn point_geometry(&self) -> PointGeometry {
        PointGeometry {
            x: self.x.clone(),
            tau: self.tau,
            g: self.g_v.clone(),
            g_inv: self.g_inv_v.clone(),
            normal: self.normal_ambient(),
            cosh_phi: self.cosh_v,
            sinh2_phi: self.sinh2_v,
            dt_t: self.dtt_v.clone(),
            k_t: self.kt_v.clone(),
            shape: self.shape_v.clone(),
            mean_curvature: self.h_v,
            grad_tau: self.grad_tau(),
            grad_h: self.grad_h_v.clone(),
            grad_h_norm: self.grad_h_norm,
            hess_tau: self.hess_tau_v.clone(),
            hess_tau_norm2: self.hess_norm2_geom,
        }
    }

    /// `|Hess tau|^2` by contracting the covariant Hessian directly
    /// (independent route from the `\nabla d_t^T` trace).
    pub fn hess_norm2_direct(&self) -> f64 {
        let m = self.m;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        s += self.g_inv_v[i][k]
                            * self.g_inv_v[j][l]
                            * self.hess_tau_v[i][j]
                            * self.hess_tau_v[k][l];
                    }
                }
            }
        }
        s
    }

    /// Recompute the `\nabla d_t^T` trace with the orthonormal frame built
    /// in a caller-chosen basis order (frame invariance spot checks).
    pub fn hess_norm2_with_order(&self, order: &[usize]) -> Result<f64> {
        let frame = linalg::orthonormal_frame(&self.g_v, order)?;
        Ok(hess_trace_with_frame(&self.g_v, &self.nabla_dtt_v, &frame))
    }
}

fn hess_trace_with_frame(g: &Matrix, nabla_dtt: &Matrix, frame: &Matrix) -> f64 {
    let m = g.len();
    let mut total = 0.0;
    for e in frame {
        // V^k = e^a (nabla_a dtT)^k
        let mut v = vec![0.0; m];
        for k in 0..m {
            for a in 0..m {
                v[k] += e[a] * nabla_dtt[a][k];
            }
        }
        total += linalg::quad(g, &v, &v);
    }
    total
}
