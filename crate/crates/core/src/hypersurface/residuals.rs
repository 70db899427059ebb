//! Residual checks for the pointwise structure equations of a spacelike
//! graph: gradient laws for the height and angle functions, covariant
//! derivatives of the tangential projections, the Hessian trace formula,
//! and the Gauss/Codazzi equations against the generic ambient curvature.
//!
//! Each check returns the residual normalized by `max(1, scale)` where
//! `scale` is the size of the quantities entering the identity; the raw
//! ingredients stay available through [`ChartFrame`].

use super::ChartFrame;
use crate::error::Result;
use crate::linalg;

fn rel(residual: f64, scale: f64) -> f64 {
    residual / scale.max(1.0)
}

/// `grad tau = -d_t^T` and `|grad tau|^2 = sinh^2 phi`: the larger of the
/// two normalized residuals.
pub fn grad_tau_residual(f: &ChartFrame) -> f64 {
    let grad = f.grad_tau();
    let diff: Vec<f64> = grad.iter().zip(&f.dtt_v).map(|(a, b)| a + b).collect();
    let vec_res = f.g_norm(&diff);
    let norm2 = linalg::quad(&f.g_v, &grad, &grad);
    let scalar_res = (norm2 - f.sinh2_v).abs();
    let scale = f.g_norm(&grad).max(f.sinh2_v.abs());
    rel(vec_res.max(scalar_res), scale)
}

/// `grad cosh phi = A d_t^T + (rho'/rho) cosh phi d_t^T`.
pub fn grad_cosh_residual(f: &ChartFrame) -> f64 {
    let lhs = f.gradient(&f.cosh);
    let p = f.rho[1] / f.rho[0];
    let mut rhs = vec![0.0; f.m];
    for k in 0..f.m {
        for l in 0..f.m {
            rhs[k] += f.shape_v[k][l] * f.dtt_v[l];
        }
        rhs[k] += p * f.cosh_v * f.dtt_v[k];
    }
    let diff: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    rel(f.g_norm(&diff), f.g_norm(&lhs).max(f.g_norm(&rhs)))
}

/// `grad g(K, N) = -A K^T`, with `g(K, N) = -rho(tau) cosh phi`
/// differentiated as a field on the graph.
pub fn grad_kn_residual(f: &ChartFrame) -> Result<f64> {
    let field = f.rho_u.mul_jet(&f.cosh).neg_jet();
    let lhs = f.gradient(&field);
    let mut rhs = vec![0.0; f.m];
    for k in 0..f.m {
        for l in 0..f.m {
            rhs[k] -= f.shape_v[k][l] * f.kt_v[l];
        }
    }
    let diff: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    Ok(rel(f.g_norm(&diff), f.g_norm(&lhs).max(f.g_norm(&rhs))))
}

/// `\nabla_X K^T = rho cosh phi A X + rho' X` for `X = X_i`.
pub fn nabla_kt_residual(f: &ChartFrame, i: usize) -> f64 {
    let m = f.m;
    let mut lhs = vec![0.0; m];
    for k in 0..m {
        lhs[k] = f.kt[k].d1(i);
        for l in 0..m {
            lhs[k] += f.gamma_ind_v[k][i][l] * f.kt_v[l];
        }
    }
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        rhs[k] = f.rho[0] * f.cosh_v * f.shape_v[k][i];
        if k == i {
            rhs[k] += f.rho[1];
        }
    }
    let diff: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    rel(f.g_norm(&diff), f.g_norm(&lhs).max(f.g_norm(&rhs)))
}

/// `\nabla_X d_t^T = (rho'/rho) g(X, d_t^T) d_t^T + cosh phi A X +
/// (rho'/rho) X` for `X = X_i`.
pub fn nabla_dtt_residual(f: &ChartFrame, i: usize) -> f64 {
    let m = f.m;
    let p = f.rho[1] / f.rho[0];
    let lhs = &f.nabla_dtt_v[i];
    let mut x_i = vec![0.0; m];
    x_i[i] = 1.0;
    let g_x_dtt = linalg::quad(&f.g_v, &x_i, &f.dtt_v);
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        rhs[k] = p * g_x_dtt * f.dtt_v[k] + f.cosh_v * f.shape_v[k][i];
        if k == i {
            rhs[k] += p;
        }
    }
    let diff: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    rel(f.g_norm(&diff), f.g_norm(lhs).max(f.g_norm(&rhs)))
}

/// Trace formula for the height Hessian:
/// `|Hess tau|^2 = (rho'^2/rho^2)(m - 1 + cosh^4 phi) + cosh^2 phi tr A^2
///  + 2 (rho'/rho) cosh phi g(A d_t^T, d_t^T)
///  - 2 m (rho'/rho) H cosh phi`.
pub fn hess_norm_residual(f: &ChartFrame) -> f64 {
    let m = f.m as f64;
    let p = f.rho[1] / f.rho[0];
    let cosh = f.cosh_v;
    let lhs = f.hess_norm2_geom;
    let tr_a2 = trace_a2(f);
    let a_dtt_dtt = a_quad(f);
    let rhs = p * p * (m - 1.0 + cosh.powi(4))
        + cosh * cosh * tr_a2
        + 2.0 * p * cosh * a_dtt_dtt
        - 2.0 * m * p * f.h_v * cosh;
    rel((lhs - rhs).abs(), lhs.abs().max(rhs.abs()))
}

/// `tr A^2`.
pub fn trace_a2(f: &ChartFrame) -> f64 {
    let m = f.m;
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            s += f.shape_v[i][j] * f.shape_v[j][i];
        }
    }
    s
}

/// `g(A d_t^T, d_t^T)`.
pub fn a_quad(f: &ChartFrame) -> f64 {
    let m = f.m;
    let mut a_dtt = vec![0.0; m];
    for k in 0..m {
        for l in 0..m {
            a_dtt[k] += f.shape_v[k][l] * f.dtt_v[l];
        }
    }
    linalg::quad(&f.g_v, &a_dtt, &f.dtt_v)
}

/// Codazzi equation for coordinate directions `(i, j, k)`:
/// `g(R(X_i, X_j) N, X_k) = g((\nabla_{X_j} A) X_i - (\nabla_{X_i} A) X_j, X_k)`,
/// the left side from the generic ambient curvature, the right from the
/// jet-differentiated shape operator.
pub fn codazzi_residual(f: &ChartFrame, i: usize, j: usize, k: usize) -> f64 {
    let m = f.m;
    let n = m + 1;
    let xi = f.tangent_to_ambient(&unit(m, i));
    let xj = f.tangent_to_ambient(&unit(m, j));
    let xk = f.tangent_to_ambient(&unit(m, k));
    let normal = f.normal_ambient();

    // R(X_i, X_j) N = X_i^a X_j^b N^c R^l_{cab} d_l
    let mut rv = vec![0.0; n];
    for l in 0..n {
        let mut s = 0.0;
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    s += f.riemann_bar_v[l][c][a][b] * normal[c] * xi[a] * xj[b];
                }
            }
        }
        rv[l] = s;
    }
    let lhs = linalg::quad(&f.g_bar_v, &rv, &xk);

    let nabla_a = |a: usize, b: usize, kk: usize| -> f64 {
        // ((\nabla_{X_a}) A)^kk_b
        let mut v = f.shape[kk][b].d1(a);
        for l in 0..m {
            v += f.gamma_ind_v[kk][a][l] * f.shape_v[l][b];
            v -= f.gamma_ind_v[l][a][b] * f.shape_v[kk][l];
        }
        v
    };
    let mut rhs = 0.0;
    for kk in 0..m {
        let diff = nabla_a(j, i, kk) - nabla_a(i, j, kk);
        for l in 0..m {
            rhs += f.g_v[kk][l] * unit(m, k)[l] * diff;
        }
    }
    rel((lhs - rhs).abs(), lhs.abs().max(rhs.abs()))
}

/// Gauss formula for coordinate directions:
/// ambient derivative of the tangent frame decomposes as
/// `\nabla_{X_i} X_j = (induced connection) - g(A X_i, X_j) N`.
pub fn gauss_residual(f: &ChartFrame, i: usize, j: usize) -> f64 {
    let m = f.m;
    let n = m + 1;
    // Left side, ambient components: X_j = (u_j, e_j) as a field of x.
    let mut lhs = vec![0.0; n];
    lhs[0] = f.du[j].d1(i);
    for beta in 0..n {
        for (gamma_idx, xg) in x_ambient_components(f, j).iter().enumerate() {
            // connection along X_i = u_i d_t + d_{1+i}
            let conn = f.gammabar[beta][0][gamma_idx].value() * f.du_v[i]
                + f.gammabar[beta][1 + i][gamma_idx].value();
            lhs[beta] += conn * xg;
        }
    }
    // Right side: Gamma^k_{ij} X_k - g(A X_i, X_j) N.
    let mut tangent = vec![0.0; m];
    for k in 0..m {
        tangent[k] = f.gamma_ind_v[k][i][j];
    }
    let mut rhs = f.tangent_to_ambient(&tangent);
    let mut a_xi = vec![0.0; m];
    for k in 0..m {
        a_xi[k] = f.shape_v[k][i];
    }
    let second = linalg::quad(&f.g_v, &a_xi, &unit(m, j));
    let normal = f.normal_ambient();
    for beta in 0..n {
        rhs[beta] -= second * normal[beta];
    }
    let mut num = 0.0f64;
    let mut scale = 0.0f64;
    for beta in 0..n {
        num = num.max((lhs[beta] - rhs[beta]).abs());
        scale = scale.max(lhs[beta].abs()).max(rhs[beta].abs());
    }
    rel(num, scale)
}

/// Tangency defect of the shape operator: the time component of `A X_i`
/// must reproduce `A^k_i u_k`. A jet-pipeline self-test.
pub fn shape_tangency_residual(f: &ChartFrame) -> f64 {
    let m = f.m;
    let n = m + 1;
    let mut worst = 0.0f64;
    for i in 0..m {
        // Time component of -(cov derivative of N along X_i).
        let mut cov_t = f.cosh.d1(i);
        for gamma_idx in 0..n {
            let conn = f.gammabar[0][0][gamma_idx].value() * f.du_v[i]
                + f.gammabar[0][1 + i][gamma_idx].value();
            let ng = if gamma_idx == 0 {
                f.cosh_v
            } else {
                f.n_f[gamma_idx - 1].value()
            };
            cov_t += conn * ng;
        }
        let a_time = -cov_t;
        let mut expected = 0.0;
        for k in 0..m {
            expected += f.shape_v[k][i] * f.du_v[k];
        }
        worst = worst.max((a_time - expected).abs());
    }
    worst
}

fn unit(m: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    v[i] = 1.0;
    v
}

fn x_ambient_components(f: &ChartFrame, j: usize) -> Vec<f64> {
    f.tangent_to_ambient(&unit(f.m, j))
}
