//! The pointwise Laplacian identity for the hyperbolic angle of a
//! spacelike graph, its inequality form, the lower bound satisfied by
//! constant-mean-curvature graphs under the null convergence condition,
//! and the mixed Ricci contraction they rest on.
//!
//! Writing `P = rho'/rho`, `Q = rho''/rho`, `L = (log rho)'' = Q - P^2`,
//! `c = cosh phi`, `s = sinh^2 phi` and `R_N = Ric^F(N_F, N_F)`, the
//! master balance evaluated here is
//!
//! ```text
//! c (Lap c) = c^2 { R_N - (m-1) L s }  -  m c g(grad H, dtT)
//!           + |Hess tau|^2  -  P^2 (m - 1 + c^4)  +  2 m P H c
//!           - m P H c (c^2 + 1)  -  Q c^2 s  +  3 P^2 c^2 s  +  m P^2 c^2
//! ```
//!
//! with `|Hess tau|^2` taken from the geometric trace of the covariant
//! derivative of the `d_t` projection. The inequality form replaces the
//! right side by
//!
//! ```text
//! c^2 { R_N - m L s } - m c g(grad H, dtT) - m P H c s + P^2 s (m + s)
//! ```
//!
//! Expanding both right sides shows every non-Hessian term cancels: the
//! `L`-term difference contributes `+ c^2 s L`, the `Q` parts cancel it
//! against `- Q c^2 s`, the `m P H c` terms sum to
//! `m P H c (2 - c^2 - 1 + s) = 0`, and the `P^2` terms collapse using
//! `c^2 = 1 + s`. Hence
//!
//! ```text
//! RHS(identity) - RHS(inequality) = |Hess tau|^2   exactly,
//! ```
//!
//! so the inequality margin decomposes as `margin = (identity residual)
//! plus the Hessian norm, with a rearrangement term that is identically
//! zero. The decomposition is asserted at every sampled point rather
//! than trusting the inequality from scratch.

use crate::error::Result;
use crate::hypersurface::{ChartFrame, GraphHypersurface};
use crate::linalg;
use crate::spacetime::AmbientPoint;
use serde::Serialize;

/// Report for one identity or inequality evaluation at one point.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub check: String,
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs` (absolute).
    pub residual: f64,
    /// Residual normalized by `max(1, largest participating term)`.
    pub rel_residual: f64,
    /// For inequalities: the amount by which the bound holds.
    pub margin: Option<f64>,
    pub pass: bool,
    /// Inequality reports on points failing their hypotheses are
    /// informational and never gate a run.
    pub asserted: bool,
    /// Named contributions to the right-hand side.
    pub terms: Vec<(String, f64)>,
}

fn term_scale(terms: &[(String, f64)], lhs: f64) -> f64 {
    terms
        .iter()
        .map(|(_, v)| v.abs())
        .fold(lhs.abs(), f64::max)
        .max(1.0)
}

/// Shared scalar ingredients.
struct Ingredients {
    m: f64,
    p: f64,
    q: f64,
    log2: f64,
    cosh: f64,
    s2: f64,
    ric_nn: f64,
    grad_h_dtt: f64,
    hess2: f64,
    h: f64,
}

fn ingredients(f: &ChartFrame) -> Ingredients {
    let p = f.rho[1] / f.rho[0];
    let q = f.rho[2] / f.rho[0];
    let nf: Vec<f64> = f.n_f.iter().map(|j| j.value()).collect();
    let ric_nn = linalg::quad(&f.ric_f_v, &nf, &nf);
    // g(grad H, dtT) = dH_j dtT^j.
    let grad_h_dtt: f64 = f.dh_v.iter().zip(&f.dtt_v).map(|(a, b)| a * b).sum();
    Ingredients {
        m: f.m as f64,
        p,
        q,
        log2: q - p * p,
        cosh: f.cosh_v,
        s2: f.sinh2_v,
        ric_nn,
        grad_h_dtt,
        hess2: f.hess_norm2_geom,
        h: f.h_v,
    }
}

/// Mixed Ricci contraction: `Ric(d_t^T, N)` from the generic ambient
/// tensor against the closed form
/// `-cosh phi { Ric^F(N_F, N_F) - (m-1) (log rho)'' sinh^2 phi }`.
///
/// The sign of the second term follows from the time-time and
/// fiber-fiber Ricci closed forms: with `d_t^T = d_t - cosh phi N`,
/// `N = N_F + cosh phi d_t` and the mixed components vanishing,
///
/// ```text
/// Ric(d_t^T, N) = -cosh { Ric(N_F, N_F) + sinh^2 Ric(d_t, d_t) }
///               = -cosh { Ric^F(N_F, N_F)
///                         + sinh^2 (Q + (m-1) P^2) - sinh^2 m Q }
///               = -cosh { Ric^F(N_F, N_F) - (m-1) (log rho)'' sinh^2 },
/// ```
///
/// which is also the form the Laplacian balance consumes. (The same
/// contraction is sometimes displayed with the opposite sign on the
/// `(m-1)` term; that variant contradicts the closed forms it is derived
/// from, and the generic curvature pipeline here confirms the minus.)
pub fn ritn_residual(f: &ChartFrame, tol: f64) -> IdentityReport {
    let i = ingredients(f);
    let dtt_amb = f.tangent_to_ambient(&f.dtt_v);
    let n_amb = f.normal_ambient();
    let lhs = linalg::quad(&f.ricci_bar_v, &dtt_amb, &n_amb);
    let terms = vec![
        ("ric_fiber".to_string(), -i.cosh * i.ric_nn),
        (
            "log_warp_second".to_string(),
            i.cosh * (i.m - 1.0) * i.log2 * i.s2,
        ),
    ];
    let rhs: f64 = terms.iter().map(|(_, v)| v).sum();
    let residual = lhs - rhs;
    let rel = residual.abs() / term_scale(&terms, lhs);
    IdentityReport {
        check: "ritn".into(),
        point: f.x.clone(),
        lhs,
        rhs,
        residual,
        rel_residual: rel,
        margin: None,
        pass: rel < tol,
        asserted: true,
        terms,
    }
}

fn identity_terms(i: &Ingredients) -> Vec<(String, f64)> {
    let c2 = i.cosh * i.cosh;
    vec![
        (
            "ric_fiber".to_string(),
            c2 * (i.ric_nn - (i.m - 1.0) * i.log2 * i.s2),
        ),
        ("grad_h".to_string(), -i.m * i.cosh * i.grad_h_dtt),
        ("hess_tau".to_string(), i.hess2),
        (
            "warp_quartic".to_string(),
            -i.p * i.p * (i.m - 1.0 + c2 * c2),
        ),
        ("mean_curv_double".to_string(), 2.0 * i.m * i.p * i.h * i.cosh),
        (
            "mean_curv_cubic".to_string(),
            -i.m * i.p * i.h * i.cosh * (c2 + 1.0),
        ),
        ("warp_second".to_string(), -i.q * c2 * i.s2),
        ("warp_first_sq".to_string(), 3.0 * i.p * i.p * c2 * i.s2),
        ("warp_first_sq_tr".to_string(), i.m * i.p * i.p * c2),
    ]
}

/// The master balance `cosh phi Lap(cosh phi) = ...` assembled term by
/// term; the left side is the jet Laplace-Beltrami of the angle field.
pub fn master_identity(f: &ChartFrame, tol: f64) -> Result<IdentityReport> {
    let i = ingredients(f);
    let lap_cosh = f.laplace_beltrami(&f.cosh)?;
    let lhs = i.cosh * lap_cosh;
    let terms = identity_terms(&i);
    let rhs: f64 = terms.iter().map(|(_, v)| v).sum();
    let residual = lhs - rhs;
    let rel = residual.abs() / term_scale(&terms, lhs);
    Ok(IdentityReport {
        check: "clap1".into(),
        point: f.x.clone(),
        lhs,
        rhs,
        residual,
        rel_residual: rel,
        margin: None,
        pass: rel < tol,
        asserted: true,
        terms,
    })
}

fn inequality_rhs_terms(i: &Ingredients) -> Vec<(String, f64)> {
    let c2 = i.cosh * i.cosh;
    vec![
        (
            "ncc_combination".to_string(),
            c2 * (i.ric_nn - i.m * i.log2 * i.s2),
        ),
        ("grad_h".to_string(), -i.m * i.cosh * i.grad_h_dtt),
        (
            "mean_curv".to_string(),
            -i.m * i.p * i.h * i.cosh * i.s2,
        ),
        (
            "warp_growth".to_string(),
            i.p * i.p * i.s2 * (i.m + i.s2),
        ),
    ]
}

/// Inequality form of the master balance. The margin must decompose as
/// `(identity residual) + |Hess tau|^2` (rearrangement term identically
/// zero; see the module docs), so a failure localizes to a dropped term.
pub fn inequality_chain(f: &ChartFrame, tol: f64, decomp_tol: f64) -> Result<IdentityReport> {
    let i = ingredients(f);
    let lap_cosh = f.laplace_beltrami(&f.cosh)?;
    let lhs = i.cosh * lap_cosh;
    let mut terms = inequality_rhs_terms(&i);
    let rhs: f64 = terms.iter().map(|(_, v)| v).sum();
    let margin = lhs - rhs;

    // Dropped nonnegative quantities, reported for localization.
    let c2 = i.cosh * i.cosh;
    let ncc_at_normal = c2 * (i.ric_nn - i.m * i.log2 * i.s2);
    terms.push(("dropped_hess_tau".to_string(), i.hess2));
    terms.push(("dropped_ncc_combination".to_string(), ncc_at_normal));

    let identity_rhs: f64 = identity_terms(&i).iter().map(|(_, v)| v).sum();
    let identity_residual = lhs - identity_rhs;
    let decomp = margin - i.hess2 - identity_residual;
    terms.push(("decomposition_residual".to_string(), decomp));

    let scale = term_scale(&terms, lhs);
    let rel_margin = margin / scale;
    let decomp_ok = decomp.abs() / scale < decomp_tol;
    let pass = rel_margin >= -tol && decomp_ok;
    Ok(IdentityReport {
        check: "clap2".into(),
        point: f.x.clone(),
        lhs,
        rhs,
        residual: margin,
        rel_residual: decomp.abs() / scale,
        margin: Some(rel_margin),
        pass,
        asserted: true,
        terms,
    })
}

/// Half-Laplacian lower bound for `sinh^2 phi` on constant-mean-curvature
/// graphs under the null convergence condition:
/// `(1/2) Lap sinh^2 phi >= -m P H cosh phi sinh^2 phi + P^2 sinh^2 phi (m + sinh^2 phi)`.
///
/// Asserted only when the hypotheses hold numerically at the point: the
/// null-convergence margin is nonnegative for the sampled fiber vectors
/// (including the normal's fiber part) and `|grad H| < cmc_tol`.
/// Otherwise the report is informational and carries the adjusted margin
/// with the gradient-of-H correction restored.
pub fn cmc_ncc_lower_bound(
    mh: &GraphHypersurface,
    f: &ChartFrame,
    tol: f64,
    cmc_tol: f64,
) -> Result<IdentityReport> {
    let i = ingredients(f);
    let lap_sinh2 = f.laplace_beltrami(&f.sinh2)?;
    let lhs = 0.5 * lap_sinh2;
    let terms_rhs = vec![
        (
            "mean_curv".to_string(),
            -i.m * i.p * i.h * i.cosh * i.s2,
        ),
        (
            "warp_growth".to_string(),
            i.p * i.p * i.s2 * (i.m + i.s2),
        ),
    ];
    let rhs: f64 = terms_rhs.iter().map(|(_, v)| v).sum();
    let margin = lhs - rhs;

    let ncc_min = ncc_min_margin(mh, f)?;
    let cmc = f.grad_h_norm < cmc_tol;
    let asserted = ncc_min >= -tol && cmc;

    let mut terms = terms_rhs;
    terms.push(("ncc_min_margin".to_string(), ncc_min));
    terms.push(("grad_h_norm".to_string(), f.grad_h_norm));
    // Restoring the gradient-of-H term gives a bound valid without the
    // constant-mean-curvature hypothesis.
    let adjusted = margin + i.m * i.cosh * i.grad_h_dtt;
    terms.push(("adjusted_margin".to_string(), adjusted));

    let scale = term_scale(&terms, lhs);
    let rel_margin = margin / scale;
    let pass = !asserted || rel_margin >= -tol;
    Ok(IdentityReport {
        check: "laps".into(),
        point: f.x.clone(),
        lhs,
        rhs,
        residual: margin,
        rel_residual: rel_margin.abs(),
        margin: Some(rel_margin),
        pass,
        asserted,
        terms,
    })
}

/// Null-convergence margin minimized over the coordinate fiber vectors
/// (normalized) and the fiber part of the normal.
pub fn ncc_min_margin(mh: &GraphHypersurface, f: &ChartFrame) -> Result<f64> {
    let host = mh.host();
    let p = AmbientPoint::new(f.tau, f.x.clone());
    let gf: Vec<Vec<f64>> = f
        .gf
        .iter()
        .map(|row| row.iter().map(|e| e.value()).collect())
        .collect();
    let mut min = f64::INFINITY;
    for k in 0..f.m {
        let mut v = vec![0.0; f.m];
        v[k] = 1.0 / gf[k][k].sqrt();
        min = min.min(host.ncc_margin(&p, &v)?);
    }
    let nf: Vec<f64> = f.n_f.iter().map(|j| j.value()).collect();
    let nf_norm2 = linalg::quad(&gf, &nf, &nf);
    if nf_norm2 > 1e-20 {
        let scale = nf_norm2.sqrt();
        let v: Vec<f64> = nf.iter().map(|c| c / scale).collect();
        min = min.min(host.ncc_margin(&p, &v)?);
    }
    Ok(min)
}

/// Bridge between the two Laplacians:
/// `(1/2) Lap sinh^2 phi = cosh phi Lap cosh phi + |grad cosh phi|^2`.
pub fn sinh_identity_bridge(f: &ChartFrame, tol: f64) -> Result<IdentityReport> {
    let lap_sinh2 = f.laplace_beltrami(&f.sinh2)?;
    let lhs = 0.5 * lap_sinh2;
    let lap_cosh = f.laplace_beltrami(&f.cosh)?;
    let grad2 = f.grad_norm2_of(&f.cosh);
    let terms = vec![
        ("cosh_lap_cosh".to_string(), f.cosh_v * lap_cosh),
        ("grad_cosh_sq".to_string(), grad2),
    ];
    let rhs: f64 = terms.iter().map(|(_, v)| v).sum();
    let residual = lhs - rhs;
    let rel = residual.abs() / term_scale(&terms, lhs);
    Ok(IdentityReport {
        check: "bridge".into(),
        point: f.x.clone(),
        lhs,
        rhs,
        residual,
        rel_residual: rel,
        margin: None,
        pass: rel < tol,
        asserted: true,
        terms,
    })
}
