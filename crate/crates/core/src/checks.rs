//! The published registry of per-point checks addressable from a run
//! configuration, with default tolerances pinned here, and the dispatch
//! that evaluates one check at one point of a hypersurface.

use crate::error::{Error, Result};
use crate::hypersurface::{self, ChartFrame, GraphHypersurface};
use crate::identities::{self, IdentityReport};
use crate::spacetime::AmbientPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    Ritn,
    Clap1,
    Clap2,
    Laps,
    Bridge,
    Codazzi,
    Gch,
    Gradcosh,
    Kt,
    Nt,
    He2,
    PartSinh,
    Conexion,
    Oneill,
    Ncc,
}

impl CheckId {
    pub const ALL: &'static [CheckId] = &[
        CheckId::Ritn,
        CheckId::Clap1,
        CheckId::Clap2,
        CheckId::Laps,
        CheckId::Bridge,
        CheckId::Codazzi,
        CheckId::Gch,
        CheckId::Gradcosh,
        CheckId::Kt,
        CheckId::Nt,
        CheckId::He2,
        CheckId::PartSinh,
        CheckId::Conexion,
        CheckId::Oneill,
        CheckId::Ncc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Ritn => "ritn",
            CheckId::Clap1 => "clap1",
            CheckId::Clap2 => "clap2",
            CheckId::Laps => "laps",
            CheckId::Bridge => "bridge",
            CheckId::Codazzi => "codazzi",
            CheckId::Gch => "gch",
            CheckId::Gradcosh => "gradcosh",
            CheckId::Kt => "KT",
            CheckId::Nt => "nt",
            CheckId::He2 => "he2",
            CheckId::PartSinh => "part-sinh",
            CheckId::Conexion => "conexion",
            CheckId::Oneill => "oneill",
            CheckId::Ncc => "ncc",
        }
    }

    pub fn from_name(name: &str) -> Result<CheckId> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == name)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown check `{name}`; registry: {}",
                    registry_names().join(", ")
                ))
            })
    }

    /// Default pass tolerance (normalized residual, or margin floor for
    /// inequality checks).
    pub fn default_tol(self) -> f64 {
        match self {
            CheckId::Conexion => 1e-9,
            CheckId::PartSinh => 1e-9,
            CheckId::Oneill => 1e-8,
            CheckId::Ncc => 1e-9,
            _ => 1e-6,
        }
    }

    /// Whether this check is an inequality (pass means margin above
    /// `-tol`) rather than an identity (pass means |residual| below tol).
    pub fn is_margin_check(self) -> bool {
        matches!(self, CheckId::Clap2 | CheckId::Laps | CheckId::Ncc)
    }
}

pub fn registry_names() -> Vec<&'static str> {
    CheckId::ALL.iter().map(|c| c.name()).collect()
}

/// Decomposition tolerance for the inequality chain (margin must equal
/// identity residual plus the Hessian drop to this accuracy).
pub const DECOMPOSITION_TOL: f64 = 1e-8;

fn max_over_directions(
    check: &str,
    frame: &ChartFrame,
    tol: f64,
    mut eval: impl FnMut(usize) -> f64,
) -> IdentityReport {
    let m = frame.m;
    let mut worst = 0.0f64;
    let mut worst_dir = 0usize;
    for i in 0..m {
        let r = eval(i);
        if r > worst {
            worst = r;
            worst_dir = i;
        }
    }
    IdentityReport {
        check: check.to_string(),
        point: frame.x.clone(),
        lhs: worst,
        rhs: 0.0,
        residual: worst,
        rel_residual: worst,
        margin: None,
        pass: worst < tol,
        asserted: true,
        terms: vec![(format!("worst_direction_{worst_dir}"), worst)],
    }
}

/// Evaluate one registry check at one admitted point.
pub fn run_check(
    id: CheckId,
    mh: &GraphHypersurface,
    frame: &ChartFrame,
    tol: f64,
) -> Result<IdentityReport> {
    let host = mh.host();
    match id {
        CheckId::Ritn => Ok(identities::ritn_residual(frame, tol)),
        CheckId::Clap1 => identities::master_identity(frame, tol),
        CheckId::Clap2 => identities::inequality_chain(frame, tol, DECOMPOSITION_TOL),
        CheckId::Laps => {
            identities::cmc_ncc_lower_bound(mh, frame, tol, crate::theorems::CMC_TOL)
        }
        CheckId::Bridge => identities::sinh_identity_bridge(frame, tol),
        CheckId::Codazzi => {
            let m = frame.m;
            let mut worst = 0.0f64;
            let mut which = (0usize, 0usize, 0usize);
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let r = hypersurface::codazzi_residual(frame, i, j, k);
                        if r > worst {
                            worst = r;
                            which = (i, j, k);
                        }
                    }
                }
            }
            Ok(IdentityReport {
                check: "codazzi".into(),
                point: frame.x.clone(),
                lhs: worst,
                rhs: 0.0,
                residual: worst,
                rel_residual: worst,
                margin: None,
                pass: worst < tol,
                asserted: true,
                terms: vec![(format!("worst_at_{:?}", which), worst)],
            })
        }
        CheckId::Gch => {
            let r = hypersurface::grad_cosh_residual(frame);
            Ok(scalar_report("gch", frame, r, tol))
        }
        CheckId::Gradcosh => {
            let r = hypersurface::grad_kn_residual(frame)?;
            Ok(scalar_report("gradcosh", frame, r, tol))
        }
        CheckId::Kt => Ok(max_over_directions("KT", frame, tol, |i| {
            hypersurface::nabla_kt_residual(frame, i)
        })),
        CheckId::Nt => Ok(max_over_directions("nt", frame, tol, |i| {
            hypersurface::nabla_dtt_residual(frame, i)
        })),
        CheckId::He2 => {
            let r = hypersurface::hess_norm_residual(frame);
            Ok(scalar_report("he2", frame, r, tol))
        }
        CheckId::PartSinh => {
            let r = hypersurface::grad_tau_residual(frame);
            Ok(scalar_report("part-sinh", frame, r, tol))
        }
        CheckId::Conexion => {
            let p = AmbientPoint::new(frame.tau, frame.x.clone());
            let mut worst = 0.0f64;
            for dir in 0..host.dim() {
                worst = worst.max(host.conformal_residual(&p, dir)?);
            }
            Ok(scalar_report("conexion", frame, worst, tol))
        }
        CheckId::Oneill => {
            let p = AmbientPoint::new(frame.tau, frame.x.clone());
            let mut worst = 0.0f64;
            for k in 0..frame.m {
                let mut v = vec![0.0; frame.m];
                v[k] = 1.0;
                let (a, b) = host.oneill_residuals(&p, &v)?;
                worst = worst.max(a.abs()).max(b.abs());
            }
            Ok(scalar_report("oneill", frame, worst, tol))
        }
        CheckId::Ncc => {
            let min = identities::ncc_min_margin(mh, frame)?;
            Ok(IdentityReport {
                check: "ncc".into(),
                point: frame.x.clone(),
                lhs: min,
                rhs: 0.0,
                residual: min,
                rel_residual: min.abs(),
                margin: Some(min),
                pass: min >= -tol,
                asserted: true,
                terms: vec![("min_margin".into(), min)],
            })
        }
    }
}

fn scalar_report(name: &str, frame: &ChartFrame, residual: f64, tol: f64) -> IdentityReport {
    IdentityReport {
        check: name.to_string(),
        point: frame.x.clone(),
        lhs: residual,
        rhs: 0.0,
        residual,
        rel_residual: residual,
        margin: None,
        pass: residual < tol,
        asserted: true,
        terms: vec![],
    }
}
