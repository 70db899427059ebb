//! Hypothesis and conclusion checkers for the uniqueness/non-existence
//! theory of constant-mean-curvature spacelike hypersurfaces.
//!
//! Pointwise conditions are evaluated on the given sample and reported
//! with witnesses; genuinely global conditions (volume growth of geodesic
//! balls, integrability of the angle, existence of an exhaustion
//! function) cannot be decided from finitely many points and are always
//! reported as not checkable at desk scale, never silently assumed.

use crate::error::{Error, Result};
use crate::hypersurface::{ChartFrame, GraphHypersurface};
use crate::spacetime::Spacetime;
use serde::Serialize;

/// Sign-check tolerance for products like `H rho'(tau)`: both factors are
/// order one on the model catalog.
pub const SIGN_TOL: f64 = 1e-9;

/// Numerical constant-mean-curvature gate: `|grad H|` below this at every
/// sampled point.
pub const CMC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub enum ConditionStatus {
    HoldsOnSample,
    FailsAt { point: Vec<f64>, value: f64 },
    NotCheckable,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub name: String,
    pub status: ConditionStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub enum Verdict {
    /// Every decidable condition holds on the sample.
    AllPointwiseHold,
    /// At least one decidable condition fails, with a witness.
    SomeConditionFails,
    /// Nothing decidable either way (e.g. all conditions global).
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub theorem: String,
    pub conditions: Vec<ConditionReport>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    fn conclude(theorem: &str, conditions: Vec<ConditionReport>, notes: Vec<String>) -> Self {
        let any_fail = conditions
            .iter()
            .any(|c| matches!(c.status, ConditionStatus::FailsAt { .. }));
        let any_decided = conditions
            .iter()
            .any(|c| c.status != ConditionStatus::NotCheckable);
        let verdict = if any_fail {
            Verdict::SomeConditionFails
        } else if any_decided {
            Verdict::AllPointwiseHold
        } else {
            Verdict::Undetermined
        };
        HypothesisReport {
            theorem: theorem.to_string(),
            conditions,
            verdict,
            notes,
        }
    }
}

fn frames_for(mh: &GraphHypersurface, sample: &[Vec<f64>]) -> Result<Vec<ChartFrame>> {
    if sample.is_empty() {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    sample.iter().map(|x| mh.chart_frame(x)).collect()
}

fn not_checkable(name: &str, detail: &str) -> ConditionReport {
    ConditionReport {
        name: name.to_string(),
        status: ConditionStatus::NotCheckable,
        detail: detail.to_string(),
    }
}

/// Sign condition `H rho'(tau) <= 0` over the sample, plus the sampled
/// minimum of `rho'^2/rho^2` as an infimum estimate (labeled as such —
/// no extrapolation), plus the volume-growth condition marked global.
pub fn nonexistence_hypotheses(
    mh: &GraphHypersurface,
    sample: &[Vec<f64>],
) -> Result<HypothesisReport> {
    let frames = frames_for(mh, sample)?;
    let mut conditions = Vec::new();

    let mut sign_status = ConditionStatus::HoldsOnSample;
    for f in &frames {
        let product = f.h_v * f.rho[1];
        if product > SIGN_TOL {
            sign_status = ConditionStatus::FailsAt {
                point: f.x.clone(),
                value: product,
            };
            break;
        }
    }
    conditions.push(ConditionReport {
        name: "H * rho'(tau) <= 0".into(),
        status: sign_status,
        detail: format!("pointwise product, tolerance {SIGN_TOL}"),
    });

    let inf_estimate = frames
        .iter()
        .map(|f| (f.rho[1] / f.rho[0]).powi(2))
        .fold(f64::INFINITY, f64::min);
    let inf_status = if inf_estimate > SIGN_TOL {
        ConditionStatus::HoldsOnSample
    } else {
        let witness = frames
            .iter()
            .min_by(|a, b| {
                (a.rho[1] / a.rho[0])
                    .powi(2)
                    .total_cmp(&(b.rho[1] / b.rho[0]).powi(2))
            })
            .expect("nonempty");
        ConditionStatus::FailsAt {
            point: witness.x.clone(),
            value: inf_estimate,
        }
    };
    conditions.push(ConditionReport {
        name: "inf rho'^2/rho^2 > 0".into(),
        status: inf_status,
        detail: format!("sample minimum {inf_estimate:.6e} over {} points (estimate only)", frames.len()),
    });

    conditions.push(not_checkable(
        "volume growth of geodesic balls",
        "global asymptotic condition; not checkable at desk scale",
    ));

    Ok(HypothesisReport::conclude("teo1", conditions, vec![]))
}

/// The angle bound `m (m - 2)` for `sinh^2 phi` under the two-sided mean
/// curvature gate.
pub fn thm2_bound(m: usize) -> f64 {
    (m as i64 * (m as i64 - 2)) as f64
}

/// Check the angle bound where its hypotheses hold: at points passing the
/// gate `0 < H <= rho'/rho` (or the mirrored negative gate), with the
/// constant-mean-curvature and null-convergence hypotheses verified
/// numerically, assert `sinh^2 phi <= m(m-2)`. Bound violations at gated
/// points are evidence against the hypothesis set and are reported with
/// witnesses.
pub fn angle_bound_check(mh: &GraphHypersurface, sample: &[Vec<f64>]) -> Result<HypothesisReport> {
    let frames = frames_for(mh, sample)?;
    let m = mh.m();
    let bound = thm2_bound(m);
    let mut conditions = Vec::new();
    let mut notes = Vec::new();

    let cmc = frames.iter().all(|f| f.grad_h_norm < CMC_TOL);
    let mut gated_positive = 0usize;
    let mut gated_negative = 0usize;
    let mut violation: Option<(Vec<f64>, f64)> = None;
    for f in &frames {
        let p = f.rho[1] / f.rho[0];
        let pos_gate = f.h_v > SIGN_TOL && f.h_v <= p + SIGN_TOL;
        let neg_gate = f.h_v < -SIGN_TOL && p - SIGN_TOL <= f.h_v;
        if !cmc || !(pos_gate || neg_gate) {
            continue;
        }
        let ncc = crate::identities::ncc_min_margin(mh, f)?;
        if ncc < -SIGN_TOL {
            continue;
        }
        if pos_gate {
            gated_positive += 1;
        } else {
            gated_negative += 1;
        }
        if f.sinh2_v > bound + 1e-9 && violation.is_none() {
            violation = Some((f.x.clone(), f.sinh2_v));
        }
    }

    let status = match violation {
        Some((point, value)) => ConditionStatus::FailsAt { point, value },
        None if gated_positive + gated_negative > 0 => ConditionStatus::HoldsOnSample,
        None => ConditionStatus::NotCheckable,
    };
    conditions.push(ConditionReport {
        name: format!("sinh^2 phi <= m(m-2) = {bound}"),
        status,
        detail: format!(
            "{gated_positive} points gated by 0 < H <= rho'/rho, {gated_negative} by the mirrored negative gate"
        ),
    });
    if gated_positive + gated_negative == 0 {
        notes.push("no sampled point satisfies the mean-curvature gates; bound holds vacuously".into());
    }
    if !cmc {
        notes.push("mean curvature not numerically constant on the sample; gates not applied".into());
    }
    conditions.push(not_checkable(
        "volume growth of geodesic balls",
        "global asymptotic condition",
    ));
    conditions.push(not_checkable("completeness of the hypersurface", "global"));

    Ok(HypothesisReport::conclude("teo2", conditions, notes))
}

/// Log-concavity of the warping function and non-negative fiber sectional
/// curvature over samples, plus the pointwise hypersurface conditions
/// when a graph is supplied.
pub fn log_concavity_hypotheses(
    host: &Spacetime,
    t_sample: &[f64],
    x_sample: &[Vec<f64>],
    graph: Option<(&GraphHypersurface, &[Vec<f64>])>,
) -> Result<HypothesisReport> {
    if t_sample.is_empty() || x_sample.is_empty() {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let mut conditions = Vec::new();

    let mut log_status = ConditionStatus::HoldsOnSample;
    for &t in t_sample {
        let l2 = host.warp().log_second(t)?;
        if l2 > SIGN_TOL {
            log_status = ConditionStatus::FailsAt {
                point: vec![t],
                value: l2,
            };
            break;
        }
    }
    conditions.push(ConditionReport {
        name: "(log rho)'' <= 0".into(),
        status: log_status,
        detail: format!("checked at {} interval points", t_sample.len()),
    });

    let mut sec_status = ConditionStatus::HoldsOnSample;
    for (k, x) in x_sample.iter().enumerate() {
        let min = host
            .fiber()
            .sectional_min_sample(x, 32, 0x5ec7 + k as u64)?;
        if min < -1e-6 {
            sec_status = ConditionStatus::FailsAt {
                point: x.clone(),
                value: min,
            };
            break;
        }
    }
    conditions.push(ConditionReport {
        name: "fiber sectional curvature >= 0".into(),
        status: sec_status,
        detail: format!(
            "minimum over 32 seeded planes at {} chart points",
            x_sample.len()
        ),
    });

    let mut notes = vec![];
    if let Some((mh, sample)) = graph {
        let inner = nonexistence_hypotheses(mh, sample)?;
        conditions.extend(inner.conditions);
    } else {
        notes.push("no hypersurface supplied; spacetime hypotheses only".into());
    }

    Ok(HypothesisReport::conclude("teoale", conditions, notes))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub enum SliceVerdict {
    IsSlice { t0: f64 },
    NotSlice { witness: Vec<f64>, sinh2: f64 },
}

/// Classify a sampled hypersurface as a slice via the two equivalent
/// criteria: vanishing hyperbolic angle, and constancy of the height.
/// The criteria must agree; disagreement is an engine fault.
pub fn slice_classifier(mh: &GraphHypersurface, sample: &[Vec<f64>]) -> Result<SliceVerdict> {
    let frames = frames_for(mh, sample)?;
    let tol = 1e-10;
    let max_sinh2 = frames.iter().map(|f| f.sinh2_v).fold(0.0, f64::max);
    let mean_tau: f64 = frames.iter().map(|f| f.tau).sum::<f64>() / frames.len() as f64;
    let max_tau_dev = frames
        .iter()
        .map(|f| (f.tau - mean_tau).abs())
        .fold(0.0, f64::max);
    let angle_flat = max_sinh2 < tol;
    let tau_const = max_tau_dev < tol;
    if angle_flat != tau_const {
        return Err(Error::InternalFault(format!(
            "slice criteria disagree: max sinh^2 = {max_sinh2:e}, max |tau - mean| = {max_tau_dev:e}"
        )));
    }
    if angle_flat {
        Ok(SliceVerdict::IsSlice { t0: mean_tau })
    } else {
        let witness = frames
            .iter()
            .max_by(|a, b| a.sinh2_v.total_cmp(&b.sinh2_v))
            .expect("nonempty");
        Ok(SliceVerdict::NotSlice {
            witness: witness.x.clone(),
            sinh2: witness.sinh2_v,
        })
    }
}

/// Conclusion form shared by the integrability theorems: the angle is
/// supported where the warping function is critical, i.e.
/// `rho'(tau) sinh^2 phi = 0`. Reports the sampled maximum of the
/// product with a witness when it is substantially positive.
pub fn support_conclusion(mh: &GraphHypersurface, sample: &[Vec<f64>]) -> Result<HypothesisReport> {
    let frames = frames_for(mh, sample)?;
    let tol = 1e-12;
    let (worst, max_val) = frames
        .iter()
        .map(|f| (f, (f.rho[1] * f.sinh2_v).abs()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    let status = if max_val < tol {
        ConditionStatus::HoldsOnSample
    } else {
        ConditionStatus::FailsAt {
            point: worst.x.clone(),
            value: worst.rho[1] * worst.sinh2_v,
        }
    };
    let conditions = vec![ConditionReport {
        name: "rho'(tau) sinh^2 phi = 0".into(),
        status,
        detail: format!("max |rho' sinh^2 phi| = {max_val:.6e} over {} points", frames.len()),
    }];
    Ok(HypothesisReport::conclude("support", conditions, vec![]))
}

/// Boundedness away from future infinity: reports the sampled maximum of
/// the height (an estimate only — the condition is `sup tau < +inf`), and
/// flags an unbounded trend when the outer half of the sample reaches
/// strictly higher than the inner half.
pub fn bounded_future_check(
    mh: &GraphHypersurface,
    sample: &[Vec<f64>],
) -> Result<HypothesisReport> {
    let frames = frames_for(mh, sample)?;
    let max_tau = frames.iter().map(|f| f.tau).fold(f64::NEG_INFINITY, f64::max);
    let mut by_radius: Vec<(f64, f64)> = frames
        .iter()
        .map(|f| {
            let r2: f64 = f.x.iter().map(|c| c * c).sum();
            (r2, f.tau)
        })
        .collect();
    by_radius.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half = by_radius.len() / 2;
    let inner_max = by_radius[..half.max(1)]
        .iter()
        .map(|&(_, t)| t)
        .fold(f64::NEG_INFINITY, f64::max);
    let outer_max = by_radius[half..]
        .iter()
        .map(|&(_, t)| t)
        .fold(f64::NEG_INFINITY, f64::max);
    let trend_up = outer_max > inner_max + 1e-9;

    let mut notes = vec![format!("max tau over sample: {max_tau}")];
    if trend_up {
        notes.push(format!(
            "unbounded-trend: outer-half max {outer_max} exceeds inner-half max {inner_max}"
        ));
    }
    let conditions = vec![not_checkable(
        "sup tau < +infinity",
        "global condition; sampled maximum reported in notes (estimate only)",
    )];
    Ok(HypothesisReport::conclude("bounded_future", conditions, notes))
}

/// All theorem identifiers addressable from a run configuration.
pub const THEOREM_IDS: &[&str] = &[
    "teo1", "teo2", "cordim2", "teodiv", "teorib", "teo3", "teoale", "ste", "eds", "rad",
];

/// Dispatch a theorem check by identifier. `t_sample`/`x_sample` feed the
/// spacetime-level hypotheses; `sample` feeds the hypersurface-level ones.
pub fn run_theorem(
    id: &str,
    mh: &GraphHypersurface,
    sample: &[Vec<f64>],
    t_sample: &[f64],
    x_sample: &[Vec<f64>],
) -> Result<HypothesisReport> {
    let host = mh.host();
    match id {
        "teo1" => {
            let mut r = nonexistence_hypotheses(mh, sample)?;
            let ncc = ncc_over_sample(mh, sample)?;
            r.conditions.insert(0, ncc);
            Ok(r)
        }
        "teo2" => {
            let mut r = angle_bound_check(mh, sample)?;
            let ncc = ncc_over_sample(mh, sample)?;
            r.conditions.insert(0, ncc);
            Ok(r)
        }
        "cordim2" => {
            // Dimension-3 specialization: the bound forces slices.
            let mut r = angle_bound_check(mh, sample)?;
            r.theorem = "cordim2".into();
            if mh.m() == 2 {
                match slice_classifier(mh, sample)? {
                    SliceVerdict::IsSlice { t0 } => {
                        r.notes.push(format!("hypersurface is a slice at t0 = {t0}"))
                    }
                    SliceVerdict::NotSlice { witness, sinh2 } => r.notes.push(format!(
                        "not a slice: sinh^2 phi = {sinh2:e} at {witness:?} (hypotheses must fail somewhere)"
                    )),
                }
            } else {
                r.notes.push(format!(
                    "fiber dimension {} != 2; the slice conclusion does not specialize",
                    mh.m()
                ));
            }
            Ok(r)
        }
        "teodiv" => {
            let mut r = nonexistence_hypotheses(mh, sample)?;
            r.theorem = "teodiv".into();
            r.conditions.insert(0, ncc_over_sample(mh, sample)?);
            r.conditions.push(not_checkable(
                "exhaustion function with controlled Laplacian",
                "existence assumption; not checkable at desk scale",
            ));
            r.conditions.push(not_checkable(
                "sinh phi square-integrable",
                "global integrability; not checkable at desk scale",
            ));
            // Remove the infimum condition: this result does not assume it.
            r.conditions.retain(|c| !c.name.starts_with("inf rho'"));
            let support = support_conclusion(mh, sample)?;
            r.conditions.extend(support.conditions);
            Ok(r)
        }
        "teorib" | "ste" | "eds" | "rad" => {
            let mut r = log_concavity_hypotheses(host, t_sample, x_sample, Some((mh, sample)))?;
            r.theorem = id.into();
            if id == "teorib" {
                r.conditions.push(not_checkable(
                    "sinh phi square-integrable",
                    "global integrability; not checkable at desk scale",
                ));
                let support = support_conclusion(mh, sample)?;
                r.conditions.extend(support.conditions);
            }
            if id == "eds" || id == "rad" {
                let bounded = bounded_future_check(mh, sample)?;
                r.conditions.extend(bounded.conditions);
                r.notes.extend(bounded.notes);
            }
            Ok(r)
        }
        "teo3" => {
            let mut r = nonexistence_hypotheses(mh, sample)?;
            r.theorem = "teo3".into();
            r.conditions.insert(0, ncc_over_sample(mh, sample)?);
            r.conditions.retain(|c| !c.name.starts_with("inf rho'"));
            r.conditions.push(not_checkable(
                "sinh^2 phi in L^q for some q > 2",
                "global integrability; not checkable at desk scale",
            ));
            let support = support_conclusion(mh, sample)?;
            r.conditions.extend(support.conditions);
            Ok(r)
        }
        "teoale" => {
            let mut r = log_concavity_hypotheses(host, t_sample, x_sample, Some((mh, sample)))?;
            r.theorem = "teoale".into();
            Ok(r)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown theorem id `{other}`; known ids: {}",
            THEOREM_IDS.join(", ")
        ))),
    }
}

fn ncc_over_sample(mh: &GraphHypersurface, sample: &[Vec<f64>]) -> Result<ConditionReport> {
    let frames = frames_for(mh, sample)?;
    let mut min = f64::INFINITY;
    let mut witness = frames[0].x.clone();
    for f in &frames {
        let v = crate::identities::ncc_min_margin(mh, f)?;
        if v < min {
            min = v;
            witness = f.x.clone();
        }
    }
    let status = if min >= -SIGN_TOL {
        ConditionStatus::HoldsOnSample
    } else {
        ConditionStatus::FailsAt {
            point: witness,
            value: min,
        }
    };
    Ok(ConditionReport {
        name: "null convergence condition".into(),
        status,
        detail: format!("minimum margin {min:.6e} over sampled fiber vectors"),
    })
}
