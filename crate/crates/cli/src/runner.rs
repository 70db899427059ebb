//! Sample enumeration and parallel check evaluation. Points fan out over
//! a thread pool; records are collected back in sample order so output
//! is independent of scheduling.

use crate::config::{RunConfig, SampleMode};
use grwlab_core::catalog::Fixture;
use grwlab_core::checks::{run_check, CheckId};
use grwlab_core::identities::IdentityReport;
use grwlab_core::theorems::{run_theorem, HypothesisReport};
use grwlab_core::Error;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Everything a run produced, before rendering.
pub struct RunOutcome {
    pub fixtures: Vec<FixtureOutcome>,
    pub theorems: Vec<HypothesisReport>,
    pub skipped_points: usize,
    pub internal_fault: Option<String>,
}

pub struct FixtureOutcome {
    pub fixture: String,
    /// One record per (point, check), point-major, in sample order.
    pub records: Vec<IdentityReport>,
    pub aggregates: Vec<CheckAggregate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckAggregate {
    pub check: String,
    pub fixture: String,
    pub points: usize,
    pub asserted_points: usize,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub min_margin: Option<f64>,
    pub pass: bool,
}

/// Enumerate sample points for the configured box: full grid in
/// row-major axis order, or seeded uniform draws.
pub fn sample_points(cfg: &RunConfig) -> Vec<Vec<f64>> {
    match cfg.mode {
        SampleMode::Grid => {
            let axes: Vec<Vec<f64>> = cfg
                .sample_box
                .iter()
                .zip(&cfg.counts)
                .map(|(&(lo, hi), &n)| {
                    (0..n)
                        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                        .collect()
                })
                .collect();
            let mut points = vec![vec![]];
            for axis in &axes {
                let mut next = Vec::with_capacity(points.len() * axis.len());
                for p in &points {
                    for &v in axis {
                        let mut q = p.clone();
                        q.push(v);
                        next.push(q);
                    }
                }
                points = next;
            }
            points
        }
        SampleMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.counts[0])
                .map(|_| {
                    cfg.sample_box
                        .iter()
                        .map(|&(lo, hi)| rng.random_range(lo..hi))
                        .collect()
                })
                .collect()
        }
    }
}

fn eval_point(
    fixture: &Fixture,
    checks: &[CheckId],
    cfg: &RunConfig,
    x: &[f64],
) -> Result<Vec<IdentityReport>, Error> {
    let frame = fixture.hypersurface.chart_frame(x)?;
    let mut out = Vec::with_capacity(checks.len());
    for &id in checks {
        out.push(run_check(id, &fixture.hypersurface, &frame, cfg.tol(id))?);
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> RunOutcome {
    let points = sample_points(cfg);
    let mut fixtures = Vec::new();
    let mut skipped_total = 0usize;
    let mut internal_fault = None;

    for fixture in &cfg.fixtures {
        // Admission filter: points violating the spacelike margin or the
        // domains are skipped (never clamped) and counted.
        let admitted: Vec<&Vec<f64>> = points
            .iter()
            .filter(|x| fixture.hypersurface.admissible(x))
            .collect();
        skipped_total += points.len() - admitted.len();

        let results: Vec<Result<Vec<IdentityReport>, Error>> = admitted
            .par_iter()
            .map(|x| eval_point(fixture, &cfg.checks, cfg, x))
            .collect();

        let mut records = Vec::with_capacity(admitted.len() * cfg.checks.len());
        for r in results {
            match r {
                Ok(list) => records.extend(list),
                Err(Error::InternalFault(msg)) => {
                    internal_fault.get_or_insert(msg);
                }
                Err(other) => {
                    // Admission raced a boundary case; treat as skip.
                    let _ = other;
                    skipped_total += 1;
                }
            }
        }

        let aggregates = aggregate(&fixture.name, &cfg.checks, &records);
        fixtures.push(FixtureOutcome {
            fixture: fixture.name.clone(),
            records,
            aggregates,
        });
    }

    // Theorem reports run on the admitted sample of each fixture.
    let mut theorems = Vec::new();
    let t_sample = theorem_time_sample(cfg);
    let x_sample: Vec<Vec<f64>> = points.iter().take(8).cloned().collect();
    for id in &cfg.theorems {
        for fixture in &cfg.fixtures {
            let admitted: Vec<Vec<f64>> = points
                .iter()
                .filter(|x| fixture.hypersurface.admissible(x))
                .cloned()
                .collect();
            if admitted.is_empty() {
                continue;
            }
            match run_theorem(id, &fixture.hypersurface, &admitted, &t_sample, &x_sample) {
                Ok(mut report) => {
                    report.notes.push(format!("fixture: {}", fixture.name));
                    theorems.push(report);
                }
                Err(Error::InternalFault(msg)) => {
                    internal_fault.get_or_insert(msg);
                }
                Err(other) => {
                    internal_fault.get_or_insert(format!("theorem {id} failed: {other}"));
                }
            }
        }
    }

    RunOutcome {
        fixtures,
        theorems,
        skipped_points: skipped_total,
        internal_fault,
    }
}

fn theorem_time_sample(cfg: &RunConfig) -> Vec<f64> {
    let (lo, hi) = cfg.entry.t_range;
    (0..9).map(|k| lo + (hi - lo) * k as f64 / 8.0).collect()
}

fn aggregate(fixture: &str, checks: &[CheckId], records: &[IdentityReport]) -> Vec<CheckAggregate> {
    checks
        .iter()
        .map(|id| {
            let rows: Vec<&IdentityReport> =
                records.iter().filter(|r| r.check == id.name()).collect();
            let asserted: Vec<&&IdentityReport> = rows.iter().filter(|r| r.asserted).collect();
            CheckAggregate {
                check: id.name().to_string(),
                fixture: fixture.to_string(),
                points: rows.len(),
                asserted_points: asserted.len(),
                max_abs_residual: rows
                    .iter()
                    .map(|r| r.residual.abs())
                    .fold(0.0, f64::max),
                max_rel_residual: rows
                    .iter()
                    .map(|r| r.rel_residual)
                    .fold(0.0, f64::max),
                min_margin: rows
                    .iter()
                    .filter_map(|r| r.margin)
                    .fold(None, |acc: Option<f64>, m| {
                        Some(acc.map_or(m, |a| a.min(m)))
                    }),
                pass: asserted.iter().all(|r| r.pass),
            }
        })
        .collect()
}
