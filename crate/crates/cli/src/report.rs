//! Report rendering: a JSON summary for CI gates and an optional
//! per-point CSV for plotting. The CSV is written byte-deterministically:
//! fixed row order (fixture, then sample order, then check order) and
//! shortest-roundtrip float text.

use crate::config::{ConfigEcho, RunConfig};
use crate::runner::{CheckAggregate, RunOutcome};
use grwlab_core::theorems::HypothesisReport;
use serde::Serialize;
use std::io::Write;

#[derive(Serialize)]
pub struct RunReport {
    pub engine_version: String,
    pub config: ConfigEcho,
    pub checks: Vec<CheckAggregate>,
    pub theorems: Vec<HypothesisReport>,
    pub points_evaluated: usize,
    pub records_written: usize,
    pub skipped_points: usize,
    pub overall_pass: bool,
    pub internal_fault: Option<String>,
    pub wall_clock_seconds: f64,
}

/// Shortest-roundtrip float text, scientific notation outside a readable
/// magnitude window. `parse::<f64>()` of the output reproduces the value
/// exactly.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn build_report(
    cfg: &RunConfig,
    outcome: &RunOutcome,
    wall_clock_seconds: f64,
) -> RunReport {
    let checks: Vec<CheckAggregate> = outcome
        .fixtures
        .iter()
        .flat_map(|f| f.aggregates.iter().cloned())
        .collect();
    let records_written: usize = outcome.fixtures.iter().map(|f| f.records.len()).sum();
    let points_evaluated: usize = if cfg.checks.is_empty() {
        0
    } else {
        records_written / cfg.checks.len()
    };
    let overall_pass = outcome.internal_fault.is_none() && checks.iter().all(|c| c.pass);
    RunReport {
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.echo.clone(),
        checks,
        theorems: outcome.theorems.clone(),
        points_evaluated,
        records_written,
        skipped_points: outcome.skipped_points,
        overall_pass,
        internal_fault: outcome.internal_fault.clone(),
        wall_clock_seconds,
    }
}

/// `points.csv`: one row per (point, check), UTF-8, LF line endings.
/// The `check` column carries `check@fixture` so rows stay attributable
/// with the fixed column set.
pub fn write_points_csv(out: &mut dyn Write, outcome: &RunOutcome) -> std::io::Result<()> {
    out.write_all(b"check,point_coords,lhs,rhs,residual,margin,pass\n")?;
    for fixture in &outcome.fixtures {
        for r in &fixture.records {
            let coords: Vec<String> = r.point.iter().map(|&c| fmt_float(c)).collect();
            let margin = r.margin.map(fmt_float).unwrap_or_default();
            writeln!(
                out,
                "{}@{},{},{},{},{},{},{}",
                r.check,
                fixture.fixture,
                coords.join(";"),
                fmt_float(r.lhs),
                fmt_float(r.rhs),
                fmt_float(r.residual),
                margin,
                r.pass
            )?;
        }
    }
    Ok(())
}
