//! `grwlab`: batch verification runs over warped-product spacetimes and
//! their spacelike graph hypersurfaces.
//!
//! Exit codes: 0 every asserted check passed; 1 at least one check
//! failed; 2 configuration error; 3 internal consistency fault.

// NaN-rejecting bound checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod report;
mod runner;

use clap::{Parser, Subcommand};
use config::Overrides;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "grwlab", version, about = "Verification runs for spacelike hypersurface geometry in warped-product spacetimes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks described by a TOML config file.
    Run {
        /// Path to the run configuration.
        config: PathBuf,
        /// Output directory for report.json / points.csv.
        #[arg(long)]
        out: Option<String>,
        /// Sampling seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance overrides, NAME=VALUE (repeatable).
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tolerances: Vec<String>,
        /// Comma-separated check list overriding the config.
        #[arg(long, value_name = "LIST")]
        checks: Option<String>,
        /// Worker threads for point evaluation.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            tolerances,
            checks,
            jobs,
        } => run_command(config, out, seed, tolerances, checks, jobs),
    }
}

fn run_command(
    config_path: PathBuf,
    out: Option<String>,
    seed: Option<u64>,
    tolerance_args: Vec<String>,
    checks: Option<String>,
    jobs: Option<usize>,
) -> ExitCode {
    let mut overrides = Overrides {
        out_dir: out,
        seed,
        ..Overrides::default()
    };
    for spec in &tolerance_args {
        let Some((name, value)) = spec.split_once('=') else {
            eprintln!("config error: --tol expects NAME=VALUE, got `{spec}`");
            return ExitCode::from(EXIT_CONFIG);
        };
        let Ok(value) = value.parse::<f64>() else {
            eprintln!("config error: --tol {name}: `{value}` is not a number");
            return ExitCode::from(EXIT_CONFIG);
        };
        overrides.tolerances.push((name.to_string(), value));
    }
    if let Some(list) = checks {
        overrides.checks = Some(list.split(',').map(|s| s.trim().to_string()).collect());
    }

    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("config error: cannot read {}: {e}", config_path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cfg = match config::parse_config(&text, &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = jobs {
            builder = builder.num_threads(n);
        }
        match builder.build() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("config error: --jobs: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        }
    };

    let start = Instant::now();
    // A panic anywhere in the evaluation is an engine fault, not a
    // mathematical failure; report it as such.
    let outcome =
        match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            pool.install(|| runner::run(&cfg))
        })) {
            Ok(o) => o,
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "panic during evaluation".to_string());
                eprintln!("internal fault: {msg}");
                return ExitCode::from(EXIT_INTERNAL);
            }
        };
    let wall = start.elapsed().as_secs_f64();

    let run_report = report::build_report(&cfg, &outcome, wall);

    if let Err(e) = std::fs::create_dir_all(&cfg.out_dir) {
        eprintln!("config error: cannot create output dir {}: {e}", cfg.out_dir);
        return ExitCode::from(EXIT_CONFIG);
    }
    let report_path = format!("{}/report.json", cfg.out_dir);
    let json = serde_json::to_string_pretty(&run_report).expect("report serializes");
    if let Err(e) = std::fs::write(&report_path, json) {
        eprintln!("config error: cannot write {report_path}: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    if cfg.points_csv {
        let csv_path = format!("{}/points.csv", cfg.out_dir);
        let mut buf = Vec::new();
        report::write_points_csv(&mut buf, &outcome).expect("in-memory write");
        if let Err(e) = std::fs::write(&csv_path, buf) {
            eprintln!("config error: cannot write {csv_path}: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }

    for agg in &run_report.checks {
        let status = if agg.pass { "pass" } else { "FAIL" };
        println!(
            "{status} {:>9} on {:<16} points {:>5} max|res| {:>12} min margin {}",
            agg.check,
            agg.fixture,
            agg.points,
            report::fmt_float(agg.max_abs_residual),
            agg.min_margin
                .map(report::fmt_float)
                .unwrap_or_else(|| "-".into()),
        );
    }
    println!(
        "{} checks on {} fixtures, {} records, {} skipped points, {:.2}s",
        cfg.checks.len(),
        cfg.fixtures.len(),
        run_report.records_written,
        run_report.skipped_points,
        wall
    );

    if let Some(msg) = &run_report.internal_fault {
        eprintln!("internal fault: {msg}");
        return ExitCode::from(EXIT_INTERNAL);
    }
    if run_report.overall_pass {
        println!("overall: pass");
        ExitCode::SUCCESS
    } else {
        println!("overall: FAIL");
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
