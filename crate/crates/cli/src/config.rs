//! Run configuration: the TOML schema, validation, and resolution into
//! executable form. Every validation failure names the offending field.

use grwlab_core::catalog::{self, CatalogEntry, Fixture};
use grwlab_core::checks::CheckId;
use grwlab_core::expr::parse_expr;
use grwlab_core::fiber::FiberMetric;
use grwlab_core::spacetime::{Spacetime, WarpFunction};
use grwlab_core::theorems::THEOREM_IDS;
use grwlab_core::GraphHypersurface;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A configuration problem; always carries the field it concerns.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(field: &str, msg: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("{field}: {msg}"))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub spacetime: RawSpacetime,
    #[serde(default)]
    pub hypersurface: Vec<RawHypersurface>,
    pub sampling: RawSampling,
    #[serde(default)]
    pub checks: Option<RawChecks>,
    #[serde(default)]
    pub theorems: Option<RawTheorems>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpacetime {
    pub name: String,
    pub dimension: usize,
    /// Expansion constant for the radiation model.
    pub a: Option<f64>,
    /// Custom warping function in `t`.
    pub rho: Option<String>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub fiber: Option<RawFiber>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFiber {
    pub kind: String,
    pub components: Option<Vec<Vec<String>>>,
    pub domain: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHypersurface {
    /// Fixture keyword: all | slices | hyperplane | hyperboloid |
    /// random_graphs.
    pub fixture: Option<String>,
    /// Explicit graph expression in `x1..xm`.
    pub u: Option<String>,
    pub name: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSampling {
    pub mode: String,
    #[serde(rename = "box")]
    pub sample_box: Option<Vec<[f64; 2]>>,
    pub counts: Vec<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChecks {
    pub names: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTheorems {
    pub names: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub dir: Option<String>,
    pub points_csv: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SampleMode {
    Grid,
    Random,
}

/// Fully validated and resolved run configuration.
pub struct RunConfig {
    pub entry: CatalogEntry,
    pub fixtures: Vec<Fixture>,
    pub mode: SampleMode,
    pub sample_box: Vec<(f64, f64)>,
    pub counts: Vec<usize>,
    pub seed: u64,
    pub checks: Vec<CheckId>,
    pub theorems: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub out_dir: String,
    pub points_csv: bool,
    /// Echo of all resolved values for the report.
    pub echo: ConfigEcho,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub spacetime: String,
    pub rho: String,
    pub interval: (f64, f64),
    pub dimension: usize,
    pub fiber: String,
    pub fixtures: Vec<String>,
    pub mode: SampleMode,
    pub sample_box: Vec<(f64, f64)>,
    pub counts: Vec<usize>,
    pub seed: u64,
    pub checks: Vec<String>,
    pub theorems: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub out_dir: Option<String>,
    pub seed: Option<u64>,
    pub tolerances: Vec<(String, f64)>,
    pub checks: Option<Vec<String>>,
}

pub fn parse_config(text: &str, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError(format!("{e}")))?;
    resolve(raw, overrides)
}

fn build_fiber(m: usize, raw: Option<&RawFiber>) -> Result<FiberMetric, ConfigError> {
    let Some(raw) = raw else {
        return FiberMetric::euclidean(m).map_err(|e| bad("spacetime.dimension", e));
    };
    let mut fiber = match raw.kind.as_str() {
        "euclidean" => FiberMetric::euclidean(m),
        "sphere_chart" => FiberMetric::sphere_chart(m),
        "hyperbolic_chart" => FiberMetric::hyperbolic_chart(m),
        "custom" => {
            let comps = raw.components.as_ref().ok_or_else(|| {
                bad("spacetime.fiber.components", "required for kind = \"custom\"")
            })?;
            let mut exprs = Vec::new();
            for (i, row) in comps.iter().enumerate() {
                let mut out = Vec::new();
                for (j, src) in row.iter().enumerate() {
                    out.push(parse_expr(src).map_err(|e| {
                        bad(&format!("spacetime.fiber.components[{i}][{j}]"), e)
                    })?);
                }
                exprs.push(out);
            }
            let domain = raw
                .domain
                .as_ref()
                .ok_or_else(|| bad("spacetime.fiber.domain", "required for kind = \"custom\""))?
                .iter()
                .map(|&[lo, hi]| (lo, hi))
                .collect();
            FiberMetric::custom(m, exprs, domain)
        }
        other => {
            return Err(bad(
                "spacetime.fiber.kind",
                format!("unknown kind `{other}`; known: euclidean, sphere_chart, hyperbolic_chart, custom"),
            ))
        }
    }
    .map_err(|e| bad("spacetime.fiber", e))?;
    if !matches!(raw.kind.as_str(), "custom") {
        if let Some(domain) = &raw.domain {
            fiber
                .set_domain(domain.iter().map(|&[lo, hi]| (lo, hi)).collect())
                .map_err(|e| bad("spacetime.fiber.domain", e))?;
        }
    }
    Ok(fiber)
}

fn build_entry(raw: &RawSpacetime) -> Result<CatalogEntry, ConfigError> {
    let m = raw.dimension;
    if m < 2 {
        return Err(bad("spacetime.dimension", "fiber dimension must be >= 2"));
    }
    if raw.name != "custom" {
        for (field, set) in [
            ("spacetime.rho", raw.rho.is_some()),
            ("spacetime.t_min", raw.t_min.is_some()),
            ("spacetime.t_max", raw.t_max.is_some()),
        ] {
            if set {
                return Err(bad(field, "only allowed with name = \"custom\""));
            }
        }
        let mut entry = catalog::make_named(&raw.name, m, raw.a)
            .map_err(|e| bad("spacetime.name", e))?;
        if let Some(fiber_raw) = &raw.fiber {
            // Named models keep their warp but may swap the fiber.
            let fiber = build_fiber(m, Some(fiber_raw))?;
            entry.chart_box = fiber.domain().to_vec();
            entry.spacetime = Arc::new(Spacetime::new(entry.spacetime.warp().clone(), fiber));
        }
        return Ok(entry);
    }

    let rho_src = raw
        .rho
        .as_ref()
        .ok_or_else(|| bad("spacetime.rho", "required for name = \"custom\""))?;
    let rho = parse_expr(rho_src).map_err(|e| bad("spacetime.rho", e))?;
    let t_min = raw.t_min.unwrap_or(f64::NEG_INFINITY);
    let t_max = raw.t_max.unwrap_or(f64::INFINITY);
    let warp = WarpFunction::new(rho, t_min, t_max).map_err(|e| bad("spacetime", e))?;
    let fiber = build_fiber(m, raw.fiber.as_ref())?;
    let chart_box = fiber.domain().to_vec();
    let spacetime = Arc::new(Spacetime::new(warp, fiber));

    // Sampling defaults for a custom interval: an O(1)-sized window
    // inside it.
    let lo = if t_min.is_finite() { t_min + 0.5 } else { -1.0 };
    let hi = (lo + 3.0).min(if t_max.is_finite() { t_max - 0.5 } else { f64::INFINITY });
    if !(lo < hi) {
        return Err(bad("spacetime.t_min/t_max", "interval too small to sample"));
    }
    let mid = 0.5 * (lo + hi);
    Ok(CatalogEntry {
        name: "custom".into(),
        citation: "user-declared warped product".into(),
        spacetime,
        slice_times: vec![lo + 0.25 * (hi - lo), mid, lo + 0.75 * (hi - lo)],
        chart_box,
        t_range: (lo, hi),
        graph_center: mid,
    })
}

fn resolve(raw: RawConfig, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let entry = build_entry(&raw.spacetime)?;
    let m = entry.spacetime.m();

    // Sampling.
    let mode = match raw.sampling.mode.as_str() {
        "grid" => SampleMode::Grid,
        "random" => SampleMode::Random,
        other => {
            return Err(bad(
                "sampling.mode",
                format!("unknown mode `{other}`; known: grid, random"),
            ))
        }
    };
    let sample_box: Vec<(f64, f64)> = match &raw.sampling.sample_box {
        Some(b) => {
            if b.len() != m {
                return Err(bad(
                    "sampling.box",
                    format!("needs {m} coordinate ranges, got {}", b.len()),
                ));
            }
            for (i, &[lo, hi]) in b.iter().enumerate() {
                if !(lo < hi) {
                    return Err(bad(&format!("sampling.box[{i}]"), "empty range"));
                }
            }
            b.iter().map(|&[lo, hi]| (lo, hi)).collect()
        }
        None => entry
            .chart_box
            .iter()
            .map(|&(lo, hi)| {
                let pad = 0.05 * (hi - lo);
                (lo + pad, hi - pad)
            })
            .collect(),
    };
    match mode {
        SampleMode::Grid => {
            if raw.sampling.counts.len() != m {
                return Err(bad(
                    "sampling.counts",
                    format!("grid mode needs {m} per-axis counts"),
                ));
            }
            if raw.sampling.counts.iter().any(|&c| c < 2) {
                return Err(bad("sampling.counts", "grid needs >= 2 points per axis"));
            }
        }
        SampleMode::Random => {
            if raw.sampling.counts.len() != 1 || raw.sampling.counts[0] == 0 {
                return Err(bad(
                    "sampling.counts",
                    "random mode needs a single positive total count",
                ));
            }
        }
    }
    let env_seed = std::env::var("GRWLAB_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok());
    let seed = overrides
        .seed
        .or(raw.sampling.seed)
        .or(env_seed)
        .or(match mode {
            SampleMode::Grid => Some(0),
            SampleMode::Random => None,
        })
        .ok_or_else(|| {
            bad(
                "sampling.seed",
                "required for random sampling (or set --seed / GRWLAB_SEED)",
            )
        })?;

    // Fixtures.
    let mut fixtures: Vec<Fixture> = Vec::new();
    let specs = if raw.hypersurface.is_empty() {
        vec![RawHypersurface {
            fixture: Some("all".into()),
            u: None,
            name: None,
        }]
    } else {
        raw.hypersurface
    };
    let fleet = catalog::fixture_hypersurfaces(&entry, seed)
        .map_err(|e| bad("spacetime", format!("fixture construction failed: {e}")))?;
    for (idx, spec) in specs.iter().enumerate() {
        let field = format!("hypersurface[{idx}]");
        match (&spec.fixture, &spec.u) {
            (Some(_), Some(_)) => {
                return Err(bad(&field, "give either `fixture` or `u`, not both"))
            }
            (None, None) => return Err(bad(&field, "needs `fixture` or `u`")),
            (Some(kw), None) => {
                let selected: Vec<Fixture> = match kw.as_str() {
                    "all" => fleet.clone(),
                    "slices" => fleet
                        .iter()
                        .filter(|f| {
                            matches!(f.kind, catalog::FixtureKind::Slice { .. })
                        })
                        .cloned()
                        .collect(),
                    "hyperplane" => fleet
                        .iter()
                        .filter(|f| f.kind == catalog::FixtureKind::Hyperplane)
                        .cloned()
                        .collect(),
                    "hyperboloid" => fleet
                        .iter()
                        .filter(|f| f.kind == catalog::FixtureKind::Hyperboloid)
                        .cloned()
                        .collect(),
                    "random_graphs" => fleet
                        .iter()
                        .filter(|f| {
                            matches!(f.kind, catalog::FixtureKind::RandomGraph { .. })
                        })
                        .cloned()
                        .collect(),
                    other => {
                        return Err(bad(
                            &format!("{field}.fixture"),
                            format!("unknown keyword `{other}`; known: all, slices, hyperplane, hyperboloid, random_graphs"),
                        ))
                    }
                };
                if selected.is_empty() {
                    return Err(bad(
                        &format!("{field}.fixture"),
                        format!("`{kw}` selects nothing for this spacetime"),
                    ));
                }
                fixtures.extend(selected);
            }
            (None, Some(src)) => {
                let u = parse_expr(src).map_err(|e| bad(&format!("{field}.u"), e))?;
                let mh = GraphHypersurface::new(entry.spacetime.clone(), u)
                    .map_err(|e| bad(&format!("{field}.u"), e))?;
                let name = spec
                    .name
                    .clone()
                    .unwrap_or_else(|| format!("graph@{idx}"));
                fixtures.push(Fixture {
                    name,
                    kind: catalog::FixtureKind::RandomGraph { coeffs: vec![] },
                    hypersurface: mh,
                });
            }
        }
    }

    // Checks.
    let check_names: Vec<String> = overrides
        .checks
        .clone()
        .or_else(|| raw.checks.as_ref().map(|c| c.names.clone()))
        .unwrap_or_else(|| vec!["all".into()]);
    let mut checks = Vec::new();
    for name in &check_names {
        if name == "all" {
            checks.extend_from_slice(CheckId::ALL);
            continue;
        }
        checks.push(CheckId::from_name(name).map_err(|e| bad("checks.names", e))?);
    }
    checks.dedup();

    // Theorems.
    let theorems = raw
        .theorems
        .map(|t| t.names)
        .unwrap_or_default();
    for id in &theorems {
        if !THEOREM_IDS.contains(&id.as_str()) {
            return Err(bad(
                "theorems.names",
                format!("unknown theorem id `{id}`; known: {}", THEOREM_IDS.join(", ")),
            ));
        }
    }

    // Tolerances.
    let mut tolerances = raw.tolerances;
    for (name, value) in &overrides.tolerances {
        tolerances.insert(name.clone(), *value);
    }
    for (name, value) in &tolerances {
        CheckId::from_name(name).map_err(|e| bad("tolerances", e))?;
        if !(*value > 0.0) {
            return Err(bad(
                &format!("tolerances.{name}"),
                "tolerance must be positive",
            ));
        }
    }

    let out_dir = overrides
        .out_dir
        .clone()
        .or(raw.output.dir)
        .unwrap_or_else(|| ".".into());
    let points_csv = raw.output.points_csv.unwrap_or(true);

    let echo = ConfigEcho {
        spacetime: entry.name.clone(),
        rho: entry.spacetime.warp().expr().to_string(),
        interval: entry.spacetime.warp().interval(),
        dimension: m,
        fiber: format!("{:?}", variant_name(&entry)),
        fixtures: fixtures.iter().map(|f| f.name.clone()).collect(),
        mode,
        sample_box: sample_box.clone(),
        counts: raw.sampling.counts.clone(),
        seed,
        checks: checks.iter().map(|c| c.name().to_string()).collect(),
        theorems: theorems.clone(),
        tolerances: tolerances.clone(),
    };

    Ok(RunConfig {
        entry,
        fixtures,
        mode,
        sample_box,
        counts: raw.sampling.counts,
        seed,
        checks,
        theorems,
        tolerances,
        out_dir,
        points_csv,
        echo,
    })
}

fn variant_name(entry: &CatalogEntry) -> &'static str {
    match entry.spacetime.fiber().kind() {
        grwlab_core::FiberKind::Euclidean => "euclidean",
        grwlab_core::FiberKind::SphereChart => "sphere_chart",
        grwlab_core::FiberKind::HyperbolicChart => "hyperbolic_chart",
        grwlab_core::FiberKind::Custom(_) => "custom",
    }
}

impl RunConfig {
    /// Effective tolerance for a check (override or registry default).
    pub fn tol(&self, id: CheckId) -> f64 {
        self.tolerances
            .get(id.name())
            .copied()
            .unwrap_or_else(|| id.default_tol())
    }
}
