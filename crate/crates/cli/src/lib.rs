//! Command implementations behind the `boundary` binary. Each command reads a
//! [`RunConfig`], returns a serializable report, and renders it as JSON, CSV or
//! SVG. Output depends only on the configuration.

pub mod config;
pub mod csv;
pub mod spec;
pub mod svg;

use std::path::Path;

use boundary_core::adjacency::{refute_projective_adjacency, test_projective_adjacency, AdjacencyWitness};
use boundary_core::counterexample::{
    build_counterexample, build_from_phi, verify_oscillation, zygmund_sample_check, ArtifactRecord,
    CounterexampleArtifact, CounterexampleConfig, VerificationReport, ZygmundReport, DEFAULT_C,
};
use boundary_core::geometry::{BoundaryPoint, TWO_PI};
use boundary_core::harmonic::{
    conjugate_eval, default_tent_ladder, estimate_tent_constant, holo_eval, poisson_eval_checked,
    TentConstantReport,
};
use boundary_core::regions::{boundary_grid, classify, default_ladder, ClassificationReport, RegionFamily, DEFAULT_BUDGET};
use boundary_core::{AdjacencyError, BuildError, RegionError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use config::{AdjacencyMode, Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid value for `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("hypothesis check failed: {0}")]
    Gate(BuildError),
    #[error(transparent)]
    Build(BuildError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Adjacency(#[from] AdjacencyError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Hypothesis { .. } => CliError::Gate(e),
            BuildError::Config(reason) => CliError::Invalid { field: "build".into(), reason },
            other => CliError::Build(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Gate(_) => 2,
            _ => 1,
        }
    }
}

fn missing(field: &str) -> CliError {
    CliError::Invalid { field: field.into(), reason: "required".into() }
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<ClassificationReport, CliError> {
    let region = spec::parse_region(cfg.region.as_deref().unwrap_or("prop2b"))?;
    let ladder = cfg.ladder.clone().unwrap_or_else(default_ladder);
    Ok(classify(&region, &ladder, cfg.budget.unwrap_or(DEFAULT_BUDGET))?)
}

pub fn default_adjacency_ladder() -> Vec<f64> {
    (3..=10).map(|k| 2f64.powi(-k)).collect()
}

pub fn cmd_adjacency(cfg: &RunConfig) -> Result<AdjacencyWitness, CliError> {
    let region = spec::parse_region(cfg.region.as_deref().unwrap_or("prop2b"))?;
    let b = cfg.b.unwrap_or(2);
    match cfg.mode.unwrap_or_default() {
        AdjacencyMode::Witness => {
            let ladder = cfg.ladder.clone().unwrap_or_else(default_adjacency_ladder);
            Ok(test_projective_adjacency(&region, b, &ladder, cfg.budget.unwrap_or(64))?)
        }
        AdjacencyMode::Refute => Ok(refute_projective_adjacency(&region, b)?),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonRow {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
    pub h_re: f64,
    pub h_im: f64,
    pub clamped: bool,
}

pub fn cmd_poisson(cfg: &RunConfig) -> Result<Vec<PoissonRow>, CliError> {
    let f = spec::parse_indicator(cfg.indicator.as_deref().ok_or_else(|| missing("indicator"))?)?;
    let pts = spec::parse_points(cfg.points.as_deref().ok_or_else(|| missing("points"))?)?;
    Ok(pts
        .iter()
        .map(|z| {
            let e = poisson_eval_checked(&f, z);
            let h = holo_eval(&f, z);
            PoissonRow { x: z.re(), y: z.im(), u: e.value, v: conjugate_eval(&f, z), h_re: h.re, h_im: h.im, clamped: e.clamped }
        })
        .collect())
}

pub const DEFAULT_TENT_DENSITY: usize = 512;

pub fn cmd_tent_constant(cfg: &RunConfig) -> Result<TentConstantReport, CliError> {
    let ladder = cfg.ladder.clone().unwrap_or_else(default_tent_ladder);
    if let Some(t) = ladder.iter().find(|&&t| t > TWO_PI) {
        return Err(CliError::Invalid { field: "ladder".into(), reason: format!("arc length {t} exceeds 2pi") });
    }
    Ok(estimate_tent_constant(&ladder, cfg.density.unwrap_or(DEFAULT_TENT_DENSITY)))
}

/// Parameters a build was made with; enough to rebuild it exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildSettings {
    pub region: String,
    pub b: u32,
    pub levels: u32,
    pub truncation: u32,
    pub grid: usize,
    pub c: f64,
    pub budget: usize,
    pub tent_density: usize,
    pub verify_budget: usize,
}

impl BuildSettings {
    pub fn from_config(cfg: &RunConfig) -> Self {
        let d = CounterexampleConfig::default();
        Self {
            region: cfg.region.clone().unwrap_or_else(|| "prop2b".into()),
            b: cfg.b.unwrap_or(d.family.b),
            levels: cfg.levels.unwrap_or(d.levels),
            truncation: cfg.truncation.unwrap_or(d.truncation),
            grid: cfg.grid.unwrap_or(d.grid),
            c: cfg.c.unwrap_or(DEFAULT_C),
            budget: cfg.budget.unwrap_or(d.budget),
            tent_density: cfg.density.unwrap_or(d.tent_density),
            verify_budget: cfg.verify_budget.unwrap_or(d.verify_budget),
        }
    }

    pub fn family(&self) -> Result<RegionFamily, CliError> {
        Ok(RegionFamily::rotation_invariant(spec::parse_region(&self.region)?, self.b))
    }

    pub fn config(&self) -> Result<CounterexampleConfig, CliError> {
        Ok(CounterexampleConfig {
            family: self.family()?,
            levels: self.levels,
            truncation: self.truncation,
            grid: self.grid,
            c: self.c,
            budget: self.budget,
            tent_density: self.tent_density,
            verify_budget: self.verify_budget,
            ..CounterexampleConfig::default()
        })
    }
}

/// Contents of an artifact file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildRecord {
    pub settings: BuildSettings,
    pub artifact: ArtifactRecord,
}

pub fn cmd_build(cfg: &RunConfig) -> Result<(BuildRecord, CounterexampleArtifact), CliError> {
    let settings = BuildSettings::from_config(cfg);
    let artifact = build_counterexample(&settings.config()?)?;
    let record = BuildRecord { artifact: artifact.record(cfg.with_sets.unwrap_or(false)), settings };
    Ok((record, artifact))
}

/// Rebuilds the artifact described by a record and checks it against the
/// stored set digests.
pub fn load_artifact(path: &Path) -> Result<(BuildRecord, CounterexampleArtifact), CliError> {
    let record: BuildRecord = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let cfg = record.settings.config()?;
    let artifact = build_from_phi(&cfg, record.artifact.phi.clone(), record.artifact.tent.clone())?;
    let again = artifact.record(false);
    let stored: Vec<&String> = record.artifact.sets.iter().map(|s| &s.digest).collect();
    let rebuilt: Vec<&String> = again.sets.iter().map(|s| &s.digest).collect();
    if stored != rebuilt || again.s != record.artifact.s {
        return Err(CliError::Invalid {
            field: "artifact".into(),
            reason: "rebuilt sets do not match the stored digests".into(),
        });
    }
    Ok((record, artifact))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub settings: BuildSettings,
    /// `grid:N` or `random:N:SEED`
    pub samples: String,
    pub oscillation: VerificationReport,
    pub zygmund: Vec<ZygmundReport>,
}

pub fn boundary_samples(cfg: &RunConfig, grid: usize) -> (String, Vec<BoundaryPoint>) {
    match cfg.samples {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
            let pts = (0..n).map(|_| BoundaryPoint::new(rng.gen_range(0.0..TWO_PI))).collect();
            (format!("random:{n}:{}", cfg.seed()), pts)
        }
        None => (format!("grid:{grid}"), boundary_grid(grid)),
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyRecord, CliError> {
    let path = cfg.artifact.as_deref().ok_or_else(|| missing("artifact"))?;
    let (record, artifact) = load_artifact(path)?;
    let family = record.settings.family()?;
    let grid = cfg.grid.unwrap_or(record.settings.grid);
    let (label, samples) = boundary_samples(cfg, grid);
    let vb = cfg.verify_budget.unwrap_or(record.settings.verify_budget);
    let oscillation = verify_oscillation(&artifact, &family, &samples, vb)?;
    let zygmund = (1..=artifact.levels.min(3)).map(|n| zygmund_sample_check(&artifact, &family, n, &samples)).collect();
    Ok(VerifyRecord { settings: record.settings, samples: label, oscillation, zygmund })
}

pub fn cmd_figures(cfg: &RunConfig) -> Result<String, CliError> {
    let path = cfg.artifact.as_deref().ok_or_else(|| missing("artifact"))?;
    let (record, artifact) = load_artifact(path)?;
    let family = record.settings.family()?;
    svg::figure(&artifact, &family, record.settings.budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Classify,
    Adjacency,
    Poisson,
    TentConstant,
    Build,
    Verify,
    Figures,
}

/// Runs a command and renders its report in the configured format.
pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let fmt = match (cmd, cfg.format) {
        (Command::Figures, None) => Format::Svg,
        _ => cfg.format(),
    };
    let unsupported = |f: Format| CliError::Invalid {
        field: "format".into(),
        reason: format!("{f:?} output is not available for this command").to_lowercase(),
    };
    match (cmd, fmt) {
        (Command::Figures, Format::Svg) => cmd_figures(cfg),
        (Command::Figures, f) => Err(unsupported(f)),
        (_, Format::Svg) => Err(unsupported(Format::Svg)),
        (Command::Classify, f) => render(&cmd_classify(cfg)?, f),
        (Command::Adjacency, f) => render(&cmd_adjacency(cfg)?, f),
        (Command::Poisson, f) => render(&cmd_poisson(cfg)?, f),
        (Command::TentConstant, f) => render(&cmd_tent_constant(cfg)?, f),
        (Command::Build, f) => render(&cmd_build(cfg)?.0, f),
        (Command::Verify, f) => render(&cmd_verify(cfg)?, f),
    }
}

fn render<T: Serialize + csv::ToCsv>(v: &T, f: Format) -> Result<String, CliError> {
    match f {
        Format::Json => to_json(v),
        Format::Csv => Ok(v.to_csv()),
        Format::Svg => unreachable!("handled by execute"),
    }
}
