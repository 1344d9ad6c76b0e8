use std::path::PathBuf;
use std::process::ExitCode;

use boundary_cli::spec::parse_list;
use boundary_cli::{execute, AdjacencyMode, CliError, Command, Format, RunConfig};
use clap::Parser;

/// Boundary behaviour of harmonic functions in the unit disc.
#[derive(Parser, Debug)]
#[command(name = "boundary", version)]
struct Args {
    /// classify | adjacency | poisson | tent-constant | build | verify | figures
    #[arg(value_enum)]
    command: Command,
    /// TOML file; its values replace the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    /// prop2b, prop2c, stolz:B, radial, attached, interleaved, explicit:PATH, with optional @ANGLE
    #[arg(long)]
    region: Option<String>,
    /// comma-separated radii (or arc lengths for tent-constant)
    #[arg(long, allow_hyphen_values = true)]
    ladder: Option<String>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long)]
    truncation: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<AdjacencyMode>,
    /// tent grid density
    #[arg(long)]
    density: Option<usize>,
    #[arg(long)]
    verify_budget: Option<usize>,
    /// `COEFF*START:LEN+START:LEN;...` or file:PATH
    #[arg(long, allow_hyphen_values = true)]
    indicator: Option<String>,
    /// `x,y;x,y;...` or file:PATH
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// artifact JSON written by `build`
    #[arg(long)]
    artifact: Option<PathBuf>,
    /// random boundary samples for `verify` instead of the grid
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// include full arc lists of V_j in the artifact
    #[arg(long)]
    with_sets: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn config_from(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig {
        region: args.region.clone(),
        ladder: args.ladder.as_deref().map(|l| parse_list("ladder", l)).transpose()?,
        budget: args.budget,
        grid: args.grid,
        levels: args.levels,
        truncation: args.truncation,
        b: args.b,
        c: args.c,
        mode: args.mode,
        density: args.density,
        verify_budget: args.verify_budget,
        indicator: args.indicator.clone(),
        points: args.points.clone(),
        artifact: args.artifact.clone(),
        samples: args.samples,
        seed: args.seed,
        with_sets: args.with_sets.then_some(true),
        out: args.out.clone(),
        format: args.format,
    };
    if let Some(path) = &args.config {
        cfg.overlay(&RunConfig::load(path)?);
    }
    Ok(cfg)
}

fn run(args: &Args) -> Result<(), CliError> {
    let cfg = config_from(args)?;
    let text = execute(args.command, &cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
