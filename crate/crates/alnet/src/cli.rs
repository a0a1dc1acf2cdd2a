use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Experiment, RunConfig};
use crate::error::CliError;
use crate::output::{write_outputs, Manifest};
use crate::run::execute;

#[derive(Debug, Parser)]
#[command(
    name = "alnet",
    version,
    about = "Ablowitz-Ladik soliton scattering on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve the configured soliton and record partial norms.
    Simulate(Overrides),
    /// Measure transmission through an integrable vertex.
    Bifurcation(Overrides),
    /// Transmission over a grid of gamma1/gamma2 with the sum rule enforced.
    Sweep(Overrides),
    /// Scattering with the sum rule violated: reflection and peak speeds.
    BrokenRule(Overrides),
    /// Conserved quantities along the run and their drifts.
    ConservedAudit(Overrides),
}

#[derive(Debug, Args)]
struct Overrides {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    /// Highest conserved charge order reported.
    #[arg(long)]
    m_max: Option<usize>,
    /// Sites kept on every semi-infinite bond.
    #[arg(long)]
    truncation: Option<usize>,
    /// Reserved; runs are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

impl Command {
    fn split(self) -> (Experiment, Overrides) {
        match self {
            Command::Simulate(o) => (Experiment::Simulate, o),
            Command::Bifurcation(o) => (Experiment::Bifurcation, o),
            Command::Sweep(o) => (Experiment::Sweep, o),
            Command::BrokenRule(o) => (Experiment::BrokenRule, o),
            Command::ConservedAudit(o) => (Experiment::ConservedAudit, o),
        }
    }
}

fn resolve(experiment: Experiment, o: Overrides) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(&o.config)?;
    cfg.experiment = experiment;
    if let Some(out) = o.out {
        cfg.out_dir = out;
    }
    if let Some(dt) = o.dt {
        cfg.sim.dt = dt;
    }
    if let Some(t) = o.t_final {
        cfg.sim.t_final = t;
    }
    if let Some(m) = o.m_max {
        cfg.m_max = m;
    }
    if let Some(t) = o.truncation {
        cfg.topology.truncation = t;
    }
    if o.seed.is_some() {
        cfg.seed = o.seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Loads, runs and writes one experiment.
pub fn run_config(cfg: &RunConfig) -> Result<Manifest, CliError> {
    let report = execute(cfg)?;
    write_outputs(&report, &cfg.out_dir)
}

/// Entry point behind the binary. Returns the process exit code: 0 on
/// success, 1 for invalid configuration or IO failure, 2 when integration
/// diverged and 3 for an inconclusive run.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (experiment, overrides) = cli.command.split();
    match resolve(experiment, overrides).and_then(|cfg| run_config(&cfg)) {
        Ok(manifest) => {
            for f in &manifest.files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
