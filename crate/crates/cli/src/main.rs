//! `ssp-lmm`: run SSP multistep experiments and write CSV traces.
//!
//! Exit codes: 0 on success, 2 for configuration or usage errors, 3 when the
//! integration itself fails.

mod certificate;
mod config;
mod run;

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};

use certificate::{cmd_certificate, parse_numbers, History};
use config::{Method, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "ssp-lmm", version, about = "Variable step-size SSP multistep experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one problem and write steps.csv, summary.csv and metadata.txt.
    Run(RunArgs),
    /// L1 errors of the advection problem over a list of resolutions.
    Convergence(RunArgs),
    /// Optimal SSP coefficient and support for a step-size history.
    Certificate(CertificateArgs),
    /// Run several config files, each into its own subdirectory of --out.
    Batch(BatchArgs),
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` config file; flags override its settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// advection, burgers or blastwave.
    #[arg(long)]
    problem: Option<String>,
    /// ssprk2-only, msv-32, msv-42, msv-52, msv-62, msv-43 or msv-53.
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    tfinal: Option<f64>,
    #[arg(long)]
    h1: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "cfl-fe")]
    cfl_fe: Option<f64>,
    /// Skip the third-order step-size conditions.
    #[arg(long)]
    no_conditions: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the final solution to solution.csv.
    #[arg(long)]
    snapshot: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated cell counts for `convergence`.
    #[arg(long)]
    resolutions: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.problem {
            c.problem = v.clone();
        }
        if let Some(v) = self.method {
            c.method = v;
        }
        if let Some(v) = self.cells {
            c.n_cells = v;
        }
        if let Some(v) = self.tfinal {
            c.t_final = Some(v);
        }
        if let Some(v) = self.h1 {
            c.h1 = v;
        }
        if let Some(v) = self.gamma {
            c.gamma = v;
        }
        if let Some(v) = self.cfl_fe {
            c.cfl_fe = v;
        }
        if self.no_conditions {
            c.enforce_conditions = false;
        }
        if let Some(v) = &self.out {
            c.out = v.clone();
        }
        if self.snapshot {
            c.snapshot = true;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = &self.resolutions {
            c.resolutions = config::parse_list("resolutions", v)?;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("history").required(true).args(["fixed", "steps", "omegas", "cumulative"])))]
struct CertificateArgs {
    /// Order of accuracy, 2 or 3.
    #[arg(long, short)]
    p: u32,
    /// Number of steps; checked against the history when both are given.
    #[arg(long, short)]
    k: Option<usize>,
    /// k equal steps.
    #[arg(long)]
    fixed: Option<usize>,
    /// Step sizes h_{n-k+1}, ..., h_n.
    #[arg(long)]
    steps: Option<String>,
    /// Ratios omega_1, ..., omega_k to the current step.
    #[arg(long)]
    omegas: Option<String>,
    /// Cumulative ratios 0, Omega_1, ..., Omega_k; fractions like 7/3 are accepted.
    #[arg(long)]
    cumulative: Option<String>,
}

impl CertificateArgs {
    fn history(&self) -> Result<History, CliError> {
        Ok(match (self.fixed, &self.steps, &self.omegas, &self.cumulative) {
            (Some(k), ..) => History::Fixed(k),
            (_, Some(s), ..) => History::Steps(parse_numbers(s)?),
            (_, _, Some(s), _) => History::Omegas(parse_numbers(s)?),
            (_, _, _, Some(s)) => History::Cumulative(parse_numbers(s)?),
            _ => return Err(CliError::Config("no step history given".into())),
        })
    }
}

#[derive(Args)]
struct BatchArgs {
    /// Config files; each runs into `<out>/<file stem>`.
    #[arg(required = true)]
    configs: Vec<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

/// Worker count: `SSP_LMM_THREADS` if set, else the available parallelism.
fn batch_threads(jobs: usize) -> Result<usize, CliError> {
    let cap = match std::env::var("SSP_LMM_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("SSP_LMM_THREADS must be a positive integer, got {v:?}")))?,
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    Ok(cap.min(jobs).max(1))
}

fn cmd_batch(args: &BatchArgs) -> Result<(), CliError> {
    let mut jobs = Vec::with_capacity(args.configs.len());
    let mut seen = HashSet::new();
    for path in &args.configs {
        let config = RunConfig::from_file(path)?;
        config.validate()?;
        let stem = path
            .file_stem()
            .ok_or_else(|| CliError::Config(format!("{} has no file name", path.display())))?;
        if !seen.insert(stem.to_owned()) {
            return Err(CliError::Config(format!(
                "two configs share the output directory {}",
                stem.to_string_lossy()
            )));
        }
        jobs.push((config, args.out.join(stem)));
    }

    let next = AtomicUsize::new(0);
    let failures = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..batch_threads(jobs.len())? {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((config, dir)) = jobs.get(i) else { break };
                match run::cmd_run(config, dir) {
                    Ok(_) => println!("{}: done", dir.display()),
                    Err(e) => failures.lock().unwrap().push((i, e)),
                }
            });
        }
        Ok::<_, CliError>(())
    })?;

    let mut failures = failures.into_inner().unwrap();
    failures.sort_by_key(|(i, _)| *i);
    for (i, e) in &failures {
        eprintln!("{}: {e}", args.configs[*i].display());
    }
    // Report the most severe failure.
    match failures.into_iter().map(|(_, e)| e).max_by_key(CliError::exit_code) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let config = args.resolve()?;
            let outcome = run::cmd_run(&config, &config.out)?;
            print!("{}", run::summary_csv(&outcome));
        }
        Command::Convergence(args) => {
            let config = args.resolve()?;
            let table = run::cmd_convergence(&config, &config.out)?;
            print!("{}", table.to_csv());
        }
        Command::Certificate(args) => {
            print!("{}", cmd_certificate(&args.history()?, args.k, args.p)?);
        }
        Command::Batch(args) => cmd_batch(&args)?,
    }
    Ok(())
}

impl std::error::Error for CliError {}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ssp-lmm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
