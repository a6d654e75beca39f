mod config;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Experiment, RunConfig};
use dragflow::Error;

const EXIT_ASSERT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BLOWUP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "dragflow", version, about = "Decay experiments for the drag-coupled Euler / Navier-Stokes system")]
struct Cli {
    /// TOML configuration file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Exit with status 1 when a check fails
    #[arg(long, global = true)]
    assert: bool,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare the closed-form Green matrix with an ODE oracle
    ValidateKernel,
    /// Low-frequency eigenvalue expansions and the high-frequency gap
    Asymptotics,
    /// Whole-space decay rates of the linear flow
    KernelDecay,
    /// Compensated norms for the lower-bound data
    LowerBound,
    /// Nonlinear run on the periodic box
    Simulate,
    /// Power-law fit of one channel of a CSV series
    Fit,
    /// Print resolved parameters and checks
    Describe {
        /// Limit the listing to one experiment
        experiment: Option<String>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BlowUp { .. } | Error::Oracle(_) => EXIT_BLOWUP,
        _ => EXIT_CONFIG,
    }
}

fn load(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_CONFIG);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let experiment = match &cli.command {
        Command::ValidateKernel => Experiment::ValidateKernel,
        Command::Asymptotics => Experiment::Asymptotics,
        Command::KernelDecay => Experiment::KernelDecay,
        Command::LowerBound => Experiment::LowerBound,
        Command::Simulate => Experiment::Simulate,
        Command::Fit => Experiment::Fit,
        Command::Describe { experiment } => {
            let only = match experiment.as_deref().map(Experiment::parse).transpose() {
                Ok(e) => e,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            print!("{}", cfg.describe(only));
            return ExitCode::SUCCESS;
        }
    };

    let report = match experiments::run(&cfg, experiment) {
        Ok(r) => r,
        Err(aborted) => {
            for p in &aborted.report.artifacts {
                eprintln!("wrote {}", p.display());
            }
            eprintln!("error: {}", aborted.error);
            return ExitCode::from(exit_code(&aborted.error));
        }
    };
    for c in &report.checks {
        println!(
            "{} {:<28} value {:.6e}  threshold {:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
    for p in &report.artifacts {
        println!("wrote {}", p.display());
    }
    println!("{} finished in {:.2} s", report.experiment, report.seconds);
    if cli.assert && !report.passed() {
        return ExitCode::from(EXIT_ASSERT);
    }
    ExitCode::SUCCESS
}
