use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maslov_iter::campaign::run_campaign;
use maslov_iter::commands::{cmd_decompose, cmd_index, emit, CommandError, CommandResult};
use maslov_iter::config::RunConfig;
use maslov_iter::exit;
use maslov_iter::selftest;

#[derive(Parser)]
#[command(name = "maslov-iter", version, about = "Maslov-type indices of symplectic paths and their iteration formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index of a path relative to a Lagrangian of `H × H`.
    Index {
        #[command(flatten)]
        common: Common,
        /// Eigenangle traces of the winding computation, as CSV.
        #[arg(long, value_name = "FILE")]
        csv_traces: Option<PathBuf>,
    },
    /// Randomized verification of the iteration identities.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        suite: Option<String>,
        /// Rerun every check of the suite on this single trial seed.
        #[arg(long, value_name = "SEED")]
        replay: Option<u64>,
    },
    /// Polar decomposition of a symplectic matrix, and winding pair of a loop.
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Canonical fixtures with known answers.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Rank tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

impl Common {
    fn load(&self) -> CommandResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CommandError::usage(format!("{}: {e}", p.display())))?;
                RunConfig::from_json(&text).map_err(CommandError::usage)?
            }
            None => RunConfig::default(),
        };
        if let Some(t) = self.tol {
            cfg.tolerances.rank = t;
        }
        if let Some(o) = &self.out {
            cfg.output = Some(o.display().to_string());
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> CommandResult<i32> {
    match cli.command {
        Command::Index { common, csv_traces } => {
            let cfg = common.load()?;
            cfg.validate().map_err(CommandError::usage)?;
            let csv = csv_traces.map(|p| p.display().to_string());
            let out = cmd_index(&cfg, csv.as_deref())?;
            emit(&out, cfg.output.as_deref())?;
            Ok(exit::OK)
        }
        Command::Verify {
            common,
            seed,
            trials,
            suite,
            replay,
        } => {
            let mut cfg = common.load()?;
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = suite {
                cfg.suite = s;
            }
            let report = run_campaign(&cfg, replay).map_err(CommandError::usage)?;
            for (name, t) in &report.per_check {
                eprintln!("{name:<24} {:>5}/{:<5} unstable {}", t.passed, t.total(), t.unstable);
            }
            eprintln!(
                "total {}/{} passed in {:.1}s",
                report.totals.passed,
                report.totals.total(),
                report.elapsed_seconds
            );
            emit(&report, cfg.output.as_deref())?;
            Ok(report.exit_code())
        }
        Command::Decompose { common } => {
            let cfg = common.load()?;
            cfg.validate().map_err(CommandError::usage)?;
            let out = cmd_decompose(&cfg)?;
            emit(&out, cfg.output.as_deref())?;
            Ok(exit::OK)
        }
        Command::Selftest { common } => {
            let cfg = common.load()?;
            cfg.validate().map_err(CommandError::usage)?;
            let results = selftest::run_all(&cfg.tolerances());
            for r in &results {
                let status = format!("{:?}", r.status).to_lowercase();
                match &r.detail {
                    Some(d) => println!("{:<20} {status:<8} {d}", r.name),
                    None => println!("{:<20} {status}", r.name),
                }
            }
            if let Some(p) = &cfg.output {
                emit(&results, Some(p))?;
            }
            Ok(selftest::exit_code(&results))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
