//! `bhlower`: build extremal forms, compute exact norms, certify
//! Bohnenblust–Hille lower bounds and search for better forms.
//!
//! Exit codes: 0 success, 1 argument/input errors, 2 budget exceeded,
//! 3 internal-consistency failure (including a certificate that fails
//! verification).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bhlower_core::config::{DEFAULT_BUDGET, DEFAULT_MAX_M, DEFAULT_TOLERANCE};

#[derive(Debug, Parser)]
#[command(
    name = "bhlower",
    version,
    about = "Lower bounds for the real Bohnenblust-Hille constants"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Sign assignments allowed per exact norm; for `search`, form evaluations
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Worker threads (defaults to the available parallelism)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the document here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format: text|csv|md for `table`, json|text elsewhere
    #[arg(long, global = true)]
    pub format: Option<String>,

    /// Tolerance for float comparisons
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,

    /// Largest family arity T_m that may be built
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_M)]
    pub family_cap: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the extremal form T_m and write it as a form file
    Construct {
        #[arg(long)]
        m: u32,
    },
    /// Compute the sup norm of a form file
    Norm {
        form: PathBuf,
        #[arg(long, default_value = "exact")]
        method: String,
    },
    /// Certify a lower bound for C_m from T_m or from a form file
    Certify {
        #[arg(long, required_unless_present = "form", conflicts_with = "form")]
        m: Option<u32>,
        #[arg(long)]
        form: Option<PathBuf>,
        /// exact|recursive (default: recursive for --m, exact for --form)
        #[arg(long)]
        method: Option<String>,
    },
    /// Print the table of lower and upper bounds
    Table {
        #[arg(long, default_value_t = 5)]
        max_m: u32,
    },
    /// Search small forms for a better ratio
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "hillclimb")]
        strategy: String,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "-1,0,1"
        )]
        alphabet: Vec<i64>,
        #[arg(long, default_value_t = 20)]
        restarts: u64,
        /// Start the first climb from this form
        #[arg(long)]
        start: Option<PathBuf>,
    },
    /// Re-check a certificate or search report
    Verify { path: PathBuf },
}

/// Resolved configuration for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub core: bhlower_core::Config,
    /// Evaluation budget for `search`.
    pub search_budget: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl RunConfig {
    fn from_args(g: &GlobalArgs, command: &Command) -> bhlower_core::Result<Self> {
        let threads = g
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let is_search = matches!(command, Command::Search { .. });
        let core = bhlower_core::Config {
            max_m: g.family_cap,
            budget: if is_search {
                DEFAULT_BUDGET
            } else {
                g.budget.unwrap_or(DEFAULT_BUDGET)
            },
            threads,
            tolerance: g.tolerance,
        };
        core.validate()?;
        let search_budget = if is_search {
            g.budget.unwrap_or(1_000_000)
        } else {
            0
        };
        if is_search && search_budget == 0 {
            return Err(bhlower_core::Error::Argument(
                "budget must be at least 1".into(),
            ));
        }
        Ok(RunConfig {
            core,
            search_budget,
            seed: g.seed,
            out: g.out.clone(),
            format: g.format.clone(),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = RunConfig::from_args(&cli.global, &cli.command)
        .map_err(commands::Failure::from)
        .and_then(|cfg| commands::run(&cli.command, &cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
