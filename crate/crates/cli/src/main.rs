//! `vilenkin`: verification suites, kernel dumps, atom corpora, maximal
//! operator tables and counterexample sweeps on bounded Vilenkin groups.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vilenkin::verify::Suite;
use vilenkin::{FejerConvention, WeightSpec};

use commands::{CorpusArgs, KernelKind, MaximalArgs, OpKind, Outcome, VerifyArgs};
use config::{FileConfig, Format, RunConfig};

pub type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

/// Environment variable that sets the worker thread count.
const THREADS_ENV: &str = "VILENKIN_THREADS";

#[derive(Parser, Debug)]
#[command(name = "vilenkin", version, about = "Harmonic analysis on bounded Vilenkin groups")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Moduli m_0,m_1,...; a short list repeats periodically up to the depth
    #[arg(long, global = true, value_delimiter = ',')]
    base: Option<Vec<usize>>,
    /// Truncation depth K (default 10; 12 for verify, 13 for counterexample sweeps)
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Seed for randomized commands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Fejér kernel convention: shifted (sum over 1..=n) or paper (sum over 0..n)
    #[arg(long, global = true)]
    convention: Option<FejerConvention>,
    /// TOML or JSON file with any of: base, depth, seed, out, format, convention
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a property suite: kernels, identities, lemmas or atoms
    Verify {
        suite: Suite,
        /// Largest A in the K_{2^A} closed-form check
        #[arg(long = "max-A", alias = "max-a", default_value_t = 10)]
        max_a: usize,
        /// Cap on swept indices n
        #[arg(long, default_value_t = 4096)]
        n_max: usize,
        /// Atoms drawn by the atoms suite
        #[arg(long, default_value_t = 200)]
        atoms: usize,
    },
    /// Kernel values on the cylinders of a level
    Kernel {
        #[command(subcommand)]
        action: DumpAction,
    },
    /// Vilenkin-Fourier coefficients of a kernel
    Spectrum {
        #[command(subcommand)]
        action: DumpAction,
    },
    /// Random p-atom corpora
    Atoms {
        #[command(subcommand)]
        action: AtomsAction,
    },
    /// H_p to L_p ratios of maximal operators over an atom corpus
    Maximal {
        #[command(subcommand)]
        action: MaximalAction,
    },
    /// Blow-up tables for the extremal martingales D_{M_{2k+1}} - D_{M_{2k}}
    Counterexample {
        #[command(subcommand)]
        action: CounterexampleAction,
    },
}

#[derive(Subcommand, Debug)]
enum DumpAction {
    Dump {
        #[arg(long, value_enum)]
        which: KernelKind,
        #[arg(long)]
        n: usize,
        /// Level of the output (default: the depth)
        #[arg(long)]
        level: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum AtomsAction {
    Corpus {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        p: f64,
        /// Largest support level (default: depth - 2)
        #[arg(long)]
        max_support_level: Option<usize>,
        /// Levels of resolution below the support
        #[arg(long, default_value_t = 2)]
        max_refinement: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MaximalAction {
    Table {
        #[arg(long, value_enum)]
        op: OpKind,
        /// unit, log, power-log:P, cond1:P or table:v1,v2,...
        #[arg(long, default_value = "unit")]
        weight: WeightSpec,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Largest index n in the supremum (default: M_K of each atom's base)
        #[arg(long)]
        nmax: Option<usize>,
        /// Corpus JSON written by `atoms corpus`
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CounterexampleAction {
    Sweep {
        #[arg(long, default_value = "unit")]
        phi: WeightSpec,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
    },
}

fn resolve(global: &GlobalArgs, default_depth: usize) -> CliResult<RunConfig> {
    let file = match &global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    Ok(RunConfig {
        moduli: global.base.clone().or(file.base).unwrap_or_else(|| vec![2]),
        depth: global.depth.or(file.depth).unwrap_or(default_depth),
        seed: global.seed.or(file.seed),
        out: global.out.clone().or(file.out),
        format: global.format.or(file.format).unwrap_or_default(),
        convention: global.convention.or(file.convention).unwrap_or_default(),
    })
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got `{value}`"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> CliResult<(Outcome, RunConfig)> {
    configure_threads()?;
    let default_depth = match &cli.command {
        Command::Counterexample {
            action: CounterexampleAction::Sweep { kmax, .. },
        } => (2 * kmax + 1).max(13),
        Command::Verify { .. } => 12,
        _ => 10,
    };
    let cfg = resolve(&cli.global, default_depth)?;
    let outcome = match cli.command {
        Command::Verify {
            suite,
            max_a,
            n_max,
            atoms,
        } => commands::verify(
            &cfg,
            &VerifyArgs {
                suite,
                max_a,
                n_max,
                atoms,
            },
        )?,
        Command::Kernel {
            action: DumpAction::Dump { which, n, level },
        } => commands::kernel_dump(&cfg, which, n, level)?,
        Command::Spectrum {
            action: DumpAction::Dump { which, n, level },
        } => commands::spectrum_dump(&cfg, which, n, level)?,
        Command::Atoms {
            action:
                AtomsAction::Corpus {
                    count,
                    p,
                    max_support_level,
                    max_refinement,
                },
        } => commands::atoms_corpus(
            &cfg,
            &CorpusArgs {
                count,
                p,
                max_support_level,
                max_refinement,
            },
        )?,
        Command::Maximal {
            action:
                MaximalAction::Table {
                    op,
                    weight,
                    p,
                    nmax,
                    input,
                },
        } => commands::maximal_table(
            &cfg,
            &MaximalArgs {
                op,
                weight,
                p,
                n_max: nmax,
                input: &input,
            },
        )?,
        Command::Counterexample {
            action: CounterexampleAction::Sweep { phi, p, kmin, kmax },
        } => commands::counterexample_sweep(&cfg, &phi, p, kmin, kmax)?,
    };
    Ok((outcome, cfg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, cfg)) => {
            if let Err(e) = output::emit(&outcome.bytes, cfg.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: one or more checks failed");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
