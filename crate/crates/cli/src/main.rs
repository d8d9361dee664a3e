mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hecke_cells::cache::{Config, OutputFormat};
use hecke_cells::coxeter::DEFAULT_ELEMENT_BOUND;
use hecke_cells::validate::DEFAULT_SEED;

/// Kazhdan-Lusztig cells, the asymptotic ring J and truncated convolution
/// multiplicities for finite Coxeter groups.
#[derive(Parser, Debug)]
#[command(name = "hecke-cells", version)]
struct Cli {
    /// Refuse groups with more elements than this.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENT_BOUND)]
    bound: usize,

    /// Directory for cached KL tables; no caching when absent.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(clap::Args, Debug, Clone)]
pub struct CellSelector {
    /// a-value of the two-sided cell.
    #[arg(long)]
    pub a: u32,

    /// An element of the cell, as a word; needed when several cells share `a`.
    #[arg(long)]
    pub containing: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Left, right and two-sided cells with a-values, D and c^0.
    Cells { group: String },

    /// The gamma table of one two-sided cell.
    Jtable {
        group: String,
        #[command(flatten)]
        cell: CellSelector,
    },

    /// Truncated convolution multiplicities on one two-sided cell.
    Truncated {
        group: String,
        #[command(flatten)]
        cell: CellSelector,
        #[command(subcommand)]
        op: TruncOp,
    },

    /// Run the property suite; exits 1 if any check fails.
    Verify {
        group: String,
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },

    /// Dump KL polynomials, the full gamma table or the oracle-derived
    /// reference tables.
    Export {
        group: String,
        #[arg(long, value_enum, default_value_t = ExportWhat::Kl)]
        what: ExportWhat,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum TruncOp {
    /// psi_x(z) for every x in the cell, or just `--x`.
    Psix {
        #[arg(long)]
        x: Option<String>,
    },
    /// The matrix dim_hom(z, u) over the sorted cell elements.
    Dimhom,
    /// The circle product table on c^0.
    Circle,
    /// Coefficients of t_w in t_{w1} ... t_{wr}.
    Convmult {
        /// Comma-separated words.
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<String>,
        /// Report only this w.
        #[arg(long)]
        w: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    Gamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Kl,
    Gamma,
    Golden,
}

/// Errors caused by the input rather than by the computation.
fn is_usage_error(err: &anyhow::Error) -> bool {
    use hecke_cells::Error as E;
    err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<E>(),
            Some(
                E::MalformedType { .. }
                    | E::NonFinite(_)
                    | E::TooLarge { .. }
                    | E::MalformedWord { .. }
                    | E::OutsideCell { .. }
                    | E::NoSuchCell(_)
                    | E::AmbiguousCell { .. }
                    | E::Config(_)
            )
        )
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let config = Config { bound: cli.bound, cache_dir: cli.cache_dir.clone(), format: cli.format.into(), seed: cli.seed, jobs: cli.jobs };
    match run(cli.command, &config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_usage_error(&err) { 2 } else { 1 })
        }
    }
}

/// Returns whether every check passed.
fn run(command: Command, config: &Config) -> anyhow::Result<bool> {
    config.validate()?;
    if let Some(jobs) = config.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("configuring worker threads")?;
    }
    let mut stdout = std::io::stdout().lock();
    let (report, ok) = match command {
        Command::Cells { group } => (commands::cells(&group, config)?, true),
        Command::Jtable { group, cell } => (commands::jtable(&group, &cell, config)?, true),
        Command::Truncated { group, cell, op } => (commands::truncated(&group, &cell, &op, config)?, true),
        Command::Verify { group, inject_fault } => commands::verify(&group, inject_fault.is_some(), config)?,
        Command::Export { group, what } => (commands::export(&group, what, config)?, true),
    };
    report.emit(config.format, &mut stdout)?;
    Ok(ok)
}
