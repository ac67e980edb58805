//! `coxstrata`: command-line access to root systems, their intersection
//! lattices, Betti numbers, orbits, cohomology and strata.

mod cache;
mod commands;
mod export;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] coxstrata::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "coxstrata",
    version,
    about = "Strata of the wonderful compactification of a Cartan subalgebra"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Directory for cached lattices [env: COXSTRATA_CACHE, default ./.coxstrata]
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the lattice cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Lift the flat budget so that E8 can be enumerated.
    #[arg(long, global = true)]
    allow_huge: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Enum,
    Formula,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Markdown,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive roots in index order, highest root, labels and affine diagram.
    Rootinfo {
        ctype: String,
        #[arg(long)]
        json: bool,
    },
    /// Betti numbers f(Φ, 0..=r).
    Betti {
        ctype: String,
        #[arg(long, value_enum, default_value = "formula")]
        method: Method,
        /// Run every applicable method and fail on disagreement.
        #[arg(long)]
        compare: bool,
    },
    /// Run the invariant suites on one type, or on the standard sweep.
    Verify {
        ctype: Option<String>,
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
    /// Enumerate the intersection lattice.
    Lattice {
        ctype: String,
        #[arg(long, value_enum)]
        export: Option<ExportFormat>,
        /// Write the export here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Read a JSON export back and check it against the enumeration.
        #[arg(long)]
        import: Option<PathBuf>,
    },
    /// Good subsystems, Borel–de Siebenthal candidates and classical parameters.
    Good {
        ctype: String,
        #[arg(long)]
        bds: bool,
        #[arg(long)]
        classical_param: bool,
    },
    /// W-orbits of flats with stabilizer orders.
    Orbits { ctype: String },
    /// Cup products of basis classes.
    Cup {
        ctype: String,
        /// Flat ids to multiply.
        ids: Vec<usize>,
        /// Print atoms × flats.
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value = "markdown")]
        format: TableFormat,
    },
    /// Decide membership of a point and report its stratum.
    Member {
        ctype: String,
        /// Comma-separated coordinates in root index order; `inf` or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("COXSTRATA_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            CliError::Usage(format!("COXSTRATA_THREADS must be a number, got {v:?}"))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let g = &cli.global;
    match cli.command {
        Command::Rootinfo { ctype, json } => commands::rootinfo(&ctype, json),
        Command::Betti {
            ctype,
            method,
            compare,
        } => commands::betti(g, &ctype, method, compare),
        Command::Verify { ctype, level } => commands::verify(g, ctype.as_deref(), level),
        Command::Lattice {
            ctype,
            export,
            output,
            import,
        } => commands::lattice(g, &ctype, export, output, import),
        Command::Good {
            ctype,
            bds,
            classical_param,
        } => commands::good(g, &ctype, bds, classical_param),
        Command::Orbits { ctype } => commands::orbits(g, &ctype),
        Command::Cup {
            ctype,
            ids,
            table,
            format,
        } => commands::cup(g, &ctype, &ids, table, format),
        Command::Member { ctype, point } => commands::member(g, &ctype, &point),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
