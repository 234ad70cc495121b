use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use hilbzeta::report::{cmd_corpus, cmd_global, cmd_local, GlobalArgs, LocalArgs};

/// Hilbert-zeta functions of plane curves over finite fields.
#[derive(Parser)]
#[command(name = "hilbzeta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble Z_Hilb for a curve document and run every global check.
    Global {
        #[arg(long)]
        curve: PathBuf,
        /// Compute the series through t^K (at least 2g+3).
        #[arg(long)]
        nmax: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recompute every cached point count and fail on a mismatch.
        #[arg(long)]
        verify_cache: bool,
        /// Record wall-clock timings in the report (makes it non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Check the local numerator of a planar singularity f(x, y) = 0.
    #[command(group(ArgGroup::new("branch").required(true).args(["branches", "orbit_degrees"])))]
    Local {
        #[arg(long)]
        f: String,
        #[arg(long)]
        q: u64,
        /// Number of branches, all rational over F_q.
        #[arg(long)]
        branches: Option<u32>,
        /// Residue degrees of the branch orbits, comma separated.
        #[arg(long, value_delimiter = ',')]
        orbit_degrees: Option<Vec<u32>>,
        /// Expected delta invariant, checked against the numerator degree.
        #[arg(long)]
        delta: Option<u32>,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Enumerate ideals on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Run every document in a directory and print a summary table.
    Corpus {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Global {
            curve,
            nmax,
            out,
            verify_cache,
            timings,
        } => cmd_global(&GlobalArgs {
            curve,
            nmax,
            out,
            verify_cache,
            timings,
        }),
        Command::Local {
            f,
            q,
            branches,
            orbit_degrees,
            delta,
            nmax,
            out,
            serial,
        } => cmd_local(&LocalArgs {
            f,
            q,
            branches,
            orbit_degrees,
            delta,
            nmax,
            out,
            serial,
        }),
        Command::Corpus { dir } => cmd_corpus(&dir),
    };
    ExitCode::from(code as u8)
}
