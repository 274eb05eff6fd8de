use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod family;
mod report;

use family::{FamilySpec, Mode};

/// Build, certify and probe skew-symmetric entanglement witnesses.
#[derive(Debug, Parser)]
#[command(name = "witnesskit", version)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, env = "WITNESSKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override, e.g. --tol cert=1e-6 (repeatable).
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    pub tol: Vec<String>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Canonical,
    Partition,
    Embedded,
    Extended,
    FromU,
    Opc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Complex,
    Real,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a witness operator with its provenance.
    BuildWitness {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        d: Option<usize>,
        /// Number of unit blocks.
        #[arg(long)]
        n: Option<usize>,
        /// Invariant factors, e.g. 1,0.5.
        #[arg(long = "lambda", value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<usize>>,
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        d2: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        combo: Option<Vec<usize>>,
        /// Skew generator file: {"d":N,"upper":[...]}.
        #[arg(long)]
        u: Option<PathBuf>,
    },
    /// Write a family state together with its condition report.
    BuildState {
        #[command(flatten)]
        spec: FamilySpec,
        #[arg(long, value_enum, default_value = "valid")]
        mode: Mode,
        /// Draw index within the seeded stream.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Saturating member with every coefficient equal to this value.
        #[arg(long, conflicts_with = "params")]
        a0: Option<f64>,
        /// Explicit coefficient file for the family.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Keep the extended operator unnormalized.
        #[arg(long)]
        unnormalized: bool,
    },
    /// Minimize the witness over product states.
    VerifyWitness {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        #[arg(long, value_enum, default_value = "complex")]
        field: FieldArg,
    },
    /// Classify a state against a witness.
    Classify {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Seeded family draws as CSV rows of trace, class and margin.
    Sweep {
        #[command(flatten)]
        spec: FamilySpec,
        #[arg(long, value_enum, default_value = "valid")]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        draws: u64,
    },
    /// Block canonical form of a skew-symmetric matrix.
    Decompose {
        /// Skew generator file: {"d":N,"upper":[...]}.
        #[arg(long = "in", conflicts_with_all = ["d", "upper"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "upper")]
        d: Option<usize>,
        /// Strict upper triangle, row-major.
        #[arg(long, value_delimiter = ',', requires = "d")]
        upper: Option<Vec<f64>>,
    },
    /// List integer partitions or index subsets.
    Enumerate {
        #[arg(long, conflicts_with = "combos", required_unless_present = "combos")]
        partitions: Option<usize>,
        /// Subsets of size D1 drawn from D2 indices.
        #[arg(long, num_args = 2, value_names = ["D2", "D1"])]
        combos: Option<Vec<usize>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
