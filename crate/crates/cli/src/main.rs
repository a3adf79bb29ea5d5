//! `oneshot`: command-line front end for one-shot thermodynamics.
//!
//! Exit codes: 0 success, 1 the computation could not be carried out (size
//! caps, detailed-balance failures), 2 malformed input or arguments.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "oneshot", version, about = "One-shot thermodynamics on state and protocol files")]
pub struct Cli {
    /// Inverse temperature; a comma-separated list runs a sweep.
    #[arg(long, global = true, value_delimiter = ',', default_value = "1")]
    beta: Vec<f64>,
    /// Smoothing parameter in [0, 1].
    #[arg(long, global = true, default_value_t = 0.0)]
    eps: f64,
    /// Rényi orders, e.g. `0,0.5,1,2,inf`.
    #[arg(long, global = true, value_delimiter = ',', default_value = "0,0.5,1,2,inf")]
    alpha: Vec<String>,
    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Units for dimensionless quantities; `kT` reads nats as multiples of
    /// `k_B T`.
    #[arg(long, global = true, value_enum, default_value_t = Units::Nats)]
    units: Units,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Nats,
    Bits,
    #[value(name = "kT")]
    KT,
}

impl Units {
    /// Converts a value in nats.
    pub fn from_nats(self, x: f64) -> f64 {
        match self {
            Units::Nats | Units::KT => x,
            Units::Bits => x / std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
            Units::KT => "kT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rényi entropies, divergences from Gibbs, and smooth variants.
    Entropy { state: PathBuf },
    /// One-shot work cost and yield in energy and thermal units.
    Work { state: PathBuf },
    /// Whether `p` can be turned into `q` by thermal operations.
    Transform {
        p: PathBuf,
        q: PathBuf,
        /// Catalyst state file.
        #[arg(long)]
        catalyst: Option<PathBuf>,
        /// Write Lorenz curves here as CSV (`state,x,y`).
        #[arg(long)]
        curve_out: Option<PathBuf>,
    },
    /// Embezzle a bit from the harmonic catalyst family.
    Embezzle {
        /// Catalyst dimensions.
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256,512,1024")]
        n: Vec<usize>,
    },
    /// Work statistics of a driven protocol, with Crooks and Jarzynski checks.
    Fluctuation {
        protocol: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Write the reverse work distribution here as CSV (`W,prob`).
        #[arg(long)]
        rev_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
