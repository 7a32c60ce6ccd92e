//! `zpk-cycles`: cycle structure of linear maps over Z/p^k from the command line.

mod commands;
mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "zpk-cycles", version, about = "Periods and cycle counts of linear maps over Z/p^k")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Maximum number of states (or parameter pairs) to enumerate.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads for parallel work.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// key=value file setting `budget` and `out_dir`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub k: u32,
    /// e.g. "1 - 4t + t^2" or "[1, -4, 1]".
    #[arg(long)]
    pub poly: String,
}

#[derive(Args, Debug, Clone)]
pub struct CatArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub b: u64,
}

/// A Cat map (`--a --b`) or the companion map of `--poly` acting on
/// `n`-vectors.
#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, requires = "b", conflicts_with = "poly")]
    pub a: Option<u64>,
    #[arg(long, requires = "a")]
    pub b: Option<u64>,
    #[arg(long)]
    pub poly: Option<String>,
    /// Block size of the companion map.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order P_k, threshold k_s and roots of a polynomial.
    AnalyzePoly(PolyArgs),
    /// Table prediction, measured period and histogram of a Cat map.
    AnalyzeCat(CatArgs),
    /// Cycle histogram of a map by exhaustive enumeration.
    Enumerate(MapArgs),
    /// Theory order against the brute-force oracle.
    VerifyOrder(PolyArgs),
    /// Structural checks on a map's functional graph.
    VerifyGraph(MapArgs),
    /// Measured Cat periods over all (a, b) against the table.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// D matrix at level v and the recursion from k to k + 1.
    DMatrix {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1)]
        v: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
