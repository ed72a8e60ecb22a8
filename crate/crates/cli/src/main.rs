use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod artifacts;
mod commands;
mod failure;

use artifacts::{parse_count, parse_range, parse_snr, SnrList};
use failure::EXIT_VALIDATION;

const ENV_HELP: &str = "\
Every global flag can also be set through the environment with the GIRTHFORGE_ prefix \
(GIRTHFORGE_JOBS, GIRTHFORGE_SEED, GIRTHFORGE_OUT_DIR).

Exit status: 0 success, 2 infeasible search, 3 invalid input or flags, 4 I/O failure.";

/// Design and evaluation of large-girth QC-LDPC block codes and the
/// convolutional codes unwrapped from them.
#[derive(Debug, Parser)]
#[command(name = "girthforge", version, after_help = ENV_HELP, args_override_self = true)]
pub struct Cli {
    /// Worker threads for the parallel parts (0 = all cores).
    #[arg(long, global = true, env = "GIRTHFORGE_JOBS", default_value_t = 0)]
    pub jobs: usize,

    /// Seed for every randomized stage.
    #[arg(long, global = true, env = "GIRTHFORGE_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Directory receiving all artifacts and the run manifest.
    #[arg(long, global = true, env = "GIRTHFORGE_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy search for an SMC exponent matrix of a given girth.
    Search(SearchArgs),
    /// Reduce the syndrome former memory of the unwrapped convolutional code.
    MinimizeMh(MinimizeArgs),
    /// Expand a code to a binary parity-check matrix in alist format.
    Expand(ExpandArgs),
    /// Certify the girth of a QC or convolutional code.
    Girth(GirthArgs),
    /// Monte Carlo BER over AWGN with BPSK.
    Simulate(SimulateArgs),
    /// Search, minimize, expand, certify and simulate in one go.
    Pipeline(PipelineArgs),
    /// Show a run manifest, check its artifacts, optionally replay it.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchTarget {
    /// Rows of the exponent matrix (column weight).
    #[arg(long)]
    pub m: usize,
    /// Columns of the exponent matrix (row weight).
    #[arg(long)]
    pub n: usize,
    /// Target girth (even, 4 to 12).
    #[arg(long)]
    pub girth: usize,
    /// Lifting degree.
    #[arg(
        long = "N",
        required_unless_present = "min_n",
        conflicts_with = "min_n"
    )]
    pub lifting_degree: Option<u64>,
    /// Scan lifting degrees a:b and keep the first feasible one.
    #[arg(long = "min-N", value_parser = parse_range)]
    pub min_n: Option<(u64, u64)>,
    /// Move on to the next base column after a dead end.
    #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub backtrack_base: bool,
    /// Revisit earlier multipliers after a dead end.
    #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub backtrack_gamma: bool,
    /// One pass, no backtracking at all (overrides both backtrack flags).
    #[arg(long)]
    pub literal: bool,
    /// Fixed base column, comma separated, starting 0,1.
    #[arg(long, value_delimiter = ',')]
    pub base_column: Option<Vec<u64>>,
    /// Skip multipliers ruled out by the linear lower bound.
    #[arg(long)]
    pub gamma_bound: bool,
    /// Give up after this many base columns.
    #[arg(long)]
    pub exhaust_limit: Option<u64>,
    /// Cap on multiplier candidates per base column in depth-first mode.
    #[arg(long)]
    pub branch_limit: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    #[command(flatten)]
    pub target: SearchTarget,
    /// Sweep the column count over a:b (needs --min-N) and write a CSV.
    #[arg(long, value_parser = parse_range, requires = "min_n")]
    pub sweep_n: Option<(u64, u64)>,
    /// Output file, relative to the output directory.
    #[arg(long, default_value = "spec.json")]
    pub out: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MinimizeArgs {
    /// Search output or exponent matrix JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Girth certified by the input (even, 6 to 14).
    #[arg(long)]
    pub girth: usize,
    /// Total move budget, e.g. 1e6.
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub budget: u64,
    /// Restarts without improvement before stopping.
    #[arg(long, default_value_t = 256)]
    pub patience: u64,
    /// Largest random starting offset.
    #[arg(long, default_value_t = 2)]
    pub max_start_offset: u64,
    /// Exhaustive search over offsets 0..=2 instead (m n <= 12).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value = "conv.json")]
    pub out: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpandArgs {
    /// Code JSON (QC matrix, search output or convolutional code).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Blocks of a terminated convolutional stream.
    #[arg(long, conflicts_with = "window")]
    pub blocks: Option<usize>,
    /// Blocks of a convolutional window matrix.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, default_value = "H.alist")]
    pub out: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GirthArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Largest cycle length searched (even, 4 to 12); the report is a lower
    /// bound when nothing shorter exists.
    #[arg(long, default_value_t = 12)]
    pub max_length: usize,
    /// Cross-check with breadth-first search on the binary Tanner graph.
    #[arg(long)]
    pub oracle: bool,
    /// Treat a QC matrix as the exponents of a convolutional code.
    #[arg(long)]
    pub conv: bool,
    #[arg(long, default_value = "girth.json")]
    pub out: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum DecoderArg {
    /// Belief propagation over the whole codeword or terminated stream.
    Full,
    /// Sliding-window belief propagation.
    Sw,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimArgs {
    #[arg(long, value_enum, default_value = "full")]
    pub decoder: DecoderArg,
    /// Window multiplier: W = alpha (m_h + 1) blocks.
    #[arg(long, default_value_t = 5)]
    pub alpha: usize,
    /// Eb/N0 points in dB, start:step:stop or a comma list.
    #[arg(long, value_parser = parse_snr, default_value = "1.0:0.5:3.0")]
    pub snr: SnrList,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Stream length in bits for convolutional codes.
    #[arg(long, default_value_t = 10_000)]
    pub length: usize,
    #[arg(long, default_value_t = 100)]
    pub min_errors: u64,
    #[arg(long, value_parser = parse_count, default_value = "1e5")]
    pub max_frames: u64,
    /// LLR magnitude limit inside the decoder.
    #[arg(long, default_value_t = girthforge::sim::DEFAULT_CLIP)]
    pub clip: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Code JSON (QC matrix, search output or convolutional code).
    #[arg(long)]
    pub code: PathBuf,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, default_value = "curve.csv")]
    pub out: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub target: SearchTarget,
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub budget: u64,
    /// Reference memory order for the latency ratio.
    #[arg(long)]
    pub ref_mh: Option<u64>,
    /// Reference lifting degree for the latency ratio.
    #[arg(long = "ref-N")]
    pub ref_n: Option<u64>,
    /// Skip the simulation stage.
    #[arg(long)]
    pub no_sim: bool,
    /// Simulate the convolutional code instead of the QC code.
    #[arg(long)]
    pub simulate_conv: bool,
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Re-run the recorded command and compare every output digest.
    #[arg(long)]
    pub replay: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VALIDATION),
            };
        }
    };
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            eprintln!("girthforge: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("girthforge: {failure}");
            failure.exit_code()
        }
    }
}
