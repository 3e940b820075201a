//! `privmin` command-line tool: sketching, comparison, experiments and
//! closed-form analysis for differentially private MinHash similarity.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Parser)]
#[command(
    name = "privmin",
    version,
    about = "Differentially private MinHash-based Jaccard similarity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one signature line per corpus document
    Sketch(SketchArgs),
    /// Compare signature files and print per-pair similarities as CSV
    Compare(CompareArgs),
    /// Sweep (epsilon, K) over a corpus and report averaged F1/MSE as CSV
    Experiment(ExperimentArgs),
    /// Evaluate the closed-form analysis quantities
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct ShingleArgs {
    /// Shingle unit: word or char
    #[arg(long, default_value = "word", value_parser = ["word", "char"])]
    shingle_unit: String,
    /// Tokens or characters per shingle window
    #[arg(long, default_value_t = 3)]
    shingle_width: usize,
}

#[derive(Args)]
struct SketchArgs {
    /// Corpus path: a text file (one document per line) or a directory
    /// (one document per file)
    input: PathBuf,
    /// Corpus layout; inferred from the path by default
    #[arg(long, value_parser = ["lines", "dir"])]
    format: Option<String>,
    /// Number of hash functions
    #[arg(short, long, default_value_t = 25)]
    k: usize,
    /// Master seed (falls back to $PRIVMIN_SEED, then 42)
    #[arg(long)]
    seed: Option<u64>,
    /// Signature algorithm
    #[arg(long, default_value = "plain", value_parser = ["plain", "privmin", "exp-all"])]
    algorithm: String,
    /// Privacy budget; required unless the algorithm is plain
    #[arg(long)]
    epsilon: Option<f64>,
    /// Flip-vector draw probability P_r (privmin only; defaults to P_t)
    #[arg(long)]
    p_r: Option<f64>,
    #[command(flatten)]
    shingle: ShingleArgs,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a JSON-lines audit record per document (privmin only)
    #[arg(long)]
    audit: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// First signature file
    file_a: PathBuf,
    /// Second signature file; pairs are formed row by row. When omitted,
    /// pairs come from FILE_A alone according to --pairs.
    file_b: Option<PathBuf>,
    /// Single-file pairing rule
    #[arg(long, default_value = "consecutive", value_parser = ["consecutive", "all"])]
    pairs: String,
    /// Add Laplace output-perturbation noise with this budget per pair
    #[arg(long)]
    baseline_epsilon: Option<f64>,
    /// Master seed (falls back to $PRIVMIN_SEED, then 42)
    #[arg(long)]
    seed: Option<u64>,
    /// Signature agreement counting
    #[arg(long, default_value = "positional", value_parser = ["positional", "value-set"])]
    match_mode: String,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Corpus path: a text file (one document per line) or a directory
    input: PathBuf,
    /// Corpus layout; inferred from the path by default
    #[arg(long, value_parser = ["lines", "dir"])]
    format: Option<String>,
    /// Algorithm to sweep
    #[arg(long, default_value = "mh-jsc",
          value_parser = ["mh-jsc", "baseline", "privmin", "exp-all", "private-minhash-all-steps"])]
    algorithm: String,
    /// Dataset preset fixing the decision threshold
    /// (alpine 0.5, bbc 0.4, opinosis 0.5, msrp 0.3)
    #[arg(long, value_parser = ["alpine", "bbc", "opinosis", "msrp"], conflicts_with = "threshold")]
    preset: Option<String>,
    /// Decision threshold on similarities
    #[arg(long)]
    threshold: Option<f64>,
    /// Epsilon grid: comma list or start:stop:step (inclusive)
    #[arg(long, default_value = "0.1:1.0:0.1")]
    epsilon_grid: String,
    /// K grid: comma list or start:stop:step (inclusive)
    #[arg(long, default_value = "5:25:5")]
    k_grid: String,
    /// Repetitions averaged per grid point
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Master seed (falls back to $PRIVMIN_SEED, then 42)
    #[arg(long)]
    seed: Option<u64>,
    /// Pair selection: consecutive, all, or sampled:N
    #[arg(long, default_value = "consecutive")]
    pairs: String,
    #[command(flatten)]
    shingle: ShingleArgs,
    /// Worker threads (default: available cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Report runtime_ms as 0 for byte-identical reports
    #[arg(long)]
    no_timing: bool,
    /// Dataset label for the CSV (default: input file stem)
    #[arg(long)]
    dataset: Option<String>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AnalyzeArgs {
    /// Concentration probability: K SIGMA THETA
    #[arg(long, num_args = 3, value_names = ["K", "SIGMA", "THETA"])]
    approx: Option<Vec<String>>,
    /// Conditional DPSO epsilon: K SIGMA SIGMA_PRIME THETA N
    #[arg(long, num_args = 5, value_names = ["K", "SIGMA", "SIGMA_PRIME", "THETA", "N"])]
    dpso: Option<Vec<String>>,
    /// Usefulness bound: P_T ALPHA DELTA
    #[arg(long, num_args = 3, value_names = ["P_T", "ALPHA", "DELTA"])]
    usefulness: Option<Vec<String>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sketch(args) => commands::sketch(args),
        Command::Compare(args) => commands::compare(args),
        Command::Experiment(args) => commands::experiment(args),
        Command::Analyze(args) => commands::analyze(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
