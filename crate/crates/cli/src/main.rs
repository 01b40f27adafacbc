//! `hspan`: compute and cross-check spans of Hadamard products.
//!
//! Exit codes: 0 pass, 1 span mismatch or failed check, 2 input error,
//! 3 instance over budget. With several input files the largest code wins.

mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hspan::{FamilyKind, GenSpec, ToleranceConfig, VerifyOptions};

use commands::{cmd_compare, cmd_gen, cmd_span, cmd_verify, CompareMode, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "hspan",
    version,
    about = "Spans of Hadamard products of vector families"
)]
struct Cli {
    /// JSON output (the only output mode; accepted for compatibility).
    #[arg(long, global = true)]
    json: bool,

    /// Evaluate up to this many input files in parallel.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum KindArg {
    General,
    Psd,
}

impl From<KindArg> for FamilyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::General => FamilyKind::General,
            KindArg::Psd => FamilyKind::Psd,
        }
    }
}

#[derive(Debug, Args)]
struct SeedArg {
    /// RNG seed; falls back to HSPAN_SEED, then 0.
    #[arg(long, env = "HSPAN_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct RankTolArg {
    /// Relative singular value cutoff for numerical rank.
    #[arg(long = "rank-tol", default_value_t = 1e-10)]
    rank_tol: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a random instance file.
    Gen {
        n: usize,
        k: usize,
        #[arg(long, value_enum, default_value = "general")]
        kind: KindArg,
        /// Zero this many columns of each factor (must be < n).
        #[arg(long = "rank-deficit", default_value_t = 0)]
        rank_deficit: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Output path; the instance goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the span (rank and orthonormal basis) of an instance.
    Span {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Relative singular value cutoff for numerical rank.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Compare the Gram-Hadamard range with a directly computed span.
    Compare {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "basis")]
        mode: CompareMode,
        /// Random mode sample count (default n + 5).
        #[arg(long)]
        samples: Option<usize>,
        /// Largest projector distance counted as agreement.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        rank_tol: RankTolArg,
        #[command(flatten)]
        seed: SeedArg,
        /// Maximum n^k for basis mode.
        #[arg(long = "oracle-budget", default_value_t = 65_536)]
        oracle_budget: u64,
    },
    /// Certify every identity of the tensor-product argument.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Random trials for the orthogonality check.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Random trials for the pairing identity.
        #[arg(long = "pairing-trials", default_value_t = 10)]
        pairing_trials: usize,
        #[command(flatten)]
        rank_tol: RankTolArg,
        #[command(flatten)]
        seed: SeedArg,
        /// Maximum n^(k+1) for the tensor-based checks.
        #[arg(long = "tensor-budget", default_value_t = 1_000_000)]
        tensor_budget: u64,
    },
}

/// Runs `f` over `files`, at most `jobs` at a time, keeping input order.
fn run_batch(files: &[PathBuf], jobs: usize, f: impl Fn(&Path) -> Outcome + Sync) -> Vec<Outcome> {
    let jobs = jobs.max(1);
    if jobs == 1 || files.len() < 2 {
        return files.iter().map(|p| f(p)).collect();
    }
    let mut out = Vec::with_capacity(files.len());
    for chunk in files.chunks(jobs) {
        let results: Vec<Outcome> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk.iter().map(|p| scope.spawn(|| f(p))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker thread panicked"))
                .collect()
        });
        out.extend(results);
    }
    out
}

fn checked(cfg: ToleranceConfig) -> Result<ToleranceConfig, Outcome> {
    cfg.validate().map(|()| cfg).map_err(|e| {
        eprintln!("hspan: {e}");
        Outcome {
            line: String::new(),
            code: commands::EXIT_INPUT,
        }
    })
}

fn run(cli: Cli) -> Vec<Outcome> {
    match cli.command {
        Command::Gen {
            n,
            k,
            kind,
            rank_deficit,
            seed,
            out,
        } => {
            let spec = GenSpec {
                n,
                k,
                kind: kind.into(),
                rank_deficit,
                seed: seed.seed,
            };
            vec![cmd_gen(&spec, out.as_deref())]
        }
        Command::Span { files, tol, seed } => {
            let cfg = ToleranceConfig {
                rank_rel_tol: tol,
                ..ToleranceConfig::with_seed(seed.seed)
            };
            match checked(cfg) {
                Ok(cfg) => run_batch(&files, cli.jobs, |p| cmd_span(p, &cfg)),
                Err(o) => vec![o],
            }
        }
        Command::Compare {
            files,
            mode,
            samples,
            tol,
            rank_tol,
            seed,
            oracle_budget,
        } => {
            if samples == Some(0) {
                eprintln!("hspan compare: --samples must be >= 1");
                return vec![Outcome {
                    line: String::new(),
                    code: commands::EXIT_INPUT,
                }];
            }
            let cfg = ToleranceConfig {
                rank_rel_tol: rank_tol.rank_tol,
                subspace_tol: tol,
                oracle_budget,
                ..ToleranceConfig::with_seed(seed.seed)
            };
            match checked(cfg) {
                Ok(cfg) => run_batch(&files, cli.jobs, |p| cmd_compare(p, mode, samples, &cfg)),
                Err(o) => vec![o],
            }
        }
        Command::Verify {
            files,
            trials,
            pairing_trials,
            rank_tol,
            seed,
            tensor_budget,
        } => {
            if trials == 0 || pairing_trials == 0 {
                eprintln!("hspan verify: trial counts must be >= 1");
                return vec![Outcome {
                    line: String::new(),
                    code: commands::EXIT_INPUT,
                }];
            }
            let cfg = ToleranceConfig {
                rank_rel_tol: rank_tol.rank_tol,
                tensor_budget,
                ..ToleranceConfig::with_seed(seed.seed)
            };
            let opts = VerifyOptions {
                trials,
                pairing_trials,
                ..VerifyOptions::default()
            };
            match checked(cfg) {
                Ok(cfg) => run_batch(&files, cli.jobs, |p| cmd_verify(p, &opts, &cfg)),
                Err(o) => vec![o],
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcomes = run(cli);
    let mut code = 0;
    for o in &outcomes {
        if !o.line.is_empty() {
            println!("{}", o.line);
        }
        code = code.max(o.code);
    }
    ExitCode::from(code as u8)
}
