use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dsfft::bench::{self, BenchOptions};
use dsfft::recover::{self, Input, RecoverOptions};
use dsfft::{demo, io as sigio, parse, verify, PlanSummary};
use dsfft_core::{plan_parameters, AcquisitionPath};

#[derive(Parser)]
#[command(
    name = "dsfft",
    version,
    about = "Deterministic sparse Fourier recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the measurement plan for a signal length and sparsity.
    Plan {
        #[arg(long, value_parser = count)]
        n: u64,
        #[arg(long)]
        sparsity: u64,
    },
    /// Recover the largest Fourier terms of a signal and report the error.
    Recover(RecoverArgs),
    /// Sample counts and phase timings as CSV.
    Bench(BenchArgs),
    /// Locate a single tone from 100-, 101- and 103-point FFTs.
    DemoCrt,
    /// Run the randomized invariant suite.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Vector,
    Function,
    Grid,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["input", "gen"]))]
struct RecoverArgs {
    /// Signal CSV (`spectrum_re,spectrum_im` or `time_re,time_im` header).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generated signal: `exact:B=2`, `algebraic:p=3,c=1`, `exponential:alpha=1,c=1`.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long, value_parser = count)]
    n: Option<u64>,
    /// Number of terms to report.
    #[arg(long)]
    b: usize,
    /// Separation sparsity of the plan (default B + 1).
    #[arg(long, conflicts_with = "delta")]
    bprime: Option<u64>,
    /// Precision constant (default 1).
    #[arg(long, conflicts_with = "delta")]
    c: Option<f64>,
    /// Target relative excess error; chooses B' and C from the --gen model.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Vector)]
    mode: Mode,
    /// Interpolation half-width for --mode grid.
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Omit wall-clock timings so output is reproducible byte for byte.
    #[arg(long)]
    no_timings: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated lengths; `10^6` and `1e6` forms are accepted.
    #[arg(long = "n-list")]
    n_list: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    sparsity: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Only evaluate plan sizes; timing columns stay empty.
    #[arg(long)]
    plan_only: bool,
    #[arg(long)]
    no_timings: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn count(s: &str) -> std::result::Result<u64, String> {
    parse::parse_count(s).map_err(|e| e.to_string())
}

enum Outcome {
    Ok,
    SuiteFailed,
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .context("building thread pool")?;
    Ok(pool.install(f))
}

fn emit_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn recover_cmd(args: RecoverArgs) -> Result<()> {
    let input = match (&args.input, &args.gen) {
        (Some(path), _) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let signal = sigio::read_signal(BufReader::new(file))
                .with_context(|| format!("reading {}", path.display()))?;
            Input::File {
                path: path.clone(),
                signal,
            }
        }
        (None, Some(spec)) => Input::Generated {
            model: parse::parse_model(spec)?,
            spec: spec.clone(),
            seed: args.seed,
        },
        (None, None) => unreachable!("clap requires a source"),
    };
    let opts = RecoverOptions {
        input,
        n: args.n,
        b: args.b,
        b_prime: args.bprime,
        c: args.c,
        delta: args.delta,
        mode: match args.mode {
            Mode::Vector => AcquisitionPath::Vector,
            Mode::Function => AcquisitionPath::Function,
            Mode::Grid => AcquisitionPath::Grid,
        },
        kappa: args.kappa,
        timings: !args.no_timings,
    };
    let output = with_threads(args.threads, || recover::run(&opts))??;
    emit_json(&output)
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let n_list = parse::parse_count_list(&args.n_list)?;
    let opts = BenchOptions {
        sparsity: args.sparsity,
        trials: args.trials,
        seed: args.seed,
        plan_only: args.plan_only,
        timings: !args.no_timings,
    };
    let rows = with_threads(args.threads, || bench::run(&n_list, &opts))??;
    bench::write_csv(io::stdout().lock(), &rows)?;
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Plan { n, sparsity } => {
            let plan = plan_parameters(n, sparsity)?;
            emit_json(&PlanSummary::new(&plan))?;
        }
        Command::Recover(args) => recover_cmd(args)?,
        Command::Bench(args) => bench_cmd(args)?,
        Command::DemoCrt => print!("{}", demo::transcript()?),
        Command::Verify {
            trials,
            seed,
            threads,
        } => {
            if trials == 0 {
                eprintln!("warning: --trials 0 runs no checks; passing vacuously");
            }
            let outcomes = with_threads(threads, || verify::run(trials, seed))?;
            print!("{}", verify::summary(&outcomes));
            if outcomes.iter().any(|o| !o.passed()) {
                return Ok(Outcome::SuiteFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::SuiteFailed) => ExitCode::from(2),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// A closed stdout (e.g. piping into `head`) is not an error.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| {
        let kind = match cause.downcast_ref::<io::Error>() {
            Some(io) => Some(io.kind()),
            None => cause
                .downcast_ref::<serde_json::Error>()
                .and_then(serde_json::Error::io_error_kind),
        };
        kind == Some(io::ErrorKind::BrokenPipe)
    })
}
