use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use jacobi_edge::cli::{run_and_emit, Command, Format, Grid, JobSpec, THREADS_ENV};
use jacobi_edge::gap::{Scheme, ENDPOINT_PROBE};

/// Extreme-eigenvalue distributions of the β-Jacobi ensemble and gap probabilities of the
/// β-circular ensemble.
#[derive(Parser)]
#[command(name = "jacobi-edge", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gap probability E(0; (s, 1)), i.e. the distribution function of the largest eigenvalue.
    Gap(JacobiArgs),
    /// Density of the largest eigenvalue.
    Pmax(JacobiArgs),
    /// Density of the smallest eigenvalue.
    Pmin(JacobiArgs),
    /// Circular-ensemble gap probability over an arc of length φ (grid in radians).
    Circular(CircularArgs),
    /// Monte Carlo samples of the largest eigenvalue from the bidiagonal matrix model.
    Mc(JacobiArgs),
    /// Invariant suite: sum/endpoint rule, quadrature oracle, density, Monte Carlo gate.
    Verify(JacobiArgs),
}

#[derive(Args)]
struct Common {
    /// Number of eigenvalues.
    #[arg(long)]
    n: u32,
    /// β as an exact rational, e.g. 7/8.
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    /// Evaluation grid start:stop:points (bounds may be written as multiples of pi).
    #[arg(long)]
    grid: Option<Grid>,
    /// Output file for the curve table or report (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct JacobiArgs {
    #[command(flatten)]
    common: Common,
    /// λ1 as an exact rational.
    #[arg(long, allow_hyphen_values = true)]
    lambda1: String,
    /// λ2 as an exact rational.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "k")]
    lambda2: Option<String>,
    /// Sets λ2 = −β/2 + k.
    #[arg(long)]
    k: Option<u32>,
    /// auto, case1, case2, case3-frobenius or case3-nested.
    #[arg(long, default_value = "auto")]
    scheme: Scheme,
    /// Where to write the structured form as JSON.
    #[arg(long)]
    form_output: Option<PathBuf>,
    /// Point at which hypergeometric forms are evaluated in place of s = 1.
    #[arg(long, default_value_t = ENDPOINT_PROBE)]
    endpoint: f64,
    /// Random seed for Monte Carlo sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count (0 skips the gate in `verify`).
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Sample dump for `mc`, one value per line.
    #[arg(long)]
    samples_output: Option<PathBuf>,
}

#[derive(Args)]
struct CircularArgs {
    #[command(flatten)]
    common: Common,
    /// auto (direct recursion) or case3-nested (even-β mapping from the Jacobi ensemble).
    #[arg(long, default_value = "auto")]
    scheme: Scheme,
    /// Where to write the structured form as JSON.
    #[arg(long)]
    form_output: Option<PathBuf>,
}

fn base(command: Command, c: Common) -> JobSpec {
    let mut job = JobSpec::new(command, c.n, &c.beta);
    job.grid = c.grid;
    job.output = c.output;
    job.format = c.format;
    job
}

fn jacobi_job(command: Command, a: JacobiArgs) -> JobSpec {
    let mut job = base(command, a.common);
    job.lambda1 = Some(a.lambda1);
    job.lambda2 = a.lambda2;
    job.k = a.k;
    job.scheme = a.scheme;
    job.form_output = a.form_output;
    job.endpoint = a.endpoint;
    job.seed = a.seed;
    job.samples = a.samples;
    job.samples_output = a.samples_output;
    job
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: cannot configure {t} threads: {e}");
        }
    }
    let job = match cli.command {
        Cmd::Gap(a) => jacobi_job(Command::Gap, a),
        Cmd::Pmax(a) => jacobi_job(Command::Pmax, a),
        Cmd::Pmin(a) => jacobi_job(Command::Pmin, a),
        Cmd::Mc(a) => jacobi_job(Command::Mc, a),
        Cmd::Verify(a) => jacobi_job(Command::Verify, a),
        Cmd::Circular(a) => {
            let mut job = base(Command::Circular, a.common);
            job.scheme = a.scheme;
            job.form_output = a.form_output;
            job
        }
    };
    std::process::exit(run_and_emit(&job));
}
