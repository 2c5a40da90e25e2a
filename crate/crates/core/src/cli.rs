//! Job execution behind the command-line front end.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::circular::{circ_gap_even_beta, circ_gap_integer_beta, TrigGapForm};
use crate::error::{Error, Result};
use crate::exact::scalar::{as_i64, parse_scalar, Scalar};
use crate::gap::{solve_gap, solve_pmax, solve_pmin, DensityForm, GapForm, JacobiParams, Scheme, ENDPOINT_PROBE};
use crate::verify::ks::{empirical_gap, EmpiricalCDF, VerificationReport};
use crate::verify::quadrature::quadrature_circular_gap;
use crate::verify::sampler::{sample_lambda_max, CSModelParams};
use crate::verify::suite::run_suite;

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "JACOBI_EDGE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Gap,
    Pmax,
    Pmin,
    Circular,
    Mc,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParameters(format!("unknown format {s:?}"))),
        }
    }
}

/// Uniform grid `start:stop:points`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub const UNIT: Grid = Grid { start: 0.0, stop: 1.0, points: 101 };
    pub const CIRCLE: Grid = Grid { start: 0.0, stop: std::f64::consts::TAU, points: 101 };

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|k| if k + 1 == self.points { self.stop } else { self.start + h * k as f64 }).collect()
    }

    fn check_within(&self, hi: f64) -> Result<()> {
        if self.points == 0 || !(0.0 <= self.start && self.start <= self.stop && self.stop <= hi) {
            return Err(Error::InvalidParameters(format!(
                "grid {}:{}:{} must satisfy 0 ≤ start ≤ stop ≤ {hi} with at least one point",
                self.start, self.stop, self.points
            )));
        }
        Ok(())
    }
}

/// Parses one grid bound: a decimal, or a multiple of `pi` such as `pi`, `2pi`, `3/2pi`.
fn parse_bound(t: &str) -> Result<f64> {
    let t = t.trim();
    if let Some(m) = t.strip_suffix("pi") {
        let m = m.trim_end_matches('*');
        let f = if m.is_empty() { 1.0 } else { parse_scalar(m)?.to_f64() };
        return Ok(f * std::f64::consts::PI);
    }
    t.parse::<f64>().map_err(|_| Error::Parse(t.to_string()))
}

impl std::str::FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid {s:?} is not start:stop:points")));
        }
        let points = parts[2].trim().parse::<usize>().map_err(|_| Error::Parse(s.to_string()))?;
        Ok(Grid { start: parse_bound(parts[0])?, stop: parse_bound(parts[1])?, points })
    }
}

/// One command-line job.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub n: u32,
    pub lambda1: Option<String>,
    pub lambda2: Option<String>,
    pub k: Option<u32>,
    pub beta: String,
    pub scheme: Scheme,
    pub grid: Option<Grid>,
    pub seed: u64,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub form_output: Option<PathBuf>,
    pub samples_output: Option<PathBuf>,
    pub format: Format,
    /// Evaluation point used for `s = 1` with hypergeometric forms.
    pub endpoint: f64,
}

impl JobSpec {
    pub fn new(command: Command, n: u32, beta: &str) -> Self {
        JobSpec {
            command,
            n,
            lambda1: None,
            lambda2: None,
            k: None,
            beta: beta.into(),
            scheme: Scheme::Auto,
            grid: None,
            seed: 0,
            samples: 100_000,
            output: None,
            form_output: None,
            samples_output: None,
            format: Format::Csv,
            endpoint: ENDPOINT_PROBE,
        }
    }

    /// Exact Jacobi parameters; `--k` sets `λ2 = −β/2 + k`.
    pub fn jacobi_params(&self) -> Result<JacobiParams> {
        let beta = parse_scalar(&self.beta)?;
        let lambda1 = parse_scalar(self.lambda1.as_deref().ok_or_else(|| Error::InvalidParameters("--lambda1 is required".into()))?)?;
        match (&self.lambda2, self.k) {
            (Some(l2), None) => JacobiParams::new(lambda1, parse_scalar(l2)?, beta, self.n),
            (None, Some(k)) => JacobiParams::from_k(lambda1, beta, k, self.n),
            _ => Err(Error::InvalidParameters("give exactly one of --lambda2 and --k".into())),
        }
    }

    fn circular_beta(&self) -> Result<u32> {
        let b = parse_scalar(&self.beta)?;
        match as_i64(&b) {
            Some(v) if v > 0 => Ok(v as u32),
            _ => Err(Error::InvalidParameters(format!("circular ensemble needs a positive integer β, got {}", self.beta))),
        }
    }
}

#[derive(Serialize)]
struct ParamsRecord {
    n: u32,
    lambda1: String,
    lambda2: String,
    beta: String,
}

impl ParamsRecord {
    fn new(p: &JacobiParams) -> Self {
        let s = |x: &Scalar| crate::exact::scalar::scalar_to_string(x);
        ParamsRecord { n: p.n, lambda1: s(&p.lambda1), lambda2: s(&p.lambda2), beta: s(&p.beta) }
    }
}

#[derive(Serialize)]
struct CurvePoint {
    s: f64,
    value: f64,
}

#[derive(Serialize)]
struct CurveDocument<'a, F: Serialize> {
    command: &'a str,
    params: ParamsRecord,
    scheme: &'a str,
    form: &'a F,
    curve: Vec<CurvePoint>,
}

#[derive(Serialize)]
struct CircularDocument<'a> {
    command: &'a str,
    n: u32,
    beta: u32,
    form: &'a TrigGapForm,
    curve: Vec<CurvePoint>,
}

#[derive(Serialize)]
struct McDocument<'a> {
    command: &'a str,
    params: ParamsRecord,
    seed: u64,
    samples: usize,
    curve: Vec<CurvePoint>,
}

#[derive(Serialize)]
struct VerifyDocument {
    params: ParamsRecord,
    reports: Vec<VerificationReport>,
    pass: bool,
}

/// Result of a job: the main artifact plus whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOutput {
    pub artifact: String,
    pub pass: bool,
}

fn csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("s,value\n");
    for (x, v) in points {
        s.push_str(&format!("{x:.16e},{v:.16e}\n"));
    }
    s
}

fn curve(grid: &[f64], f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<(f64, f64)>> {
    grid.par_iter().map(|&s| Ok((s, f(s)?))).collect()
}

fn points(c: &[(f64, f64)]) -> Vec<CurvePoint> {
    c.iter().map(|&(s, value)| CurvePoint { s, value }).collect()
}

fn to_json<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x).map_err(|e| Error::Numeric(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Numeric(format!("cannot write {}: {e}", path.display())))
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Gap => "gap",
        Command::Pmax => "pmax",
        Command::Pmin => "pmin",
        Command::Circular => "circular",
        Command::Mc => "mc",
        Command::Verify => "verify",
    }
}

fn gap_value(form: &GapForm, s: f64, endpoint: f64) -> Result<f64> {
    match form {
        GapForm::Hyp(h) if s == 1.0 => h.eval(endpoint),
        _ => form.eval(s),
    }
}

fn density_value(form: &DensityForm, s: f64, endpoint: f64) -> Result<f64> {
    match form {
        DensityForm::Hyp(h) if s == 1.0 => h.eval(endpoint),
        _ => form.eval(s),
    }
}

fn scheme_label(scheme: Scheme, gap: Option<&GapForm>) -> &'static str {
    match (scheme, gap) {
        (Scheme::Auto, Some(g)) => g.scheme_name(),
        (Scheme::Auto, None) => "auto",
        (Scheme::Case1, _) => "case1",
        (Scheme::Case2, _) => "case2",
        (Scheme::Case3Frobenius, _) => "case3-frobenius",
        (Scheme::Case3Nested, _) => "case3-nested",
    }
}

/// Runs a job and returns the main artifact text. Side files (`form_output`,
/// `samples_output`) are written here; `output` is left to the caller.
pub fn run(job: &JobSpec) -> Result<JobOutput> {
    if !(job.endpoint > 0.0 && job.endpoint <= 1.0) {
        return Err(Error::InvalidParameters(format!("endpoint probe {} outside (0, 1]", job.endpoint)));
    }
    let name = command_name(job.command);
    match job.command {
        Command::Gap | Command::Pmax | Command::Pmin => {
            let params = job.jacobi_params()?;
            let grid = job.grid.unwrap_or(Grid::UNIT);
            grid.check_within(1.0)?;
            let xs = grid.values();
            let (form_json, table) = match job.command {
                Command::Gap => {
                    let form = solve_gap(&params, job.scheme)?;
                    let c = curve(&xs, |s| gap_value(&form, s, job.endpoint))?;
                    let label = scheme_label(job.scheme, Some(&form));
                    let doc = CurveDocument { command: name, params: ParamsRecord::new(&params), scheme: label, form: &form, curve: points(&c) };
                    (to_json(&form)?, if job.format == Format::Json { to_json(&doc)? } else { csv(&c) })
                }
                _ => {
                    let pmin = job.command == Command::Pmin;
                    let form = if pmin { solve_pmin(&params, job.scheme)? } else { solve_pmax(&params, job.scheme)? };
                    let c = curve(&xs, |s| if pmin { density_value(&form, 1.0 - s, job.endpoint) } else { density_value(&form, s, job.endpoint) })?;
                    let label = scheme_label(job.scheme, None);
                    let doc = CurveDocument { command: name, params: ParamsRecord::new(&params), scheme: label, form: &form, curve: points(&c) };
                    (to_json(&form)?, if job.format == Format::Json { to_json(&doc)? } else { csv(&c) })
                }
            };
            if let Some(p) = &job.form_output {
                write_file(p, &form_json)?;
            }
            Ok(JobOutput { artifact: table, pass: true })
        }
        Command::Circular => {
            let beta = job.circular_beta()?;
            let grid = job.grid.unwrap_or(Grid::CIRCLE);
            grid.check_within(std::f64::consts::TAU)?;
            let form = match job.scheme {
                Scheme::Auto | Scheme::Case3Frobenius => circ_gap_integer_beta(job.n, beta)?,
                Scheme::Case3Nested => circ_gap_even_beta(job.n, beta)?,
                other => return Err(Error::InvalidParameters(format!("scheme {other:?} does not apply to the circular ensemble"))),
            };
            let c = curve(&grid.values(), |phi| form.eval(phi))?;
            if let Some(p) = &job.form_output {
                write_file(p, &to_json(&form)?)?;
            }
            let doc = CircularDocument { command: name, n: job.n, beta, form: &form, curve: points(&c) };
            Ok(JobOutput { artifact: if job.format == Format::Json { to_json(&doc)? } else { csv(&c) }, pass: true })
        }
        Command::Mc => {
            let params = job.jacobi_params()?;
            if job.samples == 0 {
                return Err(Error::InvalidParameters("--samples must be positive".into()));
            }
            let grid = job.grid.unwrap_or(Grid::UNIT);
            grid.check_within(1.0)?;
            let xs = sample_lambda_max(&CSModelParams::from_jacobi(&params), job.samples, job.seed)?;
            if let Some(p) = &job.samples_output {
                let mut text = String::with_capacity(xs.len() * 24);
                for x in &xs {
                    text.push_str(&format!("{x:.16e}\n"));
                }
                write_file(p, &text)?;
            }
            let cdf = EmpiricalCDF::new(xs)?;
            let g = grid.values();
            let c: Vec<(f64, f64)> = g.iter().copied().zip(empirical_gap(&cdf, &g)).collect();
            let doc = McDocument { command: name, params: ParamsRecord::new(&params), seed: job.seed, samples: job.samples, curve: points(&c) };
            Ok(JobOutput { artifact: if job.format == Format::Json { to_json(&doc)? } else { csv(&c) }, pass: true })
        }
        Command::Verify => {
            let params = job.jacobi_params()?;
            let reports = run_suite(&params, job.scheme, job.samples, job.seed)?;
            let pass = reports.iter().all(|r| r.pass);
            let artifact = if job.format == Format::Json {
                to_json(&VerifyDocument { params: ParamsRecord::new(&params), reports, pass })?
            } else {
                let mut s = String::from("test,statistic,threshold,pass\n");
                for r in &reports {
                    s.push_str(&format!("{},{:.6e},{:.6e},{}\n", r.test, r.statistic, r.threshold, r.pass));
                }
                s
            };
            Ok(JobOutput { artifact, pass })
        }
    }
}

/// Runs a job, writes its artifact to `output` or stdout, and returns the exit code.
pub fn run_and_emit(job: &JobSpec) -> i32 {
    match run(job) {
        Ok(out) => {
            let written = match &job.output {
                Some(p) => write_file(p, &out.artifact),
                None => std::io::stdout()
                    .write_all(out.artifact.as_bytes())
                    .map_err(|e| Error::Numeric(format!("cannot write to stdout: {e}"))),
            };
            match written {
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
                Ok(()) if out.pass => 0,
                Ok(()) => {
                    eprintln!("verification failed");
                    3
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Cross-checks a circular form against the two-dimensional quadrature oracle.
pub fn circular_oracle_deviation(form: &TrigGapForm, phis: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &phi in phis {
        let q = quadrature_circular_gap(form.n, form.beta as f64, phi)?;
        worst = worst.max((form.eval(phi)? - q).abs());
    }
    Ok(worst)
}
