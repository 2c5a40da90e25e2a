//! Invariant suite for one parameter set: sum rules, oracle agreement, density consistency
//! and the Monte Carlo gate.

use crate::error::Result;
use crate::exact::scalar::to_f64;
use crate::gap::{solve_gap, solve_pmax, GapForm, JacobiParams, Scheme};

use super::ks::{ks_gate, EmpiricalCDF, VerificationReport};
use super::quadrature::{quadrature_gap, MAX_ORACLE_N};
use super::sampler::{sample_lambda_max, CSModelParams};

/// Oracle comparison points.
pub const ORACLE_POINTS: [f64; 3] = [0.2, 0.5, 0.8];
pub const ORACLE_TOL: f64 = 1e-8;
pub const ENDPOINT_TOL: f64 = 1e-6;
pub const SUM_RULE_TOL: f64 = 1e-10;

/// Central five-point derivative.
pub fn numeric_derivative(f: impl Fn(f64) -> Result<f64>, s: f64, h: f64) -> Result<f64> {
    Ok((f(s - 2.0 * h)? - 8.0 * f(s - h)? + 8.0 * f(s + h)? - f(s + 2.0 * h)?) / (12.0 * h))
}

fn report(test: &str, statistic: f64, threshold: f64) -> VerificationReport {
    VerificationReport { test: test.into(), statistic, threshold, pass: statistic <= threshold }
}

/// Sum rule (cases 1 and 3) or endpoint rule (case 2).
pub fn normalization_check(params: &JacobiParams, form: &GapForm) -> Result<VerificationReport> {
    Ok(match form {
        GapForm::Poly(f) => report("sum_rule", (to_f64(&f.sum_rule()) - 1.0).abs(), 0.0),
        GapForm::EdgeSeries(f) => report("sum_rule", (to_f64(&f.sum_rule()) + 1.0).abs(), SUM_RULE_TOL),
        GapForm::Hyp(f) => report("endpoint", (f.endpoint_limit(&params.lambda2)? - 1.0).abs(), ENDPOINT_TOL),
    })
}

/// Largest deviation from the quadrature oracle over [`ORACLE_POINTS`].
pub fn oracle_check(params: &JacobiParams, form: &GapForm) -> Result<VerificationReport> {
    let mut worst: f64 = 0.0;
    for s in ORACLE_POINTS {
        worst = worst.max((form.eval(s)? - quadrature_gap(params, s)?).abs());
    }
    Ok(report("oracle", worst, ORACLE_TOL))
}

/// Direct density against numeric differentiation of the gap at interior points.
pub fn density_check(params: &JacobiParams, form: &GapForm, scheme: Scheme) -> Result<VerificationReport> {
    let density = solve_pmax(params, scheme)?;
    let mut worst: f64 = 0.0;
    for s in [0.25, 0.5, 0.75] {
        let d = numeric_derivative(|x| form.eval(x), s, 1e-3)?;
        let p = density.eval(s)?;
        worst = worst.max((d - p).abs() / p.abs().max(1.0));
    }
    Ok(report("density", worst, 1e-7))
}

/// KS gate of the model's largest eigenvalue against the analytic gap.
pub fn monte_carlo_check(params: &JacobiParams, form: &GapForm, samples: usize, seed: u64) -> Result<VerificationReport> {
    let xs = sample_lambda_max(&CSModelParams::from_jacobi(params), samples, seed)?;
    let cdf = EmpiricalCDF::new(xs)?;
    ks_gate("monte_carlo_ks", &cdf, 0.0, 1.0, |s| form.eval(s))
}

/// Every applicable check for `params`.
pub fn run_suite(params: &JacobiParams, scheme: Scheme, samples: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let form = solve_gap(params, scheme)?;
    let mut out = vec![normalization_check(params, &form)?];
    if params.n <= MAX_ORACLE_N {
        out.push(oracle_check(params, &form)?);
    }
    out.push(density_check(params, &form, scheme)?);
    if samples > 0 {
        out.push(monte_carlo_check(params, &form, samples, seed)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::qi;

    #[test]
    fn worked_example_passes_everything() {
        let p = JacobiParams::new(qi(0), qi(1), qi(2), 2).unwrap();
        let r = run_suite(&p, Scheme::Auto, 20_000, 1).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|x| x.pass), "{r:?}");
    }
}
