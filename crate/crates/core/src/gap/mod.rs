//! Structured gap-probability and extreme-eigenvalue density forms for the β-Jacobi ensemble.

pub mod case1;
pub mod case2;
pub mod case3;
pub(crate) mod numeric;
pub mod params;

pub use case1::{gap_case1, pmax_case1, PolyDensityForm, PolyGapForm};
pub use case2::{gap_case2, gap_case2_params, pmax_case2, pmax_case2_params, HypDensityForm, HypGapForm, ENDPOINT_PROBE};
pub use params::{CaseTag, JacobiParams};
pub use case3::{frobenius_solution, gap_case3, gap_case3_frobenius, gap_case3_nested, nested_integral, EdgeSeriesForm, FrobeniusSolution};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which pipeline produces a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Auto,
    Case1,
    Case2,
    Case3Frobenius,
    Case3Nested,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Scheme::Auto,
            "case1" => Scheme::Case1,
            "case2" => Scheme::Case2,
            "case3-frobenius" => Scheme::Case3Frobenius,
            "case3-nested" => Scheme::Case3Nested,
            _ => return Err(Error::InvalidParameters(format!("unknown scheme {s:?}"))),
        })
    }
}

/// A gap probability `E(s) = E_N(0; (s, 1))` in one of the structured forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum GapForm {
    Poly(PolyGapForm),
    Hyp(HypGapForm),
    EdgeSeries(EdgeSeriesForm),
}

/// A largest-eigenvalue density in one of the structured forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum DensityForm {
    Poly(PolyDensityForm),
    Hyp(HypDensityForm),
    /// The density is the exact `s`-derivative of the stored gap expansion.
    EdgeSeries(EdgeSeriesForm),
}

impl GapForm {
    /// `E(s)` on `[0, 1]`. Hypergeometric forms are probed at [`ENDPOINT_PROBE`] for `s = 1`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        match self {
            GapForm::Poly(f) => f.eval(s),
            GapForm::Hyp(f) => f.eval(if s == 1.0 { ENDPOINT_PROBE } else { s }),
            GapForm::EdgeSeries(f) => f.eval(s),
        }
    }

    pub fn scheme_name(&self) -> &'static str {
        match self {
            GapForm::Poly(_) => "case1",
            GapForm::Hyp(_) => "case2",
            GapForm::EdgeSeries(_) => "case3",
        }
    }
}

impl DensityForm {
    pub fn eval(&self, s: f64) -> Result<f64> {
        match self {
            DensityForm::Poly(f) => f.eval(s),
            DensityForm::Hyp(f) => f.eval(if s == 1.0 { ENDPOINT_PROBE } else { s }),
            DensityForm::EdgeSeries(f) => f.density(s),
        }
    }
}

/// Numeric value of any gap form.
pub fn evaluate(form: &GapForm, s: f64) -> Result<f64> {
    form.eval(s)
}

fn resolve(params: &JacobiParams, scheme: Scheme) -> Result<Scheme> {
    if scheme != Scheme::Auto {
        return Ok(scheme);
    }
    match params.cases().first() {
        Some(CaseTag::Case1) => Ok(Scheme::Case1),
        Some(CaseTag::Case2 { .. }) => Ok(Scheme::Case2),
        Some(CaseTag::Case3) => Ok(Scheme::Case3Frobenius),
        None => Err(Error::InvalidParameters(params.diagnosis())),
    }
}

/// The gap probability by the requested scheme; `Auto` prefers case 1, then case 2, then the
/// Frobenius scheme with nested fallback.
pub fn solve_gap(params: &JacobiParams, scheme: Scheme) -> Result<GapForm> {
    let auto = scheme == Scheme::Auto;
    Ok(match resolve(params, scheme)? {
        Scheme::Case1 => GapForm::Poly(gap_case1(params)?),
        Scheme::Case2 => GapForm::Hyp(gap_case2_params(params)?),
        Scheme::Case3Frobenius if auto => GapForm::EdgeSeries(gap_case3(params)?),
        Scheme::Case3Frobenius => GapForm::EdgeSeries(gap_case3_frobenius(params)?),
        Scheme::Case3Nested => GapForm::EdgeSeries(gap_case3_nested(params)?),
        Scheme::Auto => unreachable!("resolved above"),
    })
}

/// The largest-eigenvalue density. Cases 1 and 2 use the direct density recursions; case 3
/// differentiates the edge expansion exactly.
pub fn solve_pmax(params: &JacobiParams, scheme: Scheme) -> Result<DensityForm> {
    let auto = scheme == Scheme::Auto;
    Ok(match resolve(params, scheme)? {
        Scheme::Case1 => DensityForm::Poly(pmax_case1(params)?),
        Scheme::Case2 => DensityForm::Hyp(pmax_case2_params(params)?),
        Scheme::Case3Frobenius if auto => DensityForm::EdgeSeries(gap_case3(params)?),
        Scheme::Case3Frobenius => DensityForm::EdgeSeries(gap_case3_frobenius(params)?),
        Scheme::Case3Nested => DensityForm::EdgeSeries(gap_case3_nested(params)?),
        Scheme::Auto => unreachable!("resolved above"),
    })
}

/// The smallest-eigenvalue density as a largest-eigenvalue form for the swapped parameters;
/// evaluate it at `1 - s` (see [`pmin`]).
pub fn solve_pmin(params: &JacobiParams, scheme: Scheme) -> Result<DensityForm> {
    let swapped = params.swapped();
    if scheme == Scheme::Auto && swapped.cases().is_empty() {
        return Err(Error::InvalidParameters(format!(
            "p_min needs the swapped parameters (lambda1, lambda2) = ({}, {}) to be admissible: {}",
            swapped.lambda1,
            swapped.lambda2,
            swapped.diagnosis()
        )));
    }
    solve_pmax(&swapped, scheme)
}

/// `p_min(s; λ1, λ2, β) = p_max(1 - s; λ2, λ1, β)`.
pub fn pmin(params: &JacobiParams, s: f64) -> Result<f64> {
    solve_pmin(params, Scheme::Auto)?.eval(1.0 - s)
}
