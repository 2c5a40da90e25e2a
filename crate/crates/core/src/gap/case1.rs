//! Case (1): `λ2` a non-negative integer. The gap probability is `s^{e0}` times a polynomial.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::numeric::{with_cancellation_guard, F64_FLOOR};
use super::params::JacobiParams;
use crate::error::{Error, Result};
use crate::exact::scalar::{qi, serde_scalar, serde_scalar_vec, Scalar};
use crate::exact::series::pow_exact;
use crate::exact::{Poly, Var};
use crate::recurrence::{sweep_poly, sweep_poly_weighted};
use crate::special::selberg_ratio_exact;

/// `E(s) = s^{exponent0} Σ_p gamma_p s^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyGapForm {
    #[serde(with = "serde_scalar")]
    pub exponent0: Scalar,
    #[serde(with = "serde_scalar_vec")]
    pub gamma: Vec<Scalar>,
}

/// `p(s) = s^{exponent} (1-s)^{one_minus_s_power} Σ_p gamma_p s^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyDensityForm {
    #[serde(with = "serde_scalar")]
    pub exponent: Scalar,
    pub one_minus_s_power: u32,
    #[serde(with = "serde_scalar_vec")]
    pub gamma: Vec<Scalar>,
}

fn eval_prefactored(poly: &Poly, exponent: &Scalar, tail: u32, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameters(format!("s = {s} outside [0, 1]")));
    }
    if s == 0.0 {
        return Ok(match exponent.cmp0() {
            std::cmp::Ordering::Greater => 0.0,
            std::cmp::Ordering::Equal => poly.coeff(0).to_f64(),
            std::cmp::Ordering::Less => f64::INFINITY,
        });
    }
    let maxlog = poly.max_term_log2(s);
    let v = with_cancellation_guard(64, Some(F64_FLOOR), |prec| {
        let x = Float::with_val(prec, s);
        Ok((poly.eval_float(&x), maxlog))
    })?;
    let prec = v.prec();
    let x = Float::with_val(prec, s);
    let mut out = v * pow_exact(&x, exponent)?;
    if tail > 0 {
        out *= Float::with_val(prec, 1 - &x).pow(tail);
    }
    Ok(out.to_f64())
}

impl PolyGapForm {
    pub fn poly(&self) -> Poly {
        Poly::new(Var::S, self.gamma.clone())
    }

    pub fn sum_rule(&self) -> Scalar {
        self.gamma.iter().fold(qi(0), |acc, g| acc + g)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        eval_prefactored(&self.poly(), &self.exponent0, 0, s)
    }

    /// Exact `d/ds`, written as `s^{e0-1}` times a polynomial (no `(1-s)` factor extracted).
    pub fn derivative(&self) -> Result<PolyDensityForm> {
        let g = self.poly();
        let d = g.scale(&self.exponent0).add(&g.derivative().shift_up(1))?;
        Ok(PolyDensityForm { exponent: Scalar::from(&self.exponent0 - 1), one_minus_s_power: 0, gamma: d.into_coeffs() })
    }
}

impl PolyDensityForm {
    pub fn poly(&self) -> Poly {
        Poly::new(Var::S, self.gamma.clone())
    }

    /// The polynomial with the `(1-s)` factor multiplied out.
    pub fn expanded_poly(&self) -> Result<Poly> {
        let mut p = self.poly();
        let f = Poly::from_i64(Var::S, &[1, -1]);
        for _ in 0..self.one_minus_s_power {
            p = p.mul(&f)?;
        }
        Ok(p)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        if s == 1.0 && self.one_minus_s_power > 0 {
            return Ok(0.0);
        }
        eval_prefactored(&self.poly(), &self.exponent, self.one_minus_s_power, s)
    }
}

fn require_case1(params: &JacobiParams) -> Result<u32> {
    params.case1_lambda2().ok_or_else(|| {
        Error::InvalidParameters(format!("case 1 needs lambda2 a non-negative integer, got {}", params.lambda2))
    })
}

/// Gap probability for integer `λ2`: `λ2` sweeps of the reflected polynomial recurrence from
/// the constant seed, then the Selberg ratio normalization.
pub fn gap_case1(params: &JacobiParams) -> Result<PolyGapForm> {
    let l2 = require_case1(params)?;
    let mut poly = Poly::one(Var::S);
    for alpha in 0..l2 {
        poly = sweep_poly(&poly, params.n, &params.lambda1, &params.beta, &qi(alpha as i64))?;
    }
    let ratio = selberg_ratio_exact(&params.lambda1, l2, &params.beta, params.n)?;
    let mut gamma = poly.scale(&ratio).into_coeffs();
    let len = (l2 * params.n) as usize + 1;
    if gamma.len() > len {
        return Err(Error::Invariant(format!("case-1 polynomial degree {} exceeds lambda2*N = {}", gamma.len() - 1, len - 1)));
    }
    gamma.resize(len, qi(0));
    let form = PolyGapForm { exponent0: params.exponent0(), gamma };
    let total = form.sum_rule();
    if total != 1 {
        return Err(Error::Invariant(format!("case-1 sum rule gives {total}, expected 1")));
    }
    Ok(form)
}

/// Largest-eigenvalue density for integer `λ2`: `N-1` variables carrying the extra weight
/// `(1-u)^β`, swept `λ2` times, with constant `e0 · J(λ1,0)/J(λ1,λ2)`. The result is checked
/// against the exact derivative of [`gap_case1`].
pub fn pmax_case1(params: &JacobiParams) -> Result<PolyDensityForm> {
    let l2 = require_case1(params)?;
    let nv = params.n - 1;
    let mut poly = Poly::one(Var::S);
    for alpha in 0..l2 {
        poly = sweep_poly_weighted(&poly, nv, &params.lambda1, &params.beta, &params.beta, &qi(alpha as i64))?;
    }
    let e0 = params.exponent0();
    let c = Scalar::from(&e0 * selberg_ratio_exact(&params.lambda1, l2, &params.beta, params.n)?);
    let mut gamma = poly.scale(&c).into_coeffs();
    let len = (l2 * nv) as usize + 1;
    if gamma.len() > len {
        return Err(Error::Invariant(format!("p_max polynomial degree {} exceeds lambda2*(N-1) = {}", gamma.len() - 1, len - 1)));
    }
    gamma.resize(len, qi(0));
    let form = PolyDensityForm { exponent: Scalar::from(&e0 - 1), one_minus_s_power: l2, gamma };
    let direct = gap_case1(params)?.derivative()?;
    if direct.poly() != form.expanded_poly()? || direct.exponent != form.exponent {
        return Err(Error::Invariant("p_max polynomial disagrees with the derivative of the case-1 gap".into()));
    }
    Ok(form)
}
