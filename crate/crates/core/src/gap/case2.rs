//! Case (2): `λ2 = -β/2 + k`. The gap probability is `s^{e0}` times `P f + Q f'` with `f` a
//! Gauss hypergeometric function and `P, Q` exact polynomials.

use rug::Float;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::numeric::with_cancellation_guard;
use super::params::JacobiParams;
use crate::error::{Error, Result};
use crate::exact::scalar::{qi, serde_scalar, Scalar};
use crate::exact::series::pow_exact;
use crate::exact::Poly;
use crate::recurrence::{sweep_hyp, sweep_hyp_weighted, HypPair};
use crate::special::{hyp2f1_deriv_float, hyp2f1_float, selberg_quotient_ln, HypParams, SelbergParams};

/// Probe point standing in for `s = 1`, where `f` may diverge while `P f + Q f'` stays finite.
pub const ENDPOINT_PROBE: f64 = 1.0 - 1e-6;

const NORM_PREC: u32 = 256;

/// `E(s) = norm · s^{exponent0} (P(s) f(s) + Q(s) f'(s))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypGapForm {
    #[serde(with = "serde_scalar")]
    pub exponent0: Scalar,
    pub p_poly: Poly,
    pub q_poly: Poly,
    pub hyp: HypParams,
    #[serde(with = "serde_float")]
    pub ln_norm: Float,
}

/// `p(s) = const · s^{exponent} (1-s)^{one_minus_s_power} (P f + Q f')`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypDensityForm {
    #[serde(with = "serde_scalar")]
    pub exponent: Scalar,
    #[serde(with = "serde_scalar")]
    pub one_minus_s_power: Scalar,
    pub p_poly: Poly,
    pub q_poly: Poly,
    pub hyp: HypParams,
    #[serde(with = "serde_float")]
    pub ln_const: Float,
}

/// High-precision reals as decimal strings with 40 significant digits.
mod serde_float {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string_radix(10, Some(40)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Float, D::Error> {
        let s = String::deserialize(d)?;
        let parsed = Float::parse(&s).map_err(serde::de::Error::custom)?;
        Ok(Float::with_val(NORM_PREC, parsed))
    }
}

/// `P(s) f(s) + Q(s) f'(s)` with at least 64 significant bits.
fn pair_value(p: &Poly, q: &Poly, hyp: &HypParams, s: &Float, bits: u32) -> Result<Float> {
    let sf = s.to_f64();
    with_cancellation_guard(bits, None, |prec| {
        let x = Float::with_val(prec, s);
        let f = hyp2f1_float(hyp, &x, prec)?;
        let fd = hyp2f1_deriv_float(hyp, &x, prec)?;
        let lf = super::numeric::log2_abs(&f);
        let lfd = super::numeric::log2_abs(&fd);
        let maxlog = (p.max_term_log2(sf) + lf).max(q.max_term_log2(sf) + lfd);
        Ok((p.eval_float(&x) * f + q.eval_float(&x) * fd, maxlog))
    })
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::InvalidParameters(format!("hypergeometric forms are evaluated on [0, 1); got s = {s}")));
    }
    Ok(())
}

impl HypGapForm {
    /// Estimate of `E(1)`. Near `s = 1`, `E = 1 - C (1-s)^{λ2+1} + ...`; for `λ2 >= 0` the
    /// probe at [`ENDPOINT_PROBE`] is already within `1e-6`, otherwise two probes eliminate the
    /// leading correction.
    pub fn endpoint_limit(&self, lambda2: &Scalar) -> Result<f64> {
        let e1 = self.eval(ENDPOINT_PROBE)?;
        if lambda2.cmp0().is_ge() {
            return Ok(e1);
        }
        let s2 = 1.0 - 1e-9;
        let e2 = self.eval(s2)?;
        let x = lambda2.to_f64() + 1.0;
        let (w1, w2) = ((1.0 - ENDPOINT_PROBE).powf(x), (1.0 - s2).powf(x));
        Ok((e2 * w1 - e1 * w2) / (w1 - w2))
    }

    pub fn norm(&self) -> f64 {
        Float::with_val(NORM_PREC, self.ln_norm.exp_ref()).to_f64()
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(self.eval_float(&Float::with_val(64, s), 64)?.to_f64())
    }

    /// `E(s)` to about `bits` significant bits (at most the 256 carried by the norm).
    pub fn eval_float(&self, s: &Float, bits: u32) -> Result<Float> {
        check_s(s.to_f64())?;
        let g = pair_value(&self.p_poly, &self.q_poly, &self.hyp, s, bits)?;
        let prec = g.prec().max(NORM_PREC);
        let x = Float::with_val(prec, s);
        let pre = Float::with_val(prec, &self.ln_norm).exp() * pow_exact(&x, &self.exponent0)?;
        Ok(g * pre)
    }
}

impl HypDensityForm {
    pub fn eval(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        if s == 0.0 {
            return Ok(match self.exponent.cmp0() {
                std::cmp::Ordering::Greater => 0.0,
                std::cmp::Ordering::Equal => {
                    Float::with_val(NORM_PREC, self.ln_const.exp_ref()).to_f64() * self.p_poly.coeff(0).to_f64()
                }
                std::cmp::Ordering::Less => f64::INFINITY,
            });
        }
        let g = pair_value(&self.p_poly, &self.q_poly, &self.hyp, &Float::with_val(64, s), 64)?;
        let prec = g.prec().max(NORM_PREC);
        let x = Float::with_val(prec, s);
        let t = Float::with_val(prec, 1 - &x);
        let pre = Float::with_val(prec, &self.ln_const).exp() * pow_exact(&x, &self.exponent)? * pow_exact(&t, &self.one_minus_s_power)?;
        Ok((g * pre).to_f64())
    }
}

fn require_case2(params: &JacobiParams) -> Result<u32> {
    params.case2_k().ok_or_else(|| {
        Error::InvalidParameters(format!(
            "case 2 needs lambda2 + beta/2 a non-negative integer, got lambda2 = {}, beta = {}",
            params.lambda2, params.beta
        ))
    })
}

fn ln_selberg_ratio(params: &JacobiParams) -> Result<Float> {
    let num = SelbergParams::new(params.lambda1.clone(), qi(0), params.beta.clone(), params.n);
    let den = SelbergParams::new(params.lambda1.clone(), params.lambda2.clone(), params.beta.clone(), params.n);
    selberg_quotient_ln(&[num], &[den], NORM_PREC)
}

/// Gap probability for `λ2 = -β/2 + k` with `k` sweeps from the hypergeometric seed at
/// `α = -β/2`. The endpoint rule is asserted at [`ENDPOINT_PROBE`].
pub fn gap_case2(lambda1: &Scalar, beta: &Scalar, k: u32, n: u32) -> Result<HypGapForm> {
    let params = JacobiParams::from_k(lambda1.clone(), beta.clone(), k, n)?;
    gap_case2_params(&params)
}

pub fn gap_case2_params(params: &JacobiParams) -> Result<HypGapForm> {
    let k = require_case2(params)?;
    let (n, nn) = (params.n, qi(params.n as i64));
    let half = Scalar::from(&params.beta / 2);
    let hyp = HypParams::new(
        Scalar::from(&half * &nn),
        Scalar::from(&half * (Scalar::from(&nn - 1))) + &params.lambda1 + 1,
        Scalar::from(&params.beta * (Scalar::from(&nn - 1))) + &params.lambda1 + 2,
    )?;
    let mut pair = HypPair::seed(hyp);
    for i in 0..k {
        let alpha = qi(i as i64) - &half;
        pair = sweep_hyp(&pair, n, &params.lambda1, &params.beta, &alpha)?;
    }
    check_degrees(&pair, k, n, n + 1)?;
    let form = HypGapForm {
        exponent0: params.exponent0(),
        p_poly: pair.p_poly,
        q_poly: pair.q_poly,
        hyp: pair.hyp,
        ln_norm: ln_selberg_ratio(params)?,
    };
    let end = form.endpoint_limit(&params.lambda2)?;
    if (end - 1.0).abs() > 1e-6 {
        return Err(Error::Invariant(format!("case-2 endpoint rule: E(1) estimated as {end}")));
    }
    Ok(form)
}

fn check_degrees(pair: &HypPair, k: u32, dp: u32, dq: u32) -> Result<()> {
    let deg = |p: &Poly| p.degree().unwrap_or(0) as u32;
    if deg(&pair.p_poly) > k * dp || deg(&pair.q_poly) > k * dq {
        return Err(Error::Invariant(format!(
            "hypergeometric pair degrees ({}, {}) exceed ({}, {})",
            deg(&pair.p_poly),
            deg(&pair.q_poly),
            k * dp,
            k * dq
        )));
    }
    Ok(())
}

/// Largest-eigenvalue density for `λ2 = -β/2 + k`: `N-1` variables with the extra weight
/// `(1-u)^β`, seeded by `₂F₁(β(N-1)/2, (β/2)(N-2)+λ1+1; β(N-1)+λ1+2; s)` at `α = -β/2`.
pub fn pmax_case2(lambda1: &Scalar, beta: &Scalar, k: u32, n: u32) -> Result<HypDensityForm> {
    let params = JacobiParams::from_k(lambda1.clone(), beta.clone(), k, n)?;
    pmax_case2_params(&params)
}

pub fn pmax_case2_params(params: &JacobiParams) -> Result<HypDensityForm> {
    let k = require_case2(params)?;
    let nv = params.n - 1;
    let nm1 = qi(nv as i64);
    let half = Scalar::from(&params.beta / 2);
    let hyp = HypParams::new(
        Scalar::from(&half * &nm1),
        Scalar::from(&half * (Scalar::from(&nm1 - 1))) + &params.lambda1 + 1,
        Scalar::from(&params.beta * &nm1) + &params.lambda1 + 2,
    )?;
    let mut pair = HypPair::seed(hyp);
    for i in 0..k {
        let alpha = qi(i as i64) - &half;
        pair = sweep_hyp_weighted(&pair, nv, &params.lambda1, &params.beta, &params.beta, &alpha)?;
    }
    check_degrees(&pair, k, nv, nv + 1)?;
    let e0 = params.exponent0();
    let ln_const = ln_selberg_ratio(params)? + Float::with_val(NORM_PREC, &e0).ln();
    Ok(HypDensityForm {
        exponent: Scalar::from(&e0 - 1),
        one_minus_s_power: params.lambda2.clone(),
        p_poly: pair.p_poly,
        q_poly: pair.q_poly,
        hyp: pair.hyp,
        ln_const,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::q;
    use crate::gap::case1::{gap_case1, pmax_case1};
    use crate::special::beta_value;

    #[test]
    fn zero_sweeps_is_the_seed() {
        let f = gap_case2(&q(1, 2), &q(3, 2), 0, 3).unwrap();
        assert_eq!(f.p_poly, Poly::one(crate::exact::Var::S));
        assert!(f.q_poly.is_zero());
        let d = pmax_case2(&q(1, 2), &q(3, 2), 0, 3).unwrap();
        assert_eq!(d.p_poly.degree(), Some(0));
        assert!(d.q_poly.is_zero());
    }

    #[test]
    fn single_variable_closed_form() {
        let f = gap_case2(&qi(0), &qi(1), 1, 1).unwrap();
        for i in 1..20 {
            let s = i as f64 / 20.0;
            assert!((f.eval(s).unwrap() - (1.0 - (1.0 - s).powf(1.5))).abs() < 1e-12);
        }
    }

    #[test]
    fn single_variable_density() {
        let (l1, b, k) = (q(7, 3), q(5, 4), 2);
        let d = pmax_case2(&l1, &b, k, 1).unwrap();
        let l2 = qi(k as i64) - Scalar::from(&b / 2);
        let bv = beta_value(&l1, &l2).unwrap();
        for &s in &[0.1f64, 0.5, 0.9] {
            let want = s.powf(l1.to_f64()) * (1.0 - s).powf(l2.to_f64()) / bv;
            assert!(((d.eval(s).unwrap() - want) / want).abs() < 1e-12);
        }
    }

    #[test]
    fn agrees_with_case1_for_even_beta() {
        let (l1, b, k, n) = (q(1, 3), qi(2), 3u32, 3u32);
        let h = gap_case2(&l1, &b, k, n).unwrap();
        let p = gap_case1(&JacobiParams::from_k(l1.clone(), b.clone(), k, n).unwrap()).unwrap();
        let hd = pmax_case2(&l1, &b, k, n).unwrap();
        let pd = pmax_case1(&JacobiParams::from_k(l1, b, k, n).unwrap()).unwrap();
        for i in 1..=20 {
            let s = i as f64 / 21.0;
            assert!((h.eval(s).unwrap() - p.eval(s).unwrap()).abs() < 1e-10);
            assert!((hd.eval(s).unwrap() - pd.eval(s).unwrap()).abs() < 1e-9 * pd.eval(s).unwrap().abs().max(1.0));
        }
    }

    #[test]
    fn json_round_trip() {
        let f = gap_case2(&qi(1), &q(2, 3), 2, 2).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        let back: HypGapForm = serde_json::from_str(&js).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), js);
        assert!((back.eval(0.4).unwrap() - f.eval(0.4).unwrap()).abs() < 1e-15);
    }
}
