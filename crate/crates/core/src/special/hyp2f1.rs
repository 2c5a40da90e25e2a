//! Gauss hypergeometric function `₂F₁(a, b; c; s)` on `[0, 1)` in multiprecision.
//!
//! Arguments up to 1/2 are summed directly. Beyond that the connection formula to argument
//! `1 - s` is used; when `c - a - b` is an integer the connection coefficients are singular, and
//! `c` is perturbed by a tiny `ε` with the working precision raised to absorb the `1/ε`
//! cancellation. Working precision is raised adaptively until the observed cancellation leaves
//! the requested number of bits intact.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::scalar::{is_integer, serde_scalar, Scalar};

const MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypParams {
    #[serde(with = "serde_scalar")]
    pub a: Scalar,
    #[serde(with = "serde_scalar")]
    pub b: Scalar,
    #[serde(with = "serde_scalar")]
    pub c: Scalar,
}

impl HypParams {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Result<Self> {
        if is_nonpositive_int(&c) {
            return Err(Error::InvalidParameters(format!("2F1 parameter c = {c} is a non-positive integer")));
        }
        Ok(HypParams { a, b, c })
    }

    /// Parameters `(a+1, b+1, c+1)` of the derivative.
    pub fn raised(&self) -> HypParams {
        HypParams { a: Scalar::from(&self.a + 1), b: Scalar::from(&self.b + 1), c: Scalar::from(&self.c + 1) }
    }
}

fn is_nonpositive_int(x: &Scalar) -> bool {
    is_integer(x) && x.cmp0().is_le()
}

fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        let (m, e) = x.to_f64_exp();
        m.abs().log2() + e as f64
    }
}

/// Direct power series. Returns the sum and `log2` of the largest term magnitude.
fn series(a: &Float, b: &Float, c: &Float, z: &Float, wp: u32) -> Result<(Float, f64)> {
    let mut term = Float::with_val(wp, 1);
    let mut sum = Float::with_val(wp, 1);
    let mut maxlog = 0f64;
    for k in 0..MAX_TERMS {
        let kf = Float::with_val(wp, k as u32);
        let num = Float::with_val(wp, a + &kf) * Float::with_val(wp, b + &kf);
        let den = Float::with_val(wp, c + &kf) * Float::with_val(wp, &kf + 1u32);
        if den.is_zero() {
            return Err(Error::Numeric("2F1 series hit a non-positive integer lower parameter".into()));
        }
        let ratio = Float::with_val(wp, &num / &den) * z;
        term *= &ratio;
        if term.is_zero() {
            return Ok((sum, maxlog));
        }
        sum += &term;
        maxlog = maxlog.max(log2_abs(&term));
        let r = ratio.to_f64().abs();
        if r < 1.0 {
            let tail = log2_abs(&term) - (1.0 - r).log2();
            if tail < log2_abs(&sum) - wp as f64 - 8.0 {
                return Ok((sum, maxlog));
            }
        }
    }
    Err(Error::Numeric(format!("2F1 series did not converge within {MAX_TERMS} terms at z = {}", z.to_f64())))
}

fn recip_gamma(x: &Float) -> Float {
    if x.is_integer() && *x <= 0 {
        Float::new(x.prec())
    } else {
        Float::with_val(x.prec(), x.gamma_ref()).recip()
    }
}

/// One evaluation at working precision `wp`; returns the value and the number of bits lost.
fn evaluate_at(hp: &HypParams, z: &Float, wp: u32, target: u32) -> Result<(Float, f64)> {
    let a = Float::with_val(wp, &hp.a);
    let b = Float::with_val(wp, &hp.b);
    if z.is_zero() {
        return Ok((Float::with_val(wp, 1), 0.0));
    }
    let terminating = is_nonpositive_int(&hp.a) || is_nonpositive_int(&hp.b);
    if terminating || *z <= 0.5 {
        let c = Float::with_val(wp, &hp.c);
        let (v, maxlog) = series(&a, &b, &c, &Float::with_val(wp, z), wp)?;
        let lost = (maxlog - log2_abs(&v)).max(0.0);
        return Ok((v, lost));
    }
    let sigma_q = Scalar::from(&hp.c - &hp.a) - &hp.b;
    let (wp, eps_bits) = if is_integer(&sigma_q) { (wp + target + 32, target + 32) } else { (wp, 0) };
    let a = Float::with_val(wp, &hp.a);
    let b = Float::with_val(wp, &hp.b);
    let mut c = Float::with_val(wp, &hp.c);
    if eps_bits > 0 {
        c += Float::with_val(wp, Float::i_exp(1, -(eps_bits as i32)));
    }
    let sigma = Float::with_val(wp, &c - &a) - &b;
    let t = Float::with_val(wp, 1 - Float::with_val(wp, z));
    let cma = Float::with_val(wp, &c - &a);
    let cmb = Float::with_val(wp, &c - &b);
    let gc = Float::with_val(wp, c.gamma_ref());
    let coef_a = Float::with_val(wp, &gc * Float::with_val(wp, sigma.gamma_ref())) * recip_gamma(&cma) * recip_gamma(&cmb);
    let neg_sigma = Float::with_val(wp, -&sigma);
    let coef_b = Float::with_val(wp, &gc * Float::with_val(wp, neg_sigma.gamma_ref())) * recip_gamma(&a) * recip_gamma(&b);
    let (f1, m1) = series(&a, &b, &Float::with_val(wp, 1 - &sigma), &t, wp)?;
    let (f2, m2) = series(&cma, &cmb, &Float::with_val(wp, 1 + &sigma), &t, wp)?;
    let tpow = Float::with_val(wp, (&t).pow(&sigma));
    let part_a = Float::with_val(wp, &coef_a * &f1);
    let part_b = Float::with_val(wp, &coef_b * &tpow) * &f2;
    let scale_a = log2_abs(&coef_a) + m1.max(log2_abs(&f1));
    let scale_b = log2_abs(&coef_b) + log2_abs(&tpow) + m2.max(log2_abs(&f2));
    let v = part_a + part_b;
    let lost = (scale_a.max(scale_b) - log2_abs(&v)).max(0.0) - eps_bits as f64;
    Ok((v, lost.max(0.0)))
}

/// `₂F₁(a, b; c; z)` for `0 ≤ z < 1`, correct to about `prec` bits relative.
pub fn hyp2f1_float(hp: &HypParams, z: &Float, prec: u32) -> Result<Float> {
    if z.is_sign_negative() && !z.is_zero() || *z >= 1 || z.is_nan() {
        return Err(Error::InvalidParameters(format!("2F1 argument must lie in [0, 1), got {}", z.to_f64())));
    }
    let mut guard = 64u32;
    for _ in 0..8 {
        let (v, lost) = evaluate_at(hp, z, prec + guard, prec)?;
        if lost + 24.0 < guard as f64 || (v.is_zero() && guard > 4096) {
            return Ok(Float::with_val(prec, v));
        }
        guard = (lost as u32).saturating_add(64).max(2 * guard);
    }
    Err(Error::Numeric(format!("2F1 precision escalation failed at z = {}", z.to_f64())))
}

/// `d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a+1, b+1; c+1; z)`.
pub fn hyp2f1_deriv_float(hp: &HypParams, z: &Float, prec: u32) -> Result<Float> {
    let factor = Scalar::from(&hp.a * &hp.b) / &hp.c;
    if factor.cmp0().is_eq() {
        return Ok(Float::new(prec));
    }
    Ok(hyp2f1_float(&hp.raised(), z, prec)? * Float::with_val(prec, &factor))
}

pub fn gauss_2f1(hp: &HypParams, s: f64) -> Result<f64> {
    Ok(hyp2f1_float(hp, &Float::with_val(64, s), 64)?.to_f64())
}

pub fn gauss_2f1_deriv(hp: &HypParams, s: f64) -> Result<f64> {
    Ok(hyp2f1_deriv_float(hp, &Float::with_val(64, s), 64)?.to_f64())
}
