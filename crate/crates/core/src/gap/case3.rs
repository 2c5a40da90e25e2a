//! Case (3): `λ1` a non-negative integer and `β` a positive integer. The gap probability is an
//! expansion about `s = 1`,
//!
//! ```text
//! E(s) = 1 + Σ_{q=1}^{N} Σ_l γ̃_{q,l} (1-s)^{q(λ2+1) + q(q-1)β/2 + l}.
//! ```
//!
//! Two schemes produce the table: nested integration level by level (always applicable) and
//! Frobenius solutions of the matrix differential equation about `s = 1` (fails on resonance).

use std::collections::BTreeMap;

use rug::Float;
use serde::{Deserialize, Serialize};

use super::numeric::{with_cancellation_guard, F64_FLOOR};
use super::params::JacobiParams;
use crate::error::{Error, Result};
use crate::exact::scalar::{binomial, factorial, qi, scalar_to_string, serde_scalar, Scalar};
use crate::exact::{Field, LambdaSeries};
use crate::recurrence::{coeffs, sweep_series};
use crate::special::{beta_value_exact_int, selberg_quotient_exact, SelbergParams};

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSeriesForm {
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    pub beta: Scalar,
    pub n: u32,
    /// `γ̃_{q,l}` keyed by `(q, l)`; zero entries are not stored.
    pub gamma_tilde: BTreeMap<(u32, u32), Scalar>,
}

#[derive(Serialize, Deserialize)]
struct EdgeTerm {
    q: u32,
    l: u32,
    #[serde(with = "serde_scalar")]
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    n: u32,
    #[serde(with = "serde_scalar")]
    lambda1: Scalar,
    #[serde(with = "serde_scalar")]
    lambda2: Scalar,
    #[serde(with = "serde_scalar")]
    beta: Scalar,
    exponent_law: String,
    gamma_tilde: Vec<EdgeTerm>,
}

impl Serialize for EdgeSeriesForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EdgeRepr {
            n: self.n,
            lambda1: self.lambda1.clone(),
            lambda2: self.lambda2.clone(),
            beta: self.beta.clone(),
            exponent_law: "q*(lambda2+1) + q*(q-1)*beta/2 + l".into(),
            gamma_tilde: self.gamma_tilde.iter().map(|(&(q, l), c)| EdgeTerm { q, l, coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeSeriesForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EdgeRepr::deserialize(d)?;
        Ok(EdgeSeriesForm {
            lambda1: r.lambda1,
            lambda2: r.lambda2,
            beta: r.beta,
            n: r.n,
            gamma_tilde: r.gamma_tilde.into_iter().map(|t| ((t.q, t.l), t.coeff)).collect(),
        })
    }
}

/// Largest offset `l` allowed in class `q`: `qλ1 + q(N-q)β`.
fn l_max(q: u32, n: u32, lambda1: u32, beta: u32) -> u32 {
    q * lambda1 + q * (n - q) * beta
}

fn class_shift(q: u32, beta: u32) -> i64 {
    (q + q * q.saturating_sub(1) * beta / 2) as i64
}

impl EdgeSeriesForm {
    /// `1 + Σ γ̃`, which vanishes exactly.
    pub fn sum_rule(&self) -> Scalar {
        self.gamma_tilde.values().fold(qi(1), |acc, c| acc + c)
    }

    pub fn exponent(&self, q: u32, l: u32) -> Scalar {
        let qq = qi(q as i64);
        Scalar::from(&qq * Scalar::from(&self.lambda2 + 1))
            + Scalar::from(&self.beta * qi((q as i64) * (q as i64 - 1))) / 2
            + qi(l as i64)
    }

    fn beta_u32(&self) -> u32 {
        self.beta.numer().to_u32().expect("case-3 beta is a positive integer")
    }

    /// The expansion as a λ-series in `1 - s` (including the leading 1).
    pub fn to_series(&self) -> LambdaSeries<Scalar> {
        let b = self.beta_u32();
        let mut terms = vec![((0u32, 0i64), qi(1))];
        terms.extend(self.gamma_tilde.iter().map(|(&(q, l), c)| ((q, l as i64 + class_shift(q, b)), c.clone())));
        LambdaSeries::from_terms(self.lambda2.clone(), terms)
    }

    fn eval_series(series: &LambdaSeries<Scalar>, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidParameters(format!("s = {s} outside [0, 1]")));
        }
        if s == 0.0 {
            // Every power of 1 - s equals 1 there.
            return Ok(series.terms().values().fold(qi(0), |acc, c| acc + c).to_f64());
        }
        let maxlog = series.max_term_log2(s);
        let v = with_cancellation_guard(64, Some(F64_FLOOR), |prec| Ok((series.eval_float(&Float::with_val(prec, s))?, maxlog)))?;
        Ok(v.to_f64())
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        Self::eval_series(&self.to_series(), s)
    }

    /// Exact `d/ds` of the expansion, as a λ-series in `1 - s`.
    pub fn density_series(&self) -> LambdaSeries<Scalar> {
        self.to_series().derivative()
    }

    pub fn density(&self, s: f64) -> Result<f64> {
        Self::eval_series(&self.density_series(), s)
    }

    fn from_normalized(params: &JacobiParams, l1: u32, b: u32, series: &LambdaSeries<Scalar>) -> Result<Self> {
        let mut gamma_tilde = BTreeMap::new();
        for (&(q, big_l), c) in series.terms() {
            if q == 0 {
                if big_l != 0 || *c != 1 {
                    return Err(Error::Invariant(format!("unexpected class-0 term (0, {big_l}) = {c}")));
                }
                continue;
            }
            let l = big_l - class_shift(q, b);
            if l < 0 || l > l_max(q, params.n, l1, b) as i64 || q > params.n {
                return Err(Error::Invariant(format!("offset l = {l} outside the allowed range for class q = {q}")));
            }
            gamma_tilde.insert((q, l as u32), c.clone());
        }
        let form = EdgeSeriesForm {
            lambda1: params.lambda1.clone(),
            lambda2: params.lambda2.clone(),
            beta: params.beta.clone(),
            n: params.n,
            gamma_tilde,
        };
        let sr = form.sum_rule();
        if sr.cmp0().is_ne() {
            return Err(Error::Invariant(format!("case-3 sum rule gives 1 + Σγ̃ = {}", scalar_to_string(&sr))));
        }
        Ok(form)
    }
}

fn require_case3(params: &JacobiParams) -> Result<(u32, u32)> {
    match (params.case3_lambda1(), params.beta_int()) {
        (Some(l1), Some(b)) if b > 0 => Ok((l1, b)),
        _ => Err(Error::InvalidParameters(format!(
            "case 3 needs lambda1 a non-negative integer and beta a positive integer, got lambda1 = {}, beta = {}",
            params.lambda1, params.beta
        ))),
    }
}

/// `∫_0^x t^{λ1} (1-t)^{λ2} g(t) dt` term by term, for integer `λ1`.
///
/// A term `c (1-t)^{qλ2+l}` becomes `c B(λ1, b)` in the constant class plus
/// `-c (-1)^p C(λ1,p) / (b+p+1)` in class `(q+1, l+p+1)`, where `b = (q+1)λ2 + l`.
fn integrate_level<F: Field>(g: &LambdaSeries<F>, lambda1: u32) -> Result<LambdaSeries<F>> {
    let lambda2 = g.lambda2().clone();
    let binoms: Vec<Scalar> = (0..=lambda1).map(|p| Scalar::from(binomial(lambda1, p))).collect();
    let mut out = LambdaSeries::zero(lambda2.clone());
    for (&(q, l), c) in g.terms() {
        let b = lambda2.scale(&qi(q as i64 + 1)).add(&F::from_scalar(&qi(l)));
        out.add_term((0, 0), c.mul(&beta_value_exact_int(lambda1, &b)?));
        for (p, bin) in binoms.iter().enumerate() {
            let sign = if p % 2 == 0 { qi(-1) } else { qi(1) };
            let den = b.add(&F::from_scalar(&qi(p as i64 + 1)));
            let coef = F::from_scalar(&Scalar::from(bin * &sign)).div(&den)?;
            out.add_term((q + 1, l + p as i64 + 1), c.mul(&coef));
        }
    }
    Ok(out)
}

/// `∫_{0<t_1<...<t_N<x} ∏ t^{λ1}(1-t)^{λ2} ∏|t_j - t_k|^β` as a λ-series in `1 - x`, over any
/// coefficient field (so `λ2` may be symbolic).
pub fn nested_integral<F: Field>(lambda1: u32, lambda2: &F, beta: u32, n: u32) -> Result<LambdaSeries<F>> {
    let l1 = F::from_scalar(&qi(lambda1 as i64));
    let beta_q = qi(beta as i64);
    let mut g = LambdaSeries::monomial(lambda2.clone(), (0, 0), F::one());
    for level in 1..=n {
        for alpha in 0..beta {
            g = sweep_series(&g, level - 1, &l1, lambda2, &beta_q, &qi(alpha as i64))?;
        }
        g = integrate_level(&g, lambda1)?;
    }
    Ok(g)
}

/// Case-(3) table by nested integration. The normalization is the constant class of the
/// level-`N` integral itself, so the table is exact for every integer `β`; its value is
/// cross-checked against the Selberg closed form.
pub fn gap_case3_nested(params: &JacobiParams) -> Result<EdgeSeriesForm> {
    let (l1, b) = require_case3(params)?;
    let g = nested_integral(l1, &params.lambda2, b, params.n)?;
    let c00 = g.coeff((0, 0));
    if c00.cmp0().is_le() {
        return Err(Error::Invariant(format!("nested normalization constant {c00} is not positive")));
    }
    check_normalization(params, &c00)?;
    let e = g.scale(&c00.clone().recip());
    EdgeSeriesForm::from_normalized(params, l1, b, &e)
}

fn check_normalization(params: &JacobiParams, c00: &Scalar) -> Result<()> {
    let sp = SelbergParams::new(params.lambda1.clone(), params.lambda2.clone(), params.beta.clone(), params.n);
    let ln_j = sp.ln_float(256)?;
    let mine = Float::with_val(256, &Scalar::from(c00 * factorial(params.n))).ln();
    let diff = Float::with_val(256, mine - ln_j).to_f64();
    if diff.abs() > 1e-10 {
        return Err(Error::Invariant(format!("nested normalization N!·c = exp({diff:e})·J")));
    }
    Ok(())
}

/// Frobenius solution about `s = 1` with exponent `μ_Q`: `Σ_n c_n (1-s)^{μ_Q + n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusSolution {
    pub q: u32,
    #[serde(with = "serde_scalar")]
    pub mu_q: Scalar,
    #[serde(with = "crate::exact::scalar::serde_scalar_matrix")]
    pub coeff_vectors: Vec<Vec<Scalar>>,
}

struct SystemMatrices {
    /// `A_p + B_p`: diagonal of `Z₋₁`, and the exponents `μ_p`.
    mu: Vec<Scalar>,
    /// `-B_p`: diagonal of `Z₀`.
    z0_diag: Vec<Scalar>,
    /// `(N-p) E_p`: superdiagonal of `Z₀` (and minus that of `Z₋₁`).
    sup: Vec<Scalar>,
    /// `D_p`: subdiagonal of `Y`.
    sub: Vec<Scalar>,
}

fn system(params: &JacobiParams) -> SystemMatrices {
    let n = params.n;
    let mut m = SystemMatrices { mu: vec![], z0_diag: vec![], sup: vec![], sub: vec![] };
    for p in 0..=n {
        let c = coeffs(p, n, &params.lambda1, &params.lambda2, &params.beta, &qi(0));
        m.mu.push(Scalar::from(&c.a + &c.b));
        m.z0_diag.push(Scalar::from(-&c.b));
        m.sup.push(Scalar::from(&c.e * qi(n as i64 - p as i64)));
        m.sub.push(c.d);
    }
    m
}

/// The solution with exponent `μ_Q`, coefficients up to order `order`.
pub fn frobenius_solution(params: &JacobiParams, big_q: u32, order: u32) -> Result<FrobeniusSolution> {
    require_case3(params)?;
    let n = params.n as usize;
    let qq = big_q as usize;
    let m = system(params);
    let mu_q = m.mu[qq].clone();
    let mut c0 = vec![qi(0); n + 1];
    c0[0] = qi(1);
    for p in 0..n {
        if p >= qq {
            break;
        }
        c0[p + 1] = Scalar::from(&c0[p] * Scalar::from(&m.mu[p] - &mu_q)) / &m.sup[p];
    }
    let mut vecs = vec![c0];
    let mut partial = vec![qi(0); n + 1];
    for order_n in 1..=order as usize {
        let prev = &vecs[order_n - 1];
        let acc: Vec<Scalar> = (0..=n).map(|p| Scalar::from(&partial[p] + &prev[p])).collect();
        let mut rhs = vec![qi(0); n + 1];
        for p in 0..=n {
            let mut r = Scalar::from(&m.z0_diag[p] * &acc[p]);
            if p < n {
                r += Scalar::from(&m.sup[p] * &acc[p + 1]);
            }
            if p > 0 {
                r += Scalar::from(&m.sub[p] * &prev[p - 1]);
            }
            rhs[p] = r;
        }
        let shift = Scalar::from(&mu_q + qi(order_n as i64));
        let mut c = vec![qi(0); n + 1];
        for p in (0..=n).rev() {
            let pivot = Scalar::from(&m.mu[p] - &shift);
            let mut r = rhs[p].clone();
            if p < n {
                r += Scalar::from(&m.sup[p] * &c[p + 1]);
            }
            if pivot.cmp0().is_eq() {
                return Err(Error::Resonance { solution: qq, order: order_n, row: p });
            }
            c[p] = r / pivot;
        }
        for p in 0..=n {
            partial[p] += &prev[p];
        }
        vecs.push(c);
    }
    Ok(FrobeniusSolution { q: big_q, mu_q, coeff_vectors: vecs })
}

/// Case-(3) table from the Frobenius solutions, combined with the proportionality constants
/// `κ_q = C(N,q) J_{λ2,0,β,q} J_{λ1,λ2+qβ,β,N-q} / J_{λ1,λ2,β,N}`. Requires even `β` so the
/// constants are rational; odd `β` is served by [`gap_case3_nested`].
pub fn gap_case3_frobenius(params: &JacobiParams) -> Result<EdgeSeriesForm> {
    let (l1, b) = require_case3(params)?;
    if b % 2 == 1 {
        return Err(Error::InvalidParameters(
            "the Frobenius scheme needs even beta for exact proportionality constants; use the nested scheme".into(),
        ));
    }
    let n = params.n;
    let mut series = LambdaSeries::monomial(params.lambda2.clone(), (0, 0), qi(1));
    for q in 1..=n {
        let order = l_max(q, n, l1, b);
        let sol = frobenius_solution(params, n - q, order)?;
        let kappa = kappa(params, q)?;
        let signed = if q % 2 == 0 { kappa } else { Scalar::from(-&kappa) };
        for (l, v) in sol.coeff_vectors.iter().enumerate() {
            series.add_term((q, l as i64 + class_shift(q, b)), Scalar::from(&signed * &v[0]));
        }
    }
    EdgeSeriesForm::from_normalized(params, l1, b, &series)
}

fn kappa(params: &JacobiParams, q: u32) -> Result<Scalar> {
    let qb = Scalar::from(&params.beta * qi(q as i64));
    let num = [
        SelbergParams::new(params.lambda2.clone(), qi(0), params.beta.clone(), q),
        SelbergParams::new(params.lambda1.clone(), Scalar::from(&params.lambda2 + &qb), params.beta.clone(), params.n - q),
    ];
    let den = [SelbergParams::new(params.lambda1.clone(), params.lambda2.clone(), params.beta.clone(), params.n)];
    let r = selberg_quotient_exact(&num, &den)?
        .ok_or_else(|| Error::Numeric(format!("proportionality constant for q = {q} is not an exact rational")))?;
    Ok(r * binomial(params.n, q))
}

/// Case-(3) table with the Frobenius scheme, falling back to nested integration on resonance
/// or odd `β`.
pub fn gap_case3(params: &JacobiParams) -> Result<EdgeSeriesForm> {
    match gap_case3_frobenius(params) {
        Ok(f) => Ok(f),
        Err(Error::Resonance { .. }) | Err(Error::InvalidParameters(_)) if params.case3_lambda1().is_some() => {
            gap_case3_nested(params)
        }
        Err(e) => Err(e),
    }
}
