//! Finite sums `sum c_{q,l} (1-x)^{q*lambda2 + l}` with formal class keys `(q, l)`.
//!
//! Keys are never merged on numeric coincidence of `q*lambda2 + l`; every operation the
//! recursions need is linear, so the formal basis is closed under them.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::scalar::{qi, scalar_to_string, serde_scalar, Scalar};
use crate::error::{Error, Result};

pub type SeriesKey = (u32, i64);

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeries<F: Field> {
    lambda2: F,
    terms: BTreeMap<SeriesKey, F>,
}

impl<F: Field> LambdaSeries<F> {
    pub fn zero(lambda2: F) -> Self {
        LambdaSeries { lambda2, terms: BTreeMap::new() }
    }

    pub fn monomial(lambda2: F, key: SeriesKey, c: F) -> Self {
        let mut s = Self::zero(lambda2);
        s.add_term(key, c);
        s
    }

    pub fn from_terms(lambda2: F, terms: impl IntoIterator<Item = (SeriesKey, F)>) -> Self {
        let mut s = Self::zero(lambda2);
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn lambda2(&self) -> &F {
        &self.lambda2
    }

    pub fn terms(&self) -> &BTreeMap<SeriesKey, F> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: SeriesKey) -> F {
        self.terms.get(&key).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, key: SeriesKey, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().neg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.lambda2.clone());
        }
        LambdaSeries {
            lambda2: self.lambda2.clone(),
            terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect(),
        }
    }

    /// Exponent `q*lambda2 + l` of a key, as a field element.
    pub fn exponent(&self, key: SeriesKey) -> F {
        let (q, l) = key;
        self.lambda2.scale(&qi(q as i64)).add(&F::from_scalar(&qi(l)))
    }

    /// `d/dx`: `(q, l) -> (q, l-1)` with coefficient `-c (q*lambda2 + l)`.
    pub fn derivative(&self) -> Self {
        let mut r = Self::zero(self.lambda2.clone());
        for (&(q, l), c) in &self.terms {
            let e = self.exponent((q, l));
            r.add_term((q, l - 1), c.mul(&e).neg());
        }
        r
    }

    /// Multiplication by `1 - x`.
    pub fn mul_one_minus_x(&self) -> Self {
        LambdaSeries {
            lambda2: self.lambda2.clone(),
            terms: self.terms.iter().map(|(&(q, l), c)| ((q, l + 1), c.clone())).collect(),
        }
    }

    /// Multiplication by `x = 1 - (1 - x)`.
    pub fn mul_x(&self) -> Self {
        self.sub(&self.mul_one_minus_x())
    }

    /// Multiplication by `x - 1`.
    pub fn mul_x_minus_1(&self) -> Self {
        self.mul_one_minus_x().scale(&F::one().neg())
    }

    /// Checks that every class `q >= 1` carries a non-negative offset `l`.
    pub fn check_offsets(&self) -> Result<()> {
        if let Some((&(q, l), _)) = self.terms.iter().find(|(&(q, l), _)| q >= 1 && l < 0) {
            return Err(Error::Invariant(format!("negative offset l={l} in class q={q}")));
        }
        Ok(())
    }

    /// Applies `f` to every coefficient (and to `lambda2`), e.g. to specialize a symbolic series.
    pub fn map_coeffs<G: Field>(&self, lambda2: G, mut f: impl FnMut(&F) -> Result<G>) -> Result<LambdaSeries<G>> {
        let mut r = LambdaSeries::zero(lambda2);
        for (k, c) in &self.terms {
            r.add_term(*k, f(c)?);
        }
        Ok(r)
    }
}

impl LambdaSeries<Scalar> {
    /// Evaluates at `x` in the precision of `x`. Requires `0 <= x <= 1`.
    pub fn eval_float(&self, x: &Float) -> Result<Float> {
        let prec = x.prec();
        if *x > 1 || *x < 0 {
            return Err(Error::InvalidParameters(format!("series evaluated outside [0,1]: x = {x}")));
        }
        let u = Float::with_val(prec, 1 - x);
        let mut total = Float::with_val(prec, 0);
        for (q, group) in self.classes() {
            // Horner in u over the offsets of this class, then the u^(q*lambda2 + lmin) prefactor.
            let lmin = *group.keys().next().expect("nonempty");
            let lmax = *group.keys().next_back().expect("nonempty");
            let mut acc = Float::with_val(prec, 0);
            for l in (lmin..=lmax).rev() {
                acc *= &u;
                if let Some(c) = group.get(&l) {
                    acc += Float::with_val(prec, *c);
                }
            }
            let e = Scalar::from(&self.lambda2 * q) + Scalar::from(lmin);
            let factor = pow_exact(&u, &e)?;
            total += acc * factor;
        }
        Ok(total)
    }

    /// `f64` evaluation with the working precision chosen from the largest term magnitude.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let bits = self.max_term_log2(x).max(0.0).ceil() as u32 + 96;
        let xf = Float::with_val(bits.max(64), x);
        Ok(self.eval_float(&xf)?.to_f64())
    }

    fn classes(&self) -> BTreeMap<u32, BTreeMap<i64, &Scalar>> {
        let mut out: BTreeMap<u32, BTreeMap<i64, &Scalar>> = BTreeMap::new();
        for (&(q, l), c) in &self.terms {
            out.entry(q).or_default().insert(l, c);
        }
        out
    }

    /// `log2` of the largest `|c| (1-x)^{exponent}` over all terms.
    pub fn max_term_log2(&self, x: f64) -> f64 {
        let lu = (1.0 - x).max(0.0).log2();
        let l2 = self.lambda2.to_f64();
        self.terms
            .iter()
            .map(|(&(q, l), c)| {
                let e = q as f64 * l2 + l as f64;
                let base = super::poly::scalar_log2_abs(c);
                if e == 0.0 {
                    base
                } else {
                    base + e * lu
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `u^e` for `u >= 0` and exact rational `e`; `0^0 = 1`, `0^e = 0` for `e > 0`.
pub fn pow_exact(u: &Float, e: &Scalar) -> Result<Float> {
    let prec = u.prec();
    if u.is_zero() {
        return match e.cmp0() {
            std::cmp::Ordering::Equal => Ok(Float::with_val(prec, 1)),
            std::cmp::Ordering::Greater => Ok(Float::with_val(prec, 0)),
            std::cmp::Ordering::Less => Err(Error::Numeric("negative power of zero".into())),
        };
    }
    if *e.denom() == 1 {
        if let Some(k) = e.numer().to_i32() {
            return Ok(Float::with_val(prec, u.pow(k)));
        }
    }
    let ef = Float::with_val(prec, e);
    Ok(Float::with_val(prec, u.pow(&ef)))
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    q: u32,
    l: i64,
    #[serde(with = "serde_scalar")]
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    #[serde(with = "serde_scalar")]
    lambda2: Scalar,
    terms: Vec<TermRecord>,
}

impl Serialize for LambdaSeries<Scalar> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRecord {
            lambda2: self.lambda2.clone(),
            terms: self.terms.iter().map(|(&(q, l), c)| TermRecord { q, l, coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LambdaSeries<Scalar> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRecord::deserialize(d)?;
        Ok(LambdaSeries::from_terms(r.lambda2, r.terms.into_iter().map(|t| ((t.q, t.l), t.coeff))))
    }
}

impl std::fmt::Display for LambdaSeries<Scalar> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|(&(q, l), c)| format!("{}*(1-x)^({}λ+{})", scalar_to_string(c), q, l)).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}
