//! Dense univariate polynomials with exact rational coefficients.

use rug::Float;
use serde::{Deserialize, Serialize};

use super::scalar::{qi, serde_scalar_vec, Scalar};
use crate::error::{Error, Result};

/// Which indeterminate a polynomial is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    /// The gap endpoint `s`.
    S,
    /// `t = 1 - s`.
    T,
    /// A formal parameter (used inside rational functions).
    Param,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::T => "t",
            Var::Param => "param",
        }
    }
}

/// `coeffs[k]` multiplies `var^k`. The last stored coefficient is nonzero; zero has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "PolyRepr")]
pub struct Poly {
    var: Var,
    #[serde(with = "serde_scalar_vec")]
    coeffs: Vec<Scalar>,
}

#[derive(Deserialize)]
struct PolyRepr {
    var: Var,
    #[serde(with = "serde_scalar_vec")]
    coeffs: Vec<Scalar>,
}

impl From<PolyRepr> for Poly {
    fn from(r: PolyRepr) -> Self {
        Poly::new(r.var, r.coeffs)
    }
}

impl Poly {
    pub fn new(var: Var, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        Poly { var, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        Poly { var, coeffs: Vec::new() }
    }

    pub fn constant(var: Var, c: Scalar) -> Self {
        Poly::new(var, vec![c])
    }

    pub fn one(var: Var) -> Self {
        Poly::constant(var, qi(1))
    }

    /// `c0 + c1 * var`
    pub fn linear(var: Var, c0: Scalar, c1: Scalar) -> Self {
        Poly::new(var, vec![c0, c1])
    }

    pub fn from_i64(var: Var, cs: &[i64]) -> Self {
        Poly::new(var, cs.iter().map(|&c| qi(c)).collect())
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    fn check(&self, o: &Poly) -> Result<()> {
        if self.var != o.var {
            return Err(Error::VariableMismatch(self.var.name(), o.var.name()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|k| Scalar::from(&self.coeff(k) + &o.coeff(k))).collect();
        Ok(Poly::new(self.var, c))
    }

    pub fn sub(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|k| Scalar::from(&self.coeff(k) - &o.coeff(k))).collect();
        Ok(Poly::new(self.var, c))
    }

    pub fn mul(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Poly::zero(self.var));
        }
        let mut c = vec![Scalar::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0().is_eq() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += Scalar::from(a * b);
            }
        }
        Ok(Poly::new(self.var, c))
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.var, self.coeffs.iter().map(|c| Scalar::from(-c)).collect())
    }

    pub fn scale(&self, x: &Scalar) -> Poly {
        Poly::new(self.var, self.coeffs.iter().map(|c| Scalar::from(c * x)).collect())
    }

    /// Multiplies by `var^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Scalar::new(); k];
        c.extend(self.coeffs.iter().cloned());
        Poly::new(self.var, c)
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| Scalar::from(a * k as u32))
            .collect();
        Poly::new(self.var, c)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation in multiprecision at the precision of `x`.
    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::with_val(prec, 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += Float::with_val(prec, c);
        }
        acc
    }

    /// `log2` of `max_k |c_k| |x|^k` (a cancellation bound for evaluation at `x`); `-inf` for zero.
    pub fn max_term_log2(&self, x: f64) -> f64 {
        let lx = x.abs().log2();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.cmp0().is_ne())
            .map(|(k, c)| scalar_log2_abs(c) + if k == 0 { 0.0 } else { k as f64 * lx })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Substitutes `var = 1 - other`, returning a polynomial in the other endpoint variable.
    pub fn reflect(&self, to: Var) -> Poly {
        // p(1 - y) via Horner with the linear polynomial 1 - y.
        let lin = Poly::from_i64(to, &[1, -1]);
        let mut acc = Poly::zero(to);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).expect("same var").add(&Poly::constant(to, c.clone())).expect("same var");
        }
        acc
    }

    /// `p(x + c)`.
    pub fn taylor_shift(&self, c: &Scalar) -> Poly {
        let lin = Poly::linear(self.var, c.clone(), qi(1));
        let mut acc = Poly::zero(self.var);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).expect("same var").add(&Poly::constant(self.var, a.clone())).expect("same var");
        }
        acc
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check(d)?;
        let dl = d
            .leading()
            .ok_or_else(|| Error::DivisionByZero("polynomial division by zero".into()))?
            .clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(self.var), self.clone()));
        }
        let mut quo = vec![Scalar::new(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let f = Scalar::from(&r[k + dd] / &dl);
            if f.cmp0().is_ne() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= Scalar::from(&f * dc);
                }
            }
            quo[k] = f;
        }
        r.truncate(dd);
        Ok((Poly::new(self.var, quo), Poly::new(self.var, r)))
    }

    /// Monic rescaling; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => {
                let inv = l.clone().recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Multiplicity of the root at zero.
    pub fn zero_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.cmp0().is_eq()).count()
    }
}

/// `log2 |x|` for an exact rational, robust to magnitudes outside the `f64` range.
pub fn scalar_log2_abs(x: &Scalar) -> f64 {
    if x.cmp0().is_eq() {
        return f64::NEG_INFINITY;
    }
    let f = Float::with_val(64, x);
    let f = f.abs().log2();
    f.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::q;
    use proptest::prelude::*;

    fn s(cs: &[i64]) -> Poly {
        Poly::from_i64(Var::S, cs)
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(s(&[1, 1]).mul(&s(&[1, -1])).unwrap(), s(&[1, 0, -1]));
    }

    #[test]
    fn annihilator_and_inverse() {
        assert!(s(&[3, 4, 5]).mul(&Poly::zero(Var::S)).unwrap().is_zero());
        assert!(s(&[2, -1]).add(&s(&[-2, 1])).unwrap().is_zero());
        assert_eq!(s(&[2, -1]).add(&s(&[-2, 1])).unwrap().degree(), None);
    }

    #[test]
    fn mismatched_tags_rejected() {
        let t = Poly::from_i64(Var::T, &[1]);
        assert!(matches!(s(&[1]).add(&t), Err(Error::VariableMismatch(..))));
        assert!(s(&[1]).mul(&t).is_err());
    }

    #[test]
    fn reflect_and_shift() {
        // s^2 with s = 1 - t -> 1 - 2t + t^2
        let p = s(&[0, 0, 1]).reflect(Var::T);
        assert_eq!(p, Poly::from_i64(Var::T, &[1, -2, 1]));
        // (x)^2 shifted by 1 -> x^2 + 2x + 1
        assert_eq!(s(&[0, 0, 1]).taylor_shift(&qi(1)), s(&[1, 2, 1]));
    }

    #[test]
    fn gcd_and_division() {
        let a = s(&[-1, 0, 1]); // (x-1)(x+1)
        let b = s(&[-1, 1]).mul(&s(&[2, 1])).unwrap();
        assert_eq!(a.gcd(&b).unwrap(), s(&[-1, 1]));
        let (quo, r) = a.div_rem(&s(&[1, 1])).unwrap();
        assert_eq!(quo, s(&[-1, 1]));
        assert!(r.is_zero());
        assert!(a.div_rem(&Poly::zero(Var::S)).is_err());
    }

    #[test]
    fn eval_exact() {
        let p = s(&[6, -6, 1]);
        assert_eq!(p.eval(&q(1, 2)), q(13, 4));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|v| s(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!(a.mul(&b).unwrap().degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
            }
            let sum = a.add(&b).unwrap();
            prop_assert!(sum.degree().unwrap_or(0) <= a.degree().unwrap_or(0).max(b.degree().unwrap_or(0)));
        }
    }
}
