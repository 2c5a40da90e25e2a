//! Rational functions of one formal parameter with exact rational coefficients.

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::poly::{Poly, Var};
use super::scalar::{qi, serde_scalar_vec, Scalar};
use crate::error::{Error, Result};

/// `num / den` in lowest terms with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero_value());
        }
        let g = num.gcd(&den)?;
        let (mut n, _) = num.div_rem(&g)?;
        let (mut d, _) = den.div_rem(&g)?;
        let l = d.leading().expect("nonzero").clone().recip();
        n = n.scale(&l);
        d = d.scale(&l);
        Ok(RatFunc { num: n, den: d })
    }

    fn zero_value() -> Self {
        RatFunc { num: Poly::zero(Var::Param), den: Poly::one(Var::Param) }
    }

    /// The indeterminate itself.
    pub fn param() -> Self {
        RatFunc { num: Poly::from_i64(Var::Param, &[0, 1]), den: Poly::one(Var::Param) }
    }

    /// `param + c`
    pub fn param_plus(c: &Scalar) -> Self {
        RatFunc { num: Poly::linear(Var::Param, c.clone(), qi(1)), den: Poly::one(Var::Param) }
    }

    pub fn from_poly(p: Poly) -> Self {
        assert_eq!(p.var(), Var::Param);
        RatFunc { num: p, den: Poly::one(Var::Param) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    /// Value at a point; errors at a pole.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(x);
        if d.cmp0().is_eq() {
            return Err(Error::DivisionByZero(format!("pole of rational function at {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Substitutes `param -> param + c`.
    pub fn shift(&self, c: &Scalar) -> RatFunc {
        RatFunc::new(self.num.taylor_shift(c), self.den.taylor_shift(c)).expect("shift keeps a nonzero denominator")
    }

    /// Order of the pole at zero (0 when regular there).
    pub fn pole_order_at_zero(&self) -> usize {
        self.den.zero_order()
    }

    /// Laurent coefficients about zero for powers `-pole_order ..= upto`, as `(power, coeff)`.
    pub fn laurent_at_zero(&self, upto: i64) -> Vec<(i64, Scalar)> {
        let k = self.den.zero_order();
        let d: Vec<Scalar> = self.den.coeffs()[k..].to_vec();
        let n = self.num.coeffs();
        let lowest = -(k as i64);
        if upto < lowest {
            return Vec::new();
        }
        let count = (upto - lowest + 1) as usize;
        let d0 = d[0].clone();
        let mut c: Vec<Scalar> = Vec::with_capacity(count);
        for j in 0..count {
            let mut acc = n.get(j).cloned().unwrap_or_default();
            for i in 1..=j.min(d.len() - 1) {
                acc -= Scalar::from(&d[i] * &c[j - i]);
            }
            c.push(acc / &d0);
        }
        c.into_iter().enumerate().map(|(j, v)| (lowest + j as i64, v)).collect()
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        Self::zero_value()
    }
    fn one() -> Self {
        RatFunc { num: Poly::one(Var::Param), den: Poly::one(Var::Param) }
    }
    fn from_scalar(x: &Scalar) -> Self {
        if x.cmp0().is_eq() {
            return Self::zero_value();
        }
        RatFunc { num: Poly::constant(Var::Param, x.clone()), den: Poly::one(Var::Param) }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num).expect("param"), self.den.clone()).expect("nonzero den");
        }
        let n = self.num.mul(&o.den).unwrap().add(&o.num.mul(&self.den).unwrap()).unwrap();
        RatFunc::new(n, self.den.mul(&o.den).unwrap()).expect("nonzero den")
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero_value();
        }
        if self.den.degree() == Some(0) && o.den.degree() == Some(0) {
            return RatFunc { num: self.num.mul(&o.num).unwrap(), den: self.den.clone() };
        }
        RatFunc::new(self.num.mul(&o.num).unwrap(), self.den.mul(&o.den).unwrap()).expect("nonzero den")
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero rational function".into()));
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    fn scale(&self, x: &Scalar) -> Self {
        if x.cmp0().is_eq() {
            return Self::zero_value();
        }
        RatFunc { num: self.num.scale(x), den: self.den.clone() }
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncRepr {
    #[serde(with = "serde_scalar_vec")]
    num: Vec<Scalar>,
    #[serde(with = "serde_scalar_vec")]
    den: Vec<Scalar>,
}

impl Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncRepr { num: self.num.coeffs().to_vec(), den: self.den.coeffs().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RatFuncRepr::deserialize(d)?;
        RatFunc::new(Poly::new(Var::Param, r.num), Poly::new(Var::Param, r.den)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::q;

    #[test]
    fn normalizes_common_factors() {
        // (x^2 - 1) / (2x - 2) = (x + 1) / 2 -> monic den: (x/2 + 1/2) / 1
        let r = RatFunc::new(Poly::from_i64(Var::Param, &[-1, 0, 1]), Poly::from_i64(Var::Param, &[-2, 2])).unwrap();
        assert_eq!(r.den(), &Poly::one(Var::Param));
        assert_eq!(r.num(), &Poly::new(Var::Param, vec![q(1, 2), q(1, 2)]));
    }

    #[test]
    fn field_identities() {
        let x = RatFunc::param();
        let a = RatFunc::param_plus(&qi(3)).inv().unwrap();
        let b = x.mul(&a).add(&RatFunc::from_scalar(&qi(3)).mul(&a));
        assert_eq!(b, RatFunc::one());
        assert!(RatFunc::zero().inv().is_err());
    }

    #[test]
    fn laurent_expansion() {
        // 1 / (x (1 + x)) = x^-1 - 1 + x - ...
        let r = RatFunc::param().mul(&RatFunc::param_plus(&qi(1))).inv().unwrap();
        let l = r.laurent_at_zero(1);
        assert_eq!(l, vec![(-1, qi(1)), (0, qi(-1)), (1, qi(1))]);
        assert_eq!(r.pole_order_at_zero(), 1);
    }

    #[test]
    fn shift_substitution() {
        let r = RatFunc::param().inv().unwrap().shift(&qi(2)); // 1/(x+2)
        assert_eq!(r.eval(&qi(0)).unwrap(), q(1, 2));
        assert!(RatFunc::param().inv().unwrap().eval(&qi(0)).is_err());
    }
}
