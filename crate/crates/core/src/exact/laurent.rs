//! Laurent polynomials in a regularizer `mu` with complex rational coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::scalar::{serde_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ComplexQ {
    #[serde(with = "serde_scalar")]
    pub re: Scalar,
    #[serde(with = "serde_scalar")]
    pub im: Scalar,
}

impl ComplexQ {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        ComplexQ { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        ComplexQ { re, im: Scalar::new() }
    }

    pub fn i() -> Self {
        ComplexQ { re: Scalar::new(), im: Scalar::from(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexQ { re: Scalar::from(&self.re + &o.re), im: Scalar::from(&self.im + &o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = Scalar::from(&self.re * &o.re) - Scalar::from(&self.im * &o.im);
        let im = Scalar::from(&self.re * &o.im) + Scalar::from(&self.im * &o.re);
        ComplexQ { re, im }
    }

    pub fn scale(&self, x: &Scalar) -> Self {
        ComplexQ { re: Scalar::from(&self.re * x), im: Scalar::from(&self.im * x) }
    }

    pub fn conj(&self) -> Self {
        ComplexQ { re: self.re.clone(), im: Scalar::from(-&self.im) }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => ComplexQ::real(Scalar::from(1)),
            1 => ComplexQ::i(),
            2 => ComplexQ::real(Scalar::from(-1)),
            _ => ComplexQ::new(Scalar::new(), Scalar::from(-1)),
        }
    }
}

/// `sum_k c_k mu^k` with finitely many nonzero terms, `k` possibly negative.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MuLaurent {
    terms: BTreeMap<i64, ComplexQ>,
}

impl MuLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(power: i64, c: ComplexQ) -> Self {
        let mut m = Self::zero();
        m.add_term(power, c);
        m
    }

    pub fn terms(&self) -> &BTreeMap<i64, ComplexQ> {
        &self.terms
    }

    pub fn add_term(&mut self, power: i64, c: ComplexQ) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(power).or_default();
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&k, c) in &o.terms {
            r.add_term(k, c.clone());
        }
        r
    }

    /// Product; terms above `max_power` are dropped.
    pub fn mul_truncated(&self, o: &Self, max_power: i64) -> Self {
        let mut r = Self::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &o.terms {
                if a + b <= max_power {
                    r.add_term(a + b, ca.mul(cb));
                }
            }
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_truncated(o, i64::MAX)
    }

    /// Order of the leading pole (0 when there is none).
    pub fn pole_order(&self) -> u32 {
        self.terms.keys().next().map_or(0, |&k| if k < 0 { (-k) as u32 } else { 0 })
    }

    pub fn coeff(&self, power: i64) -> ComplexQ {
        self.terms.get(&power).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::qi;
    use proptest::prelude::*;

    fn arb_laurent() -> impl Strategy<Value = MuLaurent> {
        prop::collection::vec((-3i64..3, -5i64..5, -5i64..5), 0..5).prop_map(|v| {
            let mut m = MuLaurent::zero();
            for (k, a, b) in v {
                m.add_term(k, ComplexQ::new(qi(a), qi(b)));
            }
            m
        })
    }

    #[test]
    fn i_powers() {
        assert_eq!(ComplexQ::i().mul(&ComplexQ::i()), ComplexQ::real(qi(-1)));
        assert_eq!(ComplexQ::i_pow(-1), ComplexQ::new(qi(0), qi(-1)));
        assert_eq!(ComplexQ::i_pow(6), ComplexQ::real(qi(-1)));
    }

    proptest! {
        #[test]
        fn pole_order_subadditive(a in arb_laurent(), b in arb_laurent()) {
            let p = a.mul(&b);
            prop_assert!(p.pole_order() <= a.pole_order() + b.pole_order());
        }

        #[test]
        fn product_commutes(a in arb_laurent(), b in arb_laurent()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }
    }
}
