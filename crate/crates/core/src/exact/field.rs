//! Coefficient fields for the recursions: exact rationals, or rational functions of a
//! formal parameter.

use std::fmt::Debug;

use super::scalar::Scalar;
use crate::error::{Error, Result};

pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_scalar(x: &Scalar) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    fn scale(&self, x: &Scalar) -> Self {
        self.mul(&Self::from_scalar(x))
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::new()
    }
    fn one() -> Self {
        Scalar::from(1)
    }
    fn from_scalar(x: &Scalar) -> Self {
        x.clone()
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::from(self * o)
    }
    fn neg(&self) -> Self {
        Scalar::from(-self)
    }
    fn inv(&self) -> Result<Self> {
        if Field::is_zero(self) {
            return Err(Error::DivisionByZero("rational inverse of zero".into()));
        }
        Ok(self.clone().recip())
    }
}
