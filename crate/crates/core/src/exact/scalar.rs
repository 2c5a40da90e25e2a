//! Exact rational scalars and their canonical text form.

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always stored in lowest terms with positive denominator.
pub type Scalar = Rational;

pub fn q(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    Rational::from((num, den))
}

pub fn qi(n: i64) -> Scalar {
    Rational::from(n)
}

/// Parses `"7/8"`, `"-3/4"`, `"12"` into an exact rational. Decimal points are rejected.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    if t.is_empty() || t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(Error::Parse(s.to_string()));
    }
    let r = match t.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let d: Integer = d.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            if d == 0 {
                return Err(Error::Parse(s.to_string()));
            }
            Rational::from((n, d))
        }
        None => {
            let n: Integer = t.parse().map_err(|_| Error::Parse(s.to_string()))?;
            Rational::from(n)
        }
    };
    Ok(r)
}

/// Canonical `"num/den"` form; integers keep an explicit `/1`.
pub fn scalar_to_string(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn is_integer(x: &Scalar) -> bool {
    *x.denom() == 1
}

/// Returns the value as `i64` when it is an integer that fits.
pub fn as_i64(x: &Scalar) -> Option<i64> {
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64()
}

/// Exact rational from a finite `f64` (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Option<Scalar> {
    Rational::from_f64(x)
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Serde adapter writing a [`Scalar`] as its canonical string.
pub mod serde_scalar {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&scalar_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Scalar>`.
pub mod serde_scalar_vec {
    use super::*;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&scalar_to_string(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_scalar(s).map_err(de::Error::custom)).collect()
    }
}

pub mod serde_scalar_matrix {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Vec<Scalar>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = xs.iter().map(|r| r.iter().map(scalar_to_string).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Scalar>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|s| parse_scalar(s).map_err(de::Error::custom)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_scalar("7/8").unwrap(), q(7, 8));
        assert_eq!(parse_scalar("-6/8").unwrap(), q(-3, 4));
        assert_eq!(parse_scalar(" 12 ").unwrap(), qi(12));
        assert_eq!(scalar_to_string(&q(-6, 8)), "-3/4");
        assert_eq!(scalar_to_string(&qi(0)), "0/1");
        assert!(parse_scalar("0.5").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
    }

    #[test]
    fn normalization_invariant() {
        let x = q(10, -4);
        assert_eq!(*x.numer(), -5);
        assert_eq!(*x.denom(), 2);
        assert_eq!(q(0, 7), qi(0));
        assert_eq!(*q(0, 7).denom(), 1);
    }

    #[test]
    fn f64_roundtrip_is_exact() {
        let x = from_f64(0.1).unwrap();
        assert_eq!(x.to_f64(), 0.1);
        assert_ne!(x, q(1, 10));
    }
}
