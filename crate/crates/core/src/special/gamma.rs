//! Gamma-family functions. Floating values come from MPFR and are rounded once to `f64`.

use std::collections::BTreeMap;

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::exact::scalar::{factorial, is_integer, Scalar};
use crate::exact::Field;

const WORK_PREC: u32 = 128;

/// `ln Γ(z)` for `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidParameters(format!("ln_gamma requires z > 0, got {z}")));
    }
    Ok(Float::with_val(WORK_PREC, z).ln_gamma().to_f64())
}

/// `ln Γ(z)` for an exact positive rational, at precision `prec`.
pub fn ln_gamma_exact(z: &Scalar, prec: u32) -> Result<Float> {
    if z.cmp0().is_le() {
        return Err(Error::InvalidParameters(format!("ln_gamma requires z > 0, got {z}")));
    }
    Ok(Float::with_val(prec, z).ln_gamma())
}

/// Euler beta `∫_0^1 x^a (1-x)^b dx = Γ(a+1)Γ(b+1)/Γ(a+b+2)` for `a, b > -1`.
pub fn beta_value(a: &Scalar, b: &Scalar) -> Result<f64> {
    if *a <= -1 || *b <= -1 {
        return Err(Error::InvalidParameters(format!("beta_value requires a, b > -1, got ({a}, {b})")));
    }
    if let Some(r) = exact_gamma_ratio(&[Scalar::from(a + 1), Scalar::from(b + 1)], &[Scalar::from(a + b) + 2]) {
        return Ok(r.to_f64());
    }
    let one = Scalar::from(1);
    let l = ln_gamma_exact(&Scalar::from(a + &one), WORK_PREC)? + ln_gamma_exact(&Scalar::from(b + &one), WORK_PREC)?
        - ln_gamma_exact(&(Scalar::from(a + b) + 2), WORK_PREC)?;
    Ok(l.exp().to_f64())
}

/// `B(a, b) = a! / prod_{p=1}^{a+1} (b + p)` for a non-negative integer `a`, in any coefficient field.
pub fn beta_value_exact_int<F: Field>(a: u32, b: &F) -> Result<F> {
    let mut den = F::one();
    for p in 1..=(a + 1) {
        den = den.mul(&b.add(&F::from_scalar(&Scalar::from(p))));
    }
    if den.is_zero() {
        return Err(Error::DivisionByZero(format!("beta_value_exact_int: pole at b = -p for a = {a}")));
    }
    F::from_scalar(&Scalar::from(factorial(a))).div(&den)
}

/// Exact value of `prod Γ(num_i) / prod Γ(den_j)` when it is rational by telescoping.
///
/// Arguments are grouped by their residue mod 1; within each non-integer residue the counts
/// must match, and each matched pair telescopes through the Gamma recurrence. Integer arguments
/// contribute factorials directly. Returns `None` when the ratio is not reducible this way or an
/// argument sits on a pole.
pub fn exact_gamma_ratio(num: &[Scalar], den: &[Scalar]) -> Option<Scalar> {
    let mut classes: BTreeMap<Scalar, (Vec<Scalar>, Vec<Scalar>)> = BTreeMap::new();
    let mut acc = Scalar::from(1);
    for (args, is_num) in [(num, true), (den, false)] {
        for x in args {
            if is_integer(x) {
                if x.cmp0().is_le() {
                    return None;
                }
                let n = x.numer().to_u32()?;
                let f = Scalar::from(factorial(n - 1));
                if is_num {
                    acc *= f;
                } else {
                    acc /= f;
                }
                continue;
            }
            let fl = Scalar::from(x.floor_ref());
            let frac = Scalar::from(x - &fl);
            let e = classes.entry(frac).or_default();
            if is_num {
                e.0.push(x.clone());
            } else {
                e.1.push(x.clone());
            }
        }
    }
    for (_, (mut n, mut d)) in classes {
        if n.len() != d.len() {
            return None;
        }
        n.sort();
        d.sort();
        for (x, y) in n.iter().zip(d.iter()) {
            acc *= gamma_shift_ratio(x, y)?;
        }
    }
    Some(acc)
}

/// `Γ(x) / Γ(y)` for `x - y` an integer, via the rising factorial.
fn gamma_shift_ratio(x: &Scalar, y: &Scalar) -> Option<Scalar> {
    let diff = Scalar::from(x - y);
    let k = diff.numer().to_i64()?;
    let (lo, n, invert) = if k >= 0 { (y, k, false) } else { (x, -k, true) };
    let mut r = Scalar::from(1);
    for j in 0..n {
        let f = Scalar::from(lo + Integer::from(j));
        if f.cmp0().is_eq() {
            return None;
        }
        r *= f;
    }
    Some(if invert { r.recip() } else { r })
}
