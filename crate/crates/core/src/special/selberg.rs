//! The Selberg integral `J_{λ1,λ2,β,N} = ∫_{[0,1]^N} ∏ x^{λ1}(1-x)^{λ2} ∏|x_k - x_j|^β`.

use rug::Float;

use super::gamma::{exact_gamma_ratio, ln_gamma_exact};
use crate::error::{Error, Result};
use crate::exact::scalar::{qi, Scalar};

/// Parameters of one Selberg integral.
#[derive(Debug, Clone, PartialEq)]
pub struct SelbergParams {
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    pub beta: Scalar,
    pub n: u32,
}

impl SelbergParams {
    pub fn new(lambda1: Scalar, lambda2: Scalar, beta: Scalar, n: u32) -> Self {
        SelbergParams { lambda1, lambda2, beta, n }
    }

    fn validate(&self) -> Result<()> {
        if self.lambda1 <= -1 || self.lambda2 <= -1 || self.beta.cmp0().is_le() {
            return Err(Error::InvalidParameters(format!(
                "Selberg integral needs lambda1 > -1, lambda2 > -1, beta > 0; got ({}, {}, {})",
                self.lambda1, self.lambda2, self.beta
            )));
        }
        Ok(())
    }

    /// Gamma arguments `(numerator, denominator)` of the closed form.
    pub fn gamma_args(&self) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
        self.validate()?;
        let half = Scalar::from(&self.beta / 2);
        let n = self.n as i64;
        let mut num = Vec::with_capacity(3 * self.n as usize);
        let mut den = Vec::with_capacity(2 * self.n as usize);
        for j in 0..n {
            let jh = Scalar::from(&half * qi(j));
            num.push(Scalar::from(&self.lambda1 + &jh) + 1);
            num.push(Scalar::from(&self.lambda2 + &jh) + 1);
            num.push(Scalar::from(&half * qi(j + 1)) + 1);
            den.push(Scalar::from(&self.lambda1 + &self.lambda2) + 2 + Scalar::from(&half * qi(n + j - 1)));
            den.push(Scalar::from(&half + 1));
        }
        Ok((num, den))
    }

    /// `ln J` at precision `prec`.
    pub fn ln_float(&self, prec: u32) -> Result<Float> {
        let (num, den) = self.gamma_args()?;
        let mut acc = Float::new(prec);
        for x in &num {
            acc += ln_gamma_exact(x, prec)?;
        }
        for x in &den {
            acc -= ln_gamma_exact(x, prec)?;
        }
        Ok(acc)
    }
}

/// `ln J_{λ1,λ2,β,N}`.
pub fn selberg_log(lambda1: &Scalar, lambda2: &Scalar, beta: &Scalar, n: u32) -> Result<f64> {
    Ok(SelbergParams::new(lambda1.clone(), lambda2.clone(), beta.clone(), n).ln_float(128)?.to_f64())
}

/// Exact value of `∏ J(num_i) / ∏ J(den_j)` when every Gamma ratio telescopes.
pub fn selberg_quotient_exact(num: &[SelbergParams], den: &[SelbergParams]) -> Result<Option<Scalar>> {
    let (mut gn, mut gd) = (Vec::new(), Vec::new());
    for p in num {
        let (a, b) = p.gamma_args()?;
        gn.extend(a);
        gd.extend(b);
    }
    for p in den {
        let (a, b) = p.gamma_args()?;
        gd.extend(a);
        gn.extend(b);
    }
    Ok(exact_gamma_ratio(&gn, &gd))
}

/// `ln(∏ J(num_i) / ∏ J(den_j))` at precision `prec`.
pub fn selberg_quotient_ln(num: &[SelbergParams], den: &[SelbergParams], prec: u32) -> Result<Float> {
    let mut acc = Float::new(prec);
    for p in num {
        acc += p.ln_float(prec)?;
    }
    for p in den {
        acc -= p.ln_float(prec)?;
    }
    Ok(acc)
}

/// `J_{λ1,0,β,N} / J_{λ1,λ2,β,N}` for integer `λ2 ≥ 0`, as the finite product
/// `∏_j ∏_{m=1}^{λ2} (λ1+λ2+2+(N+j-1)β/2 - m) / (1 + jβ/2 + λ2 - m)`.
pub fn selberg_ratio_exact(lambda1: &Scalar, lambda2: u32, beta: &Scalar, n: u32) -> Result<Scalar> {
    if *lambda1 <= -1 || beta.cmp0().is_le() {
        return Err(Error::InvalidParameters(format!(
            "selberg_ratio_exact needs lambda1 > -1, beta > 0; got ({lambda1}, {beta})"
        )));
    }
    let half = Scalar::from(beta / 2);
    let l2 = lambda2 as i64;
    let mut r = Scalar::from(1);
    for j in 0..n as i64 {
        for m in 1..=l2 {
            let top = Scalar::from(lambda1 + qi(l2 + 2 - m)) + Scalar::from(&half * qi(n as i64 + j - 1));
            let bot = Scalar::from(&half * qi(j)) + qi(1 + l2 - m);
            if bot.cmp0().is_eq() {
                return Err(Error::DivisionByZero("selberg_ratio_exact denominator factor".into()));
            }
            r *= top / bot;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::q;
    use crate::special::gamma::beta_value;

    #[test]
    fn known_values() {
        assert!((selberg_log(&qi(0), &qi(1), &qi(2), 2).unwrap() - (1.0f64 / 36.0).ln()).abs() < 1e-14);
        assert!((selberg_log(&qi(0), &qi(0), &q(7, 3), 1).unwrap()).abs() < 1e-15);
        let (a, b) = (q(5, 2), q(-1, 3));
        let l = selberg_log(&a, &b, &q(9, 4), 1).unwrap();
        assert!((l.exp() - beta_value(&a, &b).unwrap()).abs() < 1e-14);
        assert!(selberg_log(&qi(-1), &qi(0), &qi(1), 2).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(selberg_ratio_exact(&qi(3), 0, &q(1, 2), 4).unwrap(), qi(1));
        assert_eq!(selberg_ratio_exact(&qi(0), 1, &qi(2), 1).unwrap(), qi(2));
        assert_eq!(selberg_ratio_exact(&qi(0), 1, &qi(2), 2).unwrap(), qi(6));
    }

    #[test]
    fn ratio_matches_log_and_telescoping() {
        for (l1, l2, b, n) in [(q(-3, 4), 9u32, q(7, 8), 7u32), (qi(2), 5, q(3, 2), 4), (qi(5), 3, qi(5), 6)] {
            let r = selberg_ratio_exact(&l1, l2, &b, n).unwrap();
            let num = SelbergParams::new(l1.clone(), qi(0), b.clone(), n);
            let den = SelbergParams::new(l1.clone(), qi(l2 as i64), b.clone(), n);
            let lr = selberg_quotient_ln(&[num.clone()], &[den.clone()], 128).unwrap().to_f64();
            assert!(((lr.exp() - r.to_f64()) / r.to_f64()).abs() < 1e-10);
            assert_eq!(selberg_quotient_exact(&[num], &[den]).unwrap(), Some(r));
        }
    }
}
