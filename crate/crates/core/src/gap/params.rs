//! Jacobi ensemble parameters and the three exactly solvable regimes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::scalar::{as_i64, is_integer, qi, scalar_to_string, serde_scalar, Scalar};

/// Which structural form applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum CaseTag {
    /// `λ2` a non-negative integer: polynomial form.
    Case1,
    /// `λ2 = -β/2 + k`: hypergeometric form after `k` sweeps.
    Case2 { k: u32 },
    /// `λ1` a non-negative integer and `β` a positive integer: expansion about `s = 1`.
    Case3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    #[serde(with = "serde_scalar")]
    pub lambda1: Scalar,
    #[serde(with = "serde_scalar")]
    pub lambda2: Scalar,
    #[serde(with = "serde_scalar")]
    pub beta: Scalar,
    pub n: u32,
}

impl JacobiParams {
    pub fn new(lambda1: Scalar, lambda2: Scalar, beta: Scalar, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("N must be a positive integer".into()));
        }
        if lambda1 <= -1 {
            return Err(Error::InvalidParameters(format!("lambda1 = {} violates lambda1 > -1", scalar_to_string(&lambda1))));
        }
        if lambda2 <= -1 {
            return Err(Error::InvalidParameters(format!("lambda2 = {} violates lambda2 > -1", scalar_to_string(&lambda2))));
        }
        if beta.cmp0().is_le() {
            return Err(Error::InvalidParameters(format!("beta = {} violates beta > 0", scalar_to_string(&beta))));
        }
        Ok(JacobiParams { lambda1, lambda2, beta, n })
    }

    /// Case-(2) parameters: `λ2 = -β/2 + k`.
    pub fn from_k(lambda1: Scalar, beta: Scalar, k: u32, n: u32) -> Result<Self> {
        let lambda2 = qi(k as i64) - Scalar::from(&beta / 2);
        JacobiParams::new(lambda1, lambda2, beta, n)
    }

    /// The parameters with `λ1` and `λ2` exchanged (reflection `s -> 1 - s`).
    pub fn swapped(&self) -> JacobiParams {
        JacobiParams { lambda1: self.lambda2.clone(), lambda2: self.lambda1.clone(), beta: self.beta.clone(), n: self.n }
    }

    pub fn case1_lambda2(&self) -> Option<u32> {
        if is_integer(&self.lambda2) {
            as_i64(&self.lambda2).and_then(|v| u32::try_from(v).ok())
        } else {
            None
        }
    }

    pub fn case2_k(&self) -> Option<u32> {
        let k = Scalar::from(&self.lambda2 + Scalar::from(&self.beta / 2));
        if is_integer(&k) {
            as_i64(&k).and_then(|v| u32::try_from(v).ok())
        } else {
            None
        }
    }

    pub fn case3_lambda1(&self) -> Option<u32> {
        if is_integer(&self.lambda1) && is_integer(&self.beta) {
            as_i64(&self.lambda1).and_then(|v| u32::try_from(v).ok())
        } else {
            None
        }
    }

    pub fn beta_int(&self) -> Option<u32> {
        if is_integer(&self.beta) {
            as_i64(&self.beta).and_then(|v| u32::try_from(v).ok())
        } else {
            None
        }
    }

    /// Every regime these parameters belong to, in order of preference.
    pub fn cases(&self) -> Vec<CaseTag> {
        let mut v = Vec::new();
        if self.case1_lambda2().is_some() {
            v.push(CaseTag::Case1);
        }
        if let Some(k) = self.case2_k() {
            v.push(CaseTag::Case2 { k });
        }
        if self.case3_lambda1().is_some() {
            v.push(CaseTag::Case3);
        }
        v
    }

    /// Explanation of why no regime applies.
    pub fn diagnosis(&self) -> String {
        format!(
            "no exactly solvable regime for lambda1 = {}, lambda2 = {}, beta = {}: case 1 needs lambda2 a non-negative integer; \
             case 2 needs lambda2 + beta/2 a non-negative integer; case 3 needs lambda1 a non-negative integer and beta a positive integer",
            scalar_to_string(&self.lambda1),
            scalar_to_string(&self.lambda2),
            scalar_to_string(&self.beta)
        )
    }

    /// Leading exponent `N(λ1+1) + βN(N-1)/2` of the gap probability at `s = 0`.
    pub fn exponent0(&self) -> Scalar {
        let n = qi(self.n as i64);
        Scalar::from(&n * Scalar::from(&self.lambda1 + 1)) + Scalar::from(&self.beta * Scalar::from(&n * qi(self.n as i64 - 1))) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::q;

    #[test]
    fn regimes() {
        let p = JacobiParams::new(q(-3, 4), qi(9), q(7, 8), 7).unwrap();
        assert_eq!(p.cases(), vec![CaseTag::Case1]);
        let p = JacobiParams::from_k(qi(9), q(1, 2), 6, 5).unwrap();
        assert_eq!(p.lambda2, q(23, 4));
        assert_eq!(p.cases(), vec![CaseTag::Case2 { k: 6 }]);
        let p = JacobiParams::new(qi(4), q(32, 9), qi(1), 25).unwrap();
        assert_eq!(p.cases(), vec![CaseTag::Case3]);
        let p = JacobiParams::new(qi(0), qi(1), qi(2), 2).unwrap();
        assert_eq!(p.cases(), vec![CaseTag::Case1, CaseTag::Case2 { k: 2 }, CaseTag::Case3]);
        assert_eq!(p.exponent0(), qi(4));
        let p = JacobiParams::new(q(1, 2), q(1, 3), q(1, 5), 2).unwrap();
        assert!(p.cases().is_empty());
        assert!(p.diagnosis().contains("case 3"));
        assert!(JacobiParams::new(qi(-1), qi(0), qi(1), 1).is_err());
        assert!(JacobiParams::new(qi(0), qi(0), qi(0), 1).is_err());
        assert!(JacobiParams::from_k(qi(0), qi(4), 1, 2).is_err());
    }
}
