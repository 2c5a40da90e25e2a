//! The differential-difference system for Selberg-type integrals.
//!
//! With `e_p` the elementary symmetric polynomials, the integrals `J_p^{(α)}(x)` satisfy
//!
//! ```text
//! (N-p) E_p J_{p+1} = (A_p x + B_p) J_p - x(x-1) J_p' + D_p x(x-1) J_{p-1},
//! ```
//!
//! and `J_N^{(α)} = J_0^{(α+1)}`, so one sweep over `p = 0..N-1` raises `α` by one. Three
//! representations of `J` are supported: a plain polynomial in the reflected variable, a
//! pair `(P, Q)` multiplying a hypergeometric function and its derivative, and λ-shifted
//! series in `1 - x` (generic over the coefficient field).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::scalar::{qi, Scalar};
use crate::exact::{Field, LambdaSeries, Poly, Var};
use crate::special::HypParams;

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs<F> {
    pub a: F,
    pub b: F,
    pub d: F,
    pub e: F,
}

/// `A_p, B_p, D_p, E_p` for `N = n` variables at exponent `alpha`.
pub fn coeffs<F: Field>(p: u32, n: u32, lambda1: &F, lambda2: &F, beta: &Scalar, alpha: &Scalar) -> RecurrenceCoeffs<F> {
    let s = |x: Scalar| F::from_scalar(&x);
    let (pi, ni) = (p as i64, n as i64);
    let half = Scalar::from(beta / 2);
    let alpha1 = Scalar::from(alpha + 1);
    let a = lambda1
        .add(lambda2)
        .add(&s(Scalar::from(beta * qi(ni - pi - 1)) + Scalar::from(&alpha1 * 2)))
        .scale(&qi(ni - pi));
    let b = lambda1.add(&s(Scalar::from(&alpha1 + Scalar::from(&half * qi(ni - pi - 1))))).scale(&qi(pi - ni));
    let d = s(Scalar::from(&half * qi(ni - pi)) + &alpha1).scale(&qi(pi));
    let e = lambda1
        .add(lambda2)
        .add(&s(Scalar::from(&half * qi(2 * ni - pi - 2)) + &alpha1 + 1));
    RecurrenceCoeffs { a, b, d, e }
}

fn divisor<F: Field>(c: &RecurrenceCoeffs<F>, p: u32, n: u32) -> Result<F> {
    let v = c.e.scale(&qi(n as i64 - p as i64));
    if v.is_zero() {
        return Err(Error::DivisionByZero(format!(
            "recurrence divisor (N-p)E_p vanishes at p = {p}, N = {n}; parameters outside the admissible region"
        )));
    }
    Ok(v)
}

/// The operations a representation of `J_p(x)` must support for the recurrence in `x`.
pub trait RecurrenceBasis<F: Field>: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn scale(&self, c: &F) -> Self;
    fn mul_x(&self) -> Self;
    /// Multiplication by `x(x-1)`.
    fn mul_x_xm1(&self) -> Self;
    /// `x(x-1) d/dx`.
    fn euler(&self) -> Self;
    /// Exit check after a full sweep.
    fn check(&self) -> Result<()> {
        Ok(())
    }
}

impl<F: Field> RecurrenceBasis<F> for LambdaSeries<F> {
    fn zero_like(&self) -> Self {
        LambdaSeries::zero(self.lambda2().clone())
    }
    fn add(&self, o: &Self) -> Self {
        LambdaSeries::add(self, o)
    }
    fn scale(&self, c: &F) -> Self {
        LambdaSeries::scale(self, c)
    }
    fn mul_x(&self) -> Self {
        LambdaSeries::mul_x(self)
    }
    fn mul_x_xm1(&self) -> Self {
        self.mul_x().mul_x_minus_1()
    }
    fn euler(&self) -> Self {
        self.derivative().mul_x().mul_x_minus_1()
    }
    fn check(&self) -> Result<()> {
        self.check_offsets()
    }
}

/// One full sweep of the recurrence in a generic representation: maps `J_0` at `alpha_from`
/// to `J_0` at `alpha_from + 1`.
pub fn sweep_series<F: Field, B: RecurrenceBasis<F>>(
    seed: &B,
    n: u32,
    lambda1: &F,
    lambda2: &F,
    beta: &Scalar,
    alpha_from: &Scalar,
) -> Result<B> {
    let mut prev = seed.zero_like();
    let mut cur = seed.clone();
    for p in 0..n {
        let c = coeffs(p, n, lambda1, lambda2, beta, alpha_from);
        let inv = divisor(&c, p, n)?.inv()?;
        let mut next = cur.mul_x().scale(&c.a).add(&cur.scale(&c.b)).add(&cur.euler().scale(&F::one().neg()));
        if !c.d.is_zero() {
            next = next.add(&prev.mul_x_xm1().scale(&c.d));
        }
        prev = cur;
        cur = next.scale(&inv);
    }
    cur.check()?;
    Ok(cur)
}

fn s_poly(cs: &[Scalar]) -> Poly {
    Poly::new(Var::S, cs.to_vec())
}

/// Multiplication by `x(1-x)` composed with differentiation.
fn x_one_minus_x_deriv(p: &Poly) -> Result<Poly> {
    p.derivative().mul(&s_poly(&[qi(0), qi(1), qi(-1)]))
}

/// `L_p = A_p - (Nα+p) + (B_p + Nα + p) x` of the reflected recurrence.
fn reflected_linear(c: &RecurrenceCoeffs<Scalar>, p: u32, n: u32, alpha: &Scalar) -> Poly {
    let shift = Scalar::from(alpha * qi(n as i64)) + qi(p as i64);
    s_poly(&[Scalar::from(&c.a - &shift), Scalar::from(&c.b + &shift)])
}

/// Sweep in the reflected polynomial representation with an explicit `(1-t)^{lambda2}`
/// weight in the recurrence coefficients.
pub fn sweep_poly_weighted(seed: &Poly, n: u32, lambda1: &Scalar, lambda2: &Scalar, beta: &Scalar, alpha_from: &Scalar) -> Result<Poly> {
    let one_minus = s_poly(&[qi(1), qi(-1)]);
    let mut prev = Poly::zero(Var::S);
    let mut cur = seed.clone();
    for p in 0..n {
        let c = coeffs(p, n, lambda1, lambda2, beta, alpha_from);
        let div = divisor(&c, p, n)?;
        let mut next = reflected_linear(&c, p, n, alpha_from).mul(&cur)?.add(&x_one_minus_x_deriv(&cur)?)?;
        if !Field::is_zero(&c.d) {
            next = next.add(&prev.mul(&one_minus)?.scale(&c.d))?;
        }
        prev = cur;
        cur = next.scale(&div.recip());
    }
    Ok(cur)
}

/// One sweep of the reflected polynomial recurrence for the gap integral (no `(1-t)` weight).
pub fn sweep_poly(seed: &Poly, n: u32, lambda1: &Scalar, beta: &Scalar, alpha_from: &Scalar) -> Result<Poly> {
    sweep_poly_weighted(seed, n, lambda1, &qi(0), beta, alpha_from)
}

/// `P f + Q f'` with `f = ₂F₁(hyp; x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypPair {
    pub p_poly: Poly,
    pub q_poly: Poly,
    pub hyp: HypParams,
}

impl HypPair {
    pub fn seed(hyp: HypParams) -> Self {
        HypPair { p_poly: Poly::one(Var::S), q_poly: Poly::zero(Var::S), hyp }
    }
}

/// Sweep of the pair representation, eliminating `f''` through the hypergeometric equation.
pub fn sweep_hyp_weighted(
    seed: &HypPair,
    n: u32,
    lambda1: &Scalar,
    lambda2: &Scalar,
    beta: &Scalar,
    alpha_from: &Scalar,
) -> Result<HypPair> {
    let HypParams { a, b, c: hc } = &seed.hyp;
    let ab = Scalar::from(a * b);
    let ode_lin = s_poly(&[hc.clone(), Scalar::from(-(Scalar::from(a + b) + 1u32))]);
    let one_minus = s_poly(&[qi(1), qi(-1)]);
    let xx = s_poly(&[qi(0), qi(1), qi(-1)]);
    let (mut pp, mut qp) = (Poly::zero(Var::S), Poly::zero(Var::S));
    let (mut pc, mut qc) = (seed.p_poly.clone(), seed.q_poly.clone());
    for p in 0..n {
        let co = coeffs(p, n, lambda1, lambda2, beta, alpha_from);
        let inv = divisor(&co, p, n)?.recip();
        let l = reflected_linear(&co, p, n, alpha_from);
        let mut np = l.mul(&pc)?.add(&x_one_minus_x_deriv(&pc)?)?.add(&qc.scale(&ab))?;
        let mut nq = l
            .mul(&qc)?
            .add(&xx.mul(&pc.add(&qc.derivative())?)?)?
            .sub(&ode_lin.mul(&qc)?)?;
        if !Field::is_zero(&co.d) {
            np = np.add(&one_minus.mul(&pp)?.scale(&co.d))?;
            nq = nq.add(&one_minus.mul(&qp)?.scale(&co.d))?;
        }
        pp = pc;
        qp = qc;
        pc = np.scale(&inv);
        qc = nq.scale(&inv);
    }
    Ok(HypPair { p_poly: pc, q_poly: qc, hyp: seed.hyp.clone() })
}

/// Sweep of the pair representation for the gap integral (no `(1-t)` weight).
pub fn sweep_hyp(seed: &HypPair, n: u32, lambda1: &Scalar, beta: &Scalar, alpha_from: &Scalar) -> Result<HypPair> {
    sweep_hyp_weighted(seed, n, lambda1, &qi(0), beta, alpha_from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::q;
    use crate::exact::RatFunc;
    use crate::special::{hyp2f1_deriv_float, hyp2f1_float};
    use proptest::prelude::*;
    use rug::Float;

    #[test]
    fn coefficient_examples() {
        let c = coeffs(0, 1, &qi(0), &qi(0), &qi(2), &qi(0));
        assert_eq!((c.a, c.b, c.d, c.e), (qi(2), qi(-1), qi(0), qi(2)));
        let c = coeffs(4, 4, &q(1, 3), &q(5, 2), &q(7, 8), &q(3, 4));
        assert_eq!((c.a, c.b), (qi(0), qi(0)));
        let c = coeffs(0, 5, &q(1, 3), &q(5, 2), &q(7, 8), &q(3, 4));
        assert_eq!(c.d, qi(0));
        // Symbolic λ2 specializes consistently.
        let cs = coeffs(2, 5, &RatFunc::from_poly(Poly::constant(Var::Param, q(1, 3))), &RatFunc::param(), &qi(3), &qi(1));
        let cn = coeffs(2, 5, &q(1, 3), &q(2, 7), &qi(3), &qi(1));
        assert_eq!(cs.a.eval(&q(2, 7)).unwrap(), cn.a);
        assert_eq!(cs.e.eval(&q(2, 7)).unwrap(), cn.e);
    }

    #[test]
    fn poly_sweep_single_variable() {
        let out = sweep_poly(&Poly::one(Var::S), 1, &qi(0), &q(5, 3), &qi(0)).unwrap();
        assert_eq!(out, s_poly(&[qi(1), q(-1, 2)]));
        assert_eq!(sweep_poly(&out, 0, &qi(0), &q(5, 3), &qi(1)).unwrap(), out);
    }

    /// Terminating `₂F₁(-N, -(N-1) - (2/β)(λ1+1); -2(N-1) - (2/β)(λ1+2); s)` from one sweep off the constant.
    #[test]
    fn poly_sweep_matches_terminating_hypergeometric() {
        for (n, l1, b) in [(3u32, q(-3, 4), q(7, 8)), (5, qi(2), q(3, 2)), (4, qi(5), qi(5))] {
            let out = sweep_poly(&Poly::one(Var::S), n, &l1, &b, &qi(0)).unwrap();
            let two_over = Scalar::from(2 / &b);
            let bb = -qi(n as i64 - 1) - Scalar::from(&two_over * Scalar::from(&l1 + 1));
            let cc = -qi(2 * (n as i64 - 1)) - Scalar::from(&two_over * Scalar::from(&l1 + 2));
            let mut coef = qi(1);
            let mut want = vec![qi(1)];
            for k in 0..n as i64 {
                coef = coef * (qi(k) - qi(n as i64)) * (Scalar::from(&bb + qi(k))) / (Scalar::from(&cc + qi(k)) * qi(k + 1));
                want.push(coef.clone());
            }
            assert_eq!(out, s_poly(&want));
            assert_eq!(out.coeff(0), qi(1));
        }
    }

    #[test]
    fn series_sweep_single_variable_integral() {
        // Seed ∫_0^x t^2 (1-t)^{1/2} dt as a λ-series; one sweep gives ∫_0^x t^2 (1-t)^{1/2} (x-t) dt.
        let l2 = q(1, 2);
        let seed = LambdaSeries::from_terms(
            l2.clone(),
            [((0, 0), q(16, 105)), ((1, 1), q(-2, 3)), ((1, 2), q(4, 5)), ((1, 3), q(-2, 7))],
        );
        let out = sweep_series(&seed, 1, &qi(2), &l2, &qi(1), &qi(0)).unwrap();
        // Closed form: x*I0(x) - I1(x), evaluated numerically against direct quadrature-free antiderivatives.
        for &x in &[0.2f64, 0.5, 0.9] {
            let u = 1.0 - x;
            let i0 = 16.0 / 105.0 - 2.0 / 3.0 * u.powf(1.5) + 4.0 / 5.0 * u.powf(2.5) - 2.0 / 7.0 * u.powf(3.5);
            // ∫_0^x t^3 (1-t)^{1/2} dt with t = 1 - v.
            let f = |v: f64| -(2.0 / 3.0) * v.powf(1.5) + 6.0 / 5.0 * v.powf(2.5) - 6.0 / 7.0 * v.powf(3.5) + 2.0 / 9.0 * v.powf(4.5);
            let i1 = f(u) - f(1.0);
            assert!((out.eval(x).unwrap() - (x * i0 - i1)).abs() < 1e-14);
        }
    }

    #[test]
    fn hyp_sweep_single_variable() {
        // N = 1, λ1 = 0, β = 1: one sweep from α = -1/2 gives E = 1 - (1-s)^{3/2} after normalization.
        let hyp = HypParams::new(q(1, 2), qi(1), qi(2)).unwrap();
        let pair = sweep_hyp(&HypPair::seed(hyp.clone()), 1, &qi(0), &qi(1), &q(-1, 2)).unwrap();
        assert_eq!(pair.p_poly.degree(), Some(1));
        assert_eq!(pair.q_poly.degree(), Some(2));
        // norm = B(0,0)/B(0,1/2) = 3/2.
        for &s in &[0.1f64, 0.4, 0.8, 0.95] {
            let x = Float::with_val(128, s);
            let f = hyp2f1_float(&hyp, &x, 128).unwrap();
            let fd = hyp2f1_deriv_float(&hyp, &x, 128).unwrap();
            let g = pair.p_poly.eval_float(&x) * f + pair.q_poly.eval_float(&x) * fd;
            let e = g.to_f64() * 1.5 * s;
            assert!((e - (1.0 - (1.0 - s).powf(1.5))).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn series_sweep_is_linear(c1 in -20i64..20, c2 in -20i64..20, l in 0i64..4) {
            let l2 = q(1, 3);
            let g = LambdaSeries::from_terms(l2.clone(), [((0, 0), qi(c1)), ((1, l), qi(c2))]);
            let h = LambdaSeries::from_terms(l2.clone(), [((1, 0), qi(c2)), ((2, l + 1), qi(c1 - 3))]);
            let sw = |x: &LambdaSeries<Scalar>| sweep_series(x, 2, &qi(1), &l2, &qi(2), &qi(0)).unwrap();
            prop_assert_eq!(sw(&g.add(&h)), sw(&g).add(&sw(&h)));
        }
    }
}
