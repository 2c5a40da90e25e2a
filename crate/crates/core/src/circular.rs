//! Gap probability of the β-circular ensemble over an arc, for integer β.
//!
//! Both schemes produce an exact [`TrigGapForm`] in the arc length `a = 2π − φ` left free
//! of eigenvalues. The direct scheme integrates level by level over the ordered region
//! `a > θ_1 > ... > θ_N > 0` in the basis `e^{i a (jμ + r)}`, where `μ` is a formal
//! regularizer that is removed once, at the end. The even-β scheme reuses the Jacobi nested
//! integral with symbolic `λ2` and maps it onto the circle.

use std::collections::BTreeMap;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::field::Field;
use crate::exact::laurent::{ComplexQ, MuLaurent};
use crate::exact::ratfunc::RatFunc;
use crate::exact::scalar::{factorial, is_integer, parse_scalar, qi, scalar_to_string, Scalar};
use crate::gap::case3::nested_integral;
use crate::gap::numeric::with_cancellation_guard;
use crate::recurrence::{sweep_series, RecurrenceBasis};

/// Key `(j, r)` of the mode `e^{i a (jμ + r)}`.
pub type ModeKey = (u32, Scalar);

/// `i^phase · Σ c_{j,r}(μ) e^{i a (jμ + r)}` with real rational-function coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MuSeries {
    /// Global factor `i^phase`, reduced mod 4.
    pub phase: u8,
    terms: BTreeMap<ModeKey, RatFunc>,
}

impl MuSeries {
    pub fn one() -> Self {
        let mut s = MuSeries { phase: 0, terms: BTreeMap::new() };
        s.add_term((0, Scalar::new()), RatFunc::one());
        s
    }

    pub fn terms(&self) -> &BTreeMap<ModeKey, RatFunc> {
        &self.terms
    }

    pub fn add_term(&mut self, key: ModeKey, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Frequency `jμ + r` of a key.
    fn frequency(key: &ModeKey) -> RatFunc {
        RatFunc::param().scale(&qi(key.0 as i64)).add(&RatFunc::from_scalar(&key.1))
    }

    fn shifted(&self, dr: i64) -> Self {
        let mut out = MuSeries { phase: self.phase, terms: BTreeMap::new() };
        for ((j, r), c) in &self.terms {
            out.add_term((*j, Scalar::from(r + dr)), c.clone());
        }
        out
    }

    /// Largest pole order at `μ = 0` among the coefficients.
    pub fn max_pole_order(&self) -> usize {
        self.terms.values().map(RatFunc::pole_order_at_zero).max().unwrap_or(0)
    }
}

impl RecurrenceBasis<RatFunc> for MuSeries {
    fn zero_like(&self) -> Self {
        MuSeries { phase: self.phase, terms: BTreeMap::new() }
    }
    fn add(&self, o: &Self) -> Self {
        assert_eq!(self.phase, o.phase, "adding MuSeries with different global phases");
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
    fn scale(&self, c: &RatFunc) -> Self {
        let mut out = self.zero_like();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.mul(c));
        }
        out
    }
    fn mul_x(&self) -> Self {
        self.shifted(1)
    }
    fn mul_x_xm1(&self) -> Self {
        let mut out = self.shifted(2);
        let minus = self.shifted(1);
        for (k, c) in minus.terms {
            out.add_term(k, c.neg());
        }
        out
    }
    fn euler(&self) -> Self {
        let mut out = self.zero_like();
        for (k, c) in &self.terms {
            let ec = c.mul(&Self::frequency(k));
            out.add_term((k.0, Scalar::from(&k.1 + 1u32)), ec.clone());
            out.add_term(k.clone(), ec.neg());
        }
        out
    }
}

/// `∫_0^a e^{iθν} dθ = (e^{iaν} − 1)/(iν)` for `ν = jμ + r`.
pub fn circ_seed(j: u32, r: &Scalar) -> Result<MuSeries> {
    if j == 0 && r.cmp0().is_eq() {
        return Err(Error::InvalidParameters("circ_seed needs a nonzero formal frequency".into()));
    }
    let key = (j, r.clone());
    let inv = MuSeries::frequency(&key).inv()?;
    let mut s = MuSeries { phase: 3, terms: BTreeMap::new() };
    s.add_term(key, inv.clone());
    s.add_term((0, Scalar::new()), inv.neg());
    Ok(s)
}

/// Multiplies by `e^{iθ μ̃}` with `μ̃ = μ + shift` and integrates `θ` over `(0, a)`.
fn integrate_level(g: &MuSeries, shift: &Scalar) -> Result<MuSeries> {
    let mut out = MuSeries { phase: (g.phase + 3) % 4, terms: BTreeMap::new() };
    for ((j, r), c) in &g.terms {
        let key = (j + 1, Scalar::from(r + shift));
        let inv = MuSeries::frequency(&key).inv()?;
        let w = c.mul(&inv);
        out.add_term(key, w.clone());
        out.add_term((0, Scalar::new()), w.neg());
    }
    Ok(out)
}

/// Unnormalized ordered integral `∫_{a>θ_1>...>θ_N>0} ∏ e^{iθ μ̃} ∏_{j<k} (e^{iθ_j} − e^{iθ_k})^β`
/// with `μ̃ = μ − β(N−1)/2`.
pub fn circular_integral(n: u32, beta: u32) -> Result<MuSeries> {
    let shift = -qi(beta as i64) * qi(n as i64 - 1) / 2u32;
    let shift = Scalar::from(shift);
    let lambda1 = RatFunc::param_plus(&Scalar::from(&shift - 1u32));
    let lambda2 = RatFunc::zero();
    let beta_q = qi(beta as i64);
    let mut g = MuSeries::one();
    for level in 1..=n {
        if level > 1 {
            for alpha in 0..beta {
                g = sweep_series(&g, level - 1, &lambda1, &lambda2, &beta_q, &qi(alpha as i64))?;
            }
        }
        g = integrate_level(&g, &shift)?;
    }
    Ok(g)
}

/// Removes the regularizer from `Σ c(μ) e^{σ i a (jμ + r)}` (σ = ±1), returning the
/// coefficients of `a^d e^{i a m}`. Fails on any pole that survives.
fn limit_mu(
    terms: impl IntoIterator<Item = (u32, Scalar, RatFunc)>,
    sigma: i64,
    phase: &ComplexQ,
) -> Result<BTreeMap<(Scalar, u32), ComplexQ>> {
    let mut buckets: BTreeMap<(Scalar, u32), MuLaurent> = BTreeMap::new();
    for (j, r, c) in terms {
        let m = Scalar::from(&r * sigma);
        for (k, a) in c.laurent_at_zero(0) {
            // e^{σ i a j μ} = Σ_d (σ i j a μ)^d / d!
            for d in 0..=(-k) as u32 {
                let mag = Scalar::from(qi(j as i64).pow(d)) * &a / Scalar::from(factorial(d));
                let coeff = ComplexQ::i_pow(d as i64 * sigma).scale(&mag).mul(phase);
                let b = buckets.entry((m.clone(), d)).or_default();
                b.add_term(k + d as i64, coeff);
            }
        }
    }
    let mut out = BTreeMap::new();
    for ((m, d), lau) in buckets {
        if lau.pole_order() > 0 {
            let (p, c) = lau.terms().iter().next().expect("pole implies a term");
            return Err(Error::Invariant(format!(
                "residual pole mu^{p} with coefficient {}+{}i on a^{d} e^(i a {m})",
                scalar_to_string(&c.re),
                scalar_to_string(&c.im)
            )));
        }
        let c = lau.coeff(0);
        if !c.is_zero() {
            out.insert((m, d), c);
        }
    }
    Ok(out)
}

/// Exact circular gap probability `E_N(0; (0, φ); β)` in the arc length `a = 2π − φ`:
/// `value = Re Σ c_{m,d} a^d e^{i a m} / Z(π)` with `Z` a monic polynomial in `π`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigGapForm {
    pub n: u32,
    pub beta: u32,
    /// `(m, d) -> c_{m,d}`; `m` is a half-integer when `β(N−1)` is odd.
    pub terms: BTreeMap<(Scalar, u32), ComplexQ>,
    /// Coefficients of `Z(π)` in increasing powers of `π`.
    pub normalization: Vec<Scalar>,
}

/// `e^{2πim}` for half-integer `m`.
fn full_turn_sign(m: &Scalar) -> i64 {
    if Scalar::from(m * 2u32).numer().is_odd() {
        -1
    } else {
        1
    }
}

impl TrigGapForm {
    /// Builds the canonical form from raw coefficients: fixes the phase so the
    /// normalization is real with positive leading coefficient, then makes it monic.
    fn canonical(n: u32, beta: u32, raw: BTreeMap<(Scalar, u32), ComplexQ>) -> Result<Self> {
        for m in raw.keys().map(|k| &k.0) {
            if !is_integer(&Scalar::from(m * 2u32)) {
                return Err(Error::Invariant(format!("Fourier index {m} is not a half-integer")));
            }
        }
        // Z = value of the numerator at a = 2π, as a polynomial in π.
        let mut z: BTreeMap<u32, ComplexQ> = BTreeMap::new();
        for ((m, d), c) in &raw {
            let w = c.scale(&Scalar::from(qi(2).pow(*d) * full_turn_sign(m)));
            let e = z.entry(*d).or_default();
            *e = e.add(&w);
        }
        z.retain(|_, c| !c.is_zero());
        let (&deg, lead) = z.iter().next_back().ok_or_else(|| Error::Invariant("circular normalization vanishes".into()))?;
        let chi = if lead.im.cmp0().is_eq() {
            ComplexQ::real(Scalar::from(lead.re.clone().recip()))
        } else if lead.re.cmp0().is_eq() {
            ComplexQ::new(Scalar::new(), Scalar::from(-lead.im.clone().recip()))
        } else {
            return Err(Error::Invariant("normalization phase is not a power of i".into()));
        };
        let mut normalization = vec![Scalar::new(); deg as usize + 1];
        for (d, c) in &z {
            let v = c.mul(&chi);
            if !v.im.cmp0().is_eq() {
                return Err(Error::Invariant("normalization is not real after phase fixing".into()));
            }
            normalization[*d as usize] = v.re;
        }
        let terms = raw.into_iter().map(|(k, c)| (k, c.mul(&chi))).collect();
        let form = TrigGapForm { n, beta, terms, normalization };
        form.check_exact()?;
        Ok(form)
    }

    /// Exact checks: conjugate symmetry and zero value at `a = 0`.
    pub fn check_exact(&self) -> Result<()> {
        let mut at_zero = ComplexQ::default();
        for ((m, d), c) in &self.terms {
            let mirror = self.terms.get(&(Scalar::from(-m), *d)).cloned().unwrap_or_default();
            if mirror != c.conj() {
                return Err(Error::Invariant(format!("coefficients of a^{d} e^(±i a {m}) are not conjugate")));
            }
            if *d == 0 {
                at_zero = at_zero.add(c);
            }
        }
        if !at_zero.is_zero() {
            return Err(Error::Invariant("gap probability does not vanish at φ = 2π".into()));
        }
        Ok(())
    }

    /// Value at `φ` (the gap length), in `[0, 2π]`.
    pub fn eval_float(&self, phi: f64, bits: u32) -> Result<Float> {
        if !(0.0..=std::f64::consts::TAU).contains(&phi) {
            return Err(Error::InvalidParameters(format!("φ = {phi} outside [0, 2π]")));
        }
        if phi == 0.0 {
            return Ok(Float::with_val(bits, 1));
        }
        if phi == std::f64::consts::TAU {
            return Ok(Float::with_val(bits, 0));
        }
        with_cancellation_guard(bits, None, |prec| {
            let pi = Float::with_val(prec, Constant::Pi);
            let a = Float::with_val(prec, &pi * 2u32) - phi;
            if a.is_zero() || a.is_sign_negative() {
                return Ok((Float::with_val(prec, 0), f64::NEG_INFINITY));
            }
            let mut sum = Float::with_val(prec, 0);
            let mut maxlog = f64::NEG_INFINITY;
            for ((m, d), c) in &self.terms {
                let theta = Float::with_val(prec, &a * m);
                let (s, co) = theta.sin_cos(Float::new(prec));
                let re = Float::with_val(prec, &c.re) * co - Float::with_val(prec, &c.im) * s;
                let t = re * Float::with_val(prec, a.clone().pow(*d));
                maxlog = maxlog.max(crate::gap::numeric::log2_abs(&t));
                sum += t;
            }
            let mut z = Float::with_val(prec, 0);
            for (d, c) in self.normalization.iter().enumerate() {
                z += Float::with_val(prec, pi.clone().pow(d as u32)) * c;
            }
            Ok((sum / z, maxlog - 2.0))
        })
    }

    pub fn eval(&self, phi: f64) -> Result<f64> {
        Ok(self.eval_float(phi, 64)?.to_f64())
    }

    /// Checks monotone decrease on a uniform grid of `points` over `[0, 2π]`.
    pub fn check_monotone(&self, points: usize) -> Result<()> {
        let mut prev = f64::INFINITY;
        for k in 0..points {
            let phi = std::f64::consts::TAU * k as f64 / (points - 1) as f64;
            let v = self.eval(phi.min(std::f64::consts::TAU))?;
            if v > prev + 1e-12 {
                return Err(Error::Invariant(format!("circular gap probability increases at φ = {phi}")));
            }
            prev = v;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    m: String,
    d: u32,
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct NormalizationRecord {
    variable: String,
    pi_coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct TrigGapRepr {
    form: String,
    n: u32,
    beta: u32,
    terms: Vec<TermRecord>,
    normalization: NormalizationRecord,
}

impl Serialize for TrigGapForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TrigGapRepr {
            form: "trig".into(),
            n: self.n,
            beta: self.beta,
            terms: self
                .terms
                .iter()
                .map(|((m, d), c)| TermRecord {
                    m: scalar_to_string(m),
                    d: *d,
                    re: scalar_to_string(&c.re),
                    im: scalar_to_string(&c.im),
                })
                .collect(),
            normalization: NormalizationRecord {
                variable: "arc = 2*pi - phi".into(),
                pi_coeffs: self.normalization.iter().map(scalar_to_string).collect(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigGapForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = TrigGapRepr::deserialize(d)?;
        let p = |x: &str| parse_scalar(x).map_err(D::Error::custom);
        let mut terms = BTreeMap::new();
        for t in &r.terms {
            terms.insert((p(&t.m)?, t.d), ComplexQ::new(p(&t.re)?, p(&t.im)?));
        }
        let normalization = r.normalization.pi_coeffs.iter().map(|x| p(x)).collect::<std::result::Result<_, _>>()?;
        Ok(TrigGapForm { n: r.n, beta: r.beta, terms, normalization })
    }
}

fn validate(n: u32, beta: u32) -> Result<()> {
    if n == 0 || beta == 0 {
        return Err(Error::InvalidParameters(format!("circular ensemble needs N ≥ 1 and β ≥ 1, got N={n}, β={beta}")));
    }
    Ok(())
}

/// Circular gap probability by the direct regularized recursion, any positive integer β.
pub fn circ_gap_integer_beta(n: u32, beta: u32) -> Result<TrigGapForm> {
    validate(n, beta)?;
    let g = circular_integral(n, beta)?;
    let phase = ComplexQ::i_pow(g.phase as i64);
    let raw = limit_mu(g.terms.into_iter().map(|((j, r), c)| (j, r, c)), 1, &phase)?;
    TrigGapForm::canonical(n, beta, raw)
}

/// Circular gap probability from the Jacobi nested integral at `λ1 = 0` with symbolic `λ2`,
/// for even β.
pub fn circ_gap_even_beta(n: u32, beta: u32) -> Result<TrigGapForm> {
    validate(n, beta)?;
    if beta % 2 != 0 {
        return Err(Error::InvalidParameters(format!("β = {beta} is odd; use the direct circular scheme")));
    }
    let g = nested_integral(0, &RatFunc::param(), beta, n)?;
    // λ2 + 1 = μ − β(N−1)/2 and (1−s)^{q λ2 + l} -> e^{−i a (q μ + l − q − qβ(N−1)/2)}.
    let half = Scalar::from(qi(beta as i64) * qi(n as i64 - 1) / 2u32);
    let lambda2_shift = -Scalar::from(&half + 1u32);
    let terms = g.terms().iter().map(|(&(q, l), c)| {
        let r = qi(l) - qi(q as i64) * Scalar::from(&half + 1u32);
        (q, r, c.shift(&lambda2_shift))
    });
    let raw = limit_mu(terms, -1, &ComplexQ::real(qi(1)))?;
    TrigGapForm::canonical(n, beta, raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn seed_has_simple_pole_for_pure_mu_frequency() {
        let s = circ_seed(1, &Scalar::new()).unwrap();
        assert_eq!(s.max_pole_order(), 1);
        assert_eq!(s.phase, 3);
        let s = circ_seed(0, &qi(1)).unwrap();
        assert_eq!(s.terms().get(&(0, qi(1))), Some(&RatFunc::one()));
        assert_eq!(s.terms().get(&(0, Scalar::new())), Some(&RatFunc::one().neg()));
        assert!(circ_seed(0, &Scalar::new()).is_err());
    }

    #[test]
    fn single_eigenvalue_is_uniform() {
        for beta in 1..=4 {
            let f = circ_gap_integer_beta(1, beta).unwrap();
            for phi in [0.0, 1.0, PI, 5.0, TAU] {
                assert!((f.eval(phi).unwrap() - (1.0 - phi / TAU)).abs() < 1e-15);
            }
        }
        assert_eq!(circ_gap_even_beta(1, 2).unwrap(), circ_gap_integer_beta(1, 2).unwrap());
    }

    #[test]
    fn two_eigenvalues_at_beta_two_match_closed_form() {
        let f = circ_gap_integer_beta(2, 2).unwrap();
        assert_eq!(f.normalization, vec![qi(0), qi(0), qi(1)]);
        for k in 0..=20 {
            let phi = TAU * k as f64 / 20.0;
            let a = TAU - phi;
            let want = (a * a - 2.0 + 2.0 * phi.cos()) / (4.0 * PI * PI);
            assert!((f.eval(phi).unwrap() - want).abs() < 1e-14, "φ={phi}");
        }
    }

    #[test]
    fn even_scheme_agrees_with_direct_scheme() {
        for (n, beta) in [(2, 2), (3, 2), (2, 4)] {
            assert_eq!(circ_gap_even_beta(n, beta).unwrap(), circ_gap_integer_beta(n, beta).unwrap(), "N={n} β={beta}");
        }
    }

    #[test]
    fn odd_beta_forms_are_monotone_probabilities() {
        for (n, beta) in [(2, 1), (2, 3), (3, 1)] {
            let f = circ_gap_integer_beta(n, beta).unwrap();
            assert!((f.eval(0.0).unwrap() - 1.0).abs() < 1e-15);
            assert!(f.eval(TAU).unwrap().abs() < 1e-15);
            f.check_monotone(101).unwrap();
        }
        assert!(circ_gap_even_beta(2, 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = circ_gap_integer_beta(2, 1).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        let back: TrigGapForm = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
    }
}
