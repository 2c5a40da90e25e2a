//! Brute-force quadrature oracle for small `N`.
//!
//! Integrals run over the ordered region `hi > x_1 > x_2 > ... > x_N > lo` with nested
//! tanh-sinh rules, which absorb the algebraic endpoint singularities of the weight and of
//! the repulsion factor. Every variable carries its distances to its neighbours so that
//! `x`, `1 − x` and the pair gaps are formed without cancellation.

use crate::error::{Error, Result};
use crate::exact::scalar::to_f64;
use crate::gap::params::JacobiParams;
use crate::special::selberg::selberg_log;

pub const MAX_ORACLE_N: u32 = 3;

/// Half-width of the tanh-sinh parameter range.
const T_MAX: f64 = 6.0;

/// Tanh-sinh rule on `(0, 1)` as `(distance from 0, distance from 1, weight)`.
fn tanh_sinh_rule(h: f64) -> Vec<(f64, f64, f64)> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let kmax = (T_MAX / h).ceil() as i64;
    let mut out = Vec::with_capacity(2 * kmax as usize + 1);
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let v = half_pi * t.sinh();
        let w = half_pi * h * t.cosh() / v.cosh().powi(2) / 2.0;
        // (1 + tanh v)/2 and (1 − tanh v)/2 without cancellation.
        let right = 1.0 / (1.0 + (-2.0 * v).exp());
        let left = 1.0 / (1.0 + (2.0 * v).exp());
        if left > 0.0 && right > 0.0 && w > 0.0 && w.is_finite() {
            out.push((right, left, w));
        }
    }
    out
}

/// A variable placed inside its interval.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub x: f64,
    pub one_minus_x: f64,
    /// Distance to the next outer variable (or to the upper limit for the outermost one).
    pub gap_above: f64,
}

/// Weight of an ordered integral: one factor per variable and one per pair.
pub trait OrderedWeight {
    fn single(&self, p: &Point) -> f64;
    /// `outer` lies above `inner` at distance `gap > 0`.
    fn pair(&self, gap: f64) -> f64;
}

struct Nested<'a, W: OrderedWeight> {
    weight: &'a W,
    rule: Vec<(f64, f64, f64)>,
    lo: f64,
    n: usize,
}

impl<W: OrderedWeight> Nested<'_, W> {
    /// Integrates the remaining levels below the innermost outer point at `x_hi`.
    fn level(&self, outer: &mut Vec<Point>, x_hi: f64, one_minus_hi: f64) -> f64 {
        if outer.len() == self.n {
            return 1.0;
        }
        let width = x_hi - self.lo;
        let mut sum = 0.0;
        for &(r, l, w) in &self.rule {
            let d_lo = width * r;
            let d_hi = width * l;
            if d_lo == 0.0 || d_hi == 0.0 {
                // Underflowed node: its weight is far below double precision.
                continue;
            }
            let p = Point {
                x: self.lo + d_lo,
                one_minus_x: one_minus_hi + d_hi,
                gap_above: d_hi,
            };
            let mut f = self.weight.single(&p);
            // Pair factors with every outer variable, accumulating gaps outward.
            let mut gap = d_hi;
            for (i, q) in outer.iter().enumerate().rev() {
                f *= self.weight.pair(gap);
                if i > 0 {
                    gap += q.gap_above;
                }
            }
            if f == 0.0 || !f.is_finite() {
                if f.is_finite() {
                    continue;
                }
                return f64::NAN;
            }
            outer.push(p);
            sum += w * width * f * self.level(outer, p.x, p.one_minus_x);
            outer.pop();
        }
        sum
    }
}

/// `∫_{hi > x_1 > ... > x_N > lo} ∏ single ∏ pair` at step `h`.
fn ordered_integral<W: OrderedWeight>(weight: &W, n: u32, lo: f64, hi: f64, one_minus_hi: f64, h: f64) -> f64 {
    let nest = Nested { weight, rule: tanh_sinh_rule(h), lo, n: n as usize };
    nest.level(&mut Vec::with_capacity(n as usize), hi, one_minus_hi)
}

/// Halves the step until two successive estimates agree to `tol`.
fn converge(tol: f64, max_halvings: u32, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    let mut h = 0.5;
    let mut prev = f(h);
    for _ in 0..max_halvings {
        h /= 2.0;
        let cur = f(h);
        if !cur.is_finite() {
            return Err(Error::Numeric("quadrature produced a non-finite value".into()));
        }
        if (cur - prev).abs() < tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Numeric(format!("quadrature did not converge: last change {:e}", (f(h) - prev).abs())))
}

struct JacobiWeight {
    lambda1: f64,
    lambda2: f64,
    beta: f64,
}

impl OrderedWeight for JacobiWeight {
    fn single(&self, p: &Point) -> f64 {
        p.x.powf(self.lambda1) * p.one_minus_x.powf(self.lambda2)
    }
    fn pair(&self, gap: f64) -> f64 {
        gap.powf(self.beta)
    }
}

fn jacobi_setup(params: &JacobiParams) -> Result<(JacobiWeight, f64)> {
    if params.n > MAX_ORACLE_N {
        return Err(Error::InvalidParameters(format!("quadrature oracle is limited to N ≤ {MAX_ORACLE_N}")));
    }
    let w = JacobiWeight { lambda1: to_f64(&params.lambda1), lambda2: to_f64(&params.lambda2), beta: to_f64(&params.beta) };
    if w.lambda1 <= -1.0 || w.lambda2 <= -1.0 {
        return Err(Error::InvalidParameters("quadrature oracle needs λ1, λ2 > −1".into()));
    }
    let ln_norm = selberg_log(&params.lambda1, &params.lambda2, &params.beta, params.n)?;
    let n_fact: f64 = (1..=params.n).map(f64::from).product();
    Ok((w, (ln_norm - n_fact.ln()).exp()))
}

/// `E(0; (s, 1))`: probability that every eigenvalue lies in `[0, s]`.
pub fn quadrature_gap(params: &JacobiParams, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameters(format!("s = {s} outside [0, 1]")));
    }
    let (w, norm) = jacobi_setup(params)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    converge(1e-10, 6, |h| ordered_integral(&w, params.n, 0.0, s, 1.0 - s, h) / norm)
}

/// `E(0; (0, t))`: probability that every eigenvalue lies in `[t, 1]`.
pub fn quadrature_gap_lower(params: &JacobiParams, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameters(format!("t = {t} outside [0, 1]")));
    }
    let (w, norm) = jacobi_setup(params)?;
    if t == 1.0 {
        return Ok(0.0);
    }
    converge(1e-10, 6, |h| ordered_integral(&w, params.n, t, 1.0, 0.0, h) / norm)
}

struct CircularWeight {
    beta: f64,
}

impl OrderedWeight for CircularWeight {
    fn single(&self, _: &Point) -> f64 {
        1.0
    }
    fn pair(&self, gap: f64) -> f64 {
        (2.0 * (gap / 2.0).sin()).abs().powf(self.beta)
    }
}

/// Circular-ensemble gap probability over an arc of length `φ`, for `N ≤ 3`.
pub fn quadrature_circular_gap(n: u32, beta: f64, phi: f64) -> Result<f64> {
    let tau = std::f64::consts::TAU;
    if n == 0 || n > MAX_ORACLE_N || !(0.0..=tau).contains(&phi) {
        return Err(Error::InvalidParameters("circular oracle needs 1 ≤ N ≤ 3 and φ in [0, 2π]".into()));
    }
    let w = CircularWeight { beta };
    let z = converge(1e-10, 6, |h| ordered_integral(&w, n, 0.0, tau, 0.0, h))?;
    if phi == tau {
        return Ok(0.0);
    }
    let v = converge(1e-10, 6, |h| ordered_integral(&w, n, 0.0, tau - phi, 0.0, h))?;
    Ok(v / z)
}
