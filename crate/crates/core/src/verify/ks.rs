//! Empirical distribution functions and the Kolmogorov–Smirnov gate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Asymptotic 1% Kolmogorov–Smirnov critical constant.
pub const KS_CRITICAL_1PCT: f64 = 1.63;

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCDF {
    sorted: Vec<f64>,
}

impl EmpiricalCDF {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameters("empirical CDF needs at least one sample".into()));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite sample".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(EmpiricalCDF { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `≤ s`.
    pub fn cdf(&self, s: f64) -> f64 {
        self.sorted.partition_point(|&x| x <= s) as f64 / self.len() as f64
    }

    /// Fraction of samples `< s`.
    pub fn cdf_below(&self, s: f64) -> f64 {
        self.sorted.partition_point(|&x| x < s) as f64 / self.len() as f64
    }

    pub fn threshold(&self) -> f64 {
        KS_CRITICAL_1PCT / (self.len() as f64).sqrt()
    }
}

/// Empirical gap probability `P(λ_max ≤ s)` on a grid.
pub fn empirical_gap(cdf: &EmpiricalCDF, grid: &[f64]) -> Vec<f64> {
    grid.iter().map(|&s| cdf.cdf(s)).collect()
}

/// JSON verification record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub test: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Bounds on the sup distance between an empirical CDF and a nondecreasing analytic CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsBounds {
    pub lower: f64,
    pub upper: f64,
}

fn initial_grid(lo: f64, hi: f64, analytic: &mut impl FnMut(f64) -> Result<f64>) -> Result<Vec<(f64, f64)>> {
    let initial = 257;
    (0..initial)
        .map(|k| {
            let s = lo + (hi - lo) * k as f64 / (initial - 1) as f64;
            Ok((s, analytic(s)?))
        })
        .collect()
}

fn point_distance(cdf: &EmpiricalCDF, s: f64, f: f64) -> f64 {
    (cdf.cdf(s) - f).abs().max((cdf.cdf_below(s) - f).abs())
}

/// On `(a, b)` the empirical CDF lies in `[F_n(a), F_n(b−)]` and the analytic one in `[F(a), F(b)]`.
fn interval_bound(cdf: &EmpiricalCDF, (a, fa): (f64, f64), (b, fb): (f64, f64)) -> f64 {
    (cdf.cdf_below(b) - fa).max(fb - cdf.cdf(a))
}

fn bracket(cdf: &EmpiricalCDF, lo: f64, hi: f64, pts: &[(f64, f64)]) -> KsBounds {
    let lower = pts.iter().map(|&(s, f)| point_distance(cdf, s, f)).fold(0.0, f64::max);
    let upper = pts
        .windows(2)
        .map(|w| interval_bound(cdf, w[0], w[1]))
        .fold(lower, f64::max)
        // Mass outside the window counts fully.
        .max(cdf.cdf_below(lo))
        .max(1.0 - cdf.cdf(hi));
    KsBounds { lower, upper }
}

/// Sup distance on `[lo, hi]` (the support), bracketed by evaluating the analytic CDF on an
/// adaptive grid: between grid points monotonicity confines both curves to a box. Intervals
/// are split until the analytic CDF rises by at most `resolution` across each of them.
pub fn ks_bounds(
    cdf: &EmpiricalCDF,
    lo: f64,
    hi: f64,
    resolution: f64,
    mut analytic: impl FnMut(f64) -> Result<f64>,
) -> Result<KsBounds> {
    if !(lo < hi) || !(resolution > 0.0) {
        return Err(Error::InvalidParameters(format!("bad KS window [{lo}, {hi}] or resolution {resolution}")));
    }
    let mut pts = initial_grid(lo, hi, &mut analytic)?;
    let min_width = (hi - lo) * 1e-12;
    let mut i = 0;
    while i + 1 < pts.len() {
        let (a, fa) = pts[i];
        let (b, fb) = pts[i + 1];
        if fb - fa > resolution && b - a > min_width {
            let m = 0.5 * (a + b);
            pts.insert(i + 1, (m, analytic(m)?));
        } else {
            i += 1;
        }
    }
    Ok(bracket(cdf, lo, hi, &pts))
}

/// Kolmogorov–Smirnov gate at the 1% level.
///
/// The grid is refined only where an interval's bracket straddles the threshold, so the
/// number of analytic evaluations scales with how close the fit is to the cutoff. The
/// reported statistic is the certified upper bound on a pass and the largest observed
/// distance on a fail.
pub fn ks_gate(
    name: &str,
    cdf: &EmpiricalCDF,
    lo: f64,
    hi: f64,
    analytic: impl FnMut(f64) -> Result<f64>,
) -> Result<VerificationReport> {
    Ok(ks_gate_bracketed(name, cdf, lo, hi, analytic)?.0)
}

/// [`ks_gate`] together with the final bracket on the distance.
pub fn ks_gate_bracketed(
    name: &str,
    cdf: &EmpiricalCDF,
    lo: f64,
    hi: f64,
    mut analytic: impl FnMut(f64) -> Result<f64>,
) -> Result<(VerificationReport, KsBounds)> {
    if !(lo < hi) {
        return Err(Error::InvalidParameters(format!("bad KS window [{lo}, {hi}]")));
    }
    let threshold = cdf.threshold();
    let mut pts = initial_grid(lo, hi, &mut analytic)?;
    let min_width = (hi - lo) * 1e-12;
    let mut i = 0;
    while i + 1 < pts.len() {
        let (a, fa) = pts[i];
        let (b, fb) = pts[i + 1];
        let decided = point_distance(cdf, a, fa) > threshold || point_distance(cdf, b, fb) > threshold;
        if !decided && interval_bound(cdf, pts[i], pts[i + 1]) > threshold && b - a > min_width {
            let m = 0.5 * (a + b);
            pts.insert(i + 1, (m, analytic(m)?));
        } else {
            i += 1;
        }
    }
    let bounds = bracket(cdf, lo, hi, &pts);
    let pass = bounds.upper <= threshold;
    let statistic = if pass || bounds.lower <= threshold { bounds.upper } else { bounds.lower };
    Ok((VerificationReport { test: name.into(), statistic, threshold, pass }, bounds))
}

/// Exact sup distance, evaluating the analytic CDF at every sample.
pub fn ks_distance(cdf: &EmpiricalCDF, mut analytic: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let n = cdf.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in cdf.samples().iter().enumerate() {
        let f = analytic(x)?;
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn step_and_floor() {
        let c = EmpiricalCDF::new(vec![1.0; 10]).unwrap();
        assert_eq!(empirical_gap(&c, &[0.0, 0.999, 1.0]), vec![0.0, 0.0, 1.0]);
        let c = EmpiricalCDF::new(vec![0.3, 0.5, 0.7]).unwrap();
        assert_eq!(c.cdf(0.1), 0.0);
        assert!(EmpiricalCDF::new(vec![]).is_err());
    }

    #[test]
    fn uniform_samples_stay_in_dkw_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 20_000;
        let c = EmpiricalCDF::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap();
        // DKW with confidence 1 − 10⁻⁶.
        let eps = ((2.0f64 / 1e-6).ln() / (2.0 * n as f64)).sqrt();
        for k in 0..=100 {
            let s = k as f64 / 100.0;
            assert!((c.cdf(s) - s).abs() < eps);
        }
    }

    #[test]
    fn bracket_contains_exact_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = EmpiricalCDF::new((0..5000).map(|_| rng.random::<f64>().powi(2)).collect()).unwrap();
        let f = |s: f64| Ok(s.max(0.0).sqrt());
        let exact = ks_distance(&c, f).unwrap();
        let b = ks_bounds(&c, 0.0, 1.0, 1e-4, f).unwrap();
        assert!(b.lower <= exact + 1e-12 && exact <= b.upper + 1e-12, "{b:?} vs {exact}");
        assert!(b.upper - b.lower < 2e-3);
    }

    #[test]
    fn gate_matches_exact_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..40 {
            // Exponents drift away from 3 so that both outcomes occur.
            let p = 3.0 + 0.01 * k as f64;
            let c = EmpiricalCDF::new((0..5000).map(|_| rng.random::<f64>().powf(1.0 / p)).collect()).unwrap();
            let f = |s: f64| Ok(s.powi(3));
            let exact = ks_distance(&c, f).unwrap();
            let r = ks_gate("drift", &c, 0.0, 1.0, f).unwrap();
            assert_eq!(r.pass, exact <= r.threshold, "{r:?} vs {exact}");
            if r.pass {
                assert!(exact <= r.statistic + 1e-12);
            }
        }
    }

    #[test]
    fn calibration_at_one_percent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut passes = 0;
        for _ in 0..100 {
            let c = EmpiricalCDF::new((0..2000).map(|_| rng.random::<f64>().cbrt()).collect()).unwrap();
            if ks_gate("cube", &c, 0.0, 1.0, |s| Ok(s.powi(3))).unwrap().pass {
                passes += 1;
            }
        }
        assert!(passes >= 98, "{passes}/100");
    }
}
