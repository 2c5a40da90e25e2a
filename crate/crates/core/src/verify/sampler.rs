//! Monte Carlo sampler of the bidiagonal cosine-sine matrix model.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::scalar::to_f64;
use crate::gap::params::JacobiParams;

/// Samples drawn per independent random stream.
pub const CHUNK: usize = 4096;

/// Model parameters; `(λ1, λ2) = ((β/2)(a+1) − 1, (β/2)(b+1) − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CSModelParams {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
    pub n: u32,
}

impl CSModelParams {
    pub fn from_jacobi(p: &JacobiParams) -> Self {
        let beta = to_f64(&p.beta);
        CSModelParams {
            a: 2.0 * (to_f64(&p.lambda1) + 1.0) / beta - 1.0,
            b: 2.0 * (to_f64(&p.lambda2) + 1.0) / beta - 1.0,
            beta,
            n: p.n,
        }
    }

    /// Shape pairs of the `cos²θ_j` laws, `j = 1..N`.
    pub fn theta_shapes(&self) -> Vec<(f64, f64)> {
        (1..=self.n).map(|j| (self.beta * (self.a + j as f64) / 2.0, self.beta * (self.b + j as f64) / 2.0)).collect()
    }

    /// Shape pairs of the `cos²φ_j` laws, `j = 1..N−1`.
    pub fn phi_shapes(&self) -> Vec<(f64, f64)> {
        (1..self.n).map(|j| (self.beta * j as f64 / 2.0, self.beta * (self.a + self.b + 1.0 + j as f64) / 2.0)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameters("matrix model needs N ≥ 1".into()));
        }
        for (x, y) in self.theta_shapes().into_iter().chain(self.phi_shapes()) {
            if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
                return Err(Error::InvalidParameters(format!("beta law B[{x}, {y}] has a non-positive parameter")));
            }
        }
        Ok(())
    }
}

/// Beta variate as `X/(X+Y)` with independent gamma variates.
struct BetaLaw {
    x: Gamma<f64>,
    y: Gamma<f64>,
}

impl BetaLaw {
    fn new(a: f64, b: f64) -> Result<Self> {
        let g = |s: f64| Gamma::new(s, 1.0).map_err(|e| Error::InvalidParameters(format!("gamma shape {s}: {e}")));
        Ok(BetaLaw { x: g(a)?, y: g(b)? })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        loop {
            let x = self.x.sample(rng);
            let y = self.y.sample(rng);
            let t = x + y;
            if t > 0.0 {
                return x / t;
            }
        }
    }
}

/// The `N×N` upper-bidiagonal model matrix from `cos²θ_j` (`j = 1..N`) and `cos²φ_j`
/// (`j = 1..N−1`); all angles lie in `[0, π/2]`.
pub fn bidiagonal_from_cos2(cos2_theta: &[f64], cos2_phi: &[f64]) -> DMatrix<f64> {
    let n = cos2_theta.len();
    assert_eq!(cos2_phi.len() + 1, n.max(1));
    let c = |j: usize| cos2_theta[j - 1].sqrt();
    let s = |j: usize| (1.0 - cos2_theta[j - 1]).max(0.0).sqrt();
    let cp = |j: usize| cos2_phi[j - 1].sqrt();
    let sp = |j: usize| (1.0 - cos2_phi[j - 1]).max(0.0).sqrt();
    let mut m = DMatrix::zeros(n, n);
    m[(0, 0)] = c(n);
    for r in 1..n {
        let j = n - r;
        m[(r, r)] = c(j) * sp(j);
        m[(r - 1, r)] = -s(j + 1) * cp(j);
    }
    m
}

/// Squared singular values in increasing order.
pub fn squared_singular_values(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.singular_values().iter().map(|x| x * x).collect();
    v.sort_by(f64::total_cmp);
    v
}

struct Laws {
    theta: Vec<BetaLaw>,
    phi: Vec<BetaLaw>,
}

impl Laws {
    fn new(p: &CSModelParams) -> Result<Self> {
        p.validate()?;
        let mk = |v: Vec<(f64, f64)>| v.into_iter().map(|(a, b)| BetaLaw::new(a, b)).collect::<Result<Vec<_>>>();
        Ok(Laws { theta: mk(p.theta_shapes())?, phi: mk(p.phi_shapes())? })
    }

    fn spectrum<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let ct: Vec<f64> = self.theta.iter().map(|l| l.sample(rng)).collect();
        let cp: Vec<f64> = self.phi.iter().map(|l| l.sample(rng)).collect();
        squared_singular_values(bidiagonal_from_cos2(&ct, &cp))
    }
}

/// One spectrum of the model, drawn from `rng`.
pub fn sample_cs_spectrum<R: Rng>(p: &CSModelParams, rng: &mut R) -> Result<Vec<f64>> {
    Ok(Laws::new(p)?.spectrum(rng))
}

/// `count` samples of `f(spectrum)`. Chunk `k` uses ChaCha8 stream `k` of `seed`, so the
/// output is identical for every thread count.
pub fn sample_statistic(p: &CSModelParams, count: usize, seed: u64, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Vec<f64>> {
    let laws = Laws::new(p)?;
    let chunks = count.div_ceil(CHUNK);
    let out: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let len = CHUNK.min(count - k * CHUNK);
            (0..len).map(|_| f(&laws.spectrum(&mut rng))).collect()
        })
        .collect();
    Ok(out.concat())
}

/// Samples of the largest eigenvalue.
pub fn sample_lambda_max(p: &CSModelParams, count: usize, seed: u64) -> Result<Vec<f64>> {
    sample_statistic(p, count, seed, |v| v[v.len() - 1])
}

/// Samples of the smallest eigenvalue.
pub fn sample_lambda_min(p: &CSModelParams, count: usize, seed: u64) -> Result<Vec<f64>> {
    sample_statistic(p, count, seed, |v| v[0])
}
