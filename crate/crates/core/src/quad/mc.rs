//! Importance-sampled Monte Carlo for the HLS double integral
//! `int int f(xi) g(eta) |xi^{-1} eta|^{-lambda} dxi deta`.
//!
//! `xi` is drawn from `q1 ~ (1 + |xi|)^{-k}`; then `eta = xi . w` with
//! `w ~ |w|^{-lambda} (1 + |w|)^{-m}`, which absorbs the kernel singularity.
//! Both radial laws reduce to Beta variables under `rho = u / (1 - u)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use statrs::function::beta::beta;

use super::{CylFunc, QuadConfig};
use crate::error::{Error, Result};
use crate::kernel::HLSParams;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

struct Radial {
    law: Beta<f64>,
    /// normalising constant of the gauge-radial density
    z: f64,
    /// exponents `(a, b)` in `|x|^{-a} (1 + |x|)^{-b}`
    a: f64,
    b: f64,
}

impl Radial {
    fn new(q: f64, a: f64, b: f64) -> Result<Self> {
        let (pa, pb) = (q - a, a + b - q);
        let law = Beta::new(pa, pb).map_err(|e| Error::MonteCarlo(format!("proposal Beta({pa}, {pb}): {e}")))?;
        Ok(Self { law, z: 2.0 * PI * PI * beta(pa, pb), a, b })
    }

    /// Sample `(x, y, t)` and its density.
    fn draw(&self, rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
        let u = self.law.sample(rng);
        let rho = u / (1.0 - u);
        let phi = PI * rng.random::<f64>();
        let psi = 2.0 * PI * rng.random::<f64>();
        let rz = rho * phi.sin().sqrt();
        let dens = rho.powf(-self.a) * (1.0 + rho).powf(-self.b) / self.z;
        (rz * psi.cos(), rz * psi.sin(), rho * rho * phi.cos(), dens)
    }
}

fn decay_of(f: &CylFunc) -> f64 {
    if f.support().is_some() {
        f64::INFINITY
    } else {
        f.decay().exponent
    }
}

/// Monte Carlo estimate with standard error.
pub fn hls_double_integral(hp: &HLSParams, f: &CylFunc, g: &CylFunc, cfg: &QuadConfig) -> Result<McEstimate> {
    cfg.validate()?;
    if hp.n() != 1 {
        return Err(Error::InvalidParameter("Monte Carlo integral supports n = 1 only".into()));
    }
    let q = hp.q();
    let lam = hp.lambda();
    let (df, dg) = (decay_of(f), decay_of(g));
    if df <= q || dg <= q {
        return Err(Error::MonteCarlo(format!(
            "decay exponents ({df}, {dg}) must exceed Q = {q} for a finite-variance proposal"
        )));
    }
    let k = df.min(q + 2.0);
    let m = (q - lam + 2.0).min(dg);
    let p1 = Radial::new(q, 0.0, k)?;
    let pw = Radial::new(q, lam, m)?;

    let n_chunks = cfg.mc_samples.div_ceil(CHUNK);
    let chunks: Result<Vec<(f64, f64, u64)>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c);
            let len = CHUNK.min(cfg.mc_samples - c * CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..len {
                let (x1, y1, t1, d1) = p1.draw(&mut rng);
                let fv = f.try_eval((x1 * x1 + y1 * y1).sqrt(), t1)?;
                if fv == 0.0 {
                    continue;
                }
                let (x2, y2, t2, dw) = pw.draw(&mut rng);
                let (x, y) = (x1 + x2, y1 + y2);
                let t = t1 + t2 + 2.0 * (y1 * x2 - x1 * y2);
                let gv = g.try_eval((x * x + y * y).sqrt(), t)?;
                let wn = ((x2 * x2 + y2 * y2).powi(2) + t2 * t2).sqrt().sqrt();
                let v = fv * gv * wn.powf(-lam) / (d1 * dw);
                s += v;
                s2 += v * v;
            }
            Ok((s, s2, len))
        })
        .collect();
    let chunks = chunks?;

    let stats = |cs: &[(f64, f64, u64)]| {
        let n: u64 = cs.iter().map(|c| c.2).sum();
        let s: f64 = cs.iter().map(|c| c.0).sum();
        let s2: f64 = cs.iter().map(|c| c.1).sum();
        let mean = s / n as f64;
        let var = (s2 / n as f64 - mean * mean).max(0.0);
        (mean, var, n)
    };
    let (mean, var, n) = stats(&chunks);
    if !(mean.is_finite() && var.is_finite()) {
        return Err(Error::MonteCarlo("non-finite sample moments".into()));
    }
    if chunks.len() >= 8 {
        let (_, var_half, _) = stats(&chunks[..chunks.len() / 2]);
        if var > 10.0 * var_half && var > 0.0 {
            return Err(Error::MonteCarlo(format!(
                "running variance grows from {var_half:.3e} to {var:.3e}; proposal tails too light"
            )));
        }
    }
    Ok(McEstimate { value: mean, stderr: (var / n as f64).sqrt(), samples: n })
}
