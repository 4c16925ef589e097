//! Picard iteration `v_{k+1} = T[v_k^p]` tracked on sample points.
//!
//! Between iterations the iterate is stored as `q = v / h` on a tensor
//! Chebyshev-Lobatto grid in `x = rho / (1 + rho)` and the polar angle
//! `phi`, where `h` is the standard profile; `x = 1` holds the limit
//! `int v^p`, so the interpolant is defined on the whole group.

use std::f64::consts::PI;

use serde::Serialize;

use super::{ReportBuilder, Sample, VerifyReport};
use crate::error::{Error, Result};
use crate::hgroup::HPoint;
use crate::kernel::KernelParams;
use crate::quad::{apply_operator, lp_norm, CylFunc, Decay, QuadConfig};
use crate::solutions::solution_profile;

const OVERFLOW: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PicardGrid {
    /// Nodes in `x = rho / (1 + rho)` on `[0, 1]`.
    pub nx: usize,
    /// Nodes in the polar angle on `[0, pi]`.
    pub nphi: usize,
}

impl Default for PicardGrid {
    fn default() -> Self {
        Self { nx: 9, nphi: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PicardStep {
    pub iteration: usize,
    /// `max |T[v_k^p] - v_k| / v_k` over the sample points.
    pub residual: f64,
    /// `max T[v_k^p]` over the sample points.
    pub sup_sample: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PicardReport {
    pub p: f64,
    pub grid: PicardGrid,
    pub steps: Vec<PicardStep>,
    pub stopped_early: Option<String>,
}

impl PicardReport {
    /// As a [`VerifyReport`]; without a tolerance the probe is observational
    /// and passes whenever it ran.
    pub fn to_report(&self, tolerance: Option<f64>) -> Result<VerifyReport> {
        let observational = tolerance.is_none();
        let mut b = ReportBuilder::new("picard", tolerance.unwrap_or(f64::MAX))
            .param("p", self.p)
            .param("grid.nx", self.grid.nx)
            .param("grid.nphi", self.grid.nphi)
            .param("observational", observational);
        if let Some(s) = &self.stopped_early {
            b.set_param("stopped_early", s.clone());
        }
        for s in &self.steps {
            b.push(Sample::new(format!("iteration {}", s.iteration), s.sup_sample, s.residual, s.residual));
        }
        if self.steps.is_empty() {
            b.push(Sample::new("no iterations", 0.0, 0.0, f64::NAN));
        }
        b.finish()
    }
}

fn lobatto(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n).map(|j| a + (b - a) * 0.5 * (1.0 - (PI * j as f64 / (n - 1) as f64).cos())).collect()
}

fn lobatto_weights(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n - 1 {
                0.5 * s
            } else {
                s
            }
        })
        .collect()
}

/// Barycentric basis values at `x` for the given nodes and weights.
fn basis(nodes: &[f64], w: &[f64], x: f64) -> Vec<f64> {
    if let Some(k) = nodes.iter().position(|&v| v == x) {
        let mut e = vec![0.0; nodes.len()];
        e[k] = 1.0;
        return e;
    }
    let terms: Vec<f64> = nodes.iter().zip(w).map(|(v, wj)| wj / (x - v)).collect();
    let s: f64 = terms.iter().sum();
    terms.into_iter().map(|v| v / s).collect()
}

#[derive(Clone)]
struct Interp {
    xs: Vec<f64>,
    ps: Vec<f64>,
    wx: Vec<f64>,
    wp: Vec<f64>,
    /// `q[i * nphi + j]`
    q: Vec<f64>,
}

impl Interp {
    fn eval(&self, r: f64, t: f64) -> f64 {
        let rho = (r.powi(4) + t * t).sqrt().sqrt();
        let x = if rho.is_infinite() { 1.0 } else { rho / (1.0 + rho) };
        let phi = (r * r).atan2(t);
        let bx = basis(&self.xs, &self.wx, x);
        let bp = basis(&self.ps, &self.wp, phi);
        let np = self.ps.len();
        let mut v = 0.0;
        for (i, ax) in bx.iter().enumerate() {
            if *ax == 0.0 {
                continue;
            }
            let row = &self.q[i * np..(i + 1) * np];
            v += ax * row.iter().zip(&bp).map(|(a, b)| a * b).sum::<f64>();
        }
        v
    }
}

fn iterate_function(interp: Interp, profile: CylFunc, gap: f64, k: usize) -> CylFunc {
    let qmax = interp.q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // the profile is below |xi|^{-gap} and 1; the factor covers interpolant overshoot
    let bound = 1.5 * qmax;
    CylFunc::new(format!("v_{k}"), Decay { exponent: gap, constant: bound, radius: 1.0 }, move |r, t| {
        interp.eval(r, t) * profile.eval(r, t)
    })
    .with_sup(bound)
}

/// Runs up to `iterations` Picard steps from `u_init`. The residual of step
/// `k` compares `T[v_k^p]` with `v_k` at `points`; no convergence is claimed.
pub fn picard_probe(
    kp: &KernelParams,
    u_init: &CylFunc,
    iterations: usize,
    points: &[HPoint],
    grid: PicardGrid,
    cfg: &QuadConfig,
) -> Result<PicardReport> {
    if iterations > 10 {
        return Err(Error::InvalidParameter(format!("iterations = {iterations} > 10")));
    }
    if grid.nx < 3 || grid.nphi < 2 {
        return Err(Error::InvalidParameter("Picard grid needs nx >= 3 and nphi >= 2".into()));
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter("no sample points".into()));
    }
    let profile = solution_profile(kp);
    let xs = lobatto(grid.nx, 0.0, 1.0);
    let ps = lobatto(grid.nphi, 0.0, PI);
    let (wx, wp) = (lobatto_weights(grid.nx), lobatto_weights(grid.nphi));
    let mut v = u_init.clone();
    let mut report = PicardReport { p: kp.p(), grid, steps: Vec::new(), stopped_early: None };
    for k in 0..iterations {
        let mut residual = 0.0f64;
        let mut sup = 0.0f64;
        for z in points {
            let old = v.at(z)?;
            let new = apply_operator(kp, &v, z, cfg)?;
            residual = residual.max((new - old).abs() / old.abs().max(f64::MIN_POSITIVE));
            sup = sup.max(new);
        }
        report.steps.push(PicardStep { iteration: k, residual, sup_sample: sup });
        if k + 1 == iterations {
            break;
        }
        let mut q = vec![0.0; grid.nx * grid.nphi];
        let origin = apply_operator(kp, &v, &HPoint::origin(1), cfg)?;
        let limit = lp_norm(&v, kp.p(), cfg)?.powf(kp.p());
        for (i, &x) in xs.iter().enumerate() {
            for (j, &phi) in ps.iter().enumerate() {
                q[i * grid.nphi + j] = if i == 0 {
                    origin
                } else if i == grid.nx - 1 {
                    limit
                } else {
                    let rho = x / (1.0 - x);
                    let (r, t) = (rho * phi.sin().max(0.0).sqrt(), rho * rho * phi.cos());
                    apply_operator(kp, &v, &HPoint::h1(r, 0.0, t)?, cfg)? / profile.eval(r, t)
                };
            }
        }
        if let Some(bad) = q.iter().find(|v| !v.is_finite() || v.abs() > OVERFLOW) {
            report.stopped_early = Some(format!("iterate overflow after step {k}: node value {bad:.3e}"));
            break;
        }
        v = iterate_function(Interp { xs: xs.clone(), ps: ps.clone(), wx: wx.clone(), wp: wp.clone(), q }, profile.clone(), kp.gap(), k + 1);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{standard_solution, StandardSolutionParams};

    #[test]
    fn interpolation_reproduces_smooth_ratio() {
        let xs = lobatto(9, 0.0, 1.0);
        let ps = lobatto(7, 0.0, PI);
        let f = |x: f64, p: f64| 1.0 + 0.3 * x * x - 0.2 * p * x;
        let mut q = Vec::new();
        for &x in &xs {
            for &p in &ps {
                q.push(f(x, p));
            }
        }
        let it = Interp { xs, ps, wx: lobatto_weights(9), wp: lobatto_weights(7), q };
        for (r, t) in [(0.3, 0.2), (2.0, -5.0), (0.0, 1.0), (1e3, 1e6)] {
            let rho: f64 = (r * r * r * r + t * t as f64).sqrt().sqrt();
            let x = rho / (1.0 + rho);
            let phi = (r * r).atan2(t);
            assert!((it.eval(r, t) - f(x, phi)).abs() < 1e-12);
        }
        assert!((it.eval(0.0, 0.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fixed_point_is_stable_under_iteration() {
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let c0 = (2.0 * PI).powf(-0.5);
        let u = standard_solution(&StandardSolutionParams::unit(c0).unwrap(), &kp).unwrap();
        let cfg = QuadConfig::default();
        let pts = [HPoint::h1(0.0, 0.0, 0.0).unwrap(), HPoint::h1(0.8, 0.0, 1.0).unwrap()];
        let rep = picard_probe(&kp, &u.f, 2, &pts, PicardGrid { nx: 5, nphi: 3 }, &cfg).unwrap();
        assert_eq!(rep.steps.len(), 2);
        assert!(rep.stopped_early.is_none());
        for s in &rep.steps {
            assert!(s.residual <= 2.0 * cfg.tol, "{s:?}");
        }
        assert!(rep.to_report(Some(2.0 * cfg.tol)).unwrap().passed);
        assert!(picard_probe(&kp, &u.f, 11, &pts, PicardGrid::default(), &cfg).is_err());
    }
}
