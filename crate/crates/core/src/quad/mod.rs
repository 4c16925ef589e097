//! Quadrature for `T[f](zeta) = int G_alpha(zeta, xi) f(xi)^p dxi` on the
//! first Heisenberg group, restricted to cylindrical `f`.
//!
//! The singular point is isolated with a smooth window `chi(|zeta^{-1} xi| / delta)`.
//! Inside the window the integral is taken in translated gauge-polar
//! coordinates, where the kernel is exactly `rho^{-(Q-alpha)}`. Outside, the
//! integrand is smooth; the azimuthal angle is integrated against the windowed
//! kernel and the remaining two variables by composite Gauss-Legendre rules.

mod func;
mod mc;

use std::f64::consts::PI;

use rayon::prelude::*;

pub use func::{CylFunc, Decay};
pub use mc::{hls_double_integral, McEstimate};

use crate::error::{Error, Result};
use crate::hgroup::HPoint;
use crate::kernel::{AngularRule, KernelParams};
use crate::rules::{
    adaptive_gauss_kronrod, composite, gauss_jacobi_left, gauss_legendre, graded_breaks, map_to_interval, pairwise_sum,
    polar_angle_rule, window,
};

/// Volume of the unit gauge sphere in the polar measure `rho^3 drho dphi dpsi`.
const SPHERE_MEASURE: f64 = 2.0 * PI * PI;

/// Panels of the polar angle (in the smoothing variable) for far-field grids.
const FAR_ANGLE_PANELS: usize = 8;

const TRAPEZOID_CAP: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Singularity window radius (gauge units).
    pub delta: f64,
    /// Outer truncation radius (gauge units).
    pub r_trunc: f64,
    pub nodes_rho: usize,
    pub nodes_angle: usize,
    pub nodes_outer: usize,
    pub mc_samples: u64,
    pub seed: u64,
    /// Target relative tolerance.
    pub tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            delta: 0.5,
            r_trunc: 1.0e3,
            nodes_rho: 16,
            nodes_angle: 16,
            nodes_outer: 16,
            mc_samples: 1_000_000,
            seed: 0x5eed,
            tol: 1e-3,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < self.r_trunc && self.r_trunc.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < delta ({}) < r_trunc ({})",
                self.delta, self.r_trunc
            )));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidParameter(format!("tol = {} outside (0, 1)", self.tol)));
        }
        if self.nodes_rho < 2 || self.nodes_angle < 2 || self.nodes_outer < 2 {
            return Err(Error::InvalidParameter("node counts must be >= 2".into()));
        }
        if self.mc_samples == 0 {
            return Err(Error::InvalidParameter("mc_samples must be positive".into()));
        }
        Ok(())
    }

    /// Half the window, twice the nodes.
    pub fn refined(&self) -> Self {
        Self {
            delta: 0.5 * self.delta,
            nodes_rho: 2 * self.nodes_rho,
            nodes_angle: 2 * self.nodes_angle,
            nodes_outer: 2 * self.nodes_outer,
            ..*self
        }
    }

    pub fn angular_rule(&self) -> AngularRule {
        AngularRule { start_nodes: 2 * self.nodes_angle, tol: 0.1 * self.tol, max_nodes: 1 << 16 }
    }
}

/// The half-space `t >= lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub lambda: f64,
}

/// A quadrature value with the truncation bound folded into its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub tail_bound: f64,
}

/// Rotated centre `(r, 0, t)` of a singular point.
#[derive(Debug, Clone, Copy)]
struct Center {
    r: f64,
    t: f64,
}

impl Center {
    fn of(zeta: &HPoint) -> Result<Self> {
        if zeta.n() != 1 {
            return Err(Error::InvalidParameter("quadrature supports n = 1 only".into()));
        }
        Ok(Self { r: zeta.r(), t: zeta.t() })
    }

    fn norm(&self) -> f64 {
        (self.r.powi(4) + self.t * self.t).sqrt().sqrt()
    }
}

/// `|c^{-1} xi|^4` for `c = (cr, 0, ct)` and `xi = (x, y, t)`.
#[inline]
fn dist4(c: Center, x: f64, y: f64, t: f64) -> f64 {
    let dx = x - c.r;
    let a = dx * dx + y * y;
    let b = t - c.t + 2.0 * c.r * y;
    a * a + b * b
}

fn check_setup(kp: &KernelParams, cfg: &QuadConfig) -> Result<()> {
    cfg.validate()?;
    if kp.n() != 1 {
        return Err(Error::InvalidParameter("quadrature supports n = 1 only".into()));
    }
    Ok(())
}

/// `int chi(rho/delta) rho^{alpha-1} h(xi, rho) drho dphi dpsi` with
/// `xi = c . eta` and `eta` in gauge-polar coordinates.
fn near_window<H>(kp: &KernelParams, c: Center, delta: f64, cfg: &QuadConfig, h: H) -> Result<f64>
where
    H: Fn(f64, f64, f64, f64) -> Result<f64> + Sync,
{
    let beta = kp.alpha() - 1.0;
    let gl = gauss_legendre(cfg.nodes_rho)?;
    let mut radial = gauss_jacobi_left(cfg.nodes_rho, beta, 0.5 * delta)?;
    for (a, b) in [(0.5, 0.75), (0.75, 1.0)] {
        for (rho, w) in map_to_interval(&gl, a * delta, b * delta)? {
            radial.push((rho, w * rho.powf(beta) * window(rho / delta)));
        }
    }
    let phis = polar_angle_rule(&gauss_legendre(cfg.nodes_angle)?, 2);
    let n_psi = 2 * cfg.nodes_angle;
    let trig: Vec<(f64, f64)> = (0..n_psi).map(|k| (2.0 * PI * k as f64 / n_psi as f64).sin_cos()).collect();
    let w_psi = 2.0 * PI / n_psi as f64;
    let parts: Result<Vec<f64>> = radial
        .par_iter()
        .map(|&(rho, wr)| {
            let mut acc = Vec::with_capacity(phis.len());
            for &(phi, wp) in &phis {
                let (sp, cp) = phi.sin_cos();
                let rz = rho * sp.max(0.0).sqrt();
                let et = rho * rho * cp;
                let mut s = 0.0;
                for &(sn, cs) in &trig {
                    let (ex, ey) = (rz * cs, rz * sn);
                    let x = c.r + ex;
                    let t = c.t + et - 2.0 * c.r * ey;
                    s += h(x, ey, t, rho)?;
                }
                acc.push(wp * s * w_psi);
            }
            Ok(wr * pairwise_sum(&acc))
        })
        .collect();
    Ok(pairwise_sum(&parts?))
}

/// Periodic trapezoid on a two-component integrand, doubling from
/// `rule.start_nodes`. Rings passing close to the window have features of
/// width `~delta^2` in the angle; if doubling has not converged by
/// [`TRAPEZOID_CAP`] nodes the integral is redone adaptively.
fn ring_integral<F>(g: F, rule: &AngularRule) -> Result<[f64; 2]>
where
    F: Fn(f64) -> [f64; 2],
{
    let mut n = rule.start_nodes.max(4);
    let mut h = 2.0 * PI / n as f64;
    let mut sum = [0.0; 2];
    for k in 0..n {
        let v = g(k as f64 * h);
        sum[0] += v[0];
        sum[1] += v[1];
    }
    let mut prev = [sum[0] * h, sum[1] * h];
    while 2 * n <= TRAPEZOID_CAP.min(rule.max_nodes) {
        for k in 0..n {
            let v = g((k as f64 + 0.5) * h);
            sum[0] += v[0];
            sum[1] += v[1];
        }
        n *= 2;
        h *= 0.5;
        let cur = [sum[0] * h, sum[1] * h];
        if !(cur[0].is_finite() && cur[1].is_finite()) {
            return Err(Error::NonFinite("angular integrand".into()));
        }
        let scale = cur[0].abs() + cur[1].abs();
        if (0..2).all(|i| (cur[i] - prev[i]).abs() <= rule.tol * scale) {
            return Ok(cur);
        }
        prev = cur;
    }
    let breaks: Vec<f64> = (0..=16).map(|k| -PI + 2.0 * PI * k as f64 / 16.0).collect();
    adaptive_gauss_kronrod(g, &breaks, rule.tol, rule.max_nodes / 15)
}

/// `int_0^{2pi} (1 - chi(rho_c/delta)) rho_c^{-(Q-alpha)} dpsi`, the far-field
/// kernel seen by the ring `(r e^{i psi}, t)`.
fn windowed_ring_kernel(gap: f64, c: Center, delta: f64, r: f64, t: f64, rule: &AngularRule) -> Result<f64> {
    let e = -gap / 4.0;
    let k = |d4: f64| {
        let rho = d4.sqrt().sqrt();
        let w = 1.0 - window(rho / delta);
        if w == 0.0 {
            0.0
        } else {
            w * d4.powf(e)
        }
    };
    if c.r == 0.0 || r == 0.0 {
        let d4 = (r * r + c.r * c.r).powi(2) + (t - c.t).powi(2);
        return Ok(2.0 * PI * k(d4));
    }
    let [v, _] = ring_integral(
        |psi| {
            let (s, co) = psi.sin_cos();
            [k(dist4(c, r * co, r * s, t)), 0.0]
        },
        rule,
    )?;
    Ok(v)
}

/// Sum of `w f^p K` over the origin-centred gauge-polar grid `|xi| <= r_max`.
fn polar_grid_sum<K>(f: &CylFunc, p: f64, r_breaks: &[f64], cfg: &QuadConfig, kern: K) -> Result<f64>
where
    K: Fn(f64, f64) -> Result<f64> + Sync,
{
    let gl = gauss_legendre(cfg.nodes_outer)?;
    let r_nodes = composite(&gl, r_breaks);
    let phis = polar_angle_rule(&gl, FAR_ANGLE_PANELS);
    let parts: Result<Vec<f64>> = r_nodes
        .par_iter()
        .map(|&(big_r, wr)| {
            let mut acc = Vec::with_capacity(phis.len());
            for &(phi, wp) in &phis {
                let (s, co) = phi.sin_cos();
                let r = big_r * s.max(0.0).sqrt();
                let t = big_r * big_r * co;
                let fv = f.try_eval(r, t)?;
                if fv == 0.0 {
                    continue;
                }
                if fv < 0.0 {
                    return Err(Error::InvalidParameter(format!("{} is negative at (r={r}, t={t})", f.label())));
                }
                acc.push(wp * fv.powf(p) * kern(r, t)?);
            }
            Ok(wr * big_r.powi(3) * pairwise_sum(&acc))
        })
        .collect();
    let v = pairwise_sum(&parts?);
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("integral of {}", f.label())));
    }
    Ok(v)
}

fn merge_breaks(sets: &[Vec<f64>]) -> Vec<f64> {
    let mut all: Vec<f64> = sets.iter().flatten().copied().collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    all
}

fn radial_breaks(r_max: f64, c: Center, delta: f64) -> Vec<f64> {
    let cn = c.norm();
    let anchors: Vec<f64> = (-4..=4).map(|k| cn + 0.25 * delta * k as f64).collect();
    graded_breaks(0.0, r_max, &[0.0], 0.25, &anchors)
}

/// `int_{|xi| > R} G(c, xi) |f|^p dxi` bound from the decay metadata.
fn tail_bound(kp: &KernelParams, f: &CylFunc, p: f64, c_norm: f64, r: f64) -> Result<f64> {
    if let Some(s) = f.support() {
        if s <= r {
            return Ok(0.0);
        }
    }
    let d = f.decay();
    let pd = p * d.exponent;
    if pd <= kp.alpha() {
        return Err(Error::NonConvergent(format!(
            "{}: p * decay = {pd} must exceed alpha = {}",
            f.label(),
            kp.alpha()
        )));
    }
    if r < d.radius {
        return Err(Error::InvalidParameter(format!(
            "truncation radius {r} below decay radius {} of {}",
            d.radius,
            f.label()
        )));
    }
    if r <= c_norm {
        return Err(Error::InvalidParameter(format!("truncation radius {r} must exceed |zeta| = {c_norm}")));
    }
    // |c^{-1} xi| >= |xi| - |c| >= (1 - |c|/R)|xi| on the exterior
    let kfac = (1.0 - c_norm / r).powf(-kp.gap());
    Ok(kfac * d.constant.powf(p) * SPHERE_MEASURE * r.powf(kp.alpha() - pd) / (pd - kp.alpha()))
}

fn check_tail(tail: f64, value: f64, cfg: &QuadConfig, r: f64) -> Result<()> {
    let budget = 0.5 * cfg.tol * value.abs();
    if tail > budget {
        return Err(Error::TailTooLarge { bound: tail, budget, r_trunc: r });
    }
    Ok(())
}

/// `T[f](zeta)` over the whole group.
pub fn apply_operator(kp: &KernelParams, f: &CylFunc, zeta: &HPoint, cfg: &QuadConfig) -> Result<f64> {
    apply_operator_estimate(kp, f, zeta, cfg).map(|e| e.value)
}

pub fn apply_operator_estimate(kp: &KernelParams, f: &CylFunc, zeta: &HPoint, cfg: &QuadConfig) -> Result<Estimate> {
    check_setup(kp, cfg)?;
    let c = Center::of(zeta)?;
    let p = kp.p();
    let delta = cfg.delta;
    let r_max = match f.support() {
        Some(s) => s.min(cfg.r_trunc),
        None => cfg.r_trunc,
    };
    let tail = tail_bound(kp, f, p, c.norm(), cfg.r_trunc)?;
    let near = near_window(kp, c, delta, cfg, |x, y, t, _| {
        let v = f.try_eval((x * x + y * y).sqrt(), t)?;
        Ok(v.powf(p))
    })?;
    let rule = cfg.angular_rule();
    let far = if r_max > 0.0 {
        let breaks = radial_breaks(r_max, c, delta);
        polar_grid_sum(f, p, &breaks, cfg, |r, t| windowed_ring_kernel(kp.gap(), c, delta, r, t, &rule))?
    } else {
        0.0
    };
    let value = near + far;
    check_tail(tail, value, cfg, cfg.r_trunc)?;
    Ok(Estimate { value, tail_bound: tail })
}

/// `int_{B(0, s_ball)} G(zeta, xi) f(xi)^p dxi`.
pub fn apply_operator_ball(kp: &KernelParams, f: &CylFunc, s_ball: f64, zeta: &HPoint, cfg: &QuadConfig) -> Result<f64> {
    check_setup(kp, cfg)?;
    if !(s_ball > 0.0 && s_ball.is_finite()) {
        return Err(Error::InvalidParameter(format!("ball radius {s_ball}")));
    }
    let c = Center::of(zeta)?;
    let p = kp.p();
    let gap = s_ball - c.norm();
    if gap.abs() < 1e-3 * cfg.delta {
        return Err(Error::SingularPoint(format!(
            "centre at gauge radius {} is too close to the ball boundary {s_ball}",
            c.norm()
        )));
    }
    // the window must sit entirely inside or entirely outside the ball
    let delta = cfg.delta.min(0.999 * gap.abs());
    let near = if gap > 0.0 {
        near_window(kp, c, delta, cfg, |x, y, t, _| {
            let v = f.try_eval((x * x + y * y).sqrt(), t)?;
            Ok(v.powf(p))
        })?
    } else {
        0.0
    };
    let r_max = match f.support() {
        Some(s) => s.min(s_ball),
        None => s_ball,
    };
    let rule = cfg.angular_rule();
    let far = if r_max > 0.0 {
        let breaks = radial_breaks(r_max, c, delta);
        polar_grid_sum(f, p, &breaks, cfg, |r, t| windowed_ring_kernel(kp.gap(), c, delta, r, t, &rule))?
    } else {
        0.0
    };
    Ok(near + far)
}

/// `int_{t >= lambda} (G(zeta, xi) - G(zeta_lambda, xi)) (f^p - f_lambda^p) dxi`
/// where `f_pair = (f, f_lambda)`.
pub fn apply_operator_halfspace(
    kp: &KernelParams,
    f_pair: (&CylFunc, &CylFunc),
    hs: HalfSpace,
    zeta: &HPoint,
    cfg: &QuadConfig,
) -> Result<f64> {
    apply_operator_halfspace_estimate(kp, f_pair, hs, zeta, cfg).map(|e| e.value)
}

pub fn apply_operator_halfspace_estimate(
    kp: &KernelParams,
    f_pair: (&CylFunc, &CylFunc),
    hs: HalfSpace,
    zeta: &HPoint,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    check_setup(kp, cfg)?;
    let (f, fl) = f_pair;
    let lambda = hs.lambda;
    let c = Center::of(zeta)?;
    if c.t < lambda {
        return Err(Error::InvalidParameter(format!("point t = {} lies below the plane t = {lambda}", c.t)));
    }
    if c.t == lambda {
        return Ok(Estimate { value: 0.0, tail_bound: 0.0 });
    }
    let cl = Center { r: c.r, t: 2.0 * lambda - c.t };
    let p = kp.p();
    let gap = kp.gap();
    let big_r = cfg.r_trunc;
    if lambda >= big_r * big_r {
        return Err(Error::InvalidParameter("plane lies beyond the truncation box".into()));
    }
    // window inside the half-space: delta^2 + 2 r delta <= t - lambda
    let reach = -c.r + (c.r * c.r + (c.t - lambda)).sqrt();
    let delta = cfg.delta.min(0.999 * reach);
    let g = |r: f64, t: f64| -> Result<f64> {
        let a = f.try_eval(r, t)?;
        let b = fl.try_eval(r, t)?;
        if a < 0.0 || b < 0.0 {
            return Err(Error::InvalidParameter("negative integrand in half-space operator".into()));
        }
        Ok(a.powf(p) - b.powf(p))
    };
    let near = near_window(kp, c, delta, cfg, |x, y, t, rho| {
        let gv = g((x * x + y * y).sqrt(), t)?;
        if gv == 0.0 {
            return Ok(0.0);
        }
        // G(zeta_lambda, xi) relative to the window kernel rho^{-(Q-alpha)}
        let ratio = (rho.powi(4) / dist4(cl, x, y, t)).powf(gap / 4.0);
        Ok(gv * (1.0 - ratio))
    })?;

    let gl = gauss_legendre(cfg.nodes_outer)?;
    let wt = c.t.max(lambda) - lambda;
    let half_t = delta * delta + 2.0 * c.r * delta;
    let r_anchor: Vec<f64> = (-4..=4).map(|k| c.r + 0.25 * delta * k as f64).collect();
    let t_anchor: Vec<f64> = (-4..=4).map(|k| c.t + 0.25 * half_t * k as f64).collect();
    let r_breaks = merge_breaks(&[
        graded_breaks(0.0, big_r, &[0.0], 0.25, &r_anchor),
        graded_breaks(0.0, big_r, &[c.r], 0.25 * delta, &[]),
    ]);
    let t_hi = big_r * big_r;
    let mut t_sets = vec![
        graded_breaks(lambda, t_hi, &[lambda], (0.25 * wt).min(0.25), &t_anchor),
        graded_breaks(lambda, t_hi, &[c.t], 0.25 * delta * delta, &[]),
    ];
    if lambda < 0.0 {
        t_sets.push(graded_breaks(lambda, t_hi, &[0.0], 0.25, &[]));
    }
    let t_breaks = merge_breaks(&t_sets);
    let r_nodes = composite(&gl, &r_breaks);
    let t_nodes = composite(&gl, &t_breaks);
    let rule = cfg.angular_rule();
    let e = -gap / 4.0;
    let parts: Result<Vec<(f64, f64)>> = r_nodes
        .par_iter()
        .map(|&(r, wr)| {
            let mut acc = Vec::with_capacity(t_nodes.len());
            let mut mag = Vec::with_capacity(t_nodes.len());
            for &(t, wtn) in &t_nodes {
                let gv = g(r, t)?;
                if gv == 0.0 {
                    continue;
                }
                // both kernels carry the far-field weight (1 - chi) of the window at zeta
                let pair = |d4: f64, d4l: f64| {
                    let w = 1.0 - window(d4.sqrt().sqrt() / delta);
                    if w == 0.0 {
                        [0.0, 0.0]
                    } else {
                        [w * d4.powf(e), w * d4l.powf(e)]
                    }
                };
                let [k1, k2] = if c.r == 0.0 || r == 0.0 {
                    let a = (r * r + c.r * c.r).powi(2);
                    let [a1, a2] = pair(a + (t - c.t).powi(2), a + (t - cl.t).powi(2));
                    [2.0 * PI * a1, 2.0 * PI * a2]
                } else {
                    ring_integral(
                        |psi| {
                            let (s, co) = psi.sin_cos();
                            let (x, y) = (r * co, r * s);
                            pair(dist4(c, x, y, t), dist4(cl, x, y, t))
                        },
                        &rule,
                    )?
                };
                acc.push(wtn * gv * (k1 - k2));
                mag.push(wtn * gv.abs() * (k1 + k2));
            }
            Ok((wr * r * pairwise_sum(&acc), wr * r * pairwise_sum(&mag)))
        })
        .collect();
    let parts = parts?;
    let far: f64 = pairwise_sum(&parts.iter().map(|v| v.0).collect::<Vec<_>>());
    let far_mag: f64 = pairwise_sum(&parts.iter().map(|v| v.1).collect::<Vec<_>>());
    let value = near + far;
    if !value.is_finite() {
        return Err(Error::NonFinite("half-space integral".into()));
    }
    if far_mag == 0.0 && near == 0.0 {
        // integrand vanished on every node: symmetric data
        return Ok(Estimate { value: 0.0, tail_bound: 0.0 });
    }
    let cn = c.norm().max(cl.norm());
    let tail = 2.0 * (tail_bound(kp, f, p, cn, big_r)? + tail_bound(kp, fl, p, cn, big_r)?);
    let budget = 0.5 * cfg.tol * value.abs().max(far_mag * 1e-3);
    if tail > budget {
        return Err(Error::TailTooLarge { bound: tail, budget, r_trunc: big_r });
    }
    Ok(Estimate { value, tail_bound: tail })
}

/// `(int f^p dxi)^{1/p}` for non-negative `f`.
pub fn lp_norm(f: &CylFunc, p_exp: f64, cfg: &QuadConfig) -> Result<f64> {
    lp_norm_estimate(f, p_exp, cfg).map(|e| e.value)
}

pub fn lp_norm_estimate(f: &CylFunc, p_exp: f64, cfg: &QuadConfig) -> Result<Estimate> {
    cfg.validate()?;
    if !(p_exp >= 1.0) {
        return Err(Error::InvalidParameter(format!("norm exponent {p_exp} < 1")));
    }
    let big_r = cfg.r_trunc;
    let (r_max, tail) = match f.support() {
        Some(s) if s <= big_r => (s, 0.0),
        _ => {
            let d = f.decay();
            let pd = p_exp * d.exponent;
            if pd <= 4.0 {
                return Err(Error::NonConvergent(format!("{}: p * decay = {pd} <= Q", f.label())));
            }
            if big_r < d.radius {
                return Err(Error::InvalidParameter("truncation radius below decay radius".into()));
            }
            (big_r, d.constant.powf(p_exp) * SPHERE_MEASURE * big_r.powf(4.0 - pd) / (pd - 4.0))
        }
    };
    if r_max == 0.0 {
        return Ok(Estimate { value: 0.0, tail_bound: 0.0 });
    }
    let breaks = graded_breaks(0.0, r_max, &[0.0], 0.25, &[]);
    let integral = polar_grid_sum(f, p_exp, &breaks, cfg, |_, _| Ok(2.0 * PI))?;
    check_tail(tail, integral, cfg, big_r)?;
    Ok(Estimate { value: integral.powf(1.0 / p_exp), tail_bound: tail })
}

/// Measure of the gauge ball `B(0, radius)` from the polar parametrisation.
pub fn gauge_ball_volume(radius: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius {radius}")));
    }
    let one = CylFunc::new("indicator", Decay { exponent: 0.0, constant: 1.0, radius }, |_, _| 1.0).with_support(radius);
    polar_grid_sum(&one, 1.0, &[0.0, radius], cfg, |_, _| Ok(2.0 * PI))
}
