//! The explicit solution family and function-level transforms.

use crate::error::{Error, Result};
use crate::hgroup::HPoint;
use crate::kernel::KernelParams;
use crate::quad::{apply_operator, CylFunc, Decay, QuadConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct StandardSolutionParams {
    pub c0: f64,
    pub s: f64,
    /// Translation centre; must lie on the `t`-axis so the result stays cylindrical.
    pub xi0: HPoint,
}

impl StandardSolutionParams {
    pub fn new(c0: f64, s: f64, xi0: HPoint) -> Result<Self> {
        if !(c0 > 0.0 && c0.is_finite() && s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("C0 = {c0}, s = {s} must be positive")));
        }
        Ok(Self { c0, s, xi0 })
    }

    pub fn unit(c0: f64) -> Result<Self> {
        Self::new(c0, 1.0, HPoint::origin(1))
    }
}

/// A function together with `lim |xi|^{Q-alpha} f(xi)`.
#[derive(Debug, Clone)]
pub struct FuncWithLimit {
    pub f: CylFunc,
    pub u_infinity: f64,
}

/// `h(r, t) = ((1 + r^2)^2 + t^2)^{-(Q-alpha)/4}`.
pub fn solution_profile(kp: &KernelParams) -> CylFunc {
    let e = -kp.gap() / 4.0;
    // (1+r^2)^2 + t^2 >= r^4 + t^2, so the decay bound holds on all of the group
    CylFunc::new("h", Decay { exponent: kp.gap(), constant: 1.0, radius: 1.0 }, move |r, t| {
        let a = 1.0 + r * r;
        (a * a + t * t).powf(e)
    })
    .with_sup(1.0)
}

fn check_n1(kp: &KernelParams) -> Result<()> {
    if kp.n() != 1 {
        return Err(Error::InvalidParameter("cylindrical transforms are implemented for n = 1".into()));
    }
    Ok(())
}

/// `C0 h` dilated by `s` and translated by `xi0`: `u(xi) = (u0)_s(xi0 . xi)`.
pub fn standard_solution(params: &StandardSolutionParams, kp: &KernelParams) -> Result<FuncWithLimit> {
    check_n1(kp)?;
    let base = multiply_const(params.c0, &solution_profile(kp)).with_label("u0");
    let scaled = scale_function(params.s, &base, kp)?;
    let xi0 = &params.xi0;
    if xi0.n() != 1 {
        return Err(Error::DimensionMismatch { left: 1, right: xi0.n() });
    }
    if xi0.r() != 0.0 {
        return Err(Error::InvalidParameter(
            "translation off the t-axis does not preserve cylindrical symmetry".into(),
        ));
    }
    let f = if xi0.t() == 0.0 { scaled } else { translate_function(xi0.t(), &scaled) };
    let u_infinity = params.c0 * params.s.powf(-kp.gap() / 2.0);
    Ok(FuncWithLimit { f, u_infinity })
}

/// Certified value of `C0`.
#[derive(Debug, Clone)]
pub struct C0Certificate {
    pub c0: f64,
    /// `(zeta, (h(zeta) / T[h^sigma](zeta))^{1/(sigma-1)})` per sample point.
    pub samples: Vec<(HPoint, f64)>,
    /// `max |c(zeta) - C0| / C0`.
    pub spread: f64,
    pub limit: f64,
}

pub fn c0_sample_points() -> Vec<HPoint> {
    [(0.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 0.0), (1.0, 1.0), (0.5, -2.0)]
        .iter()
        .map(|&(x, t)| HPoint::h1(x, 0.0, t).expect("finite literals"))
        .collect()
}

/// The constant making `C0 h` a fixed point, with a constancy certificate
/// over [`c0_sample_points`].
pub fn derive_c0(kp: &KernelParams, cfg: &QuadConfig) -> Result<C0Certificate> {
    check_n1(kp)?;
    if !kp.is_critical() {
        return Err(Error::InvalidParameter(format!("C0 needs p = sigma = {}, got {}", kp.sigma(), kp.p())));
    }
    let h = solution_profile(kp);
    let e = 1.0 / (kp.sigma() - 1.0);
    let mut samples = Vec::new();
    for z in c0_sample_points() {
        let th = apply_operator(kp, &h, &z, cfg)?;
        samples.push((z.clone(), (h.at(&z)? / th).powf(e)));
    }
    let c0 = samples[0].1;
    let spread = samples.iter().map(|(_, c)| (c - c0).abs() / c0).fold(0.0, f64::max);
    let limit = 2.0 * cfg.tol;
    if spread > limit {
        return Err(Error::ConstancyViolated { spread, limit });
    }
    Ok(C0Certificate { c0, samples, spread, limit })
}

pub(crate) fn multiply_const(k: f64, f: &CylFunc) -> CylFunc {
    let d = f.decay();
    let g = f.clone();
    let out = CylFunc::new(f.label().to_string(), Decay { constant: k.abs() * d.constant, ..d }, move |r, t| k * g.eval(r, t));
    let out = match f.sup() {
        Some(b) => out.with_sup(k.abs() * b),
        None => out,
    };
    match f.support() {
        Some(s) => out.with_support(s),
        None => out,
    }
}

fn with_meta(f: CylFunc, sup: Option<f64>, support: Option<f64>) -> CylFunc {
    let f = match sup {
        Some(b) => f.with_sup(b),
        None => f,
    };
    match support {
        Some(s) => f.with_support(s),
        None => f,
    }
}

/// Decay metadata of `f(eta(xi))` when `|eta(xi)| >= |xi| - shift`.
fn shifted_decay(d: Decay, shift: f64) -> Decay {
    if shift == 0.0 {
        return d;
    }
    // for |xi| >= max(2 shift, R + shift): |eta| >= max(|xi| / 2, R)
    Decay {
        exponent: d.exponent,
        constant: d.constant * 2f64.powf(d.exponent),
        radius: (2.0 * shift).max(d.radius + shift),
    }
}

/// `f_s(r, t) = s^{(Q-alpha)/2} f(s r, s^2 t)`.
pub fn scale_function(s: f64, f: &CylFunc, kp: &KernelParams) -> Result<CylFunc> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale s = {s} must be positive")));
    }
    let amp = s.powf(kp.gap() / 2.0);
    let d = f.decay();
    let decay = Decay { exponent: d.exponent, constant: amp * d.constant * s.powf(-d.exponent), radius: d.radius / s };
    let g = f.clone();
    let out = CylFunc::new(format!("{}_s", f.label()), decay, move |r, t| amp * g.eval(s * r, s * s * t));
    Ok(with_meta(out, f.sup().map(|b| amp * b), f.support().map(|r| r / s)))
}

/// `f_lambda(r, t) = f(r, 2 lambda - t)`.
pub fn reflect_function(lambda: f64, f: &CylFunc) -> CylFunc {
    let shift = (2.0 * lambda.abs()).sqrt();
    let g = f.clone();
    let out = CylFunc::new(format!("{}_lambda", f.label()), shifted_decay(f.decay(), shift), move |r, t| {
        g.eval(r, 2.0 * lambda - t)
    });
    with_meta(out, f.sup(), f.support().map(|r| r + shift))
}

/// Left translation by the axis point `(0, t0)`: `f(r, t + t0)`.
pub fn translate_function(t0: f64, f: &CylFunc) -> CylFunc {
    let shift = t0.abs().sqrt();
    let g = f.clone();
    let out = CylFunc::new(format!("{}_tau", f.label()), shifted_decay(f.decay(), shift), move |r, t| g.eval(r, t + t0));
    with_meta(out, f.sup(), f.support().map(|r| r + shift))
}

/// Pure dilation `f(a r, a^2 t)` without amplitude factor.
fn dilate_function(a: f64, f: &CylFunc) -> CylFunc {
    let d = f.decay();
    let decay = Decay { exponent: d.exponent, constant: d.constant * a.powf(-d.exponent), radius: d.radius / a };
    let g = f.clone();
    let out = CylFunc::new(f.label().to_string(), decay, move |r, t| g.eval(a * r, a * a * t));
    with_meta(out, f.sup(), f.support().map(|r| r / a))
}

/// CR inversion `|xi|^{-(Q-alpha)} f(r / rho^2, -t / rho^4)`; `NaN` at the
/// origin so that checked evaluation reports the singular point.
pub fn cr_invert_function(f: &CylFunc, kp: &KernelParams) -> Result<CylFunc> {
    check_n1(kp)?;
    let gap = kp.gap();
    let sup = f.sup().ok_or_else(|| {
        Error::InvalidParameter(format!("{}: CR inversion needs a global bound on |f|", f.label()))
    })?;
    let d = f.decay();
    // near the origin the inverted point is far out, where the decay bound applies
    let new_sup = if d.exponent >= gap {
        Some((d.constant * d.radius.powf(gap - d.exponent)).max(sup * d.radius.powf(gap)))
    } else {
        None
    };
    let g = f.clone();
    let out = CylFunc::new(format!("{}_bar", f.label()), Decay { exponent: gap, constant: sup, radius: 1.0 }, move |r, t| {
        let rho2 = (r.powi(4) + t * t).sqrt();
        if rho2 == 0.0 {
            return f64::NAN;
        }
        rho2.powf(-gap / 2.0) * g.eval(r / rho2, -t / (rho2 * rho2))
    });
    Ok(match new_sup {
        Some(b) => out.with_sup(b),
        None => out,
    })
}

/// `s^{Q-alpha} rho^{-(Q-alpha)} f(s^2 r / rho^2, -s^4 t / rho^4)`.
pub fn sphere_invert_function(s: f64, f: &CylFunc, kp: &KernelParams) -> Result<CylFunc> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("sphere radius s = {s} must be positive")));
    }
    let inverted = cr_invert_function(&dilate_function(s * s, f), kp)?;
    Ok(multiply_const(s.powf(kp.gap()), &inverted).with_label(format!("{}_bar_s", f.label())))
}

/// Scale `s` for which `scale_function(s, f)` has limit `target`.
pub fn translate_limit_params(f: &FuncWithLimit, target_uinf: f64, kp: &KernelParams) -> Result<f64> {
    if !(f.u_infinity > 0.0 && f.u_infinity.is_finite()) {
        return Err(Error::InvalidParameter(format!("u_infinity = {} must be positive", f.u_infinity)));
    }
    if !(target_uinf > 0.0 && target_uinf.is_finite()) {
        return Err(Error::InvalidParameter(format!("target {target_uinf} must be positive")));
    }
    // lim |xi|^{Q-alpha} f_s = s^{-(Q-alpha)/2} u_infinity
    Ok((f.u_infinity / target_uinf).powf(2.0 / kp.gap()))
}

/// Ray estimates of `lim |xi|^{Q-alpha} f(xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    pub t_axis: f64,
    pub r_axis: f64,
}

/// Richardson-extrapolated limit along the `t`-axis and `r`-axis rays,
/// assuming an `O(rho^{-2})` approach. Rays disagreeing by more than 1% are
/// rejected.
pub fn estimate_u_infinity(f: &CylFunc, kp: &KernelParams) -> Result<LimitEstimate> {
    let gap = kp.gap();
    let (r1, r2) = (1.0e3, 2.0e3);
    let ray = |r: f64, on_t: bool| -> Result<f64> {
        let v = if on_t { f.try_eval(0.0, r * r)? } else { f.try_eval(r, 0.0)? };
        Ok(r.powf(gap) * v)
    };
    let rich = |on_t: bool| -> Result<f64> { Ok((4.0 * ray(r2, on_t)? - ray(r1, on_t)?) / 3.0) };
    let (t_axis, r_axis) = (rich(true)?, rich(false)?);
    let value = 0.5 * (t_axis + r_axis);
    if (t_axis - r_axis).abs() > 0.01 * value.abs().max(1e-300) {
        return Err(Error::InvalidParameter(format!(
            "{}: ray limits disagree ({t_axis:.6e} vs {r_axis:.6e}); input not cylindrical or not decaying at rate Q - alpha",
            f.label()
        )));
    }
    Ok(LimitEstimate { value, t_axis, r_axis })
}
