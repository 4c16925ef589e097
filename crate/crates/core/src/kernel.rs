//! The Riesz-type kernel, its angular reduction for cylindrical data, and
//! closed-form constants.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::hgroup::{dilate, distance, HPoint};
use crate::rules::periodic_trapezoid;

/// Parameters of the integral equation `u = int G_alpha(., xi) u(xi)^p dxi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    n: usize,
    alpha: f64,
    p: f64,
}

impl KernelParams {
    pub fn new(n: usize, alpha: f64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        let q = (2 * n + 2) as f64;
        if !(alpha > 0.0 && alpha < q) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, {q})")));
        }
        let sigma = (q + alpha) / (q - alpha);
        // p = sigma typed as a decimal may overshoot by an ulp or two
        if !(p > 1.0 && p <= sigma * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter(format!("p = {p} outside (1, {sigma}]")));
        }
        Ok(Self { n, alpha, p: p.min(sigma) })
    }

    /// The critical case `p = sigma`.
    pub fn critical(n: usize, alpha: f64) -> Result<Self> {
        let q = (2 * n + 2) as f64;
        Self::new(n, alpha, (q + alpha) / (q - alpha))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> f64 {
        (2 * self.n + 2) as f64
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sigma(&self) -> f64 {
        (self.q() + self.alpha) / (self.q() - self.alpha)
    }

    /// `Q - alpha`, the homogeneity degree of the kernel.
    pub fn gap(&self) -> f64 {
        self.q() - self.alpha
    }

    pub fn is_critical(&self) -> bool {
        (self.p - self.sigma()).abs() <= 1e-12 * self.sigma()
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.n, self.alpha, p)
    }
}

/// Parameters of the sharp Hardy-Littlewood-Sobolev inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HLSParams {
    n: usize,
    lambda: f64,
}

impl HLSParams {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        let q = (2 * n + 2) as f64;
        if !(lambda > 0.0 && lambda < q) {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} outside (0, {q})")));
        }
        Ok(Self { n, lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> f64 {
        (2 * self.n + 2) as f64
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p_hls(&self) -> f64 {
        2.0 * self.q() / (2.0 * self.q() - self.lambda)
    }
}

/// Controls for the adaptive angular trapezoid rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularRule {
    pub start_nodes: usize,
    pub tol: f64,
    pub max_nodes: usize,
}

impl Default for AngularRule {
    fn default() -> Self {
        Self { start_nodes: 32, tol: 1e-12, max_nodes: 1 << 16 }
    }
}

pub fn green_kernel(kp: &KernelParams, zeta: &HPoint, xi: &HPoint) -> Result<f64> {
    let d = distance(zeta, xi)?;
    if d == 0.0 {
        return Err(Error::SingularPoint("kernel evaluated on the diagonal".into()));
    }
    Ok(d.powf(-kp.gap()))
}

/// `(G(s zeta, s xi), s^{-(Q-alpha)} G(zeta, xi))`.
pub fn kernel_scaling(kp: &KernelParams, s: f64, zeta: &HPoint, xi: &HPoint) -> Result<(f64, f64)> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale s = {s} must be positive")));
    }
    let lhs = green_kernel(kp, &dilate(s, zeta), &dilate(s, xi))?;
    let rhs = s.powf(-kp.gap()) * green_kernel(kp, zeta, xi)?;
    Ok((lhs, rhs))
}

/// Squared gauge distance to the fourth power between `(rt, 0, tt)` and
/// `(r cos psi, r sin psi, t)`.
#[inline]
pub(crate) fn cyl_distance4(rt: f64, tt: f64, r: f64, t: f64, cos_psi: f64, sin_psi: f64) -> f64 {
    let a = r * r + rt * rt - 2.0 * r * rt * cos_psi;
    let b = t - tt + 2.0 * r * rt * sin_psi;
    a * a + b * b
}

/// `int_0^{2pi} G((rt,0,tt), (r e^{i psi}, t)) dpsi` for `n = 1`.
pub fn reduced_kernel_cyl(kp: &KernelParams, rt: f64, tt: f64, r: f64, t: f64, rule: &AngularRule) -> Result<f64> {
    if kp.n() != 1 {
        return Err(Error::InvalidParameter("angular reduction is implemented for n = 1".into()));
    }
    if rt < 0.0 || r < 0.0 {
        return Err(Error::InvalidParameter("radial arguments must be non-negative".into()));
    }
    if rt == r && tt == t {
        return Err(Error::SingularPoint("reduced kernel at coincident points".into()));
    }
    let e = -kp.gap() / 4.0;
    if rt == 0.0 || r == 0.0 {
        let d4 = (r * r + rt * rt).powi(2) + (t - tt).powi(2);
        return Ok(2.0 * PI * d4.powf(e));
    }
    let (v, _) = periodic_trapezoid(
        |psi| {
            let (s, c) = psi.sin_cos();
            cyl_distance4(rt, tt, r, t, c, s).powf(e)
        },
        rule.start_nodes,
        rule.tol,
        0.0,
        rule.max_nodes,
    )?;
    Ok(v)
}

/// Constant of the fundamental solution of the conformal fractional
/// sub-Laplacian of order `alpha / 2`.
pub fn frac_fundamental_constant(n: usize, alpha: f64) -> Result<f64> {
    let q = (2 * n + 2) as f64;
    if n == 0 || !(alpha > 0.0 && alpha < q) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, {q})")));
    }
    let nf = n as f64;
    let g = gamma((q - alpha) / 4.0);
    Ok(2f64.powf(nf + 1.0 - 1.5 * alpha) * g * g / (PI.powf(nf + 1.0) * gamma(alpha / 2.0)))
}

/// Sharp HLS constant.
pub fn hls_constant(n: usize, lambda: f64) -> Result<f64> {
    let hp = HLSParams::new(n, lambda)?;
    let q = hp.q();
    let nf = n as f64;
    let fact = gamma(nf + 1.0);
    let base = PI.powf(nf + 1.0) / (2f64.powf(nf - 1.0) * fact);
    let g = gamma((2.0 * q - lambda) / 4.0);
    Ok(base.powf(lambda / q) * fact * gamma((q - 2.0) / 2.0) / (g * g))
}

/// `H(z, t) = ((1 + |z|^2)^2 + t^2)^{-(2Q - lambda)/4}`.
pub fn hls_extremizer(n: usize, lambda: f64, xi: &HPoint) -> Result<f64> {
    let hp = HLSParams::new(n, lambda)?;
    if xi.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: xi.n() });
    }
    Ok(hls_extremizer_cyl(&hp, xi.r(), xi.t()))
}

pub(crate) fn hls_extremizer_cyl(hp: &HLSParams, r: f64, t: f64) -> f64 {
    let a = 1.0 + r * r;
    (a * a + t * t).powf(-(2.0 * hp.q() - hp.lambda()) / 4.0)
}
