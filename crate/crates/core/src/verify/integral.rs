//! Checks that go through the quadrature engine.

use super::{fmt_point, relative_residual, ReportBuilder, Sample, VerifyReport, Worst, RESIDUAL_FLOOR};
use crate::error::{Error, Result};
use crate::hgroup::{cr_invert_point, dilate, gauge_norm, HPoint};
use crate::kernel::KernelParams;
use crate::quad::{apply_operator, apply_operator_ball, apply_operator_halfspace, CylFunc, HalfSpace, QuadConfig};
use crate::solutions::{reflect_function, sphere_invert_function, FuncWithLimit};

pub(crate) fn with_kernel(b: ReportBuilder, kp: &KernelParams) -> ReportBuilder {
    b.param("n", kp.n()).param("alpha", kp.alpha()).param("p", kp.p()).param("sigma", kp.sigma())
}

pub(crate) fn with_quad(b: ReportBuilder, cfg: &QuadConfig) -> ReportBuilder {
    b.param("quad.delta", cfg.delta)
        .param("quad.r_trunc", cfg.r_trunc)
        .param("quad.nodes_rho", cfg.nodes_rho)
        .param("quad.nodes_angle", cfg.nodes_angle)
        .param("quad.nodes_outer", cfg.nodes_outer)
        .param("quad.tol", cfg.tol)
}

/// `|u(zeta) - T[u^p](zeta)| / u(zeta)` per point.
pub fn check_fixed_point(kp: &KernelParams, u: &FuncWithLimit, points: &[HPoint], cfg: &QuadConfig) -> Result<VerifyReport> {
    let mut b = with_quad(with_kernel(ReportBuilder::new("fixed_point", cfg.tol), kp), cfg)
        .param("function", u.f.label())
        .param("u_infinity", u.u_infinity);
    for z in points {
        let lhs = u.f.at(z)?;
        let rhs = apply_operator(kp, &u.f, z, cfg)?;
        let res = if lhs == 0.0 && rhs == 0.0 { 0.0 } else { (lhs - rhs).abs() / lhs.abs() };
        b.push(Sample::new(fmt_point(z), lhs, rhs, res));
    }
    b.finish()
}

/// `u(zeta) - u_lambda(zeta)` against the half-space integral, normalised
/// by `|u(zeta)| + |u_lambda(zeta)|`.
pub fn check_reflection_difference(
    kp: &KernelParams,
    u: &FuncWithLimit,
    lambda: f64,
    points: &[HPoint],
    cfg: &QuadConfig,
) -> Result<VerifyReport> {
    let mut b = with_quad(with_kernel(ReportBuilder::new("reflection_difference", cfg.tol), kp), cfg)
        .param("function", u.f.label())
        .param("lambda", lambda);
    let ul = reflect_function(lambda, &u.f);
    for z in points {
        if z.t() < lambda {
            return Err(Error::InvalidParameter(format!("{} lies below the plane t = {lambda}", fmt_point(z))));
        }
        let (a, c) = (u.f.at(z)?, ul.at(z)?);
        let lhs = a - c;
        let rhs = apply_operator_halfspace(kp, (&u.f, &ul), HalfSpace { lambda }, z, cfg)?;
        let res = (lhs - rhs).abs() / (a.abs() + c.abs()).max(RESIDUAL_FLOOR);
        b.push(Sample::new(fmt_point(z), lhs, rhs, res));
    }
    b.finish()
}

/// Ball part plus mapped exterior part for `T[f^p](zeta)`, with `f_bar`
/// the sphere inversion of `f` at radius `s_ball`.
pub fn split_sides(kp: &KernelParams, f: &CylFunc, f_bar: &CylFunc, s_ball: f64, zeta: &HPoint, cfg: &QuadConfig) -> Result<f64> {
    let norm = gauge_norm(zeta);
    if norm == 0.0 {
        return Err(Error::SingularPoint("split identity needs zeta != 0".into()));
    }
    let inner = apply_operator_ball(kp, f, s_ball, zeta, cfg)?;
    let c2 = dilate(-s_ball * s_ball, &cr_invert_point(zeta)?);
    let weight = (s_ball / norm).powf(kp.gap());
    let outer = apply_operator_ball(kp, f_bar, s_ball, &c2, cfg)?;
    Ok(inner + weight * outer)
}

/// `u(zeta)` against the split at `|xi| = s_ball`, and the same with the
/// roles of `u` and its sphere inversion exchanged.
pub fn check_split_identity(
    kp: &KernelParams,
    u: &FuncWithLimit,
    s_ball: f64,
    points: &[HPoint],
    cfg: &QuadConfig,
) -> Result<VerifyReport> {
    if !kp.is_critical() {
        return Err(Error::InvalidParameter("split identity needs p = sigma".into()));
    }
    let mut b = with_quad(with_kernel(ReportBuilder::new("split_identity", cfg.tol), kp), cfg)
        .param("function", u.f.label())
        .param("s_ball", s_ball);
    let ub = sphere_invert_function(s_ball, &u.f, kp)?;
    for z in points {
        let lhs = u.f.at(z)?;
        let rhs = split_sides(kp, &u.f, &ub, s_ball, z, cfg)?;
        b.push(Sample::new(format!("u at {}", fmt_point(z)), lhs, rhs, relative_residual(lhs, rhs)));
        let lhs = ub.at(z)?;
        let rhs = split_sides(kp, &ub, &u.f, s_ball, z, cfg)?;
        b.push(Sample::new(format!("u_bar at {}", fmt_point(z)), lhs, rhs, relative_residual(lhs, rhs)));
    }
    b.finish()
}

/// `u(s r, s^2 t)` against `rho^{-(Q-alpha)} u(s r / rho^2, s^2 t / rho^4)`
/// with `s^{Q-alpha} = u_infinity / u(0)`.
pub fn check_inversion_symmetry(kp: &KernelParams, u: &FuncWithLimit, grid: &[(f64, f64)]) -> Result<VerifyReport> {
    let u0 = u.f.try_eval(0.0, 0.0)?;
    if !(u0 > 0.0) {
        return Err(Error::InvalidParameter(format!("{}: u(0) = {u0} must be positive", u.f.label())));
    }
    if !(u.u_infinity > 0.0) {
        return Err(Error::InvalidParameter(format!("u_infinity = {} must be positive", u.u_infinity)));
    }
    let gap = kp.gap();
    let s = (u.u_infinity / u0).powf(1.0 / gap);
    let mut b = with_kernel(ReportBuilder::new("inversion_symmetry", 1e-9), kp)
        .param("function", u.f.label())
        .param("s", s)
        .param("grid_points", grid.len());
    let mut w = Worst::new("grid");
    for &(r, t) in grid {
        let rho2 = (r.powi(4) + t * t).sqrt();
        if rho2 == 0.0 {
            continue;
        }
        let lhs = u.f.try_eval(s * r, s * s * t)?;
        let rhs = rho2.powf(-gap / 2.0) * u.f.try_eval(s * r / rho2, s * s * t / (rho2 * rho2))?;
        w.add(|| format!("(r = {r:.4e}, t = {t:.4e})"), lhs, rhs, relative_residual(lhs, rhs));
    }
    b.push(w.sample());
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Decay;
    use crate::solutions::{scale_function, standard_solution, translate_function, StandardSolutionParams};
    use crate::verify::inversion_grid;

    fn pt(x: f64, t: f64) -> HPoint {
        HPoint::h1(x, 0.0, t).unwrap()
    }

    fn u0(kp: &KernelParams) -> FuncWithLimit {
        let c0 = (2.0 * std::f64::consts::PI).powf(-0.5);
        standard_solution(&StandardSolutionParams::unit(c0).unwrap(), kp).unwrap()
    }

    #[test]
    fn fixed_point_at_alpha_two() {
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let r = check_fixed_point(&kp, &u0(&kp), &[pt(0.0, 0.0), pt(1.0, 1.0)], &QuadConfig::default()).unwrap();
        assert!(r.passed, "{r:?}");
        let zero = FuncWithLimit { f: CylFunc::zero(), u_infinity: 0.0 };
        let r = check_fixed_point(&kp, &zero, &[pt(0.5, 0.5)], &QuadConfig::default()).unwrap();
        assert!(r.passed && r.max_residual == 0.0);
    }

    #[test]
    fn subcritical_residual_is_large() {
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let u = u0(&kp);
        let sub = kp.with_p(2.0).unwrap();
        let cfg = QuadConfig::default();
        let r = check_fixed_point(&sub, &u, &[pt(0.0, 0.0)], &cfg).unwrap();
        assert!(!r.passed);
        assert!(r.max_residual > 10.0 * cfg.tol);
    }

    #[test]
    fn reflection_symmetric_case_is_exact() {
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let r = check_reflection_difference(&kp, &u0(&kp), 0.0, &[pt(0.3, 0.5)], &QuadConfig::default()).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert!(check_reflection_difference(&kp, &u0(&kp), 1.0, &[pt(0.3, 0.5)], &QuadConfig::default()).is_err());
    }

    #[test]
    fn reflection_difference_off_plane() {
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let r = check_reflection_difference(&kp, &u0(&kp), -1.0, &[pt(0.0, 0.0)], &QuadConfig::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn split_identity_for_standard_solution() {
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let r = check_split_identity(&kp, &u0(&kp), 2.0, &[pt(0.0, 1.0)], &QuadConfig::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.samples.len(), 2);
        assert!(check_split_identity(&kp, &u0(&kp), 1.0, &[pt(0.0, 0.0)], &QuadConfig::default()).is_err());
    }

    #[test]
    fn split_identity_for_function_odd_in_t() {
        // the split holds for any f at p = sigma; a t-shifted profile
        // distinguishes the sign conventions of the mapped centre
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let cfg = QuadConfig::default();
        let h = crate::solutions::solution_profile(&kp);
        let f = translate_function(0.7, &h);
        let fb = sphere_invert_function(1.5, &f, &kp).unwrap();
        for z in [pt(0.3, 0.8), pt(1.2, -1.5)] {
            let full = apply_operator(&kp, &f, &z, &cfg).unwrap();
            let split = split_sides(&kp, &f, &fb, 1.5, &z, &cfg).unwrap();
            assert!(relative_residual(full, split) < 1e-4, "{full} vs {split}");
        }
    }

    #[test]
    fn inversion_symmetry_closed_form() {
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let grid = inversion_grid();
        let r = check_inversion_symmetry(&kp, &u0(&kp), &grid).unwrap();
        assert!(r.passed && r.max_residual <= 1e-12, "{r:?}");
        assert_eq!(r.params["s"], 1.0);
        for s in [0.5, 2.0] {
            let p = StandardSolutionParams::new(0.4, s, HPoint::origin(1)).unwrap();
            let u = standard_solution(&p, &kp).unwrap();
            let r = check_inversion_symmetry(&kp, &u, &grid).unwrap();
            assert!(r.passed, "{r:?}");
            assert!((r.params["s"].as_f64().unwrap() * s - 1.0).abs() < 1e-12);
        }
        let bad = FuncWithLimit { f: scale_function(2.0, &CylFunc::zero(), &kp).unwrap(), u_infinity: 1.0 };
        assert!(check_inversion_symmetry(&kp, &bad, &grid).is_err());
        // a non-member of the family fails
        let g = CylFunc::new("g", Decay::new(2.0, 1.0, 1.0).unwrap(), |r, t| 1.0 / (1.0 + r * r + t.abs()));
        let r = check_inversion_symmetry(&kp, &FuncWithLimit { f: g, u_infinity: 1.0 }, &grid).unwrap();
        assert!(!r.passed);
    }
}
