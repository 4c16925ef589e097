//! Closed-form identities: group algebra, the inversion identity for the
//! gauge norm, kernel invariances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{fmt_point, relative_residual, ReportBuilder, Sample, VerifyReport, Worst};
use crate::error::Result;
use crate::hgroup::{
    cr_invert_point, dilate, distance, gauge_norm, h_reflect, inverse, multiply, rotate, GroupContext, HPoint,
};
use crate::kernel::{green_kernel, kernel_scaling, KernelParams};
use crate::solutions::{cr_invert_function, solution_profile};

/// Random point with log-uniform gauge radius in `[lo, hi]`.
pub(crate) fn random_point(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> HPoint {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let t: f64 = rng.sample(StandardNormal);
        let p = HPoint::new(x, y, t).expect("finite normals");
        let norm = gauge_norm(&p);
        if norm > 1e-8 {
            let target = (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp();
            return dilate(target / norm, &p);
        }
    }
}

/// Coordinate deviation in homogeneous units: `|dz| / scale` and `|dt| / scale^2`.
fn point_residual(a: &HPoint, b: &HPoint, scale: f64) -> f64 {
    let dz = a.x().iter().zip(b.x()).chain(a.y().iter().zip(b.y())).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    (dz / scale).max((a.t() - b.t()).abs() / (scale * scale))
}

fn random_angles(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| std::f64::consts::TAU * rng.random::<f64>()).collect()
}

/// Associativity, identity, inverse, norm homogeneity and invariance of
/// the distance under translation and rotation, over random cases with
/// gauge radii in `[0.1, 10]`.
pub fn check_group_algebra(n: usize, count: usize, seed: u64) -> Result<VerifyReport> {
    let ctx = GroupContext::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = ReportBuilder::new("group_algebra", 1e-11)
        .param("n", n)
        .param("count", count)
        .param("seed", seed)
        .param("radii", "log-uniform [0.1, 10]");
    let mut assoc = Worst::new("associativity");
    let mut ident = Worst::new("identity");
    let mut inv = Worst::new("inverse");
    let mut homog = Worst::new("norm homogeneity");
    let mut left = Worst::new("left-invariant distance");
    let mut rot = Worst::new("rotation-invariant distance");
    let e = ctx.origin();
    for _ in 0..count {
        let a = random_point(&mut rng, n, 0.1, 10.0);
        let bb = random_point(&mut rng, n, 0.1, 10.0);
        let c = random_point(&mut rng, n, 0.1, 10.0);
        let g = random_point(&mut rng, n, 0.1, 10.0);
        let s = 3.0 * (2.0 * rng.random::<f64>() - 1.0);
        let theta = random_angles(&mut rng, n);

        let l = multiply(&a, &multiply(&bb, &c)?)?;
        let r = multiply(&multiply(&a, &bb)?, &c)?;
        let scale = gauge_norm(&a) + gauge_norm(&bb) + gauge_norm(&c);
        assoc.add(|| fmt_point(&a), gauge_norm(&l), gauge_norm(&r), point_residual(&l, &r, scale));

        let na = gauge_norm(&a);
        let res = point_residual(&multiply(&e, &a)?, &a, na).max(point_residual(&multiply(&a, &e)?, &a, na));
        ident.add(|| fmt_point(&a), na, na, res);

        let ai = inverse(&a);
        let res = point_residual(&multiply(&a, &ai)?, &e, na).max(point_residual(&multiply(&ai, &a)?, &e, na));
        inv.add(|| fmt_point(&a), 0.0, 0.0, res);

        let (l, r) = (gauge_norm(&dilate(s, &a)), s.abs() * na);
        homog.add(|| format!("s = {s:.6e}, {}", fmt_point(&a)), l, r, relative_residual(l, r));

        let d = distance(&a, &bb)?;
        let dg = distance(&multiply(&g, &a)?, &multiply(&g, &bb)?)?;
        left.add(|| format!("{} -> {}", fmt_point(&a), fmt_point(&bb)), dg, d, relative_residual(dg, d));
        let dr = distance(&rotate(&theta, &a)?, &rotate(&theta, &bb)?)?;
        rot.add(|| format!("{} -> {}", fmt_point(&a), fmt_point(&bb)), dr, d, relative_residual(dr, d));
    }
    for w in [assoc, ident, inv, homog, left, rot] {
        b.push(w.sample());
    }
    b.finish()
}

/// `|xi| |xi_hat^{-1} (-eta)|` and `|eta| |eta_hat^{-1} xi|`.
pub fn heisenberg_identity_sides(xi: &HPoint, eta: &HPoint) -> Result<(f64, f64)> {
    let lhs = gauge_norm(xi) * gauge_norm(&multiply(&inverse(&cr_invert_point(xi)?), &dilate(-1.0, eta))?);
    let rhs = gauge_norm(eta) * gauge_norm(&multiply(&inverse(&cr_invert_point(eta)?), xi)?);
    Ok((lhs, rhs))
}

/// The inversion identity of the gauge norm over random pairs with gauge
/// radii log-uniform in `[1e-2, 1e2]`, plus two exact cases.
pub fn check_heisenberg_identity(n: usize, sample_count: usize, seed: u64) -> Result<VerifyReport> {
    GroupContext::new(n)?;
    let mut b = ReportBuilder::new("heisenberg_identity", 1e-11)
        .param("n", n)
        .param("count", sample_count)
        .param("seed", seed)
        .param("radii", "log-uniform [0.01, 100]");

    // on the t-axis both sides are (1 + s)^{1/2}
    let s = 3.0;
    let xi = HPoint::on_axis(n, 1.0);
    let eta = HPoint::on_axis(n, s);
    let (l, r) = heisenberg_identity_sides(&xi, &eta)?;
    let exact = (1.0f64 + s).sqrt();
    b.push(Sample::new("t-axis pair (0,1), (0,3)", l, exact, relative_residual(l, exact).max(relative_residual(r, exact))));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_point(&mut rng, n, 1.0, 1.0);
    let (l, r) = heisenberg_identity_sides(&p, &p)?;
    b.push(Sample::new(format!("xi = eta on unit sphere {}", fmt_point(&p)), l, r, relative_residual(l, r)));

    let mut w = Worst::new("random pairs");
    for _ in 0..sample_count {
        let xi = random_point(&mut rng, n, 1e-2, 1e2);
        let eta = random_point(&mut rng, n, 1e-2, 1e2);
        let (l, r) = heisenberg_identity_sides(&xi, &eta)?;
        w.add(|| format!("{} / {}", fmt_point(&xi), fmt_point(&eta)), l, r, relative_residual(l, r));
    }
    b.push(w.sample());
    b.finish()
}

/// Point inversion (`|xi_hat| = 1 / |xi|`, double inversion is `(-z, t)`)
/// for `n` in 1..=3 and the closed-form `u0 = u0_bar` grid identity.
pub fn check_cr_inversion(kp: &KernelParams, count: usize, seed: u64) -> Result<VerifyReport> {
    let mut b = ReportBuilder::new("cr_inversion", 1e-12)
        .param("alpha", kp.alpha())
        .param("count", count)
        .param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 1..=3 {
        let mut norm = Worst::new(format!("n = {n}: |xi_hat| |xi|"));
        let mut double = Worst::new(format!("n = {n}: double inversion"));
        for _ in 0..count {
            let xi = random_point(&mut rng, n, 1e-2, 1e2);
            let xh = cr_invert_point(&xi)?;
            let v = gauge_norm(&xh) * gauge_norm(&xi);
            norm.add(|| fmt_point(&xi), v, 1.0, relative_residual(v, 1.0));
            let back = cr_invert_point(&xh)?;
            let target = dilate(-1.0, &xi);
            let ng = gauge_norm(&xi);
            double.add(|| fmt_point(&xi), gauge_norm(&back), ng, point_residual(&back, &target, ng));
        }
        b.push(norm.sample());
        b.push(double.sample());
    }
    if kp.n() == 1 {
        let u = solution_profile(kp);
        let ub = cr_invert_function(&u, kp)?;
        let mut w = Worst::new("u0 vs u0_bar grid");
        for (r, t) in inversion_grid() {
            let (l, rr) = (u.eval(r, t), ub.eval(r, t));
            w.add(|| format!("(r = {r:.4e}, t = {t:.4e})"), l, rr, relative_residual(l, rr));
        }
        b.push(w.sample());
    }
    b.finish()
}

/// `(r, t)` grid spanning gauge radii from `1e-2` to `1e2`, excluding the origin.
pub fn inversion_grid() -> Vec<(f64, f64)> {
    let mut g = Vec::new();
    for i in 0..=16 {
        let rho = 10f64.powf(-2.0 + 4.0 * i as f64 / 16.0);
        for j in 0..=12 {
            let phi = std::f64::consts::PI * j as f64 / 12.0;
            g.push((rho * phi.sin().max(0.0).sqrt(), rho * rho * phi.cos()));
        }
    }
    g
}

/// Left translation, dilation, rotation and reflection invariance of the
/// kernel, radii in `[0.1, 10]`.
pub fn check_kernel_invariance(kp: &KernelParams, count: usize, seed: u64) -> Result<VerifyReport> {
    let n = kp.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = ReportBuilder::new("kernel_invariance", 1e-12)
        .param("n", n)
        .param("alpha", kp.alpha())
        .param("count", count)
        .param("seed", seed);
    let mut tr = Worst::new("translation");
    let mut dil = Worst::new("dilation");
    let mut rot = Worst::new("rotation");
    let mut refl = Worst::new("reflection");
    for _ in 0..count {
        let z = random_point(&mut rng, n, 0.1, 10.0);
        let x = random_point(&mut rng, n, 0.1, 10.0);
        let g = random_point(&mut rng, n, 0.1, 10.0);
        let s = (10f64.ln() * (2.0 * rng.random::<f64>() - 1.0)).exp();
        let theta = random_angles(&mut rng, n);
        let lambda = 2.0 * rng.random::<f64>() - 1.0;
        let base = green_kernel(kp, &z, &x)?;
        let desc = || format!("{} / {}", fmt_point(&z), fmt_point(&x));

        let v = green_kernel(kp, &multiply(&g, &z)?, &multiply(&g, &x)?)?;
        tr.add(desc, v, base, relative_residual(v, base));
        let (l, r) = kernel_scaling(kp, s, &z, &x)?;
        dil.add(desc, l, r, relative_residual(l, r));
        let v = green_kernel(kp, &rotate(&theta, &z)?, &rotate(&theta, &x)?)?;
        rot.add(desc, v, base, relative_residual(v, base));
        let v = green_kernel(kp, &h_reflect(lambda, &theta, &z)?, &h_reflect(lambda, &theta, &x)?)?;
        refl.add(desc, v, base, relative_residual(v, base));
    }
    for w in [tr, dil, rot, refl] {
        b.push(w.sample());
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_suite_passes() {
        for n in 1..=3 {
            let r = check_group_algebra(n, 2000, 11).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.samples.len(), 6);
        }
    }

    #[test]
    fn identity_suite_passes() {
        for n in 1..=3 {
            let r = check_heisenberg_identity(n, 2000, 5).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.samples[0].residual < 1e-15);
        }
    }

    #[test]
    fn inversion_and_kernel_suites_pass() {
        let kp = KernelParams::critical(1, 2.0).unwrap();
        let r = check_cr_inversion(&kp, 2000, 3).unwrap();
        assert!(r.passed, "{r:?}");
        for n in 1..=2 {
            let kp = KernelParams::critical(n, 1.0).unwrap();
            let r = check_kernel_invariance(&kp, 2000, 9).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = check_heisenberg_identity(2, 500, 1).unwrap();
        let b = check_heisenberg_identity(2, 500, 1).unwrap();
        assert_eq!(a.body_json(), b.body_json());
        let c = check_heisenberg_identity(2, 500, 2).unwrap();
        assert_ne!(a.body_json(), c.body_json());
    }

    #[test]
    fn random_points_respect_radius_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let p = random_point(&mut rng, 2, 0.1, 10.0);
            let r = gauge_norm(&p);
            assert!((0.1 - 1e-12..=10.0 + 1e-12).contains(&r));
        }
    }
}
