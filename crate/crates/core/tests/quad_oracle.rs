mod common;

use hverify::quad::{apply_operator, lp_norm, CylFunc, Decay, QuadConfig};
use hverify::{HPoint, KernelParams};

fn bump(radius: f64) -> CylFunc {
    CylFunc::new("bump", Decay::new(0.0, 1.0, radius).unwrap(), move |r, t| {
        let rho = (r.powi(4) + t * t).sqrt().sqrt();
        hverify::rules::window(rho / radius) * (1.0 + 0.5 * r * r - 0.3 * t)
    })
    .with_sup(2.0)
    .with_support(radius)
}

#[test]
fn operator_matches_oracle_on_compact_support() {
    let f = bump(1.5);
    let g = f.clone();
    let cfg = QuadConfig::default();
    for (alpha, p) in [(2.0, 3.0), (1.0, 5.0 / 3.0), (1.5, 2.0)] {
        let kp = KernelParams::new(1, alpha, p).unwrap();
        for (cr, ct) in [(0.0, 0.0), (0.4, 0.3), (1.1, -0.8)] {
            let got = apply_operator(&kp, &f, &HPoint::h1(cr, 0.0, ct).unwrap(), &cfg).unwrap();
            let want = common::operator_reference(alpha, p, &|r, t| g.eval(r, t), cr, ct, 1e-8);
            let rel = (got - want).abs() / want.abs();
            assert!(rel < 1e-4, "alpha {alpha} p {p} at ({cr}, {ct}): {got} vs {want}, rel {rel:.2e}");
        }
    }
}

#[test]
fn refinement_moves_values_by_less_than_tolerance() {
    let kp = KernelParams::critical(1, 2.0).unwrap();
    let c0 = (2.0 * std::f64::consts::PI).powf(-0.5);
    let u = CylFunc::new("u0", Decay::new(2.0, c0, 1.0).unwrap(), move |r, t| {
        c0 * ((1.0 + r * r).powi(2) + t * t).powf(-0.5)
    })
    .with_sup(c0);
    let cfg = QuadConfig::default();
    let z = HPoint::h1(0.5, 0.0, 0.3).unwrap();
    let a = apply_operator(&kp, &u, &z, &cfg).unwrap();
    let b = apply_operator(&kp, &u, &z, &cfg.refined()).unwrap();
    assert!((a - b).abs() / b < cfg.tol, "{a} vs {b}");
    assert!((b / u.at(&z).unwrap() - 1.0).abs() < cfg.tol);
}

#[test]
fn lp_norm_matches_oracle() {
    let f = bump(1.5);
    let cfg = QuadConfig::default();
    // int f^p as the operator with alpha = Q at the origin has kernel 1
    let want = common::operator_reference(4.0, 2.0, &|r, t| f.eval(r, t), 0.0, 0.0, 1e-9);
    let got = lp_norm(&f, 2.0, &cfg).unwrap().powi(2);
    assert!((got - want).abs() / want < 1e-6, "{got} vs {want}");
}
