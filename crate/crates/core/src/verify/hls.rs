//! Sharp HLS inequality: extremizers reach the constant, other inputs fall
//! below it.

use super::{ReportBuilder, Sample, VerifyReport};
use crate::error::{Error, Result};
use crate::kernel::{hls_constant, hls_extremizer_cyl, HLSParams};
use crate::quad::{hls_double_integral, lp_norm, CylFunc, Decay, QuadConfig};

fn extremizer(hp: &HLSParams, s: f64, t0: f64) -> CylFunc {
    let hp = *hp;
    let d = 2.0 * hp.q() - hp.lambda();
    // H(delta_s(a^{-1} xi)) with a = (0, t0); H <= |xi|^{-d}
    let shift = t0.abs().sqrt();
    let decay = if t0 == 0.0 {
        Decay { exponent: d, constant: s.powf(-d), radius: 1.0 / s }
    } else {
        Decay { exponent: d, constant: (2.0 / s).powf(d), radius: 2.0 * shift + 1.0 / s }
    };
    CylFunc::new(format!("H(s = {s}, t0 = {t0})"), decay, move |r, t| hls_extremizer_cyl(&hp, s * r, s * s * (t - t0)))
        .with_sup(1.0)
}

/// Ratio of the double integral to `C ||f|| ||g||` for extremizer pairs
/// and three non-extremizers. Residuals are band violations, so the
/// tolerance is 0: extremizers must satisfy
/// `ratio in [1 - 5 se - 0.02, 1 + 5 se]`, the others `ratio < 1 - 3 se`,
/// with `se` the Monte Carlo standard error in ratio units.
pub fn check_hls(hp: &HLSParams, cfg: &QuadConfig) -> Result<VerifyReport> {
    if hp.n() != 1 {
        return Err(Error::InvalidParameter("HLS check supports n = 1 only".into()));
    }
    let c = hls_constant(hp.n(), hp.lambda())?;
    let p = hp.p_hls();
    let mut b = ReportBuilder::new("hls", 0.0)
        .param("n", hp.n())
        .param("lambda", hp.lambda())
        .param("p", p)
        .param("sharp_constant", c)
        .param("mc_samples", cfg.mc_samples)
        .param("seed", cfg.seed);

    if hp.lambda() == 2.0 {
        let res = ((c - 4.0).abs() - 1e-12).max(0.0);
        b.push(Sample::new("sharp constant vs closed form 4", c, 4.0, res));
    }

    let h = extremizer(hp, 1.0, 0.0);
    // 1 up to gauge radius 0.6, 0 from 1.2 on
    let bump = CylFunc::new("smooth indicator", Decay { exponent: 0.0, constant: 1.0, radius: 1.2 }, |r, t| {
        crate::rules::window((r.powi(4) + t * t).sqrt().sqrt() / 1.2)
    })
    .with_sup(1.0)
    .with_support(1.2);
    // rho^20 exp(-rho^4) <= (5/e)^5 < 22
    let gauss = CylFunc::new("exp(-(r^4+t^2))", Decay { exponent: 20.0, constant: 22.0, radius: 1.0 }, |r, t| {
        (-(r.powi(4) + t * t)).exp()
    })
    .with_sup(1.0);
    let shifted = extremizer(hp, 1.0, 1.0);
    let cases: Vec<(&str, CylFunc, CylFunc, bool)> = vec![
        ("extremizer H, H", h.clone(), h.clone(), true),
        ("translated-dilated extremizer", extremizer(hp, 1.5, 0.7), extremizer(hp, 1.5, 0.7), true),
        ("non-extremizer smooth indicator", bump.clone(), bump, false),
        ("non-extremizer exp(-(r^4+t^2))", gauss.clone(), gauss, false),
        ("non-extremizer H vs H translated by (0, 1)", h, shifted, false),
    ];
    let norm_cfg = QuadConfig { tol: cfg.tol.min(1e-6), ..*cfg };
    for (i, (name, f, g, is_ext)) in cases.into_iter().enumerate() {
        let nf = lp_norm(&f, p, &norm_cfg)?;
        let ng = lp_norm(&g, p, &norm_cfg)?;
        // distinct streams per case keep the estimates independent
        let mc_cfg = QuadConfig { seed: cfg.seed.wrapping_add(i as u64), ..*cfg };
        let est = hls_double_integral(hp, &f, &g, &mc_cfg)?;
        let denom = c * nf * ng;
        let ratio = est.value / denom;
        let se = est.stderr / denom;
        let (bound, violation) = if is_ext {
            let (lo, hi) = (1.0 - 5.0 * se - 0.02, 1.0 + 5.0 * se);
            (1.0, (lo - ratio).max(ratio - hi).max(0.0))
        } else {
            let hi = 1.0 - 3.0 * se;
            (hi, (ratio - hi).max(0.0))
        };
        b.push(Sample::new(format!("{name}: ratio, se = {se:.3e}"), ratio, bound, violation));
    }
    b.finish()
}
