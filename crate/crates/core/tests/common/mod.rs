//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss-Kronrod quadrature on `[a, b]`.
pub fn adaptive(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, rel: f64, abs: f64) -> f64 {
    let mut segs = vec![{
        let (v, e) = gk15(f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..2000 {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= (rel * total.abs()).max(abs) {
            break;
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (a0, b0, _, _) = segs.swap_remove(i);
        let m = 0.5 * (a0 + b0);
        let (v1, e1) = gk15(f, a0, m);
        let (v2, e2) = gk15(f, m, b0);
        segs.push((a0, m, v1, e1));
        segs.push((m, b0, v2, e2));
    }
    segs.iter().map(|s| s.2).sum()
}

/// `int G_alpha(c, xi) f(xi)^p dxi` over the whole group, for the centre
/// `c = (cr, 0, ct)`, by nested adaptive cubature in polar coordinates
/// around `c` (radius compactified by `rho = x / (1 - x)`). No window, no
/// angular reduction.
pub fn operator_reference(alpha: f64, p: f64, f: &dyn Fn(f64, f64) -> f64, cr: f64, ct: f64, rel: f64) -> f64 {
    let mut outer = |x: f64| {
        if x >= 1.0 {
            return 0.0;
        }
        let rho = x / (1.0 - x);
        let jac = 1.0 / ((1.0 - x) * (1.0 - x));
        let mut mid = |phi: f64| {
            let rz = rho * phi.sin().max(0.0).sqrt();
            let et = rho * rho * phi.cos();
            let mut inner = |psi: f64| {
                let (ex, ey) = (rz * psi.cos(), rz * psi.sin());
                let xr = cr + ex;
                let t = ct + et - 2.0 * cr * ey;
                let v = f((xr * xr + ey * ey).sqrt(), t);
                if v == 0.0 {
                    0.0
                } else {
                    v.powf(p)
                }
            };
            adaptive(&mut inner, 0.0, 2.0 * PI, rel, 1e-300)
        };
        rho.powf(alpha - 1.0) * jac * adaptive(&mut mid, 0.0, PI, rel, 1e-300)
    };
    adaptive(&mut outer, 0.0, 1.0, rel, 1e-300)
}
