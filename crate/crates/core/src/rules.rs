//! One-dimensional rules and maps shared by the integration engine.

use std::f64::consts::PI;

use gauss_quad::{GaussJacobi, GaussLegendre};

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<Vec<(f64, f64)>> {
    let rule = GaussLegendre::new(n.max(2))
        .map_err(|e| Error::InvalidParameter(format!("Gauss-Legendre order {n}: {e}")))?;
    Ok(rule.into_node_weight_pairs())
}

/// Nodes and weights for `int_0^a x^beta g(x) dx` (weight folded into the rule).
///
/// The degree is rounded up to an even number: the backing rule fixes the
/// middle node of odd-degree rules at zero, which is only right for symmetric
/// weights.
pub fn gauss_jacobi_left(n: usize, beta: f64, a: f64) -> Result<Vec<(f64, f64)>> {
    if beta == 0.0 {
        return map_to_interval(&gauss_legendre(n)?, 0.0, a);
    }
    let deg = (n.max(2) + 1) & !1;
    let rule = GaussJacobi::new(deg, 0.0, beta)
        .map_err(|e| Error::InvalidParameter(format!("Gauss-Jacobi beta {beta}: {e}")))?;
    let half = 0.5 * a;
    let scale = half.powf(beta + 1.0);
    Ok(rule
        .into_node_weight_pairs()
        .into_iter()
        .map(|(x, w)| (half * (1.0 + x), w * scale))
        .collect())
}

pub fn map_to_interval(rule: &[(f64, f64)], a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let h = 0.5 * (b - a);
    let m = 0.5 * (b + a);
    Ok(rule.iter().map(|&(x, w)| (m + h * x, w * h)).collect())
}

/// Composite Gauss-Legendre rule on consecutive panels `[b_i, b_{i+1}]`.
pub fn composite(rule: &[(f64, f64)], breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(rule.len() * breaks.len().saturating_sub(1));
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        out.extend(rule.iter().map(|&(x, wt)| (m + h * x, wt * h)));
    }
    out
}

/// Sorted panel breakpoints on `[lo, hi]`: geometric towards `centers`
/// (first panel `first`, ratio 2) plus explicit `anchors`.
pub fn graded_breaks(lo: f64, hi: f64, centers: &[f64], first: f64, anchors: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    for &c in centers {
        pts.push(c);
        let mut d = first;
        while d < (hi - lo) {
            pts.push(c + d);
            pts.push(c - d);
            d *= 2.0;
        }
    }
    pts.extend_from_slice(anchors);
    let mut pts: Vec<f64> = pts
        .into_iter()
        .filter(|p| p.is_finite() && *p >= lo && *p <= hi)
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let min_gap = 1e-3 * first;
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last() {
            Some(&q) if p - q < min_gap => {
                if p == hi {
                    *out.last_mut().unwrap() = hi;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

/// Polar-angle map `phi = (pi/2)(1 - cos(pi v))`, `v in [0, 1]`.
///
/// Gauge-polar coordinates carry `sqrt(sin phi)` in the horizontal radius;
/// under this map it becomes analytic in `v` at both poles. Returns
/// `(phi, dphi/dv)`.
pub fn polar_angle_map(v: f64) -> (f64, f64) {
    let (s, c) = (PI * v).sin_cos();
    (0.5 * PI * (1.0 - c), 0.5 * PI * PI * s)
}

/// Nodes `(phi, weight)` for `int_0^pi g(phi) dphi` via [`polar_angle_map`].
pub fn polar_angle_rule(rule: &[(f64, f64)], panels: usize) -> Vec<(f64, f64)> {
    let breaks: Vec<f64> = (0..=panels).map(|k| k as f64 / panels as f64).collect();
    composite(rule, &breaks)
        .into_iter()
        .map(|(v, w)| {
            let (phi, jac) = polar_angle_map(v);
            (phi, w * jac)
        })
        .collect()
}

/// Smooth partition function: `1` for `s <= 1/2`, `0` for `s >= 1`, `C^inf`.
pub fn window(s: f64) -> f64 {
    if s <= 0.5 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        // x runs from 1 (s = 1/2) to 0 (s = 1)
        let x = 2.0 * (1.0 - s);
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// Adaptive periodic trapezoid rule for `int_0^{2 pi} g(psi) dpsi`.
///
/// Starts at `n0` nodes and doubles (reusing previous nodes) until two
/// successive values agree to `tol` relative (or absolutely, below
/// `abs_floor`). Returns the value and the final node count.
pub fn periodic_trapezoid<F>(mut g: F, n0: usize, tol: f64, abs_floor: f64, max_nodes: usize) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> f64,
{
    let mut n = n0.max(4);
    let mut h = 2.0 * PI / n as f64;
    let mut sum: f64 = (0..n).map(|k| g(k as f64 * h)).sum();
    let mut prev = sum * h;
    loop {
        if n * 2 > max_nodes {
            return Err(Error::Quadrature(format!(
                "angular rule did not converge with {n} nodes"
            )));
        }
        let mid: f64 = (0..n).map(|k| g((k as f64 + 0.5) * h)).sum();
        sum += mid;
        n *= 2;
        h *= 0.5;
        let cur = sum * h;
        if !cur.is_finite() {
            return Err(Error::NonFinite("angular integrand".into()));
        }
        let diff = (cur - prev).abs();
        if diff <= tol * cur.abs() || diff <= abs_floor {
            return Ok((cur, n));
        }
        prev = cur;
    }
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
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

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    val: [f64; N],
    err: f64,
}

fn gk15<const N: usize, F: FnMut(f64) -> [f64; N]>(f: &mut F, a: f64, b: f64) -> Segment<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    for i in 0..N {
        k[i] = fc[i] * WGK[7];
        g[i] = fc[i] * WG[3];
    }
    for j in 0..7 {
        let x = h * XGK[j];
        let (l, r) = (f(c - x), f(c + x));
        for i in 0..N {
            let s = l[i] + r[i];
            k[i] += WGK[j] * s;
            if j % 2 == 1 {
                g[i] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0;
    for i in 0..N {
        err += ((k[i] - g[i]) * h).abs();
        k[i] *= h;
    }
    Segment { a, b, val: k, err }
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of a vector integrand
/// over consecutive panels `breaks`. Stops when the summed error estimate is
/// below `tol` times the summed component magnitudes.
pub fn adaptive_gauss_kronrod<const N: usize, F>(mut f: F, breaks: &[f64], tol: f64, max_segments: usize) -> Result<[f64; N]>
where
    F: FnMut(f64) -> [f64; N],
{
    let mut segs: Vec<Segment<N>> = breaks.windows(2).map(|w| gk15(&mut f, w[0], w[1])).collect();
    loop {
        let mut total = [0.0; N];
        let mut err = 0.0;
        for s in &segs {
            for i in 0..N {
                total[i] += s.val[i];
            }
            err += s.err;
        }
        let scale: f64 = total.iter().map(|v| v.abs()).sum();
        if !scale.is_finite() {
            return Err(Error::NonFinite("adaptive quadrature".into()));
        }
        if err <= tol * scale || err == 0.0 {
            return Ok(total);
        }
        if segs.len() >= max_segments {
            return Err(Error::Quadrature(format!(
                "adaptive rule reached {max_segments} segments (error {err:.2e}, scale {scale:.2e})"
            )));
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .unwrap();
        let s = segs.swap_remove(i);
        let m = 0.5 * (s.a + s.b);
        segs.push(gk15(&mut f, s.a, m));
        segs.push(gk15(&mut f, m, s.b));
    }
}

/// Pairwise summation in a fixed order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jacobi_left_integrates_weighted_monomials() {
        for &beta in &[-0.5, 0.0, 0.5, 1.0, 1.7] {
            let rule = gauss_jacobi_left(9, beta, 2.0).unwrap();
            // int_0^2 x^beta x^3 dx = 2^(beta+4)/(beta+4)
            let got: f64 = rule.iter().map(|(x, w)| w * x.powi(3)).sum();
            assert_relative_eq!(got, 2f64.powf(beta + 4.0) / (beta + 4.0), max_relative = 1e-13);
            let got: f64 = rule.iter().map(|(x, w)| w * x.cos()).sum();
            assert!(got.is_finite());
        }
    }

    #[test]
    fn polar_angle_rule_integrates_sqrt_sin() {
        // int_0^pi sqrt(sin phi) dphi = sqrt(pi) Gamma(3/4) / Gamma(5/4)
        let rule = polar_angle_rule(&gauss_legendre(16).unwrap(), 2);
        let got: f64 = rule.iter().map(|(p, w)| w * p.sin().sqrt()).sum();
        let g = statrs::function::gamma::gamma;
        let exact = PI.sqrt() * g(0.75) / g(1.25);
        assert_relative_eq!(got, exact, max_relative = 1e-12);
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic_data() {
        // int_0^{2pi} 1/(2 + cos psi) = 2 pi / sqrt(3)
        let (v, n) = periodic_trapezoid(|p| 1.0 / (2.0 + p.cos()), 8, 1e-14, 0.0, 1 << 12).unwrap();
        assert_relative_eq!(v, 2.0 * PI / 3f64.sqrt(), max_relative = 1e-14);
        assert!(n <= 64);
    }

    #[test]
    fn kronrod_handles_localised_peaks() {
        // int_{-1}^{1} eps / (x^2 + eps^2) dx = 2 atan(1/eps)
        let eps = 1e-4;
        let [v, w] = adaptive_gauss_kronrod(|x| [eps / (x * x + eps * eps), 1.0], &[-1.0, 0.3, 1.0], 1e-10, 4000).unwrap();
        assert_relative_eq!(v, 2.0 * (1.0 / eps).atan(), max_relative = 1e-9);
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
        assert!(adaptive_gauss_kronrod(|x| [1.0 / x.abs().sqrt()], &[-1.0, 1.0], 1e-14, 8).is_err());
    }

    #[test]
    fn window_is_a_partition() {
        assert_eq!(window(0.1), 1.0);
        assert_eq!(window(1.2), 0.0);
        assert_relative_eq!(window(0.75), 0.5, epsilon = 1e-15);
        let mut last = 1.0;
        for k in 0..=100 {
            let w = window(0.5 + 0.005 * k as f64);
            assert!(w <= last + 1e-15);
            last = w;
        }
    }

    #[test]
    fn graded_breaks_cover_interval() {
        let b = graded_breaks(0.0, 100.0, &[0.0], 0.25, &[1.3, 1.7]);
        assert_eq!(*b.first().unwrap(), 0.0);
        assert_eq!(*b.last().unwrap(), 100.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        assert!(b.contains(&1.3) && b.contains(&64.0));
    }
}
