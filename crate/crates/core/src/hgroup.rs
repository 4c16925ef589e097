//! Heisenberg group algebra on `C^n x R`.
//!
//! Points are stored as real triples `(x, y, t)` with `z = x + i y`; the
//! complex view is only a convenience for callers. The group law is
//!
//! ```text
//! (z, t) . (w, s) = (z + w, t + s + 2 Im <z, w>),   <z, w> = sum z_j conj(w_j)
//! ```
//!
//! and the gauge norm is `(|z|^4 + t^2)^(1/4)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer to the origin than this are rejected by [`cr_invert_point`].
pub const CR_INVERSION_GUARD: f64 = 1e-150;

/// Dimension data shared by every point of `H^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupContext {
    n: usize,
}

impl GroupContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Homogeneous dimension `Q = 2n + 2`.
    pub fn q(&self) -> usize {
        2 * self.n + 2
    }

    pub fn origin(&self) -> HPoint {
        HPoint::origin(self.n)
    }
}

/// A point `(z, t)` of the Heisenberg group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    x: Vec<f64>,
    y: Vec<f64>,
    t: f64,
}

impl HPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>, t: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if !t.is_finite() || x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("HPoint coordinates".into()));
        }
        Ok(Self { x, y, t })
    }

    pub fn from_complex(z: &[Complex64], t: f64) -> Result<Self> {
        Self::new(z.iter().map(|c| c.re).collect(), z.iter().map(|c| c.im).collect(), t)
    }

    /// Point of `H^1` from real coordinates.
    pub fn h1(x: f64, y: f64, t: f64) -> Result<Self> {
        Self::new(vec![x], vec![y], t)
    }

    pub fn origin(n: usize) -> Self {
        Self {
            x: vec![0.0; n],
            y: vec![0.0; n],
            t: 0.0,
        }
    }

    /// The point `(0, t)` on the vertical axis.
    pub fn on_axis(n: usize, t: f64) -> Self {
        Self {
            x: vec![0.0; n],
            y: vec![0.0; n],
            t,
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn z(&self) -> Vec<Complex64> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect()
    }

    /// `|z|^2`.
    pub fn z_norm_sq(&self) -> f64 {
        self.x.iter().zip(&self.y).map(|(a, b)| a * a + b * b).sum()
    }

    /// Distance `r = |z|` from the vertical axis.
    pub fn r(&self) -> f64 {
        self.z_norm_sq().sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.t == 0.0 && self.x.iter().chain(&self.y).all(|&v| v == 0.0)
    }

    pub fn gauge_norm(&self) -> f64 {
        gauge_norm(self)
    }

    fn check_same_n(&self, other: &HPoint) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Largest coordinate-wise absolute difference, used by tests and checks.
    pub fn max_abs_diff(&self, other: &HPoint) -> Result<f64> {
        self.check_same_n(other)?;
        let d = self
            .x
            .iter()
            .zip(&other.x)
            .chain(self.y.iter().zip(&other.y))
            .map(|(a, b)| (a - b).abs())
            .fold((self.t - other.t).abs(), f64::max);
        Ok(d)
    }
}

/// `2 Im <z_a, z_b>` for the Hermitian product `<z, w> = sum z_j conj(w_j)`.
pub(crate) fn symplectic(ax: &[f64], ay: &[f64], bx: &[f64], by: &[f64]) -> f64 {
    2.0 * ax
        .iter()
        .zip(ay)
        .zip(bx.iter().zip(by))
        .map(|((xa, ya), (xb, yb))| ya * xb - xa * yb)
        .sum::<f64>()
}

pub fn multiply(a: &HPoint, b: &HPoint) -> Result<HPoint> {
    a.check_same_n(b)?;
    let t = a.t + b.t + symplectic(&a.x, &a.y, &b.x, &b.y);
    Ok(HPoint {
        x: a.x.iter().zip(&b.x).map(|(p, q)| p + q).collect(),
        y: a.y.iter().zip(&b.y).map(|(p, q)| p + q).collect(),
        t,
    })
}

pub fn inverse(a: &HPoint) -> HPoint {
    HPoint {
        x: a.x.iter().map(|v| -v).collect(),
        y: a.y.iter().map(|v| -v).collect(),
        t: -a.t,
    }
}

pub fn gauge_norm(a: &HPoint) -> f64 {
    let r2 = a.z_norm_sq();
    (r2 * r2 + a.t * a.t).sqrt().sqrt()
}

/// Left-invariant distance `|a^{-1} b|`.
pub fn distance(a: &HPoint, b: &HPoint) -> Result<f64> {
    Ok(gauge_norm(&multiply(&inverse(a), b)?))
}

/// Anisotropic dilation `(s z, s^2 t)`; negative `s` is allowed.
pub fn dilate(s: f64, a: &HPoint) -> HPoint {
    HPoint {
        x: a.x.iter().map(|v| s * v).collect(),
        y: a.y.iter().map(|v| s * v).collect(),
        t: s * s * a.t,
    }
}

/// Componentwise rotation `z_j -> e^{i theta_j} z_j`.
pub fn rotate(theta: &[f64], a: &HPoint) -> Result<HPoint> {
    if theta.len() != a.n() {
        return Err(Error::DimensionMismatch {
            left: theta.len(),
            right: a.n(),
        });
    }
    let mut x = Vec::with_capacity(a.n());
    let mut y = Vec::with_capacity(a.n());
    for ((&th, &xa), &ya) in theta.iter().zip(&a.x).zip(&a.y) {
        let (s, c) = th.sin_cos();
        x.push(c * xa - s * ya);
        y.push(s * xa + c * ya);
    }
    Ok(HPoint { x, y, t: a.t })
}

/// H-reflection `(z, t) -> (e^{i theta} conj(z), 2 lambda - t)`.
pub fn h_reflect(lambda: f64, theta: &[f64], a: &HPoint) -> Result<HPoint> {
    if theta.len() != a.n() {
        return Err(Error::DimensionMismatch {
            left: theta.len(),
            right: a.n(),
        });
    }
    let mut x = Vec::with_capacity(a.n());
    let mut y = Vec::with_capacity(a.n());
    for ((&th, &xa), &ya) in theta.iter().zip(&a.x).zip(&a.y) {
        let (s, c) = th.sin_cos();
        // e^{i th} (xa - i ya)
        x.push(c * xa + s * ya);
        y.push(s * xa - c * ya);
    }
    Ok(HPoint {
        x,
        y,
        t: 2.0 * lambda - a.t,
    })
}

/// Reflection in the horizontal plane through `xi0`: translate `xi0` to the
/// origin, apply `(z, t) -> (conj z, -t)` and translate back.
pub fn reflect_about_horizontal_plane(xi0: &HPoint, a: &HPoint) -> Result<HPoint> {
    let local = multiply(&inverse(xi0), a)?;
    let zero = vec![0.0; a.n()];
    multiply(xi0, &h_reflect(0.0, &zero, &local)?)
}

/// CR type inversion of a point: `(z / omega, -t / |omega|^2)` with
/// `omega = t + i |z|^2`.
pub fn cr_invert_point(a: &HPoint) -> Result<HPoint> {
    if gauge_norm(a) < CR_INVERSION_GUARD {
        return Err(Error::SingularPoint(
            "CR inversion is undefined at the origin".into(),
        ));
    }
    let r2 = a.z_norm_sq();
    // |omega|^2 = t^2 + |z|^4 = |a|^4
    let w2 = a.t * a.t + r2 * r2;
    // z * conj(omega) / |omega|^2 with conj(omega) = t - i r2
    let mut x = Vec::with_capacity(a.n());
    let mut y = Vec::with_capacity(a.n());
    for (&xa, &ya) in a.x.iter().zip(&a.y) {
        x.push((xa * a.t + ya * r2) / w2);
        y.push((ya * a.t - xa * r2) / w2);
    }
    Ok(HPoint {
        x,
        y,
        t: -a.t / w2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64, t: f64) -> HPoint {
        HPoint::h1(x, y, t).unwrap()
    }

    #[test]
    fn multiply_hand_example() {
        // (1, 0) . (i, 0): Im<1, i> = Im(-i) = -1
        let p = multiply(&pt(1.0, 0.0, 0.0), &pt(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(p, pt(1.0, 1.0, -2.0));
    }

    #[test]
    fn identity_and_inverse() {
        let a = pt(0.3, -1.2, 2.5);
        assert_eq!(multiply(&HPoint::origin(1), &a).unwrap(), a);
        let e = multiply(&a, &inverse(&a)).unwrap();
        assert!(e.max_abs_diff(&HPoint::origin(1)).unwrap() == 0.0);
        assert_eq!(inverse(&pt(0.0, 1.0, 3.0)), pt(0.0, -1.0, -3.0));
        assert_eq!(inverse(&HPoint::origin(1)), HPoint::origin(1));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = HPoint::origin(1);
        let b = HPoint::origin(2);
        assert!(matches!(
            multiply(&a, &b),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
        assert!(distance(&a, &b).is_err());
        assert!(rotate(&[0.0, 0.0], &a).is_err());
        assert!(HPoint::new(vec![0.0], vec![], 0.0).is_err());
        assert!(HPoint::h1(f64::NAN, 0.0, 0.0).is_err());
        assert!(GroupContext::new(0).is_err());
    }

    #[test]
    fn gauge_norm_examples() {
        assert_eq!(gauge_norm(&pt(0.0, 0.0, 4.0)), 2.0);
        assert_eq!(gauge_norm(&pt(1.0, 0.0, 0.0)), 1.0);
        assert_relative_eq!(gauge_norm(&pt(1.0, 0.0, 1.0)), 2f64.powf(0.25), epsilon = 1e-15);
    }

    #[test]
    fn dilation_examples() {
        let a = pt(1.0, 0.0, 1.0);
        assert_eq!(dilate(1.0, &a), a);
        assert_eq!(dilate(-1.0, &pt(1.0, 2.0, 3.0)), pt(-1.0, -2.0, 3.0));
        let d = dilate(2.0, &a);
        assert_eq!(d, pt(2.0, 0.0, 4.0));
        assert_relative_eq!(gauge_norm(&d), 2.0 * 2f64.powf(0.25), epsilon = 1e-15);
        assert!(dilate(0.0, &a).is_origin());
    }

    #[test]
    fn rotation_half_turn() {
        let r = rotate(&[std::f64::consts::PI], &pt(1.0, 0.0, 5.0)).unwrap();
        assert!(r.max_abs_diff(&pt(-1.0, 0.0, 5.0)).unwrap() < 1e-15);
        assert_eq!(rotate(&[0.0], &pt(0.2, 0.3, 0.4)).unwrap(), pt(0.2, 0.3, 0.4));
    }

    #[test]
    fn reflection_examples() {
        let a = pt(0.7, -0.4, 1.5);
        assert_eq!(h_reflect(0.0, &[0.0], &a).unwrap(), pt(0.7, 0.4, -1.5));
        let twice = h_reflect(2.0, &[0.0], &h_reflect(2.0, &[0.0], &a).unwrap()).unwrap();
        assert!(twice.max_abs_diff(&a).unwrap() < 1e-15);
        // real z on the plane t = lambda is fixed
        assert_eq!(h_reflect(0.5, &[0.0], &pt(3.0, 0.0, 0.5)).unwrap(), pt(3.0, 0.0, 0.5));
        // theta = pi gives the (-conj z, 2 lambda - t) convention
        let b = h_reflect(0.0, &[std::f64::consts::PI], &a).unwrap();
        assert!(b.max_abs_diff(&pt(-0.7, -0.4, -1.5)).unwrap() < 1e-15);
    }

    #[test]
    fn horizontal_plane_reflection_special_cases() {
        let a = pt(0.3, 0.8, -0.2);
        let o = HPoint::origin(1);
        assert_eq!(
            reflect_about_horizontal_plane(&o, &a).unwrap(),
            h_reflect(0.0, &[0.0], &a).unwrap()
        );
        let xi0 = pt(1.1, -0.6, 2.0);
        let fixed = reflect_about_horizontal_plane(&xi0, &xi0).unwrap();
        assert!(fixed.max_abs_diff(&xi0).unwrap() < 1e-14);
    }

    #[test]
    fn cr_inversion_examples() {
        let p = cr_invert_point(&pt(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(p, pt(0.0, 0.0, -1.0));
        assert!(matches!(
            cr_invert_point(&HPoint::origin(1)),
            Err(Error::SingularPoint(_))
        ));
        assert!(cr_invert_point(&pt(1e-160, 0.0, 0.0)).is_err());
    }

    fn arb_point(n: usize) -> impl Strategy<Value = HPoint> {
        (
            prop::collection::vec(-3.0..3.0f64, n),
            prop::collection::vec(-3.0..3.0f64, n),
            -5.0..5.0f64,
        )
            .prop_map(|(x, y, t)| HPoint::new(x, y, t).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (HPoint, HPoint)> {
        (1usize..4).prop_flat_map(|n| (arb_point(n), arb_point(n)))
    }

    /// Closed form of the horizontal-plane reflection.
    fn reflection_closed_form(xi0: &HPoint, a: &HPoint) -> HPoint {
        let z0 = xi0.z();
        let z = a.z();
        let mut im1 = 0.0;
        let mut im2 = 0.0;
        let mut zz = Vec::new();
        for (w0, w) in z0.iter().zip(&z) {
            im1 += (w0 * w.conj()).im;
            im2 += (w0 * (w - w0)).im;
            zz.push((w - w0).conj() + w0);
        }
        HPoint::from_complex(&zz, -a.t() + 2.0 * xi0.t() + 2.0 * im1 + 2.0 * im2).unwrap()
    }

    proptest! {
        #[test]
        fn inverse_cancels_on_the_left((a, b) in arb_pair()) {
            let c = multiply(&inverse(&a), &multiply(&a, &b).unwrap()).unwrap();
            prop_assert!(c.max_abs_diff(&b).unwrap() < 1e-12);
        }

        #[test]
        fn rotation_preserves_norm(a in arb_point(2), th in prop::collection::vec(0.0..6.3f64, 2)) {
            let r = rotate(&th, &a).unwrap();
            prop_assert!((gauge_norm(&r) - gauge_norm(&a)).abs() <= 1e-13 * gauge_norm(&a).max(1.0));
        }

        #[test]
        fn distance_is_left_invariant((a, b) in arb_pair(), gs in arb_point(3)) {
            let n = a.n();
            let g = HPoint::new(gs.x()[..n].to_vec(), gs.y()[..n].to_vec(), gs.t()).unwrap();
            let d0 = distance(&a, &b).unwrap();
            let d1 = distance(&multiply(&g, &a).unwrap(), &multiply(&g, &b).unwrap()).unwrap();
            prop_assert!((d0 - d1).abs() <= 1e-11 * d0.max(1.0));
            prop_assert_eq!(distance(&a, &a).unwrap(), 0.0);
            prop_assert!((distance(&HPoint::origin(n), &b).unwrap() - gauge_norm(&b)).abs() < 1e-15);
        }

        #[test]
        fn reflection_closed_form_agrees((xi0, a) in arb_pair()) {
            let composed = reflect_about_horizontal_plane(&xi0, &a).unwrap();
            let closed = reflection_closed_form(&xi0, &a);
            prop_assert!(composed.max_abs_diff(&closed).unwrap() < 1e-12);
        }

        #[test]
        fn reflection_mirrors_norm_about_plane(a in arb_point(1), lambda in -3.0..3.0f64) {
            let c = HPoint::on_axis(1, lambda);
            let d0 = distance(&c, &a).unwrap();
            let d1 = distance(&c, &h_reflect(lambda, &[0.0], &a).unwrap()).unwrap();
            prop_assert!((d0 - d1).abs() <= 1e-12 * d0.max(1.0));
        }

        #[test]
        fn cr_inversion_norm_and_double((a, _b) in arb_pair()) {
            prop_assume!(gauge_norm(&a) > 1e-3);
            let h = cr_invert_point(&a).unwrap();
            prop_assert!((gauge_norm(&h) * gauge_norm(&a) - 1.0).abs() < 1e-12);
            let hh = cr_invert_point(&h).unwrap();
            let expected = dilate(-1.0, &a);
            prop_assert!(hh.max_abs_diff(&expected).unwrap() <= 1e-12 * gauge_norm(&a).powi(2).max(1.0));
        }
    }
}
