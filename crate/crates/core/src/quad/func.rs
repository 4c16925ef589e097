use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hgroup::HPoint;

/// Asserted bound `|f(xi)| <= constant * |xi|^{-exponent}` for `|xi| >= radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decay {
    pub exponent: f64,
    pub constant: f64,
    pub radius: f64,
}

impl Decay {
    pub fn new(exponent: f64, constant: f64, radius: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent >= 0.0) {
            return Err(Error::InvalidParameter(format!("decay exponent {exponent}")));
        }
        if !(constant.is_finite() && constant >= 0.0) || !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "decay constant {constant} / radius {radius}"
            )));
        }
        Ok(Self { exponent, constant, radius })
    }

    pub fn bound(&self, rho: f64) -> f64 {
        self.constant * rho.powf(-self.exponent)
    }
}

type Eval = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// A non-negative cylindrical function `f(r, t)`, `r = |z|`, with the
/// metadata the integrators need to bound truncation errors.
#[derive(Clone)]
pub struct CylFunc {
    eval: Arc<Eval>,
    decay: Decay,
    sup: Option<f64>,
    support: Option<f64>,
    label: String,
}

impl fmt::Debug for CylFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CylFunc")
            .field("label", &self.label)
            .field("decay", &self.decay)
            .field("sup", &self.sup)
            .field("support", &self.support)
            .finish()
    }
}

impl CylFunc {
    pub fn new<F>(label: impl Into<String>, decay: Decay, eval: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self { eval: Arc::new(eval), decay, sup: None, support: None, label: label.into() }
    }

    pub fn zero() -> Self {
        Self::new("zero", Decay { exponent: f64::INFINITY, constant: 0.0, radius: 1.0 }, |_, _| 0.0)
            .with_sup(0.0)
            .with_support(0.0)
    }

    /// Global bound `sup |f|`.
    pub fn with_sup(mut self, sup: f64) -> Self {
        self.sup = Some(sup);
        self
    }

    /// `f` vanishes for gauge norm `>= radius`.
    pub fn with_support(mut self, radius: f64) -> Self {
        self.support = Some(radius);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    pub fn sup(&self) -> Option<f64> {
        self.sup
    }

    pub fn support(&self) -> Option<f64> {
        self.support
    }

    #[inline]
    pub fn eval(&self, r: f64, t: f64) -> f64 {
        (self.eval)(r, t)
    }

    pub fn try_eval(&self, r: f64, t: f64) -> Result<f64> {
        let v = self.eval(r, t);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("{} at (r={r}, t={t})", self.label)));
        }
        Ok(v)
    }

    pub fn at(&self, xi: &HPoint) -> Result<f64> {
        self.try_eval(xi.r(), xi.t())
    }

    /// Check the decay assertion on a sample of gauge spheres in
    /// `[radius, 10 radius]`.
    pub fn spot_check_decay(&self) -> Result<()> {
        let d = self.decay;
        if d.constant == 0.0 && self.support == Some(0.0) {
            return Ok(());
        }
        for i in 0..=8 {
            let rho = d.radius * 10f64.powf(i as f64 / 8.0);
            for j in 0..=16 {
                let phi = std::f64::consts::PI * j as f64 / 16.0;
                let r = rho * phi.sin().max(0.0).sqrt();
                let t = rho * rho * phi.cos();
                let v = self.try_eval(r, t)?.abs();
                let b = d.bound(rho);
                if v > b * (1.0 + 1e-9) + 1e-300 {
                    return Err(Error::InvalidParameter(format!(
                        "{}: decay bound violated at gauge radius {rho:.4e} ({v:.4e} > {b:.4e})",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }
}
