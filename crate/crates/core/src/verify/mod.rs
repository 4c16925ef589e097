//! Residual checks with pass/fail against tolerances.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

mod fd;
mod group;
mod hls;
mod integral;
mod output;
mod picard;

pub use fd::{
    check_constant_bookkeeping, check_fd_convergence, check_grushin, check_sublaplacian_ratio, fd_sublaplacian, fd_sublaplacian_ambient,
    grushin_apply, grushin_points, FDConfig,
};
pub use group::{
    check_cr_inversion, check_group_algebra, check_heisenberg_identity, check_kernel_invariance, heisenberg_identity_sides,
    inversion_grid,
};
pub use hls::check_hls;
pub use integral::{
    check_fixed_point, check_inversion_symmetry, check_reflection_difference, check_split_identity, split_sides,
};
pub use output::{param_hash, to_csv, to_text};
pub use picard::{picard_probe, PicardGrid, PicardReport, PicardStep};

/// Absolute floor for the `|lhs| + |rhs|` normaliser.
pub const RESIDUAL_FLOOR: f64 = 1e-10;

/// `|lhs - rhs| / max(|lhs| + |rhs|, RESIDUAL_FLOOR)`.
pub fn relative_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / (lhs.abs() + rhs.abs()).max(RESIDUAL_FLOOR)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub point: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl Sample {
    pub fn new(point: impl Into<String>, lhs: f64, rhs: f64, residual: f64) -> Self {
        Self { point: point.into(), lhs, rhs, residual }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub check_name: String,
    pub params: BTreeMap<String, Value>,
    pub samples: Vec<Sample>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: u64,
}

impl VerifyReport {
    /// Everything except the wall-clock field, as compact JSON.
    pub fn body_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialises");
        if let Value::Object(m) = &mut v {
            m.remove("runtime_ms");
        }
        v.to_string()
    }
}

/// Accumulates samples; `finish` fixes `max_residual` and `passed`.
pub(crate) struct ReportBuilder {
    name: String,
    params: BTreeMap<String, Value>,
    samples: Vec<Sample>,
    tolerance: f64,
    start: Instant,
}

impl ReportBuilder {
    pub(crate) fn new(name: &str, tolerance: f64) -> Self {
        Self { name: name.into(), params: BTreeMap::new(), samples: Vec::new(), tolerance, start: Instant::now() }
    }

    pub(crate) fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.into(), v.into());
        self
    }

    pub(crate) fn set_param(&mut self, key: &str, v: impl Into<Value>) {
        self.params.insert(key.into(), v.into());
    }

    pub(crate) fn push(&mut self, s: Sample) {
        self.samples.push(s);
    }

    pub(crate) fn finish(self) -> Result<VerifyReport> {
        if self.samples.is_empty() {
            return Err(Error::InvalidParameter(format!("{}: no samples", self.name)));
        }
        // NaN residuals count as failures
        let max_residual = self
            .samples
            .iter()
            .map(|s| if s.residual.is_nan() { f64::INFINITY } else { s.residual })
            .fold(0.0, f64::max);
        Ok(VerifyReport {
            check_name: self.name,
            params: self.params,
            samples: self.samples,
            max_residual,
            tolerance: self.tolerance,
            passed: max_residual <= self.tolerance,
            runtime_ms: self.start.elapsed().as_millis() as u64,
        })
    }
}

pub(crate) fn fmt_point(p: &crate::hgroup::HPoint) -> String {
    let mut s = String::from("(");
    for (x, y) in p.x().iter().zip(p.y()) {
        s.push_str(&format!("{x:.6e}{:+.6e}i, ", y));
    }
    s.push_str(&format!("{:.6e})", p.t()));
    s
}

/// Running worst case over many identity evaluations.
#[derive(Debug, Clone)]
pub(crate) struct Worst {
    label: String,
    count: usize,
    best: Option<(String, f64, f64, f64)>,
}

impl Worst {
    pub(crate) fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), count: 0, best: None }
    }

    pub(crate) fn add(&mut self, point: impl FnOnce() -> String, lhs: f64, rhs: f64, residual: f64) {
        self.count += 1;
        let worse = match &self.best {
            None => true,
            Some(b) => residual > b.3 || residual.is_nan(),
        };
        if worse {
            self.best = Some((point(), lhs, rhs, residual));
        }
    }

    pub(crate) fn sample(self) -> Sample {
        let (p, l, r, res) = self.best.unwrap_or_default();
        Sample::new(format!("{} worst of {}: {p}", self.label, self.count), l, r, res)
    }
}
