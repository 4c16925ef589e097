//! CSV and plain-text renderings of reports.

use std::collections::BTreeMap;

use serde_json::Value;
use sha2::{Digest, Sha256};

use super::VerifyReport;
use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 8] = ["check", "param-hash", "point", "lhs", "rhs", "residual", "tol", "passed"];

/// First 16 hex digits of the SHA-256 of the canonical (key-sorted) JSON.
pub fn param_hash(params: &BTreeMap<String, Value>) -> String {
    let body = serde_json::to_string(params).expect("params serialise");
    let digest = Sha256::digest(body.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

/// One row per sample, columns [`CSV_COLUMNS`].
pub fn to_csv(reports: &[VerifyReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in reports {
        let h = param_hash(&r.params);
        for s in &r.samples {
            w.write_record([
                r.check_name.as_str(),
                &h,
                &s.point,
                &sci(s.lhs),
                &sci(s.rhs),
                &sci(s.residual),
                &sci(r.tolerance),
                if r.passed { "true" } else { "false" },
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Aligned tables, one per report.
pub fn to_text(reports: &[VerifyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{}  [{status}]  max residual {}  tolerance {}  ({} ms)\n",
            r.check_name,
            sci(r.max_residual),
            sci(r.tolerance),
            r.runtime_ms
        ));
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("  params: {}\n", params.join(", ")));
        let wp = r.samples.iter().map(|s| s.point.len()).max().unwrap_or(0).max(5);
        out.push_str(&format!("  {:<wp$}  {:>12}  {:>12}  {:>12}\n", "point", "lhs", "rhs", "residual"));
        for s in &r.samples {
            out.push_str(&format!(
                "  {:<wp$}  {:>12}  {:>12}  {:>12}\n",
                s.point,
                sci(s.lhs),
                sci(s.rhs),
                sci(s.residual)
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{ReportBuilder, Sample};

    fn report() -> VerifyReport {
        let mut b = ReportBuilder::new("demo", 1e-3).param("alpha", 2.0);
        b.push(Sample::new("(0, 1)", 1.0, 1.0005, 2.5e-4));
        b.finish().unwrap()
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&[report()]).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "check,param-hash,point,lhs,rhs,residual,tol,passed");
        let row = lines.next().unwrap();
        assert!(row.starts_with("demo,"));
        assert!(row.contains("\"(0, 1)\""));
        assert!(row.ends_with(",1.00000e-3,true"));
    }

    #[test]
    fn hash_depends_on_params_only() {
        let a = report();
        let mut b = report();
        assert_eq!(param_hash(&a.params), param_hash(&b.params));
        b.params.insert("alpha".into(), 1.0.into());
        assert_ne!(param_hash(&a.params), param_hash(&b.params));
        assert_eq!(param_hash(&a.params).len(), 16);
    }

    #[test]
    fn text_has_six_significant_digits() {
        let t = to_text(&[report()]);
        assert!(t.contains("[PASS]"));
        assert!(t.contains("1.00050e0"));
    }
}
