//! Command-line front end: suite selection, config merging, report output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hgroup::HPoint;
use crate::kernel::{HLSParams, KernelParams};
use crate::quad::QuadConfig;
use crate::solutions::{
    c0_sample_points, derive_c0, solution_profile, standard_solution, C0Certificate, StandardSolutionParams,
};
use crate::verify::{self, FDConfig, PicardGrid, Sample, VerifyReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Random cases for the closed-form identity suites.
const IDENTITY_CASES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Group,
    Identity,
    Fixedpoint,
    Reflection,
    Split,
    Inversion,
    Sublaplacian,
    Grushin,
    Hls,
    Picard,
    All,
}

impl Suite {
    const ORDER: [Suite; 10] = [
        Suite::Group,
        Suite::Identity,
        Suite::Inversion,
        Suite::Sublaplacian,
        Suite::Grushin,
        Suite::Fixedpoint,
        Suite::Reflection,
        Suite::Split,
        Suite::Hls,
        Suite::Picard,
    ];

    fn parse(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, true).map_err(|_| Error::Config(format!("unknown suite '{s}'")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "hverify", version, about = "Residual checks for the conformal integral equation on the Heisenberg group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites.
    Run {
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[command(flatten)]
        common: CommonArgs,
        /// Write 0 for runtime_ms so repeated runs compare byte for byte.
        #[arg(long)]
        omit_runtime: bool,
    },
    /// Derive C0 with its constancy certificate.
    #[command(name = "derive-c0")]
    DeriveC0 {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args, Default)]
struct CommonArgs {
    /// JSON file with flat dotted keys (kernel.alpha, quad.delta, ...).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Truncation radius.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Fully merged run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suite: Suite,
    pub kernel: KernelParams,
    pub quad: QuadConfig,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

const CONFIG_KEYS: [&str; 14] = [
    "suite",
    "kernel.n",
    "kernel.alpha",
    "kernel.p",
    "quad.delta",
    "quad.r_trunc",
    "quad.nodes_rho",
    "quad.nodes_angle",
    "quad.nodes_outer",
    "quad.mc_samples",
    "quad.seed",
    "quad.tol",
    "output_path",
    "format",
];

fn parse_config_file(text: &str) -> Result<BTreeMap<String, Value>> {
    let map: BTreeMap<String, Value> =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config is not a flat JSON object: {e}")))?;
    for k in map.keys() {
        if !CONFIG_KEYS.contains(&k.as_str()) {
            return Err(Error::Config(format!("unknown config key '{k}'")));
        }
    }
    Ok(map)
}

fn get_f64(m: &BTreeMap<String, Value>, k: &str) -> Result<Option<f64>> {
    m.get(k).map(|v| v.as_f64().ok_or_else(|| Error::Config(format!("{k} must be a number")))).transpose()
}

fn get_u64(m: &BTreeMap<String, Value>, k: &str) -> Result<Option<u64>> {
    m.get(k)
        .map(|v| v.as_u64().ok_or_else(|| Error::Config(format!("{k} must be a non-negative integer"))))
        .transpose()
}

fn get_str<'a>(m: &'a BTreeMap<String, Value>, k: &str) -> Result<Option<&'a str>> {
    m.get(k).map(|v| v.as_str().ok_or_else(|| Error::Config(format!("{k} must be a string")))).transpose()
}

/// Merge defaults, config file, environment seed and flags (flags win).
fn merge(suite_flag: Option<Suite>, a: &CommonArgs, env_seed: Option<String>) -> Result<RunConfig> {
    let file = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let suite = match (suite_flag, get_str(&file, "suite")?) {
        (Some(s), _) => s,
        (None, Some(s)) => Suite::parse(s)?,
        (None, None) => Suite::All,
    };
    let n = a.n.or(get_u64(&file, "kernel.n")?.map(|v| v as usize)).unwrap_or(1);
    let alpha = a.alpha.or(get_f64(&file, "kernel.alpha")?).unwrap_or(2.0);
    let kernel = match a.p.or(get_f64(&file, "kernel.p")?) {
        Some(p) => KernelParams::new(n, alpha, p)?,
        None => KernelParams::critical(n, alpha)?,
    };
    let d = QuadConfig::default();
    let usize_key = |k: &str, dflt: usize| -> Result<usize> { Ok(get_u64(&file, k)?.map(|v| v as usize).unwrap_or(dflt)) };
    let env_seed = match env_seed {
        Some(s) => Some(s.trim().parse::<u64>().map_err(|_| Error::Config(format!("HVERIFY_SEED='{s}' is not a u64")))?),
        None => None,
    };
    let quad = QuadConfig {
        delta: a.delta.or(get_f64(&file, "quad.delta")?).unwrap_or(d.delta),
        r_trunc: a.radius.or(get_f64(&file, "quad.r_trunc")?).unwrap_or(d.r_trunc),
        nodes_rho: usize_key("quad.nodes_rho", d.nodes_rho)?,
        nodes_angle: usize_key("quad.nodes_angle", d.nodes_angle)?,
        nodes_outer: usize_key("quad.nodes_outer", d.nodes_outer)?,
        mc_samples: a.samples.or(get_u64(&file, "quad.mc_samples")?).unwrap_or(d.mc_samples),
        seed: a.seed.or(get_u64(&file, "quad.seed")?).or(env_seed).unwrap_or(d.seed),
        tol: a.tol.or(get_f64(&file, "quad.tol")?).unwrap_or(d.tol),
    };
    quad.validate()?;
    let format = match (a.format, get_str(&file, "format")?) {
        (Some(f), _) => f,
        (None, Some(s)) => <Format as ValueEnum>::from_str(s, true).map_err(|_| Error::Config(format!("unknown format '{s}'")))?,
        (None, None) => Format::Json,
    };
    let output_path = a.output.clone().or(get_str(&file, "output_path")?.map(PathBuf::from));
    Ok(RunConfig { suite, kernel, quad, output_path, format })
}

/// Runs suites against one configuration, caching `C0` per `alpha`.
pub struct SuiteRunner {
    cfg: RunConfig,
    c0: BTreeMap<u64, C0Certificate>,
}

impl SuiteRunner {
    pub fn new(cfg: RunConfig) -> Self {
        Self { cfg, c0: BTreeMap::new() }
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    fn need_n1(&self) -> Result<()> {
        if self.cfg.kernel.n() != 1 {
            return Err(Error::InvalidParameter("quadrature suites support n = 1 only".into()));
        }
        Ok(())
    }

    /// `C0` for the critical exponent at `alpha`.
    pub fn c0(&mut self, alpha: f64) -> Result<C0Certificate> {
        if let Some(c) = self.c0.get(&alpha.to_bits()) {
            return Ok(c.clone());
        }
        let kp = KernelParams::critical(1, alpha)?;
        let cert = derive_c0(&kp, &self.cfg.quad)?;
        self.c0.insert(alpha.to_bits(), cert.clone());
        Ok(cert)
    }

    fn u0(&mut self, alpha: f64) -> Result<crate::solutions::FuncWithLimit> {
        let c0 = self.c0(alpha)?.c0;
        standard_solution(&StandardSolutionParams::unit(c0)?, &KernelParams::critical(1, alpha)?)
    }

    pub fn run(&mut self, suite: Suite) -> Result<Vec<VerifyReport>> {
        if suite == Suite::All {
            let mut out = Vec::new();
            for s in Suite::ORDER {
                out.extend(self.run(s)?);
            }
            return Ok(out);
        }
        let kp = self.cfg.kernel;
        let q = self.cfg.quad;
        let seed = q.seed;
        let mut out = Vec::new();
        match suite {
            Suite::Group => {
                for n in 1..=3 {
                    out.push(verify::check_group_algebra(n, IDENTITY_CASES, seed)?);
                }
            }
            Suite::Identity => {
                for n in 1..=3 {
                    out.push(verify::check_heisenberg_identity(n, IDENTITY_CASES, seed)?);
                }
                out.push(verify::check_kernel_invariance(&kp, IDENTITY_CASES, seed)?);
                out.push(verify::check_cr_inversion(&kp, IDENTITY_CASES, seed)?);
            }
            Suite::Inversion => {
                self.need_n1()?;
                // the identity is linear in u, so C0 = 1 suffices and no quadrature is needed
                let kc = KernelParams::critical(1, kp.alpha())?;
                let grid = verify::inversion_grid();
                for s in [1.0, 0.5, 2.0] {
                    let u = standard_solution(&StandardSolutionParams::new(1.0, s, HPoint::origin(1))?, &kc)?;
                    out.push(verify::check_inversion_symmetry(&kc, &u, &grid)?);
                }
            }
            Suite::Sublaplacian => {
                let fd = FDConfig::default();
                out.push(verify::check_fd_convergence()?);
                let c0 = self.c0(2.0)?.c0;
                let ratio = verify::check_sublaplacian_ratio(c0, &fd, seed)?;
                let mean = ratio.params["ratio_mean"].as_f64().unwrap_or(f64::NAN);
                out.push(ratio);
                out.push(verify::check_constant_bookkeeping(c0, mean)?);
            }
            Suite::Grushin => {
                let kc = KernelParams::critical(1, kp.alpha())?;
                out.push(verify::check_grushin(&solution_profile(&kc), &verify::grushin_points(), &FDConfig::default())?);
            }
            Suite::Fixedpoint => {
                self.need_n1()?;
                let cert = self.c0(kp.alpha())?;
                out.push(c0_report(kp.alpha(), &cert)?);
                let u = self.u0(kp.alpha())?;
                let pts = c0_sample_points();
                let mut r = verify::check_fixed_point(&kp, &u, &pts, &q)?;
                r.params.insert("margin_over_tol".into(), (r.max_residual / q.tol).into());
                out.push(r);
                if kp.is_critical() {
                    for s in [0.5, 2.0] {
                        let p = StandardSolutionParams::new(cert.c0, s, HPoint::origin(1))?;
                        let us = standard_solution(&p, &kp)?;
                        let mut r = verify::check_fixed_point(&kp, &us, &pts, &q)?;
                        r.params.insert("scale".into(), s.into());
                        out.push(r);
                    }
                }
            }
            Suite::Reflection => {
                self.need_n1()?;
                let kc = KernelParams::critical(1, kp.alpha())?;
                let u = self.u0(kp.alpha())?;
                let pts = [HPoint::h1(0.0, 0.0, 0.0)?, HPoint::h1(0.2, 0.0, 1.5)?, HPoint::h1(0.5, 0.0, 0.3)?];
                out.push(verify::check_reflection_difference(&kc, &u, -1.0, &pts, &q)?);
                out.push(verify::check_reflection_difference(&kc, &u, 0.0, &pts, &q)?);
            }
            Suite::Split => {
                self.need_n1()?;
                let kc = KernelParams::critical(1, kp.alpha())?;
                let u = self.u0(kp.alpha())?;
                let pts = [HPoint::h1(0.0, 0.0, 0.5)?, HPoint::h1(0.5, 0.0, 0.3)?, HPoint::h1(1.5, 0.0, -2.0)?];
                for s in [1.0, 2.0] {
                    out.push(verify::check_split_identity(&kc, &u, s, &pts, &q)?);
                }
            }
            Suite::Hls => {
                let hp = HLSParams::new(kp.n(), kp.q() - kp.alpha())?;
                out.push(verify::check_hls(&hp, &q)?);
            }
            Suite::Picard => {
                self.need_n1()?;
                let u = self.u0(kp.alpha())?;
                let pts = [HPoint::h1(0.0, 0.0, 0.0)?, HPoint::h1(0.8, 0.0, 1.0)?];
                let start = Instant::now();
                let rep = verify::picard_probe(&kp, &u.f, 3, &pts, PicardGrid::default(), &q)?;
                let tol = kp.is_critical().then_some(2.0 * q.tol);
                let mut r = rep.to_report(tol)?;
                r.runtime_ms = start.elapsed().as_millis() as u64;
                out.push(r);
            }
            Suite::All => unreachable!(),
        }
        Ok(out)
    }
}

/// Constancy of `(h / T[h^sigma])^{1/(sigma-1)}` over the sample points.
pub fn c0_report(alpha: f64, cert: &C0Certificate) -> Result<VerifyReport> {
    let r = VerifyReport {
        check_name: "c0_constancy".into(),
        params: BTreeMap::from([("alpha".to_string(), alpha.into()), ("c0".to_string(), cert.c0.into())]),
        samples: cert
            .samples
            .iter()
            .map(|(z, c)| Sample::new(verify::fmt_point(z), *c, cert.c0, (c - cert.c0).abs() / cert.c0))
            .collect(),
        max_residual: cert.spread,
        tolerance: cert.limit,
        passed: cert.spread <= cert.limit,
        runtime_ms: 0,
    };
    Ok(r)
}

pub fn render(reports: &[VerifyReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(reports).map_err(|e| Error::Io(e.to_string()))? + "\n",
        Format::Csv => verify::to_csv(reports)?,
        Format::Text => verify::to_text(reports),
    })
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::InvalidParameter(_) | Error::DimensionMismatch { .. })
}

/// Entry point; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let env_seed = std::env::var("HVERIFY_SEED").ok();
    match cli.command {
        Command::Run { suite, common, omit_runtime } => {
            let cfg = match merge(suite, &common, env_seed) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let (suite, format, out) = (cfg.suite, cfg.format, cfg.output_path.clone());
            let mut runner = SuiteRunner::new(cfg);
            let mut reports = match runner.run(suite) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return if is_usage(&e) { EXIT_USAGE } else { EXIT_FAIL };
                }
            };
            if omit_runtime {
                reports.iter_mut().for_each(|r| r.runtime_ms = 0);
            }
            let text = match render(&reports, format) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            if let Err(e) = emit(&text, out.as_ref()) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            for r in reports.iter().filter(|r| !r.passed) {
                eprintln!(
                    "FAIL {}: max residual {:.5e} > tolerance {:.5e}",
                    r.check_name, r.max_residual, r.tolerance
                );
            }
            if reports.iter().all(|r| r.passed) {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Command::DeriveC0 { common } => {
            let cfg = match merge(None, &common, env_seed) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let kp = match KernelParams::critical(cfg.kernel.n(), cfg.kernel.alpha()) {
                Ok(k) => k,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let cert = match derive_c0(&kp, &cfg.quad) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return if is_usage(&e) { EXIT_USAGE } else { EXIT_FAIL };
                }
            };
            let report = match c0_report(kp.alpha(), &cert) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_FAIL;
                }
            };
            let text = match cfg.format {
                Format::Text => format!(
                    "C0 = {:.6e}  (alpha = {}, spread {:.3e} <= {:.3e})\n{}",
                    cert.c0,
                    kp.alpha(),
                    cert.spread,
                    cert.limit,
                    verify::to_text(std::slice::from_ref(&report))
                ),
                f => match render(std::slice::from_ref(&report), f) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return EXIT_USAGE;
                    }
                },
            };
            if let Err(e) = emit(&text, cfg.output_path.as_ref()) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            EXIT_PASS
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> CommonArgs {
        let mut v = vec!["hverify", "run"];
        v.extend_from_slice(extra);
        match Cli::try_parse_from(v).unwrap().command {
            Command::Run { common, .. } => common,
            _ => unreachable!(),
        }
    }

    #[test]
    fn defaults_and_flag_precedence() {
        let c = merge(None, &args(&[]), None).unwrap();
        assert_eq!(c.suite, Suite::All);
        assert!(c.kernel.is_critical());
        assert_eq!(c.quad, QuadConfig::default());
        assert_eq!(c.format, Format::Json);
        let c = merge(Some(Suite::Hls), &args(&["--alpha", "1", "--seed", "9", "--samples", "10"]), Some("4".into())).unwrap();
        assert_eq!(c.kernel.alpha(), 1.0);
        assert_eq!(c.quad.seed, 9);
        assert_eq!(c.quad.mc_samples, 10);
        let c = merge(None, &args(&[]), Some("4".into())).unwrap();
        assert_eq!(c.quad.seed, 4);
        assert!(merge(None, &args(&[]), Some("x".into())).is_err());
    }

    #[test]
    fn config_file_keys() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cfg.json");
        std::fs::write(&p, r#"{"suite": "group", "kernel.alpha": 1.5, "quad.seed": 3, "quad.delta": 0.25, "format": "csv"}"#).unwrap();
        let ps = p.to_str().unwrap();
        let c = merge(None, &args(&["--config", ps]), Some("4".into())).unwrap();
        assert_eq!(c.suite, Suite::Group);
        assert_eq!(c.kernel.alpha(), 1.5);
        assert_eq!(c.quad.seed, 3);
        assert_eq!(c.quad.delta, 0.25);
        assert_eq!(c.format, Format::Csv);
        let c = merge(None, &args(&["--config", ps, "--delta", "0.4", "--format", "text"]), None).unwrap();
        assert_eq!(c.quad.delta, 0.4);
        assert_eq!(c.format, Format::Text);
        std::fs::write(&p, r#"{"quad.bogus": 1}"#).unwrap();
        assert!(matches!(merge(None, &args(&["--config", ps]), None), Err(Error::Config(_))));
        std::fs::write(&p, r#"{"kernel.alpha": "two"}"#).unwrap();
        assert!(merge(None, &args(&["--config", ps]), None).is_err());
    }

    #[test]
    fn invalid_parameters_are_usage_errors() {
        assert_eq!(run_cli(["hverify", "derive-c0", "--alpha", "5"]), EXIT_USAGE);
        assert_eq!(run_cli(["hverify", "run", "--suite", "nope"]), EXIT_USAGE);
        assert_eq!(run_cli(["hverify", "run", "--suite", "group", "--tol", "2"]), EXIT_USAGE);
        assert_eq!(run_cli(["hverify", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn group_suite_writes_report() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.json");
        let code = run_cli(["hverify", "run", "--suite", "group", "--output", out.to_str().unwrap()]);
        assert_eq!(code, EXIT_PASS);
        let v: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v.len(), 3);
        for r in v {
            assert!(r["max_residual"].as_f64().unwrap() <= 1e-12);
            for k in ["check_name", "params", "samples", "max_residual", "tolerance", "passed", "runtime_ms"] {
                assert!(r.get(k).is_some(), "{k}");
            }
        }
        let bad = dir.path().join("missing").join("r.json");
        assert_eq!(run_cli(["hverify", "run", "--suite", "group", "--output", bad.to_str().unwrap()]), EXIT_USAGE);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ORDER {
            assert_eq!(Suite::parse(&s.to_string()).unwrap(), s);
        }
        assert_eq!(Suite::parse("ALL").unwrap(), Suite::All);
    }
}
