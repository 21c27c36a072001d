//! Command-line front end.
//!
//! Every subcommand accepts `--config FILE`, a flat JSON object keyed by the
//! long flag names in snake_case. Flags given on the command line override
//! values from the file.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bases::{eval_series, BasisKind};
use crate::conditioning::kappa2_svd;
use crate::error::{Error, Result};
use crate::fekete::fekete_c3_search;
use crate::histofit::{fit_with, FitOptions, DEFAULT_QUAD_ORDER};
use crate::matrix::format_real;
use crate::segments::SegmentFamily;
use crate::sweep::{run_sweep, write_csv, FamilySpec, Output, SweepConfig};
use crate::vandermonde::{assemble, assemble_normalized, det_numeric, gram, DEFAULT_CONDITION_CAP};
use crate::verify::{integral_with_sign_bug, verify_with, VerifyOptions};

#[derive(Parser, Debug)]
#[command(name = "histocond", version, about = "Segmental histopolation and Vandermonde conditioning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Assemble a segmental Vandermonde (or Gram) matrix and dump it.
    Assemble(Configured<AssembleArgs>),
    /// Condition numbers and determinants over a range of d, as CSV.
    CondSweep(Configured<SweepArgs>),
    /// Histopolate a named function on a segment family.
    Histofit(Configured<HistofitArgs>),
    /// Grid search for the Fekete endpoints of a shared-endpoint family.
    FeketeSearch(Configured<FeketeArgs>),
    /// Run the self-check suite.
    Verify(Configured<VerifyArgs>),
}

#[derive(Args, Debug)]
pub struct Configured<T: Args> {
    /// JSON config file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub args: T,
}

/// Family given as a JSON file or as a parametrized construction.
#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyArgs {
    /// SegmentFamily JSON file.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// equidistributed, chebyshev, chebyshev-fixed, shared-endpoint, translates or counterexample.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub step: Option<f64>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi_max: Option<f64>,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AssembleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub basis: Option<BasisKind>,
    /// Divide rows by segment lengths.
    #[arg(long, num_args = 0, default_missing_value = "true")]
    pub normalized: Option<bool>,
    /// Dump VᵀV instead of V.
    #[arg(long, num_args = 0, default_missing_value = "true")]
    pub gram: Option<bool>,
    /// Print det and condition numbers to stderr.
    #[arg(long, num_args = 0, default_missing_value = "true")]
    pub stats: Option<bool>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub basis: Option<BasisKind>,
    #[arg(long)]
    pub d_min: Option<usize>,
    #[arg(long)]
    pub d_max: Option<usize>,
    #[arg(long)]
    pub stride: Option<usize>,
    /// Comma-separated subset of kappa2,kappaF,det,bounds.
    #[arg(long)]
    pub outputs: Option<String>,
    /// Worker threads (0 = one per core); capped by HISTOCOND_THREADS.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HistofitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub basis: Option<BasisKind>,
    /// exp, sin, cos, runge, abs or poly:c0,c1,...
    #[arg(long, allow_hyphen_values = true)]
    pub function: Option<String>,
    #[arg(long)]
    pub quad_order: Option<usize>,
    #[arg(long)]
    pub cond_cap: Option<f64>,
    /// Also report the fit on this many equispaced points of the hull.
    #[arg(long)]
    pub eval_points: Option<usize>,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeketeArgs {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub grid_n: Option<usize>,
}

#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyArgs {
    /// Print the JSON report instead of the summary.
    #[arg(long, num_args = 0, default_missing_value = "true")]
    pub json: Option<bool>,
    /// Run with a deliberately wrong second-kind integral.
    #[arg(long, num_args = 0, default_missing_value = "true", hide = true)]
    pub inject_sign_bug: Option<bool>,
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("histocond: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<i32> {
    match command {
        Command::Assemble(c) => cmd_assemble(merged(&c.args, c.config.as_deref())?),
        Command::CondSweep(c) => cmd_sweep(merged(&c.args, c.config.as_deref())?),
        Command::Histofit(c) => cmd_histofit(merged(&c.args, c.config.as_deref())?),
        Command::FeketeSearch(c) => cmd_fekete(merged(&c.args, c.config.as_deref())?),
        Command::Verify(c) => cmd_verify(merged(&c.args, c.config.as_deref())?),
    }
}

/// Overlays the non-null flag values on the config file.
pub fn merged<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Path>) -> Result<T> {
    let Some(path) = config else {
        return serde_json::from_value(to_value(flags)?).map_err(bad_config);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut base: Value = serde_json::from_str(&text).map_err(bad_config)?;
    let Value::Object(base_map) = &mut base else {
        return Err(Error::invalid("config file must hold a JSON object"));
    };
    if let Value::Object(over) = to_value(flags)? {
        for (k, v) in over {
            if !v.is_null() {
                base_map.insert(k, v);
            }
        }
    }
    serde_json::from_value(base).map_err(bad_config)
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::invalid(e.to_string()))
}

fn bad_config(e: serde_json::Error) -> Error {
    Error::invalid(format!("config: {e}"))
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::invalid(format!("missing --{flag}")))
}

impl FamilyArgs {
    pub fn spec(&self) -> Result<FamilySpec> {
        let kind = need(self.kind.as_deref(), "kind (or --family FILE)")?;
        Ok(match kind {
            "equidistributed" | "c1" => FamilySpec::Equidistributed {
                a: self.a.unwrap_or(-1.0),
                b: self.b.unwrap_or(1.0),
            },
            "chebyshev" | "c2" => FamilySpec::Chebyshev { a: need(self.a, "a")? },
            "chebyshev-fixed" => FamilySpec::ChebyshevFixed { rho: need(self.rho, "rho")? },
            "shared-endpoint" | "c3" => FamilySpec::SharedEndpoint {
                alpha: need(self.alpha, "alpha")?,
                step: need(self.step, "step")?,
            },
            "translates" | "c4" => FamilySpec::Translates {
                length: need(self.length, "length")?,
                xi_min: need(self.xi_min, "xi-min")?,
                xi_max: need(self.xi_max, "xi-max")?,
            },
            "counterexample" => FamilySpec::Counterexample,
            other => return Err(Error::invalid(format!("unknown family kind '{other}'"))),
        })
    }

    pub fn build(&self, d: Option<usize>) -> Result<SegmentFamily> {
        if let Some(path) = &self.family {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
            let family: SegmentFamily =
                serde_json::from_str(&text).map_err(|e| Error::invalid(format!("family file: {e}")))?;
            if let Some(d) = d {
                if d != family.len() {
                    return Err(Error::invalid(format!("--d {d} disagrees with family of {} segments", family.len())));
                }
            }
            return Ok(family);
        }
        self.spec()?.build(need(d, "d")?)
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::NumericalFailure(format!("stdout: {e}")))
        }
    }
}

fn cmd_assemble(a: AssembleArgs) -> Result<i32> {
    let family = a.family.build(a.d)?;
    let kind = a.basis.unwrap_or(BasisKind::Monomial);
    let v = if a.normalized.unwrap_or(false) {
        assemble_normalized(&family, kind)
    } else {
        assemble(&family, kind)
    };
    if !v.all_finite() {
        return Err(Error::NumericalFailure("assembled matrix has non-finite entries".into()));
    }
    let out = if a.gram.unwrap_or(false) { gram(&v) } else { v.clone() };
    write_out(a.output.as_deref(), &out.to_dump())?;
    if a.stats.unwrap_or(false) {
        let r = kappa2_svd(&v)?;
        eprintln!(
            "det={} kappa2={} kappaF={}",
            format_real(det_numeric(&v)?),
            format_real(r.kappa2),
            format_real(r.kappa_f)
        );
    }
    Ok(0)
}

fn cmd_sweep(a: SweepArgs) -> Result<i32> {
    if a.family.family.is_some() {
        return Err(Error::invalid("cond-sweep needs a parametrized family (--kind)"));
    }
    let mut cfg = SweepConfig::new(
        a.family.spec()?,
        a.basis.unwrap_or(BasisKind::Monomial),
        need(a.d_min, "d-min")?,
        need(a.d_max, "d-max")?,
    );
    cfg.stride = a.stride.unwrap_or(1);
    cfg.threads = a.threads.unwrap_or(1);
    if let Some(list) = &a.outputs {
        cfg.outputs = list
            .split(',')
            .map(|s| s.trim().parse::<Output>())
            .collect::<Result<_>>()?;
    }
    let rows = run_sweep(&cfg)?;
    for e in rows.iter().filter_map(|r| r.as_ref().err()) {
        eprintln!("histocond: skipped {e}");
    }
    match &a.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| Error::invalid(format!("cannot create {}: {e}", path.display())))?;
            write_csv(file, &rows)?;
        }
        None => write_csv(std::io::stdout().lock(), &rows)?,
    }
    if let Some(Err(first)) = rows.iter().find(|r| r.is_err()).filter(|_| rows.iter().all(|r| r.is_err())) {
        return Ok(first.error.exit_code());
    }
    Ok(0)
}

/// Resolves a function name: `exp`, `sin`, `cos`, `runge`, `abs` or
/// `poly:c0,c1,...` (monomial coefficients).
pub fn named_function(name: &str) -> Result<Box<dyn Fn(f64) -> f64>> {
    Ok(match name {
        "exp" => Box::new(f64::exp),
        "sin" => Box::new(f64::sin),
        "cos" => Box::new(f64::cos),
        "runge" => Box::new(|x: f64| 1.0 / (1.0 + 25.0 * x * x)),
        "abs" => Box::new(f64::abs),
        _ => {
            let Some(list) = name.strip_prefix("poly:") else {
                return Err(Error::invalid(format!("unknown function '{name}'")));
            };
            let coeffs = list
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| Error::invalid(format!("bad coefficient '{c}'"))))
                .collect::<Result<Vec<f64>>>()?;
            Box::new(move |x| eval_series(BasisKind::Monomial, &coeffs, x))
        }
    })
}

fn cmd_histofit(a: HistofitArgs) -> Result<i32> {
    let family = a.family.build(a.d)?;
    let f = named_function(&need(a.function, "function")?)?;
    let opts = FitOptions {
        quad_order: a.quad_order.unwrap_or(DEFAULT_QUAD_ORDER),
        condition_cap: a.cond_cap.unwrap_or(DEFAULT_CONDITION_CAP),
    };
    let r = fit_with(&f, &family, a.basis.unwrap_or(BasisKind::ChebyshevSecond), opts)?;
    let mut out = json!({
        "kind": r.kind,
        "coeffs": r.coeffs,
        "residual_max": r.residual_max,
        "cond_estimate": format_real(r.cond_estimate),
        "family": r.family,
    });
    if let Some(n) = a.eval_points.filter(|&n| n >= 2) {
        let (lo, hi) = family.hull();
        let pts: Vec<Value> = (0..n)
            .map(|k| {
                let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                json!([x, r.eval(x), f(x)])
            })
            .collect();
        out["samples"] = Value::Array(pts);
    }
    write_out(None, &format!("{}\n", serde_json::to_string_pretty(&out).unwrap_or_default()))?;
    Ok(0)
}

fn cmd_fekete(a: FeketeArgs) -> Result<i32> {
    let r = fekete_c3_search(need(a.d, "d")?, a.alpha.unwrap_or(-1.0), a.grid_n.unwrap_or(201))?;
    write_out(None, &format!("{}\n", serde_json::to_string_pretty(&r).unwrap_or_default()))?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<i32> {
    let mut opts = VerifyOptions::default();
    if a.inject_sign_bug.unwrap_or(false) {
        opts.integral = integral_with_sign_bug;
    }
    let report = verify_with(&opts);
    if a.json.unwrap_or(false) {
        write_out(None, &format!("{}\n", report.to_json()))?;
    } else {
        write_out(None, &report.summary())?;
    }
    Ok(report.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"kind":"chebyshev","a":0.5,"d_min":3,"d_max":9}"#).unwrap();
        let flags = SweepArgs {
            d_max: Some(5),
            ..Default::default()
        };
        let m = merged(&flags, Some(&path)).unwrap();
        assert_eq!(m.d_min, Some(3));
        assert_eq!(m.d_max, Some(5));
        assert_eq!(m.family.a, Some(0.5));

        std::fs::write(&path, r#"{"kind":"chebyshev","bogus":1}"#).unwrap();
        assert!(merged(&flags, Some(&path)).is_err());
    }

    #[test]
    fn function_names() {
        assert_eq!(named_function("poly:1,0,2").unwrap()(2.0), 9.0);
        assert_eq!(named_function("abs").unwrap()(-3.0), 3.0);
        assert!(named_function("tan").is_err());
        assert!(named_function("poly:1,x").is_err());
    }

    #[test]
    fn parse_errors_exit_one() {
        assert_eq!(main_with_args(["histocond", "nonsense"]), 1);
        assert_eq!(main_with_args(["histocond", "fekete-search", "--d", "9"]), 1);
    }
}
