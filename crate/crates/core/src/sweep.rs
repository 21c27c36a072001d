//! Conditioning sweeps over the number of segments, written as CSV.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::BasisKind;
use crate::conditioning::{
    kappa2_closed_form_c2, kappa2_lower_bound_monomial, kappa2_svd, MONOMIAL_CERTIFIED_MAX_D,
};
use crate::error::{Error, Result};
use crate::matrix::format_real;
use crate::segments::{ClassTag, Construction, Segment, SegmentFamily, Side};
use crate::vandermonde::{assemble, det_closed_form_c2, det_closed_form_c3, det_numeric};

/// Environment variable capping the number of sweep threads.
pub const THREADS_ENV: &str = "HISTOCOND_THREADS";

pub const CSV_HEADER: [&str; 8] = [
    "d",
    "kappa2",
    "kappaF",
    "det_numeric",
    "det_closed",
    "bound_lower",
    "kappa2_closed",
    "saturated",
];

/// A segment family parametrized by `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    /// `d` chained segments of equal length on `[a, b]`.
    Equidistributed { a: f64, b: f64 },
    /// Chebyshev arcs with `ρ = a/d`.
    Chebyshev { a: f64 },
    /// Chebyshev arcs with a fixed `ρ`.
    ChebyshevFixed { rho: f64 },
    /// `[α, α + k·step]`, `k = 1..d`.
    SharedEndpoint { alpha: f64, step: f64 },
    /// `[0, length] + ξ_k` with `ξ` equispaced in `[xi_min, xi_max]`.
    Translates { length: f64, xi_min: f64, xi_max: f64 },
    /// `[−k, k]`, `k = 1..d`.
    Counterexample,
}

impl FamilySpec {
    pub fn build(&self, d: usize) -> Result<SegmentFamily> {
        match *self {
            FamilySpec::Equidistributed { a, b } => SegmentFamily::equidistributed(a, b, d),
            FamilySpec::Chebyshev { a } => {
                if d == 0 {
                    return Err(Error::invalid("number of segments must be positive"));
                }
                SegmentFamily::chebyshev(d, a / d as f64)
            }
            FamilySpec::ChebyshevFixed { rho } => SegmentFamily::chebyshev(d, rho),
            FamilySpec::SharedEndpoint { alpha, step } => {
                let betas: Vec<f64> = (1..=d).map(|k| alpha + step * k as f64).collect();
                let side = if step > 0.0 { Side::Left } else { Side::Right };
                let mut betas = betas;
                if side == Side::Right {
                    betas.reverse();
                }
                SegmentFamily::shared_endpoint(alpha, &betas, side)
            }
            FamilySpec::Translates {
                length,
                xi_min,
                xi_max,
            } => {
                let xis: Vec<f64> = match d {
                    0 => vec![],
                    1 => vec![xi_min],
                    _ => {
                        let h = (xi_max - xi_min) / (d - 1) as f64;
                        (0..d).map(|k| xi_min + h * k as f64).collect()
                    }
                };
                SegmentFamily::translates(Segment::new(0.0, length)?, &xis)
            }
            FamilySpec::Counterexample => SegmentFamily::symmetric_counterexample(d),
        }
    }
}

/// Column groups a sweep may compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Output {
    #[serde(rename = "kappa2")]
    Kappa2,
    #[serde(rename = "kappaF")]
    KappaF,
    #[serde(rename = "det")]
    Det,
    #[serde(rename = "bounds")]
    Bounds,
}

impl Output {
    pub const ALL: [Output; 4] = [Output::Kappa2, Output::KappaF, Output::Det, Output::Bounds];
}

impl std::str::FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa2" => Ok(Output::Kappa2),
            "kappaF" | "kappaf" => Ok(Output::KappaF),
            "det" => Ok(Output::Det),
            "bounds" => Ok(Output::Bounds),
            _ => Err(Error::invalid(format!("unknown output column group '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: FamilySpec,
    pub basis: BasisKind,
    pub d_min: usize,
    pub d_max: usize,
    #[serde(default = "one")]
    pub stride: usize,
    #[serde(default = "all_outputs")]
    pub outputs: BTreeSet<Output>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Requested worker threads; `0` means one per core. Always capped by
    /// `HISTOCOND_THREADS` when set.
    #[serde(default = "one")]
    pub threads: usize,
}

fn one() -> usize {
    1
}

fn all_outputs() -> BTreeSet<Output> {
    Output::ALL.into_iter().collect()
}

impl SweepConfig {
    pub fn new(family: FamilySpec, basis: BasisKind, d_min: usize, d_max: usize) -> Self {
        SweepConfig {
            family,
            basis,
            d_min,
            d_max,
            stride: 1,
            outputs: all_outputs(),
            output_path: None,
            threads: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_min == 0 {
            return Err(Error::invalid("d_min must be at least 1"));
        }
        if self.d_min > self.d_max {
            return Err(Error::invalid(format!(
                "empty d range {}..={}",
                self.d_min, self.d_max
            )));
        }
        if self.stride == 0 {
            return Err(Error::invalid("stride must be positive"));
        }
        if self.outputs.is_empty() {
            return Err(Error::invalid("no output columns selected"));
        }
        Ok(())
    }

    pub fn d_values(&self) -> Vec<usize> {
        (self.d_min..=self.d_max).step_by(self.stride.max(1)).collect()
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

/// One line of the sweep output. Columns not requested are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub kappa2: Option<f64>,
    #[serde(rename = "kappaF")]
    pub kappa_f: Option<f64>,
    pub det_numeric: Option<f64>,
    pub det_closed: Option<f64>,
    pub bound_lower: Option<f64>,
    pub kappa2_closed: Option<f64>,
    pub saturated: bool,
}

impl SweepRow {
    fn csv_record(&self) -> [String; 8] {
        let cell = |x: Option<f64>| x.map(format_real).unwrap_or_default();
        [
            self.d.to_string(),
            cell(self.kappa2),
            cell(self.kappa_f),
            cell(self.det_numeric),
            cell(self.det_closed),
            cell(self.bound_lower),
            cell(self.kappa2_closed),
            self.saturated.to_string(),
        ]
    }
}

/// A `d` whose row could not be produced.
#[derive(Clone, Debug, PartialEq)]
pub struct RowError {
    pub d: usize,
    pub error: Error,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "d = {}: {}", self.d, self.error)
    }
}

/// Computes one row per `d`; rows that fail carry their error instead.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<Result<SweepRow, RowError>>> {
    cfg.validate()?;
    let ds = cfg.d_values();
    let threads = effective_threads(cfg.threads, std::env::var(THREADS_ENV).ok().as_deref());
    let rows: Vec<Result<SweepRow, RowError>> = if threads == 1 {
        ds.iter().map(|&d| sweep_row(cfg, d)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?;
        pool.install(|| ds.par_iter().map(|&d| sweep_row(cfg, d)).collect())
    };
    if let Some(path) = &cfg.output_path {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::invalid(format!("cannot create {}: {e}", path.display())))?;
        write_csv(file, &rows)?;
    }
    Ok(rows)
}

/// Thread count after applying the environment cap. An unparsable or zero
/// cap is ignored.
pub fn effective_threads(requested: usize, env_cap: Option<&str>) -> usize {
    let requested = if requested == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        requested
    };
    match env_cap.and_then(|s| s.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => requested.min(cap),
        _ => requested,
    }
}

fn sweep_row(cfg: &SweepConfig, d: usize) -> Result<SweepRow, RowError> {
    compute_row(cfg, d).map_err(|error| RowError { d, error })
}

fn compute_row(cfg: &SweepConfig, d: usize) -> Result<SweepRow> {
    let family = cfg.family.build(d)?;
    let v = assemble(&family, cfg.basis);
    let mut row = SweepRow {
        d,
        kappa2: None,
        kappa_f: None,
        det_numeric: None,
        det_closed: None,
        bound_lower: None,
        kappa2_closed: None,
        saturated: cfg.basis == BasisKind::Monomial && d > MONOMIAL_CERTIFIED_MAX_D,
    };
    if cfg.wants(Output::Kappa2) || cfg.wants(Output::KappaF) {
        let report = kappa2_svd(&v)?;
        if cfg.wants(Output::Kappa2) {
            row.kappa2 = Some(report.kappa2);
        }
        if cfg.wants(Output::KappaF) {
            row.kappa_f = Some(report.kappa_f);
        }
    }
    if cfg.wants(Output::Det) {
        row.det_numeric = Some(det_numeric(&v)?);
        row.det_closed = closed_determinant(&family, cfg.basis);
    }
    if cfg.wants(Output::Bounds) {
        if cfg.basis == BasisKind::Monomial {
            row.bound_lower = Some(kappa2_lower_bound_monomial(family.max_length(), d, true));
        }
        if let (ClassTag::C2, BasisKind::ChebyshevSecond, Some(rho)) =
            (family.class(), cfg.basis, family.rho())
        {
            row.kappa2_closed = kappa2_closed_form_c2(d, rho).ok();
        }
    }
    Ok(row)
}

fn closed_determinant(family: &SegmentFamily, basis: BasisKind) -> Option<f64> {
    match (family.class(), basis, family.construction()) {
        (ClassTag::C3Left, BasisKind::Monomial, Construction::SharedEndpoint { endpoint }) => {
            let betas: Vec<f64> = family.iter().map(|s| s.beta()).collect();
            det_closed_form_c3(*endpoint, &betas).ok()
        }
        (ClassTag::C2, BasisKind::ChebyshevSecond, Construction::Chebyshev { rho }) => {
            det_closed_form_c2(family.len(), *rho).ok()
        }
        _ => None,
    }
}

/// Writes the header and the successful rows in order.
pub fn write_csv<W: Write>(out: W, rows: &[Result<SweepRow, RowError>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::NumericalFailure(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows.iter().flatten() {
        w.write_record(row.csv_record()).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::NumericalFailure(format!("csv: {e}")))?;
    Ok(())
}

pub fn csv_string(rows: &[Result<SweepRow, RowError>]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    String::from_utf8(buf).map_err(|e| Error::NumericalFailure(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn ok_rows(cfg: &SweepConfig) -> Vec<SweepRow> {
        run_sweep(cfg).unwrap().into_iter().map(|r| r.unwrap()).collect()
    }

    #[test]
    fn header_and_determinism() {
        let mut cfg = SweepConfig::new(FamilySpec::Chebyshev { a: FRAC_PI_2 }, BasisKind::ChebyshevSecond, 2, 20);
        let a = csv_string(&run_sweep(&cfg).unwrap()).unwrap();
        cfg.threads = 4;
        let b = csv_string(&run_sweep(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.lines().next().unwrap(),
            "d,kappa2,kappaF,det_numeric,det_closed,bound_lower,kappa2_closed,saturated"
        );
        assert_eq!(a.lines().count(), 20);
    }

    #[test]
    fn bounded_chebyshev_kappa() {
        let cfg = SweepConfig::new(FamilySpec::Chebyshev { a: FRAC_PI_2 }, BasisKind::ChebyshevSecond, 3, 100);
        let rows = ok_rows(&cfg);
        for w in rows.windows(2) {
            assert!(w[1].kappa2.unwrap() >= w[0].kappa2.unwrap() - 1e-12);
        }
        let last = rows.last().unwrap().kappa2.unwrap();
        assert!((1.50..=FRAC_PI_2 + 1e-9).contains(&last));
    }

    #[test]
    fn monomial_rows_respect_bound_and_saturate() {
        let cfg = SweepConfig::new(FamilySpec::Equidistributed { a: -1.0, b: 1.0 }, BasisKind::Monomial, 4, 16);
        for row in ok_rows(&cfg) {
            assert!(row.kappa2.unwrap() >= row.bound_lower.unwrap());
            assert_eq!(row.saturated, row.d > 14);
            assert_eq!(row.det_closed, None);
        }
    }

    #[test]
    fn chebyshev_segments_beat_chains_in_monomials() {
        let c2 = SweepConfig::new(FamilySpec::Chebyshev { a: FRAC_PI_2 }, BasisKind::Monomial, 4, 12);
        let c1 = SweepConfig::new(FamilySpec::Equidistributed { a: -1.0, b: 1.0 }, BasisKind::Monomial, 4, 12);
        for (r2, r1) in ok_rows(&c2).iter().zip(ok_rows(&c1)) {
            assert!(r2.kappa2.unwrap() <= r1.kappa2.unwrap());
        }
    }

    #[test]
    fn c3_closed_determinant_column() {
        let cfg = SweepConfig::new(FamilySpec::SharedEndpoint { alpha: 0.0, step: 1.0 }, BasisKind::Monomial, 1, 6);
        let rows = ok_rows(&cfg);
        // det = ∏_{i<d} i!
        assert_eq!(rows[4].det_closed, Some(288.0));
        for r in rows {
            let (n, c) = (r.det_numeric.unwrap(), r.det_closed.unwrap());
            assert!((n - c).abs() <= 1e-10 * c.abs());
        }
    }

    #[test]
    fn failing_rows_are_reported_not_fatal() {
        let cfg = SweepConfig::new(FamilySpec::ChebyshevFixed { rho: 0.4 }, BasisKind::ChebyshevSecond, 2, 12);
        let rows = run_sweep(&cfg).unwrap();
        assert!(rows.iter().any(|r| r.is_err()));
        assert!(rows.iter().any(|r| r.is_ok()));
        let text = csv_string(&rows).unwrap();
        assert_eq!(text.lines().count(), 1 + rows.iter().filter(|r| r.is_ok()).count());
    }

    #[test]
    fn counterexample_rows_are_singular() {
        let cfg = SweepConfig::new(FamilySpec::Counterexample, BasisKind::Monomial, 3, 8);
        for r in ok_rows(&cfg) {
            assert_eq!(r.det_numeric, Some(0.0));
            assert_eq!(r.kappa2, Some(f64::INFINITY));
        }
        let text = csv_string(&run_sweep(&cfg).unwrap()).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("3,inf,inf,0,"));
    }

    #[test]
    fn config_json_and_thread_cap() {
        let cfg: SweepConfig = serde_json::from_str(
            r#"{"family":{"kind":"translates","length":0.5,"xi_min":-1,"xi_max":0.5},
                "basis":"monomial","d_min":4,"d_max":14,"outputs":["kappa2","bounds"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.stride, 1);
        let row = &ok_rows(&cfg)[0];
        assert!(row.kappa_f.is_none() && row.kappa2.is_some());
        assert!(serde_json::from_str::<SweepConfig>(r#"{"family":{"kind":"x"},"basis":"monomial","d_min":1,"d_max":2}"#).is_err());

        assert_eq!(effective_threads(8, Some("2")), 2);
        assert_eq!(effective_threads(1, Some("16")), 1);
        assert_eq!(effective_threads(3, Some("zero")), 3);
        assert_eq!(effective_threads(3, None), 3);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = SweepConfig::new(FamilySpec::Counterexample, BasisKind::Monomial, 5, 4);
        assert!(run_sweep(&cfg).is_err());
        cfg.d_max = 6;
        cfg.stride = 0;
        assert!(run_sweep(&cfg).is_err());
        cfg.stride = 1;
        cfg.outputs.clear();
        assert!(run_sweep(&cfg).is_err());
    }
}
