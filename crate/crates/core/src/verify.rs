//! Self-check suite: every invariant group is recomputed from scratch and
//! reported as pass/fail, together with informational measurements.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bases::{chebyshev_t, eval_series, integral_basis, BasisKind};
use crate::conditioning::{
    frob_norm_limit_c2, kappa2_closed_form_c2, kappa2_lower_bound_monomial, kappa2_svd, kappa_f,
    sin_product,
};
use crate::error::Result;
use crate::fekete::fekete_c3_search;
use crate::histofit::{fit, DEFAULT_QUAD_ORDER};
use crate::matrix::DenseMatrix;
use crate::quadrature::GaussRule;
use crate::rational::ratio;
use crate::segments::{Segment, SegmentFamily, Side};
use crate::vandermonde::{
    assemble_with, det_closed_form_c2, det_closed_form_c3_exact, det_exact_rational_c3,
    det_numeric, gram, gram_diagonal_formula, inverse_c2_gram, IntegralFn,
};

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Segment integrals used for every assembled matrix.
    pub integral: IntegralFn,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            integral: integral_basis,
            seed: 20_240_601,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub measurements: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub groups: Vec<GroupResult>,
    /// Measurements reported without a verdict.
    pub informational: Value,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.groups.iter().all(|g| g.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.groups.iter().filter(|g| !g.passed).map(|g| g.name).collect()
    }

    /// `0` when every group passes, `3` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() { 0 } else { 3 }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for g in &self.groups {
            let tag = if g.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag}  {:<24} {}", g.name, g.detail);
        }
        if let Some(ratios) = self.informational.get("wdd_ratio").and_then(Value::as_array) {
            let shown: Vec<String> = ratios
                .iter()
                .filter_map(|r| Some(format!("{}:{:.6}", r.get("d")?, r.get("ratio")?.as_f64()?)))
                .collect();
            let _ = writeln!(s, "INFO  W_dd / 2d sin^2(d rho)/d^2: {}", shown.join(" "));
        }
        if let Some(rows) = self.informational.get("kappa2_small_d").and_then(Value::as_array) {
            for r in rows {
                let _ = writeln!(
                    s,
                    "INFO  d = {}: kappa2 svd {} vs simplified formula {}",
                    r["d"], r["svd"], r["formula"]
                );
            }
        }
        let _ = writeln!(s, "{} of {} groups passed", self.groups.iter().filter(|g| g.passed).count(), self.groups.len());
        s
    }
}

type Check = fn(&VerifyOptions) -> Result<(bool, String, Value)>;

pub fn verify_all() -> VerifyReport {
    verify_with(&VerifyOptions::default())
}

pub fn verify_with(opts: &VerifyOptions) -> VerifyReport {
    let checks: [(&'static str, Check); 11] = [
        ("c3-determinant", c3_determinant),
        ("counterexample-singular", counterexample_singular),
        ("gram-orthogonality", gram_orthogonality),
        ("bounded-kappa2", bounded_kappa2),
        ("monomial-exponential", monomial_exponential),
        ("frobenius-limit", frobenius_limit),
        ("linear-kappaF", linear_kappa_f),
        ("inverse-correctness", inverse_correctness),
        ("histopolation-exactness", histopolation_exactness),
        ("trig-identity", trig_identity),
        ("fekete-c3", fekete_c3),
    ];
    let groups = checks
        .iter()
        .map(|&(name, check)| match check(opts) {
            Ok((passed, detail, measurements)) => GroupResult {
                name,
                passed,
                detail,
                measurements,
            },
            Err(e) => GroupResult {
                name,
                passed: false,
                detail: format!("error: {e}"),
                measurements: Value::Null,
            },
        })
        .collect();
    VerifyReport {
        groups,
        informational: discrepancies(opts),
    }
}

/// `(T_j(β) + T_j(α))/j` for the second-kind basis: a sign error that keeps
/// the matrix well defined but destroys orthogonality.
pub fn integral_with_sign_bug(kind: BasisKind, j: usize, alpha: f64, beta: f64) -> f64 {
    match kind {
        BasisKind::ChebyshevSecond => (chebyshev_t(j, beta) + chebyshev_t(j, alpha)) / j as f64,
        _ => integral_basis(kind, j, alpha, beta),
    }
}

fn c2(opts: &VerifyOptions, d: usize, rho: f64, kind: BasisKind) -> Result<DenseMatrix> {
    Ok(assemble_with(&SegmentFamily::chebyshev(d, rho)?, kind, opts.integral))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c3_determinant(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let betas: Vec<f64> = (1..=5).map(f64::from).collect();
    let exact_betas: Vec<_> = (1..=5).map(|b| ratio(b, 1)).collect();
    let exact = det_exact_rational_c3(&ratio(0, 1), &exact_betas)?;
    let closed = det_closed_form_c3_exact(&ratio(0, 1), &exact_betas)?;
    let family = SegmentFamily::shared_endpoint(0.0, &betas, Side::Left)?;
    let numeric = det_numeric(&assemble_with(&family, BasisKind::Monomial, opts.integral))?;
    let ok_exact = exact == ratio(288, 1) && closed == exact;
    let err = rel(numeric, 288.0);
    Ok((
        ok_exact && err <= 1e-10,
        format!("exact det {exact}, float rel. error {err:.2e}"),
        json!({"exact": exact.to_string(), "numeric": numeric, "rel_error": err}),
    ))
}

fn counterexample_singular(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut rows = Vec::new();
    for d in 3..=8 {
        let v = assemble_with(&SegmentFamily::symmetric_counterexample(d)?, BasisKind::Monomial, opts.integral);
        let det = det_numeric(&v)?;
        let k = kappa2_svd(&v)?.kappa2;
        ok &= det == 0.0 && v.zero_column().is_some() && k.is_infinite();
        rows.push(json!({"d": d, "det": det, "kappa2": crate::matrix::format_real(k)}));
    }
    Ok((ok, "d = 3..8 exactly singular".into(), Value::Array(rows)))
}

fn gram_orthogonality(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let mut worst_off = 0.0f64;
    let mut worst_diag = 0.0f64;
    for d in [8, 64, 200] {
        for a in [FRAC_PI_8, FRAC_PI_4, FRAC_PI_2] {
            let rho = a / d as f64;
            let w = gram(&c2(opts, d, rho, BasisKind::ChebyshevSecond)?);
            let diag = w.diag();
            let max_diag = diag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            worst_off = worst_off.max(w.max_off_diagonal() / max_diag);
            for i in 1..d {
                worst_diag = worst_diag.max(rel(diag[i - 1], gram_diagonal_formula(d, rho, i)));
            }
        }
    }
    Ok((
        worst_off <= 1e-12 && worst_diag <= 1e-12,
        format!("off-diagonal {worst_off:.2e}, diagonal rel. error {worst_diag:.2e}"),
        json!({"off_diagonal": worst_off, "diagonal_rel_error": worst_diag}),
    ))
}

fn bounded_kappa2(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let ds: Vec<usize> = (3..=100).collect();
    let mut kappas = Vec::with_capacity(ds.len());
    for &d in &ds {
        kappas.push(kappa2_svd(&c2(opts, d, FRAC_PI_2 / d as f64, BasisKind::ChebyshevSecond)?)?.kappa2);
    }
    let monotone = kappas.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let last = *kappas.last().unwrap_or(&f64::NAN);
    // least squares for |κ₂ − π/2| ≈ C/d
    let (num, den) = ds.iter().zip(&kappas).fold((0.0, 0.0), |(n, m), (&d, k)| {
        let x = 1.0 / d as f64;
        (n + x * (k - FRAC_PI_2).abs(), m + x * x)
    });
    let c = num / den;
    let ok = monotone && (1.50..=FRAC_PI_2 + 1e-9).contains(&last) && c < 10.0;
    Ok((
        ok,
        format!("monotone {monotone}, kappa2(100) = {last:.12}, C = {c:.4}"),
        json!({"monotone": monotone, "kappa2_100": last, "fitted_c": c}),
    ))
}

fn monomial_exponential(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut out = serde_json::Map::new();
    type Build = fn(usize) -> Result<SegmentFamily>;
    let families: [(&str, Build); 2] = [
        ("C1", |d| SegmentFamily::equidistributed(-1.0, 1.0, d)),
        ("C4", |d| {
            let h = 1.5 / (d - 1) as f64;
            let xis: Vec<f64> = (0..d).map(|k| -1.0 + h * k as f64).collect();
            SegmentFamily::translates(Segment::new(0.0, 0.5)?, &xis)
        }),
    ];
    let mut detail = String::new();
    for (name, build) in families {
        let mut logs = Vec::new();
        let mut bound_ok = true;
        for d in 4..=14 {
            let family = build(d)?;
            let k = kappa2_svd(&assemble_with(&family, BasisKind::Monomial, opts.integral))?.kappa2;
            bound_ok &= k >= kappa2_lower_bound_monomial(family.max_length(), d, true);
            logs.push(k.log2());
        }
        let slope = (logs[logs.len() - 1] - logs[0]) / (logs.len() - 1) as f64;
        ok &= bound_ok && slope >= 0.8;
        let _ = write!(detail, "{name}: bound {bound_ok}, slope {slope:.3}; ");
        out.insert(name.into(), json!({"bound_holds": bound_ok, "log2_slope": slope}));
    }
    Ok((ok, detail.trim_end_matches("; ").into(), Value::Object(out)))
}

fn frobenius_limit(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let norm = c2(opts, 500, FRAC_PI_2 / 500.0, BasisKind::ChebyshevSecond)?.frobenius_norm();
    let limit = frob_norm_limit_c2(FRAC_PI_2)?;
    let ok = (norm - limit).abs() <= 5e-3 && norm <= 2.0;
    Ok((
        ok,
        format!("|V_500|_F = {norm:.6}, limit {limit:.6}"),
        json!({"norm": norm, "limit": limit}),
    ))
}

fn linear_kappa_f(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let mut ok = true;
    let mut ratios = Vec::new();
    let mut rows = Vec::new();
    for d in [50, 100, 200] {
        let v = c2(opts, d, FRAC_PI_2 / d as f64, BasisKind::ChebyshevSecond)?;
        let nf = v.frobenius_norm();
        let r = kappa_f(&v) / d as f64;
        let (lo, hi) = (nf * 0.9 / 6f64.sqrt(), nf * 1.1 * 2f64.sqrt() / PI);
        ok &= (lo..=hi).contains(&r);
        ratios.push(r);
        rows.push(json!({"d": d, "kappaF_over_d": r, "window": [lo, hi]}));
    }
    let (mn, mx) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    let spread = (mx - mn) / mn;
    ok &= spread < 0.1;
    Ok((
        ok,
        format!(
            "kappaF/d = {:.4} {:.4} {:.4}, spread {:.2}%",
            ratios[0],
            ratios[1],
            ratios[2],
            100.0 * spread
        ),
        json!({"rows": rows, "spread": spread}),
    ))
}

fn inverse_correctness(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let mut worst_inv = 0.0f64;
    let mut worst_delta = 0.0f64;
    let rule = GaussRule::new(40)?;
    for d in 1..=50 {
        let family = SegmentFamily::chebyshev(d, FRAC_PI_2 / d as f64)?;
        let v = assemble_with(&family, BasisKind::ChebyshevSecond, opts.integral);
        let inv = inverse_c2_gram(&v)?;
        worst_inv = worst_inv.max(v.matmul(&inv).max_abs_diff(&DenseMatrix::identity(d)));
        for j in 0..d {
            let coeffs = inv.column(j);
            for (i, s) in family.iter().enumerate() {
                let m = rule.integrate(|x| eval_series(BasisKind::ChebyshevSecond, &coeffs, x), s.alpha(), s.beta())?;
                let target = if i == j { 1.0 } else { 0.0 };
                worst_delta = worst_delta.max((m - target).abs());
            }
        }
    }
    Ok((
        worst_inv <= 1e-10 && worst_delta <= 1e-9,
        format!("|V V^-1 - I| = {worst_inv:.2e}, Lagrange delta error {worst_delta:.2e}"),
        json!({"inverse_error": worst_inv, "lagrange_error": worst_delta}),
    ))
}

fn histopolation_exactness(opts: &VerifyOptions) -> Result<(bool, String, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let grid: Vec<f64> = (0..1000).map(|k| -1.0 + 2.0 * k as f64 / 999.0).collect();
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let d = rng.random_range(1..=12usize);
        let degree = rng.random_range(0..d);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let family = if trial % 2 == 0 {
            SegmentFamily::chebyshev(d, rng.random_range(0.05..1.0) * FRAC_PI_2 / d as f64)?
        } else {
            SegmentFamily::equidistributed(-1.0, 1.0, d)?
        };
        let kind = BasisKind::ALL[trial % 3];
        let p = |x: f64| eval_series(BasisKind::Monomial, &coeffs, x);
        let r = fit(p, &family, kind, DEFAULT_QUAD_ORDER)?;
        for &x in &grid {
            worst = worst.max((r.eval(x) - p(x)).abs());
        }
    }
    Ok((
        worst <= 1e-8,
        format!("100 random polynomials, max error {worst:.2e}"),
        json!({"max_error": worst}),
    ))
}

fn trig_identity(_: &VerifyOptions) -> Result<(bool, String, Value)> {
    let worst = (2..=60)
        .map(|n| rel(sin_product(n), n as f64 / 2f64.powi(n as i32 - 1)))
        .fold(0.0f64, f64::max);
    Ok((
        worst <= 1e-10,
        format!("n = 2..60, max rel. error {worst:.2e}"),
        json!({"max_rel_error": worst}),
    ))
}

fn fekete_c3(_: &VerifyOptions) -> Result<(bool, String, Value)> {
    let r = fekete_c3_search(3, -1.0, 201)?;
    let ok = r
        .betas
        .iter()
        .zip([-1.0, 0.0, 1.0])
        .all(|(b, t)| (b - t).abs() <= r.grid_step + 1e-12);
    Ok((
        ok,
        format!("beta = {:?}, boundary attained {}", r.betas, r.attains_boundary),
        serde_json::to_value(&r).unwrap_or(Value::Null),
    ))
}

fn discrepancies(opts: &VerifyOptions) -> Value {
    let mut wdd = Vec::new();
    for d in 2..=8 {
        let rho = FRAC_PI_2 / d as f64;
        if let Ok(v) = c2(opts, d, rho, BasisKind::ChebyshevSecond) {
            let w = gram(&v);
            wdd.push(json!({"d": d, "ratio": w[(d - 1, d - 1)] / gram_diagonal_formula(d, rho, d)}));
        }
    }
    let mut kappas = Vec::new();
    for d in [2, 3] {
        let rho = FRAC_PI_2 / d as f64;
        let svd = c2(opts, d, rho, BasisKind::ChebyshevSecond)
            .and_then(|v| kappa2_svd(&v))
            .map(|r| r.kappa2)
            .unwrap_or(f64::NAN);
        let formula = kappa2_closed_form_c2(d, rho).unwrap_or(f64::NAN);
        kappas.push(json!({"d": d, "rho": rho, "svd": svd, "formula": formula}));
    }
    let mut dets = Vec::new();
    for d in [2, 4, 8] {
        let rho = FRAC_PI_2 / d as f64;
        let numeric = c2(opts, d, rho, BasisKind::ChebyshevSecond).and_then(|v| det_numeric(&v));
        if let (Ok(n), Ok(c)) = (numeric, det_closed_form_c2(d, rho)) {
            dets.push(json!({"d": d, "abs_det_over_formula": n.abs() / c}));
        }
    }
    json!({"wdd_ratio": wdd, "kappa2_small_d": kappas, "det_c2_ratio": dets})
}
