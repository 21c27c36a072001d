//! Spectral and Frobenius condition numbers, together with the closed-form
//! expressions, limits and bounds known for segmental Vandermonde matrices.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Largest `d` for which the monomial κ₂ is trusted in double precision.
pub const MONOMIAL_CERTIFIED_MAX_D: usize = 14;

/// Singular values and condition numbers of a square matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditioningReport {
    pub d: usize,
    pub kappa2: f64,
    #[serde(rename = "kappaF")]
    pub kappa_f: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub bound_lower_monomial: Option<f64>,
    pub closed_form_c2: Option<f64>,
    pub limit_value: Option<f64>,
}

impl ConditioningReport {
    pub fn with_monomial_bound(mut self, c: f64, conservative: bool) -> Self {
        self.bound_lower_monomial = Some(kappa2_lower_bound_monomial(c, self.d, conservative));
        self
    }

    /// Attaches the closed form `|d sin ρ / sin(dρ)|` (if defined) and, for
    /// `ρ = a/d`, the limit `a / sin a`.
    pub fn with_c2_formulas(mut self, rho: f64) -> Self {
        self.closed_form_c2 = kappa2_closed_form_c2(self.d, rho).ok();
        self.limit_value = Some(kappa2_limit_c2(rho * self.d as f64));
        self
    }

    pub fn is_singular(&self) -> bool {
        self.kappa2.is_infinite()
    }
}

/// κ₂ from the singular values; `+∞` when `σ_min < d·ε·σ_max`.
pub fn kappa2_svd(v: &DenseMatrix) -> Result<ConditioningReport> {
    if !v.is_square() {
        return Err(Error::invalid("condition numbers need a square matrix"));
    }
    let d = v.rows();
    let s = v.singular_values()?;
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let sigma_min = s.last().copied().unwrap_or(0.0);
    let singular = sigma_max == 0.0 || sigma_min < d as f64 * f64::EPSILON * sigma_max;
    let kappa2 = if singular { f64::INFINITY } else { sigma_max / sigma_min };
    let kappa_f = if singular { f64::INFINITY } else { kappa_f(v) };
    Ok(ConditioningReport {
        d,
        kappa2,
        kappa_f,
        sigma_max,
        sigma_min,
        bound_lower_monomial: None,
        closed_form_c2: None,
        limit_value: None,
    })
}

/// `‖V‖_F ‖V⁻¹‖_F`, `+∞` for singular input.
pub fn kappa_f(v: &DenseMatrix) -> f64 {
    match v.inverse() {
        Ok(inv) => v.frobenius_norm() * inv.frobenius_norm(),
        Err(_) => f64::INFINITY,
    }
}

/// `|d sin ρ / sin(dρ)|`, the simplified κ₂ expression for Chebyshev segments.
///
/// It assumes the smallest Gram entry is the last one; for `ρ = π/(2d)` the
/// minimum actually sits at `i = d − 1`, so small-`d` values differ from the
/// SVD (e.g. `√2` vs `1` at `d = 2`).
pub fn kappa2_closed_form_c2(d: usize, rho: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    let denom = (d as f64 * rho).sin();
    if denom.abs() < 1e-14 {
        return Err(Error::SingularFormula(format!("sin({d}·{rho}) vanishes")));
    }
    Ok((d as f64 * rho.sin() / denom).abs())
}

/// `|a / sin a|`, continuously extended by `1` at `a = 0`.
pub fn kappa2_limit_c2(a: f64) -> f64 {
    if a.abs() < 1e-8 {
        return 1.0 + a * a / 6.0;
    }
    (a / a.sin()).abs()
}

/// `(c/√d)·2^{d−2}`, or `(c/√d)·2^{d−3}` when `conservative`.
pub fn kappa2_lower_bound_monomial(c: f64, d: usize, conservative: bool) -> f64 {
    let exponent = d as i32 - if conservative { 3 } else { 2 };
    c / (d as f64).sqrt() * 2f64.powi(exponent)
}

/// Sine integral `Si(z) = ∫_0^z sin t / t dt`.
///
/// Power series for `|z| ≤ 4`, adaptive Simpson beyond, and the asymptotic
/// auxiliary-function expansion once `|z| > 64`.
pub fn sine_integral(z: f64) -> f64 {
    let a = z.abs();
    let value = if a <= 4.0 {
        sine_integral_series(a)
    } else if a <= 64.0 {
        sine_integral_series(4.0) + adaptive_simpson(sinc, 4.0, a, 1e-13)
    } else {
        sine_integral_asymptotic(a)
    };
    value.copysign(z)
}

/// `Σ (−1)^n z^{2n+1} / ((2n+1)(2n+1)!)`.
pub fn sine_integral_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z; // z^{2n+1}/(2n+1)!
    let mut sum = z;
    let mut n = 0usize;
    loop {
        n += 1;
        let k = (2 * n) as f64;
        term *= -z2 / (k * (k + 1.0));
        let contrib = term / (k + 1.0);
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs().max(1e-300) || n > 200 {
            return sum;
        }
    }
}

/// Si by adaptive Simpson on `[0, z]`, split into pieces of length `≤ π`.
pub fn sine_integral_quadrature(z: f64) -> f64 {
    let a = z.abs();
    let pieces = (a / PI).ceil().max(1.0) as usize;
    let h = a / pieces as f64;
    let total: f64 = (0..pieces)
        .map(|k| adaptive_simpson(sinc, k as f64 * h, (k + 1) as f64 * h, 1e-13 / pieces as f64))
        .sum();
    total.copysign(z)
}

fn sine_integral_asymptotic(x: f64) -> f64 {
    // Si(x) = π/2 − f(x) cos x − g(x) sin x
    let inv2 = 1.0 / (x * x);
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, inv2);
    for k in 0..40 {
        f += tf;
        g += tg;
        let kf = (2 * k) as f64;
        let next_f = -tf * (kf + 1.0) * (kf + 2.0) * inv2;
        let next_g = -tg * (kf + 2.0) * (kf + 3.0) * inv2;
        if next_f.abs() > tf.abs() || next_f.abs() < 1e-20 {
            break;
        }
        tf = next_f;
        tg = next_g;
    }
    FRAC_PI_2 - f / x * x.cos() - g * x.sin()
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 { 1.0 } else { t.sin() / t }
}

/// Adaptive Simpson with Richardson correction; `tol` is the absolute
/// tolerance on `[a, b]`, halved at every bisection.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `sqrt(2a Si(2a) + cos(2a) − 1)`, the large-`d` limit of `‖V_d‖_F` for
/// Chebyshev segments with `ρ = a/d`.
pub fn frob_norm_limit_c2(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid(format!("a must be positive, got {a}")));
    }
    let radicand = if 2.0 * a <= 4.0 {
        // Σ_{m≥1} (−1)^{m−1} (2a)^{2m} / ((2m−1)(2m)!), free of cancellation
        let z2 = 4.0 * a * a;
        let mut pow_over_fact = 1.0; // (2a)^{2m}/(2m)!
        let mut sum = 0.0;
        for m in 1..200 {
            let k = (2 * m) as f64;
            pow_over_fact *= z2 / ((k - 1.0) * k);
            let term = pow_over_fact / (k - 1.0);
            let signed = if m % 2 == 1 { term } else { -term };
            sum += signed;
            if term < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        2.0 * a * sine_integral(2.0 * a) + (2.0 * a).cos() - 1.0
    };
    if radicand < 0.0 {
        return Err(Error::NumericalFailure(format!("negative radicand {radicand}")));
    }
    Ok(radicand.sqrt())
}

/// `d / (√2 a)`, the stated upper bound on `‖V_d⁻¹‖_F`.
pub fn frob_inv_upper_c2(d: usize, a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= FRAC_PI_2 + 1e-15) {
        return Err(Error::invalid(format!("a must lie in (0, pi/2], got {a}")));
    }
    Ok(d as f64 / (2f64.sqrt() * a))
}

/// `∏_{i=1}^{n−1} sin(iπ/n)`; equals `n / 2^{n−1}`.
pub fn sin_product(n: usize) -> f64 {
    (1..n).map(|i| (i as f64 * PI / n as f64).sin()).product()
}
