//! The histopolation problem: find `p ∈ P_{d−1}` with
//! `∫_{s_i} p = ∫_{s_i} f` for every segment of the family.

use serde::Serialize;

use crate::bases::{eval_series, BasisKind};
use crate::error::{Error, Result};
use crate::quadrature::GaussRule;
use crate::segments::SegmentFamily;
use crate::vandermonde::{assemble, check_invertible, DEFAULT_CONDITION_CAP};

/// Default Gauss–Legendre order for moments (exact through degree 63).
pub const DEFAULT_QUAD_ORDER: usize = 32;

/// Extra points used by the independent residual check.
const RESIDUAL_EXTRA_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    pub quad_order: usize,
    pub condition_cap: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            quad_order: DEFAULT_QUAD_ORDER,
            condition_cap: DEFAULT_CONDITION_CAP,
        }
    }
}

/// The histopolant of a function on a segment family.
#[derive(Clone, Debug, Serialize)]
pub struct FitResult {
    /// Coefficients in `kind`, ascending degree.
    pub coeffs: Vec<f64>,
    pub kind: BasisKind,
    pub family: SegmentFamily,
    /// `max_i |∫_{s_i} (f − p)|`, with `∫ f` from an independent rule.
    pub residual_max: f64,
    /// κ₂ of the Vandermonde matrix.
    pub cond_estimate: f64,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        eval_fit(self, x)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Segment integrals `m_i = ∫_{s_i} f` by Gauss–Legendre quadrature.
pub fn moments<F: Fn(f64) -> f64>(f: F, family: &SegmentFamily, quad_order: usize) -> Result<Vec<f64>> {
    let rule = GaussRule::new(quad_order)?;
    moments_with_rule(&f, family, &rule)
}

fn moments_with_rule<F: Fn(f64) -> f64>(f: &F, family: &SegmentFamily, rule: &GaussRule) -> Result<Vec<f64>> {
    family
        .iter()
        .map(|s| {
            if s.is_degenerate() {
                return Err(Error::invalid("moments need non-degenerate segments"));
            }
            rule.integrate(f, s.alpha(), s.beta())
        })
        .collect()
}

/// Histopolant of `f` in the basis `kind` with the given quadrature order.
pub fn fit<F: Fn(f64) -> f64>(
    f: F,
    family: &SegmentFamily,
    kind: BasisKind,
    quad_order: usize,
) -> Result<FitResult> {
    fit_with(
        f,
        family,
        kind,
        FitOptions {
            quad_order,
            ..FitOptions::default()
        },
    )
}

pub fn fit_with<F: Fn(f64) -> f64>(
    f: F,
    family: &SegmentFamily,
    kind: BasisKind,
    options: FitOptions,
) -> Result<FitResult> {
    let v = assemble(family, kind);
    let cond = check_invertible(&v, options.condition_cap)?;
    let m = moments(&f, family, options.quad_order)?;
    let coeffs = v.solve(&m).map_err(|_| Error::NotUnisolvent { cond })?;

    let check_rule = GaussRule::new(options.quad_order.max(family.len()) + RESIDUAL_EXTRA_ORDER)?;
    let reference = moments_with_rule(&f, family, &check_rule)?;
    let fitted = v.mul_vec(&coeffs);
    let residual_max = reference
        .iter()
        .zip(&fitted)
        .fold(0.0, |r, (a, b)| f64::max(r, (a - b).abs()));

    Ok(FitResult {
        coeffs,
        kind,
        family: family.clone(),
        residual_max,
        cond_estimate: cond,
    })
}

/// `Σ_j c_j b_j(x)`.
pub fn eval_fit(r: &FitResult, x: f64) -> f64 {
    eval_series(r.kind, &r.coeffs, x)
}
