//! Segmental Vandermonde matrices `[V]_{i,j} = ∫_{s_i} b_j(x) dx` and the
//! structure built on top of them: Gram matrices, determinants (numeric,
//! closed-form and exact) and inverses.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bases::{eval_basis, integral_basis, BasisKind};
use crate::conditioning::kappa2_svd;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rational::RationalMatrix;
use crate::segments::{chebyshev_angle, SegmentFamily};

/// Condition number above which Lagrange bases and fits are refused.
pub const DEFAULT_CONDITION_CAP: f64 = 1e14;

/// Signature of a column integrator `(kind, j, alpha, beta) ↦ ∫_alpha^beta b_j`.
pub type IntegralFn = fn(BasisKind, usize, f64, f64) -> f64;

/// Plain segmental Vandermonde matrix.
pub fn assemble(family: &SegmentFamily, kind: BasisKind) -> DenseMatrix {
    assemble_with(family, kind, integral_basis)
}

/// [`assemble`] with a caller-supplied column integrator.
pub fn assemble_with(family: &SegmentFamily, kind: BasisKind, integral: IntegralFn) -> DenseMatrix {
    let d = family.len();
    let segs = family.segments();
    DenseMatrix::from_fn(d, d, |i, j| integral(kind, j + 1, segs[i].alpha(), segs[i].beta()))
}

/// Rows divided by the segment lengths; collapsed segments use the nodal
/// limit `b_j(α_i)`.
pub fn assemble_normalized(family: &SegmentFamily, kind: BasisKind) -> DenseMatrix {
    let d = family.len();
    let segs = family.segments();
    DenseMatrix::from_fn(d, d, |i, j| {
        let s = segs[i];
        if s.is_degenerate() {
            eval_basis(kind, j + 1, s.alpha())
        } else {
            integral_basis(kind, j + 1, s.alpha(), s.beta()) / s.length()
        }
    })
}

/// Classical nodal Vandermonde `[b_j(x_i)]`.
pub fn nodal(nodes: &[f64], kind: BasisKind) -> DenseMatrix {
    let d = nodes.len();
    DenseMatrix::from_fn(d, d, |i, j| eval_basis(kind, j + 1, nodes[i]))
}

/// `W = Vᵀ V`.
pub fn gram(v: &DenseMatrix) -> DenseMatrix {
    let n = v.cols();
    let mut w = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let s: f64 = (0..v.rows()).map(|k| v[(k, i)] * v[(k, j)]).sum();
            w[(i, j)] = s;
            w[(j, i)] = s;
        }
    }
    w
}

/// Determinant by pivoted LU, exactly zero when a column vanishes.
pub fn det_numeric(v: &DenseMatrix) -> Result<f64> {
    v.det()
}

fn check_c3_betas(alpha: f64, betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(Error::invalid("need at least one free endpoint"));
    }
    if betas[0] <= alpha {
        return Err(Error::invalid("free endpoints must exceed alpha"));
    }
    if betas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("free endpoints must be strictly increasing"));
    }
    Ok(())
}

/// `det V = (1/d!) ∏(β_i − α) ∏_{j<k}(β_k − β_j)` for left-anchored
/// segments `[α, β_i]` in the monomial basis.
pub fn det_closed_form_c3(alpha: f64, betas: &[f64]) -> Result<f64> {
    check_c3_betas(alpha, betas)?;
    let d = betas.len();
    let mut det = 1.0;
    for (k, &bk) in betas.iter().enumerate() {
        det *= (bk - alpha) / (k + 1) as f64;
        for &bj in &betas[..k] {
            det *= bk - bj;
        }
    }
    debug_assert!(d >= 1);
    Ok(det)
}

/// Exact counterpart of [`det_closed_form_c3`].
pub fn det_closed_form_c3_exact(alpha: &BigRational, betas: &[BigRational]) -> Result<BigRational> {
    check_c3_betas_exact(alpha, betas)?;
    let mut det = BigRational::one();
    for (k, bk) in betas.iter().enumerate() {
        det *= (bk - alpha) / BigRational::from_integer(BigInt::from(k + 1));
        for bj in &betas[..k] {
            det *= bk - bj;
        }
    }
    Ok(det)
}

fn check_c3_betas_exact(alpha: &BigRational, betas: &[BigRational]) -> Result<()> {
    if betas.is_empty() {
        return Err(Error::invalid("need at least one free endpoint"));
    }
    if &betas[0] <= alpha || betas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "free endpoints must be strictly increasing and exceed alpha",
        ));
    }
    Ok(())
}

/// Monomial Vandermonde of `[α, β_i]` with exact entries `(β_i^j − α^j)/j`.
pub fn assemble_rational_c3(alpha: &BigRational, betas: &[BigRational]) -> RationalMatrix {
    let d = betas.len();
    RationalMatrix::from_fn(d, d, |i, j| {
        let p = (j + 1) as i32;
        (pow(&betas[i], p) - pow(alpha, p)) / BigRational::from_integer(BigInt::from(p))
    })
}

fn pow(x: &BigRational, p: i32) -> BigRational {
    (0..p).fold(BigRational::one(), |acc, _| acc * x)
}

/// Exact determinant of the rational C3 monomial Vandermonde by
/// fraction-free elimination. Endpoints need not be sorted.
pub fn det_exact_rational_c3(alpha: &BigRational, betas: &[BigRational]) -> Result<BigRational> {
    if betas.is_empty() {
        return Err(Error::invalid("need at least one free endpoint"));
    }
    if betas.iter().any(|b| b == alpha) {
        return Err(Error::invalid("free endpoints must differ from alpha"));
    }
    let det = assemble_rational_c3(alpha, betas).det()?;
    if det.is_zero() && has_duplicates(betas) {
        return Err(Error::invalid("free endpoints must be pairwise distinct"));
    }
    Ok(det)
}

fn has_duplicates(xs: &[BigRational]) -> bool {
    xs.iter().enumerate().any(|(k, x)| xs[..k].contains(x))
}

fn check_c2_params(d: usize, rho: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("number of segments must be positive"));
    }
    if !(rho > 0.0) || chebyshev_angle(d, d) + rho > PI + 1e-12 {
        return Err(Error::invalid(format!(
            "rho = {rho} outside (0, pi - tau_d] for d = {d}"
        )));
    }
    Ok(())
}

/// Closed-form determinant modulus `sqrt((2d)^d/(d!)² ∏ sin²(iρ))` for
/// Chebyshev segments in the second-kind basis.
///
/// Because `Σ_k cos(2dτ_k) = −d`, the last Gram entry is `4 sin²(dρ)/d`,
/// twice what this product assumes, so the true `|det V|` is `√2` times
/// this value. The expression is kept as stated; see
/// [`gram_diagonal_formula`].
pub fn det_closed_form_c2(d: usize, rho: f64) -> Result<f64> {
    check_c2_params(d, rho)?;
    let scale = (2.0 * d as f64).sqrt();
    Ok((1..=d).fold(1.0, |acc, i| {
        acc * scale * (i as f64 * rho).sin().abs() / i as f64
    }))
}

/// `2d sin²(iρ) / i²`, the stated Gram diagonal for Chebyshev segments
/// (exact for `i < d`; the `i = d` entry is twice this).
pub fn gram_diagonal_formula(d: usize, rho: f64, i: usize) -> f64 {
    let s = (i as f64 * rho).sin();
    2.0 * d as f64 * s * s / (i * i) as f64
}

/// `[V]_{i,j} = (2/j) sin(jτ_i) sin(jρ)` evaluated directly (1-based indices).
pub fn chebyshev_entry(d: usize, rho: f64, i: usize, j: usize) -> f64 {
    let jf = j as f64;
    2.0 / jf * (jf * chebyshev_angle(i, d)).sin() * (jf * rho).sin()
}

/// `V⁻¹ = W⁻¹ Vᵀ` for a matrix with diagonal Gram matrix, using the
/// numerically computed diagonal of `W`.
pub fn inverse_c2_gram(v: &DenseMatrix) -> Result<DenseMatrix> {
    if !v.is_square() {
        return Err(Error::invalid("expected a square matrix"));
    }
    let w = gram(v);
    let off = w.max_off_diagonal();
    if off > 1e-10 * w.max_abs() {
        return Err(Error::ContractViolation(format!(
            "Gram matrix is not diagonal (max off-diagonal {off:e})"
        )));
    }
    let diag = w.diag();
    if diag.contains(&0.0) {
        return Err(Error::NumericalFailure("zero column in Vandermonde matrix".into()));
    }
    let n = v.rows();
    Ok(DenseMatrix::from_fn(n, n, |i, j| v[(j, i)] / diag[i]))
}

/// Entry `(i, j)` (1-based) of the explicit inverse `i sin(iτ_j) / (d sin(iρ))`.
///
/// Row `d` of the true inverse is half this value; compare with
/// [`inverse_c2_gram`].
pub fn inverse_entry_paper_formula(d: usize, rho: f64, i: usize, j: usize) -> Result<f64> {
    if i == 0 || j == 0 || i > d || j > d {
        return Err(Error::invalid(format!("index ({i}, {j}) outside 1..={d}")));
    }
    let s = (i as f64 * rho).sin();
    if s.abs() < 1e-14 {
        return Err(Error::SingularFormula(format!("sin({i}·rho) vanishes")));
    }
    let fi = i as f64;
    Ok(fi * (fi * chebyshev_angle(j, d)).sin() / (d as f64 * s))
}

/// Coefficients of the Lagrange histopolation basis: column `j` holds the
/// expansion of `ℓ_j` with `∫_{s_i} ℓ_j = δ_ij`. This is `V⁻¹`.
pub fn lagrange_coefficients(family: &SegmentFamily, kind: BasisKind) -> Result<DenseMatrix> {
    lagrange_coefficients_with_cap(family, kind, DEFAULT_CONDITION_CAP)
}

pub fn lagrange_coefficients_with_cap(
    family: &SegmentFamily,
    kind: BasisKind,
    cap: f64,
) -> Result<DenseMatrix> {
    let v = assemble(family, kind);
    let cond = check_invertible(&v, cap)?;
    v.inverse().map_err(|_| Error::NotUnisolvent { cond })
}

/// Rejects singular or over-capped matrices, returning the κ₂ estimate.
pub(crate) fn check_invertible(v: &DenseMatrix, cap: f64) -> Result<f64> {
    if v.zero_column().is_some() {
        return Err(Error::NotUnisolvent { cond: f64::INFINITY });
    }
    let cond = kappa2_svd(v)?.kappa2;
    if cond.is_infinite() {
        return Err(Error::NotUnisolvent { cond });
    }
    if cond > cap {
        return Err(Error::IllConditioned { cond, cap });
    }
    Ok(cond)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::segments::{Segment, Side};

    #[test]
    fn c3_monomial_entries() {
        let f = SegmentFamily::shared_endpoint(0.0, &[1.0, 2.0, 3.0], Side::Left).unwrap();
        let v = assemble(&f, BasisKind::Monomial);
        for i in 1..=3 {
            for j in 1..=3 {
                let expected = (i as f64).powi(j as i32) / j as f64;
                assert!((v[(i - 1, j - 1)] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn chebyshev_two_by_two() {
        let f = SegmentFamily::chebyshev(2, PI / 4.0).unwrap();
        let v = assemble(&f, BasisKind::ChebyshevSecond);
        let expected = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert!(v.max_abs_diff(&expected) < 1e-15);
        for i in 1..=2 {
            for j in 1..=2 {
                assert!((v[(i - 1, j - 1)] - chebyshev_entry(2, PI / 4.0, i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn counterexample_has_zero_columns() {
        let f = SegmentFamily::symmetric_counterexample(3).unwrap();
        let v = assemble(&f, BasisKind::Monomial);
        assert!(v.column(1).iter().all(|&x| x == 0.0));
        assert_eq!(det_numeric(&v).unwrap(), 0.0);
        let f = SegmentFamily::symmetric_counterexample(4).unwrap();
        assert_eq!(det_numeric(&assemble(&f, BasisKind::Monomial)).unwrap(), 0.0);
    }

    #[test]
    fn normalized_examples() {
        let f = SegmentFamily::shared_endpoint(0.0, &[1.0, 2.0], Side::Left).unwrap();
        let v = assemble_normalized(&f, BasisKind::Monomial);
        let expected = DenseMatrix::from_rows(&[vec![1.0, 0.5], vec![1.0, 1.0]]).unwrap();
        assert!(v.max_abs_diff(&expected) < 1e-15);

        let unit = SegmentFamily::from_pairs(&[(0.25, 1.25), (-2.0, -1.0)]).unwrap();
        for kind in BasisKind::ALL {
            let plain = assemble(&unit, kind);
            let normed = assemble_normalized(&unit, kind);
            assert!(plain.max_abs_diff(&normed) < 1e-15);
        }

        let x0 = 0.7;
        let f = SegmentFamily::custom_normalized(vec![
            Segment::point(x0).unwrap(),
            Segment::new(0.0, 1.0).unwrap(),
            Segment::new(-1.0, 0.0).unwrap(),
        ])
        .unwrap();
        let v = assemble_normalized(&f, BasisKind::Monomial);
        assert_eq!(v.row(0), &[1.0, x0, x0 * x0]);
    }

    #[test]
    fn gram_examples() {
        let v = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert_eq!(gram(&v), DenseMatrix::diagonal(&[2.0, 2.0]));
        assert_eq!(gram(&DenseMatrix::identity(3)), DenseMatrix::identity(3));
        for d in 1..=8 {
            let betas: Vec<f64> = (1..=d).map(|i| i as f64).collect();
            let f = SegmentFamily::shared_endpoint(0.0, &betas, Side::Left).unwrap();
            let w = gram(&assemble(&f, BasisKind::Monomial));
            let df = d as f64;
            assert_eq!(w[(0, 0)], df * (df + 1.0) * (2.0 * df + 1.0) / 6.0);
        }
    }

    #[test]
    fn c3_closed_form_examples() {
        assert_eq!(det_closed_form_c3(0.0, &[1.0, 2.0, 3.0]).unwrap(), 2.0);
        assert_eq!(det_closed_form_c3(0.0, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap(), 288.0);
        assert_eq!(det_closed_form_c3(0.0, &[1.0]).unwrap(), 1.0);
        assert!(det_closed_form_c3(0.0, &[2.0, 1.0]).is_err());
        assert!(det_closed_form_c3(1.0, &[0.5, 2.0]).is_err());

        let f = SegmentFamily::shared_endpoint(0.0, &[1.0, 2.0, 3.0], Side::Left).unwrap();
        let det = det_numeric(&assemble(&f, BasisKind::Monomial)).unwrap();
        assert!((det - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_c3_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| ratio(x, 1)).collect::<Vec<_>>();
        let z = ratio(0, 1);
        assert_eq!(det_exact_rational_c3(&z, &ints(&[1, 2, 3])).unwrap(), ratio(2, 1));
        assert_eq!(det_exact_rational_c3(&z, &ints(&[1, 2, 3, 4, 5])).unwrap(), ratio(288, 1));
        // 2x2 cofactor oracle: rows (1, −1/2) and (2, 0) → 0 + 1 = 1
        let alpha = ratio(-1, 1);
        assert_eq!(det_exact_rational_c3(&alpha, &ints(&[0, 1])).unwrap(), ratio(1, 1));
        assert_eq!(det_closed_form_c3_exact(&alpha, &ints(&[0, 1])).unwrap(), ratio(1, 1));
        assert!(det_exact_rational_c3(&z, &ints(&[1, 1])).is_err());
    }

    #[test]
    fn c2_closed_form_determinant_against_lu() {
        // |det| of [[1,1],[1,−1]] is 2, the closed form gives √2
        let closed = det_closed_form_c2(2, PI / 4.0).unwrap();
        assert!((closed - 2f64.sqrt()).abs() < 1e-15);
        let v = assemble(&SegmentFamily::chebyshev(2, PI / 4.0).unwrap(), BasisKind::ChebyshevSecond);
        assert!((det_numeric(&v).unwrap().abs() - 2.0).abs() < 1e-14);

        assert!((det_closed_form_c2(1, PI / 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(det_closed_form_c2(6, 1e-9).unwrap() < 1e-40);
        assert!(det_closed_form_c2(2, PI).is_err());

        for d in 1..=12 {
            let rho = PI / (2 * d) as f64 * 0.8;
            let v = assemble(&SegmentFamily::chebyshev(d, rho).unwrap(), BasisKind::ChebyshevSecond);
            let ratio = det_numeric(&v).unwrap().abs() / det_closed_form_c2(d, rho).unwrap();
            assert!((ratio - 2f64.sqrt()).abs() < 1e-10, "d = {d}: {ratio}");
        }
    }

    #[test]
    fn gram_based_inverse() {
        let v = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let inv = inverse_c2_gram(&v).unwrap();
        let expected = DenseMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, -0.5]]).unwrap();
        assert!(inv.max_abs_diff(&expected) < 1e-15);
        let inv = inverse_c2_gram(&DenseMatrix::new(1, 1, vec![2.0]).unwrap()).unwrap();
        assert_eq!(inv[(0, 0)], 0.5);

        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert!(matches!(inverse_c2_gram(&m), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn explicit_inverse_entries() {
        let rho = PI / 4.0;
        assert!((inverse_entry_paper_formula(2, rho, 1, 1).unwrap() - 0.5).abs() < 1e-15);
        // last row: the formula is twice the true inverse
        assert!((inverse_entry_paper_formula(2, rho, 2, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((inverse_entry_paper_formula(1, PI / 2.0, 1, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!(inverse_entry_paper_formula(2, rho, 3, 1).is_err());
        assert!(matches!(
            inverse_entry_paper_formula(4, PI / 2.0, 2, 1),
            Err(Error::SingularFormula(_))
        ));

        let d = 9;
        let rho = PI / 20.0;
        let v = assemble(&SegmentFamily::chebyshev(d, rho).unwrap(), BasisKind::ChebyshevSecond);
        let inv = inverse_c2_gram(&v).unwrap();
        for i in 1..=d {
            for j in 1..=d {
                let formula = inverse_entry_paper_formula(d, rho, i, j).unwrap();
                let expected = if i == d { 2.0 * inv[(i - 1, j - 1)] } else { inv[(i - 1, j - 1)] };
                assert!((formula - expected).abs() < 1e-11, "({i}, {j})");
            }
        }
    }

    #[test]
    fn lagrange_examples() {
        let f = SegmentFamily::chain(&[-1.0, 0.0, 1.0]).unwrap();
        let c = lagrange_coefficients(&f, BasisKind::Monomial).unwrap();
        let v = assemble(&f, BasisKind::Monomial);
        assert!(v.matmul(&c).max_abs_diff(&DenseMatrix::identity(2)) < 1e-12);

        let f = SegmentFamily::symmetric_counterexample(3).unwrap();
        assert!(matches!(
            lagrange_coefficients(&f, BasisKind::Monomial),
            Err(Error::NotUnisolvent { .. })
        ));

        let f = SegmentFamily::chebyshev(4, PI / 8.0).unwrap();
        let c = lagrange_coefficients(&f, BasisKind::ChebyshevSecond).unwrap();
        for (j, col) in (0..4).map(|j| (j, c.column(j))) {
            for (i, s) in f.iter().enumerate() {
                let integral: f64 = col
                    .iter()
                    .enumerate()
                    .map(|(k, ck)| ck * integral_basis(BasisKind::ChebyshevSecond, k + 1, s.alpha(), s.beta()))
                    .sum();
                let delta = if i == j { 1.0 } else { 0.0 };
                assert!((integral - delta).abs() < 1e-10);
            }
        }

        let f = SegmentFamily::equidistributed(-1.0, 1.0, 20).unwrap();
        assert!(matches!(
            lagrange_coefficients_with_cap(&f, BasisKind::Monomial, 1e6),
            Err(Error::IllConditioned { .. })
        ));
    }
}
