//! Brute-force search for the Fekete endpoints of a shared-endpoint family.
//!
//! For segments `[α, β_i]` the normalized monomial Vandermonde has
//! `|det| = ∏_{j<k} |β_k − β_j| / d!`, so the optimal `β` are the Fekete
//! points of degree `d − 1` on `[α, 1]`. A vanishing segment `β_1 = α` is
//! admitted as a point evaluation.

use serde::Serialize;

use crate::bases::BasisKind;
use crate::error::{Error, Result};
use crate::segments::{Segment, SegmentFamily};
use crate::vandermonde::assemble_normalized;

pub const FEKETE_MAX_D: usize = 4;
pub const FEKETE_MIN_GRID: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeketeResult {
    pub d: usize,
    pub alpha: f64,
    pub grid_n: usize,
    pub grid_step: f64,
    pub betas: Vec<f64>,
    /// `|det|` of the normalized Vandermonde at the optimum.
    pub normalized_det: f64,
    /// `∏_{j<k} (β_k − β_j) / d!` at the optimum.
    pub product_formula: f64,
    /// Whether the optimum uses the degenerate endpoint `β_1 = α`.
    pub attains_boundary: bool,
}

/// Exhaustive search over increasing `d`-tuples of the uniform grid with
/// `grid_n` points on `[alpha, 1]`. Ties go to the later tuple.
pub fn fekete_c3_search(d: usize, alpha: f64, grid_n: usize) -> Result<FeketeResult> {
    if d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    if d > FEKETE_MAX_D {
        return Err(Error::Unsupported(format!(
            "grid search is limited to d <= {FEKETE_MAX_D}, got {d}"
        )));
    }
    if grid_n < FEKETE_MIN_GRID {
        return Err(Error::invalid(format!("grid_n must be at least {FEKETE_MIN_GRID}")));
    }
    if !(alpha < 1.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must be finite and below 1, got {alpha}")));
    }

    let step = (1.0 - alpha) / (grid_n - 1) as f64;
    let mut grid: Vec<f64> = (0..grid_n).map(|k| alpha + step * k as f64).collect();
    grid[grid_n - 1] = 1.0;

    let segments = grid
        .iter()
        .map(|&b| Segment::closed(alpha, b))
        .collect::<Result<Vec<_>>>()?;
    let rows = assemble_normalized(&SegmentFamily::custom_normalized(segments)?, BasisKind::Monomial);
    let rows: Vec<&[f64]> = (0..grid_n).map(|k| &rows.row(k)[..d]).collect();

    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let value = small_det(&idx.iter().map(|&k| rows[k]).collect::<Vec<_>>()).abs();
        if value >= best.0 {
            best = (value, idx.clone());
        }
        if !next_combination(&mut idx, grid_n) {
            break;
        }
    }

    let betas: Vec<f64> = best.1.iter().map(|&k| grid[k]).collect();
    Ok(FeketeResult {
        d,
        alpha,
        grid_n,
        grid_step: step,
        product_formula: vandermonde_product(&betas),
        attains_boundary: best.1[0] == 0,
        betas,
        normalized_det: best.0,
    })
}

/// `∏_{j<k} (β_k − β_j) / d!`.
pub fn vandermonde_product(betas: &[f64]) -> f64 {
    let mut p = 1.0;
    for (k, &bk) in betas.iter().enumerate() {
        p /= (k + 1) as f64;
        for &bj in &betas[..k] {
            p *= bk - bj;
        }
    }
    p
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let d = idx.len();
    let Some(i) = (0..d).rev().find(|&i| idx[i] < n - d + i) else {
        return false;
    };
    idx[i] += 1;
    for k in i + 1..d {
        idx[k] = idx[k - 1] + 1;
    }
    true
}

fn small_det(rows: &[&[f64]]) -> f64 {
    let n = rows.len();
    let mut a = [[0.0f64; FEKETE_MAX_D]; FEKETE_MAX_D];
    for (i, r) in rows.iter().enumerate() {
        a[i][..n].copy_from_slice(r);
    }
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
            .unwrap_or(k);
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            let pivot = a[k];
            for (x, p) in a[i][k + 1..n].iter_mut().zip(&pivot[k + 1..n]) {
                *x -= f * p;
            }
        }
    }
    det
}
