//! Row-major dense matrices with the handful of kernels the analysis needs:
//! pivoted LU (determinant, solve, inverse) and singular values.

use std::fmt::{self, Write as _};
use std::ops::{Index, IndexMut, Mul};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real matrix stored row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("rows have different lengths"));
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest off-diagonal magnitude of a square matrix.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    m = m.max(self[(i, j)].abs());
                }
            }
        }
        m
    }

    /// Index of the first column whose entries are all exactly zero.
    pub fn zero_column(&self) -> Option<usize> {
        (0..self.cols).find(|&j| (0..self.rows).all(|i| self[(i, j)] == 0.0))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `max |self − other|` entrywise.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// LU factorisation with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        self.require_square()?;
        Ok(Lu::factor(self))
    }

    /// Determinant by pivoted LU; an all-zero column yields exactly `0`.
    pub fn det(&self) -> Result<f64> {
        self.require_square()?;
        if self.zero_column().is_some() {
            return Ok(0.0);
        }
        Ok(Lu::factor(self).det())
    }

    /// Solves `self · x = b` with one step of iterative refinement.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let lu = self.lu()?;
        if lu.is_singular() {
            return Err(Error::NumericalFailure("matrix is singular".into()));
        }
        Ok(lu.solve_refined(self, b))
    }

    /// Inverse by solving against the identity; fails on exact singularity.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        let lu = self.lu()?;
        if lu.is_singular() || self.zero_column().is_some() {
            return Err(Error::NumericalFailure("matrix is singular".into()));
        }
        let n = self.rows;
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            let col = lu.solve_refined(self, &e);
            for (i, v) in col.into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        Ok(inv)
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        if !self.all_finite() {
            return Err(Error::NumericalFailure("matrix has non-finite entries".into()));
        }
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.data);
        let svd = m
            .try_svd(false, false, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }

    /// Plain-text dump: first line `d`, then `d` rows of shortest round-trip
    /// decimals separated by single spaces.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.rows);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| format_real(*x)).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses the format written by [`DenseMatrix::to_dump`].
    pub fn from_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let d: usize = lines
            .next()
            .ok_or_else(|| Error::invalid("empty matrix dump"))?
            .trim()
            .parse()
            .map_err(|_| Error::invalid("first line must be the dimension"))?;
        let mut data = Vec::with_capacity(d * d);
        for (i, line) in lines.enumerate() {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(parse_real)
                .collect::<Result<_>>()?;
            if row.len() != d {
                return Err(Error::invalid(format!("row {} has {} entries, expected {d}", i + 1, row.len())));
            }
            data.extend(row);
        }
        DenseMatrix::new(d, d, data)
    }
}

/// Shortest round-trip decimal; infinities as `inf` / `-inf`. Magnitudes
/// outside `[1e-5, 1e16)` use exponent notation.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn parse_real(s: &str) -> Result<f64> {
    match s {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s
            .parse()
            .map_err(|_| Error::invalid(format!("'{s}' is not a real number"))),
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dump())
    }
}

/// Packed LU factors `P A = L U` (unit lower `L`).
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    factors: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    fn factor(a: &DenseMatrix) -> Lu {
        let n = a.rows;
        let mut f = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, f[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    f.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = f[k * n + k];
            for i in k + 1..n {
                let l = f[i * n + k] / pivot;
                f[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        f[i * n + j] -= l * f[k * n + j];
                    }
                }
            }
        }
        Lu {
            n,
            factors: f,
            perm,
            sign,
            singular,
        }
    }

    /// An exact zero pivot was met.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.n).fold(self.sign, |acc, k| acc * self.factors[k * self.n + k])
    }

    /// Plain forward/back substitution.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n, "dimension mismatch");
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.factors[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.factors[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.factors[i * n + i];
        }
        x
    }

    /// Solve followed by one refinement step against the original matrix.
    pub fn solve_refined(&self, a: &DenseMatrix, b: &[f64]) -> Vec<f64> {
        let mut x = self.solve(b);
        let ax = a.mul_vec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let dx = self.solve(&r);
        if dx.iter().all(|v| v.is_finite()) {
            x.iter_mut().zip(dx).for_each(|(xi, d)| *xi += d);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small_cases() {
        assert_eq!(DenseMatrix::identity(3).det().unwrap(), 1.0);
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert!((a.det().unwrap() + 2.0).abs() < 1e-15);
        let a = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]]).unwrap();
        assert!((a.det().unwrap() + 6.0).abs() < 1e-15);
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(a.det().unwrap(), 0.0);
        assert!(DenseMatrix::zeros(2, 3).det().is_err());
    }

    #[test]
    fn solve_and_inverse() {
        let a = DenseMatrix::from_rows(&[
            vec![4.0, -2.0, 1.0],
            vec![-2.0, 4.0, -2.0],
            vec![1.0, -2.0, 4.0],
        ])
        .unwrap();
        let x = a.solve(&[11.0, -16.0, 17.0]).unwrap();
        for (xi, e) in x.iter().zip([1.0, -2.0, 3.0]) {
            assert!((xi - e).abs() < 1e-14);
        }
        let inv = a.inverse().unwrap();
        assert!(a.matmul(&inv).max_abs_diff(&DenseMatrix::identity(3)) < 1e-15);

        let singular = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn singular_values_of_simple_matrices() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let s = a.singular_values().unwrap();
        assert!((s[0] - 2f64.sqrt()).abs() < 1e-15 && (s[1] - 2f64.sqrt()).abs() < 1e-15);
        let s = DenseMatrix::diagonal(&[0.5, -3.0, 2.0]).singular_values().unwrap();
        assert_eq!(s, vec![3.0, 2.0, 0.5]);
    }

    #[test]
    fn norms() {
        let a = DenseMatrix::from_rows(&[vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(a.norm_one(), 6.0);
        assert_eq!(a.norm_inf(), 7.0);
        assert!((a.frobenius_norm() - 30f64.sqrt()).abs() < 1e-15);
        assert_eq!(a.max_off_diagonal(), 3.0);
    }

    #[test]
    fn dump_format() {
        let a = DenseMatrix::from_rows(&[vec![0.1, 2.0], vec![-1.0 / 3.0, f64::INFINITY]]).unwrap();
        let text = a.to_dump();
        assert_eq!(text, "2\n0.1 2\n-0.3333333333333333 inf\n");
        assert_eq!(DenseMatrix::from_dump(&text).unwrap(), a);
        assert!(DenseMatrix::from_dump("2\n1 2\n3\n").is_err());
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(1e-300), "1e-300");
        assert_eq!(format_real(-2.5e20), "-2.5e20");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(f64::NEG_INFINITY), "-inf");
        for x in [1e-300, 123456.789, 5e-324, 1.7976931348623157e308] {
            assert_eq!(parse_real(&format_real(x)).unwrap(), x);
        }
    }
}
