//! Degree-graded polynomial bases and their exact integrals.
//!
//! Column `j` (1-based) of every Vandermonde matrix holds the degree `j − 1`
//! member of the basis: `x^{j−1}`, `T_{j−1}` or `U_{j−1}`. Chebyshev members
//! are always evaluated with the three-term recurrence, which is valid on the
//! whole real line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial basis populating the Vandermonde columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Monomial,
    /// Chebyshev polynomials of the first kind, `T_n(cos θ) = cos(nθ)`.
    ChebyshevFirst,
    /// Chebyshev polynomials of the second kind, `U_n(cos θ) = sin((n+1)θ)/sin θ`.
    ChebyshevSecond,
}

impl BasisKind {
    pub const ALL: [BasisKind; 3] = [
        BasisKind::Monomial,
        BasisKind::ChebyshevFirst,
        BasisKind::ChebyshevSecond,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BasisKind::Monomial => "monomial",
            BasisKind::ChebyshevFirst => "chebyshev-first",
            BasisKind::ChebyshevSecond => "chebyshev-second",
        }
    }

    /// Value of the column-`j` member at `x`.
    pub fn eval(&self, j: usize, x: f64) -> f64 {
        eval_basis(*self, j, x)
    }

    /// `∫_alpha^beta` of the column-`j` member.
    pub fn integral(&self, j: usize, alpha: f64, beta: f64) -> f64 {
        integral_basis(*self, j, alpha, beta)
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "monomial" | "mono" => Ok(BasisKind::Monomial),
            "chebyshev-first" | "cheb1" | "t" => Ok(BasisKind::ChebyshevFirst),
            "chebyshev-second" | "cheb2" | "u" => Ok(BasisKind::ChebyshevSecond),
            other => Err(Error::invalid(format!("unknown basis '{other}'"))),
        }
    }
}

/// `T_n(x)` by the three-term recurrence.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    chebyshev_recurrence(n, x, x)
}

/// `U_n(x)` by the three-term recurrence.
pub fn chebyshev_u(n: usize, x: f64) -> f64 {
    chebyshev_recurrence(n, x, 2.0 * x)
}

/// Shared recurrence `P_{k+1} = 2x P_k − P_{k−1}` with `P_0 = 1`, `P_1 = first`.
fn chebyshev_recurrence(n: usize, x: f64, first: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, first);
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(T_{n−2}(x), T_n(x))` for `n ≥ 2` in one pass.
fn chebyshev_t_pair(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 2);
    let (mut prev, mut cur) = (1.0, x);
    let mut before = f64::NAN;
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        before = prev;
        prev = cur;
        cur = next;
    }
    (before, cur)
}

/// Column-`j` basis member (degree `j − 1`) at `x`. `j` is 1-based.
pub fn eval_basis(kind: BasisKind, j: usize, x: f64) -> f64 {
    assert!(j >= 1, "basis columns are 1-based");
    let n = j - 1;
    match kind {
        BasisKind::Monomial => x.powi(n as i32),
        BasisKind::ChebyshevFirst => chebyshev_t(n, x),
        BasisKind::ChebyshevSecond => chebyshev_u(n, x),
    }
}

/// Antiderivative of the column-`j` member, normalised so the closed forms
/// below hold; only differences of it are meaningful.
pub fn antiderivative(kind: BasisKind, j: usize, x: f64) -> f64 {
    assert!(j >= 1, "basis columns are 1-based");
    let jf = j as f64;
    match kind {
        BasisKind::Monomial => x.powi(j as i32) / jf,
        // T_j' = j U_{j-1}
        BasisKind::ChebyshevSecond => chebyshev_t(j, x) / jf,
        BasisKind::ChebyshevFirst => match j {
            1 => x,
            2 => 0.5 * x * x,
            _ => {
                let (lower, upper) = chebyshev_t_pair(j, x);
                upper / (2.0 * jf) - lower / (2.0 * (jf - 2.0))
            }
        },
    }
}

/// Exact `∫_alpha^beta b_j(x) dx` for the column-`j` member.
pub fn integral_basis(kind: BasisKind, j: usize, alpha: f64, beta: f64) -> f64 {
    match kind {
        BasisKind::Monomial => {
            let jf = j as f64;
            (beta.powi(j as i32) - alpha.powi(j as i32)) / jf
        }
        BasisKind::ChebyshevSecond => (chebyshev_t(j, beta) - chebyshev_t(j, alpha)) / j as f64,
        BasisKind::ChebyshevFirst => match j {
            1 => beta - alpha,
            2 => 0.5 * (beta - alpha) * (beta + alpha),
            _ => {
                let jf = j as f64;
                let (lo_b, up_b) = chebyshev_t_pair(j, beta);
                let (lo_a, up_a) = chebyshev_t_pair(j, alpha);
                (up_b - up_a) / (2.0 * jf) - (lo_b - lo_a) / (2.0 * (jf - 2.0))
            }
        },
    }
}

/// Evaluates `Σ_j coeffs[j−1] · b_j(x)`.
pub fn eval_series(kind: BasisKind, coeffs: &[f64], x: f64) -> f64 {
    match kind {
        BasisKind::Monomial => coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c),
        BasisKind::ChebyshevFirst | BasisKind::ChebyshevSecond => {
            // Clenshaw; T and U share the recurrence, differ in the final step.
            let mut b1 = 0.0;
            let mut b2 = 0.0;
            for &c in coeffs.iter().skip(1).rev() {
                let b0 = c + 2.0 * x * b1 - b2;
                b2 = b1;
                b1 = b0;
            }
            let c0 = coeffs.first().copied().unwrap_or(0.0);
            match kind {
                BasisKind::ChebyshevFirst => c0 + x * b1 - b2,
                _ => c0 + 2.0 * x * b1 - b2,
            }
        }
    }
}

/// Monomial coefficients `a_1..a_{n+1}` (ascending degree) of the monic
/// Chebyshev polynomial of degree `n`, i.e. `T_n / 2^{n−1}` (or `1` for `n = 0`).
pub fn monic_chebyshev_coeffs(n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![1.0];
    }
    // Integer recurrence on T_k coefficients; exact while they fit in f64.
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 1.0];
    for _ in 1..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += 2.0 * c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = cur;
        cur = next;
    }
    let scale = 2f64.powi(1 - n as i32);
    cur.iter().map(|c| c * scale).collect()
}

/// Checked variant of [`eval_basis`] for user-facing column indices.
pub fn try_eval_basis(kind: BasisKind, j: usize, x: f64) -> Result<f64> {
    if j == 0 {
        return Err(Error::invalid("basis columns are numbered from 1"));
    }
    Ok(eval_basis(kind, j, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn eval_examples() {
        assert_eq!(eval_basis(BasisKind::Monomial, 3, 2.0), 4.0);
        assert_eq!(eval_basis(BasisKind::ChebyshevFirst, 3, 0.5), -0.5);
        assert_eq!(eval_basis(BasisKind::ChebyshevSecond, 2, 0.5), 1.0);
        assert_eq!(eval_basis(BasisKind::ChebyshevSecond, 1, 17.0), 1.0);
        assert!(try_eval_basis(BasisKind::Monomial, 0, 1.0).is_err());
    }

    #[test]
    fn integral_examples() {
        assert!((integral_basis(BasisKind::Monomial, 3, 0.0, 2.0) - 8.0 / 3.0).abs() < 1e-15);
        assert_eq!(integral_basis(BasisKind::ChebyshevSecond, 1, -0.3, 0.8), 0.8 - -0.3);
        assert_eq!(integral_basis(BasisKind::ChebyshevSecond, 2, -1.0, 1.0), 0.0);
        // ∫_0^1 T_2 = ∫ 2x² − 1 = −1/3
        assert!((integral_basis(BasisKind::ChebyshevFirst, 3, 0.0, 1.0) + 1.0 / 3.0).abs() < 1e-15);
        // ∫_{-1}^{1} T_4 = −2/15
        assert!((integral_basis(BasisKind::ChebyshevFirst, 5, -1.0, 1.0) + 2.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_trigonometric_form() {
        for k in 1..200 {
            let theta = PI * k as f64 / 200.0;
            let x = theta.cos();
            for n in 0..60 {
                let t = (n as f64 * theta).cos();
                let u = ((n + 1) as f64 * theta).sin() / theta.sin();
                assert!((chebyshev_t(n, x) - t).abs() < 1e-12, "T_{n}({x})");
                assert!((chebyshev_u(n, x) - u).abs() < 1e-12 * u.abs().max(1.0), "U_{n}({x})");
            }
        }
    }

    #[test]
    fn recurrence_outside_unit_interval() {
        // T_n(cosh t) = cosh(n t)
        let t: f64 = 1.2;
        for n in 0..25 {
            let expected = (n as f64 * t).cosh();
            assert!((chebyshev_t(n, t.cosh()) / expected - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn monic_examples() {
        assert_eq!(monic_chebyshev_coeffs(0), vec![1.0]);
        assert_eq!(monic_chebyshev_coeffs(1), vec![0.0, 1.0]);
        assert_eq!(monic_chebyshev_coeffs(2), vec![-0.5, 0.0, 1.0]);
        let c = monic_chebyshev_coeffs(5);
        assert_eq!(*c.last().unwrap(), 1.0);
        // dense grid oracle for the sup norm
        let n = 100_000;
        let max = (0..=n)
            .map(|k| -1.0 + 2.0 * k as f64 / n as f64)
            .map(|x| eval_series(BasisKind::Monomial, &c, x).abs())
            .fold(0.0, f64::max);
        assert!((max - 2f64.powi(-4)).abs() < 1e-10);
    }

    #[test]
    fn series_evaluation_matches_direct_sum() {
        let coeffs = [0.3, -1.2, 0.7, 2.0, -0.4, 0.05];
        for kind in BasisKind::ALL {
            for k in 0..21 {
                let x = -1.5 + 0.15 * k as f64;
                let direct: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * eval_basis(kind, j + 1, x))
                    .sum();
                assert!((eval_series(kind, &coeffs, x) - direct).abs() < 1e-12);
            }
        }
        assert_eq!(eval_series(BasisKind::ChebyshevSecond, &[1.0, 0.0, 0.0], 0.37), 1.0);
        assert_eq!(eval_series(BasisKind::ChebyshevSecond, &[0.0, 1.0], 0.5), 1.0);
        assert_eq!(eval_series(BasisKind::Monomial, &[0.0, 1.0], 3.0), 3.0);
    }

    #[test]
    fn parse_names() {
        for kind in BasisKind::ALL {
            assert_eq!(kind.name().parse::<BasisKind>().unwrap(), kind);
        }
        assert!("bernstein".parse::<BasisKind>().is_err());
    }
}
