//! Histopolation of smooth and non-smooth functions from their segment
//! averages, with the Lagrange basis on a small family.
//!
//! ```bash
//! cargo run -p histocond --example histopolation_fit
//! ```

use std::f64::consts::FRAC_PI_2;

use histocond::histofit::{fit, moments, DEFAULT_QUAD_ORDER};
use histocond::segments::SegmentFamily;
use histocond::vandermonde::lagrange_coefficients;
use histocond::BasisKind;

fn main() -> histocond::Result<()> {
    let runge = |x: f64| 1.0 / (1.0 + 25.0 * x * x);
    let grid: Vec<f64> = (0..=400).map(|k| -1.0 + k as f64 / 200.0).collect();

    println!("{:>3} {:>14} {:>14} {:>12}", "d", "chebyshev", "chain", "residual");
    for d in [4, 8, 16, 24, 32] {
        let cheb = fit(runge, &SegmentFamily::chebyshev(d, FRAC_PI_2 / d as f64)?, BasisKind::ChebyshevSecond, DEFAULT_QUAD_ORDER)?;
        let chain = fit(runge, &SegmentFamily::equidistributed(-1.0, 1.0, d)?, BasisKind::ChebyshevFirst, DEFAULT_QUAD_ORDER)?;
        let err = |r: &histocond::FitResult| grid.iter().fold(0.0f64, |m, &x| m.max((r.eval(x) - runge(x)).abs()));
        println!("{d:>3} {:>14.4e} {:>14.4e} {:>12.2e}", err(&cheb), err(&chain), cheb.residual_max);
    }

    // ∫_{s_i} ℓ_j = δ_ij
    let family = SegmentFamily::equidistributed(0.0, 1.0, 3)?;
    let l = lagrange_coefficients(&family, BasisKind::Monomial)?;
    for j in 0..3 {
        let coeffs = l.column(j);
        let m = moments(|x| histocond::bases::eval_series(BasisKind::Monomial, &coeffs, x), &family, 8)?;
        println!("l_{} coefficients {:?}, segment integrals {:?}", j + 1, coeffs, m);
    }
    Ok(())
}
