//! Chebyshev segments with the second-kind basis: the Gram matrix is
//! diagonal, which gives the inverse in closed form.
//!
//! ```bash
//! cargo run -p histocond --example chebyshev_orthogonality
//! ```

use std::f64::consts::FRAC_PI_4;

use histocond::matrix::DenseMatrix;
use histocond::segments::SegmentFamily;
use histocond::vandermonde::{assemble, gram, gram_diagonal_formula, inverse_c2_gram};
use histocond::BasisKind;

fn main() -> histocond::Result<()> {
    let d = 8;
    let rho = FRAC_PI_4 / d as f64;
    let v = assemble(&SegmentFamily::chebyshev(d, rho)?, BasisKind::ChebyshevSecond);
    let w = gram(&v);

    println!("max |off-diagonal| of V^T V: {:.3e}", w.max_off_diagonal());
    println!("{:>3} {:>20} {:>20} {:>8}", "i", "W_ii", "2d sin^2(i rho)/i^2", "ratio");
    for i in 1..=d {
        let formula = gram_diagonal_formula(d, rho, i);
        println!("{i:>3} {:>20.15} {formula:>20.15} {:>8.4}", w[(i - 1, i - 1)], w[(i - 1, i - 1)] / formula);
    }

    let inv = inverse_c2_gram(&v)?;
    let err = v.matmul(&inv).max_abs_diff(&DenseMatrix::identity(d));
    println!("\n|V W^-1 V^T - I|_max = {err:.3e}");

    // the monomial basis on the same segments is not orthogonal
    let wm = gram(&assemble(&SegmentFamily::chebyshev(d, rho)?, BasisKind::Monomial));
    println!("monomial off-diagonal: {:.3e}", wm.max_off_diagonal());
    Ok(())
}
