//! Shared-endpoint families in the monomial basis: the closed-form
//! determinant against floating LU and exact rational elimination.
//!
//! ```bash
//! cargo run -p histocond --example c3_determinant
//! ```

use histocond::rational::ratio;
use histocond::segments::{SegmentFamily, Side};
use histocond::vandermonde::{
    assemble, det_closed_form_c3, det_closed_form_c3_exact, det_exact_rational_c3, det_numeric,
};
use histocond::BasisKind;

fn main() -> histocond::Result<()> {
    println!("{:>3} {:>24} {:>24} {:>10}", "d", "exact", "LU", "rel.err");
    for d in 1..=8 {
        let betas: Vec<f64> = (1..=d).map(|i| i as f64).collect();
        let exact_betas: Vec<_> = (1..=d as i64).map(|i| ratio(i, 1)).collect();

        let exact = det_exact_rational_c3(&ratio(0, 1), &exact_betas)?;
        assert_eq!(exact, det_closed_form_c3_exact(&ratio(0, 1), &exact_betas)?);

        let family = SegmentFamily::shared_endpoint(0.0, &betas, Side::Left)?;
        let lu = det_numeric(&assemble(&family, BasisKind::Monomial))?;
        let closed = det_closed_form_c3(0.0, &betas)?;
        println!("{d:>3} {exact:>24} {lu:>24.10} {:>10.2e}", (lu - closed).abs() / closed);
    }

    // rational endpoints keep the comparison exact
    let alpha = ratio(-1, 3);
    let betas = [ratio(1, 7), ratio(2, 5), ratio(9, 4)];
    println!(
        "\nalpha = -1/3, betas = 1/7, 2/5, 9/4: det = {}",
        det_exact_rational_c3(&alpha, &betas)?
    );
    Ok(())
}
