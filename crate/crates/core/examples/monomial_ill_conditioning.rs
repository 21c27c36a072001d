//! Exponential growth of κ₂ in the monomial basis for chains and
//! translates, against the lower bound `(c/√d)·2^{d−3}`.
//!
//! ```bash
//! cargo run -p histocond --example monomial_ill_conditioning
//! ```

use histocond::conditioning::{kappa2_lower_bound_monomial, kappa2_svd, MONOMIAL_CERTIFIED_MAX_D};
use histocond::segments::{Segment, SegmentFamily};
use histocond::vandermonde::assemble;
use histocond::BasisKind;

fn main() -> histocond::Result<()> {
    println!("{:>3} {:>14} {:>14} {:>14}", "d", "chain", "translates", "bound");
    for d in 4..=18 {
        let chain = SegmentFamily::equidistributed(-1.0, 1.0, d)?;
        let h = 1.5 / (d - 1) as f64;
        let xis: Vec<f64> = (0..d).map(|k| -1.0 + h * k as f64).collect();
        let shifted = SegmentFamily::translates(Segment::new(0.0, 0.5)?, &xis)?;

        let k1 = kappa2_svd(&assemble(&chain, BasisKind::Monomial))?.kappa2;
        let k4 = kappa2_svd(&assemble(&shifted, BasisKind::Monomial))?.kappa2;
        let bound = kappa2_lower_bound_monomial(chain.max_length(), d, true);
        let mark = if d > MONOMIAL_CERTIFIED_MAX_D { "  saturated" } else { "" };
        println!("{d:>3} {k1:>14.4e} {k4:>14.4e} {bound:>14.4e}{mark}");
    }

    let d = 12;
    let chain = SegmentFamily::equidistributed(-1.0, 1.0, d)?;
    for kind in BasisKind::ALL {
        println!("d = {d}, {kind}: kappa2 = {:.4e}", kappa2_svd(&assemble(&chain, kind))?.kappa2);
    }
    Ok(())
}
