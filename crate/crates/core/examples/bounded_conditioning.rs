//! Chebyshev segments with `ρ = a/d` in the second-kind basis: κ₂ stays
//! bounded by `a / sin a` and κ_F grows linearly.
//!
//! ```bash
//! cargo run -p histocond --example bounded_conditioning
//! ```

use std::f64::consts::FRAC_PI_2;

use histocond::conditioning::{frob_norm_limit_c2, kappa2_closed_form_c2, kappa2_limit_c2, kappa2_svd};
use histocond::segments::SegmentFamily;
use histocond::vandermonde::assemble;
use histocond::BasisKind;

fn main() -> histocond::Result<()> {
    let a = FRAC_PI_2;
    println!("limit a/sin a = {:.12}", kappa2_limit_c2(a));
    println!("|V|_F limit   = {:.12}\n", frob_norm_limit_c2(a)?);
    println!("{:>4} {:>16} {:>16} {:>10} {:>10}", "d", "kappa2 (svd)", "closed form", "kappaF/d", "|V|_F");
    for d in [2, 3, 4, 8, 16, 32, 64, 128, 256] {
        let rho = a / d as f64;
        let v = assemble(&SegmentFamily::chebyshev(d, rho)?, BasisKind::ChebyshevSecond);
        let r = kappa2_svd(&v)?;
        println!(
            "{d:>4} {:>16.12} {:>16.12} {:>10.6} {:>10.6}",
            r.kappa2,
            kappa2_closed_form_c2(d, rho)?,
            r.kappa_f / d as f64,
            v.frobenius_norm()
        );
    }
    Ok(())
}
