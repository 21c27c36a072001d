//! Writes the CSV series behind the standard conditioning plots into a
//! directory (default `target/figures`).
//!
//! ```bash
//! cargo run --release -p histocond --example figure_sweeps -- out/
//! ```

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use histocond::sweep::{run_sweep, FamilySpec, SweepConfig};
use histocond::BasisKind;

fn main() -> histocond::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/figures".into()));
    std::fs::create_dir_all(&dir).map_err(|e| histocond::Error::InvalidInput(e.to_string()))?;

    let chain = FamilySpec::Equidistributed { a: -1.0, b: 1.0 };
    let translates = FamilySpec::Translates { length: 0.5, xi_min: -1.0, xi_max: 0.5 };
    let cheb = FamilySpec::Chebyshev { a: FRAC_PI_2 };
    let runs = [
        ("monomial_chain.csv", chain, BasisKind::Monomial, 2, 20),
        ("monomial_translates.csv", translates, BasisKind::Monomial, 2, 20),
        ("chebyshev_bounded.csv", cheb.clone(), BasisKind::ChebyshevSecond, 2, 100),
        ("chebyshev_monomial.csv", cheb.clone(), BasisKind::Monomial, 2, 20),
        ("chebyshev_frobenius.csv", cheb, BasisKind::ChebyshevSecond, 10, 300),
    ];
    for (name, family, basis, lo, hi) in runs {
        let mut cfg = SweepConfig::new(family, basis, lo, hi);
        cfg.output_path = Some(dir.join(name));
        cfg.threads = 0;
        let rows = run_sweep(&cfg)?;
        let failed = rows.iter().filter(|r| r.is_err()).count();
        println!("{} ({} rows, {failed} skipped)", dir.join(name).display(), rows.len());
    }
    Ok(())
}
