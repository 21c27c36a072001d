//! Fekete endpoints for segments sharing the left endpoint `α`.
//!
//! ```bash
//! cargo run --release -p histocond --example fekete_c3
//! ```

use histocond::fekete::fekete_c3_search;

fn main() -> histocond::Result<()> {
    for (d, alpha, n) in [(1, 0.0, 51), (2, -1.0, 201), (3, -1.0, 201), (3, 0.0, 201), (4, -1.0, 101)] {
        let r = fekete_c3_search(d, alpha, n)?;
        println!(
            "d = {d}, alpha = {alpha:+}, grid {n}: beta = {:?}  |det| = {:.6}  prod/d! = {:.6}  boundary {}",
            r.betas, r.normalized_det, r.product_formula, r.attains_boundary
        );
    }
    println!("Gauss-Lobatto for d = 4: ±1, ±{:.6}", 1.0 / 5f64.sqrt());
    Ok(())
}
