//! Builds one family of each class, validates it and round-trips it
//! through JSON.
//!
//! ```bash
//! cargo run -p histocond --example segment_families
//! ```

use std::f64::consts::FRAC_PI_2;

use histocond::segments::{Segment, SegmentFamily, Side};

fn main() -> histocond::Result<()> {
    let families = [
        ("chain", SegmentFamily::equidistributed(-1.0, 1.0, 4)?),
        ("chebyshev", SegmentFamily::chebyshev(4, FRAC_PI_2 / 4.0)?),
        ("shared endpoint", SegmentFamily::shared_endpoint(0.0, &[0.5, 1.0, 1.5, 2.0], Side::Left)?),
        ("translates", SegmentFamily::translates(Segment::new(0.0, 0.5)?, &[-1.0, -0.5, 0.0, 0.5])?),
        ("counterexample", SegmentFamily::symmetric_counterexample(4)?),
    ];
    for (name, family) in &families {
        let report = family.validate(1e-12);
        println!("{name:>16}  class {:?}  valid {}", family.class(), report.passed());
        for s in family.iter() {
            println!("{:>18}[{:+.6}, {:+.6}]", "", s.alpha(), s.beta());
        }
    }

    let json = serde_json::to_string(&families[1].1).expect("serializable");
    println!("\n{json}");
    let back: SegmentFamily = serde_json::from_str(&json).expect("round trip");
    assert_eq!(back.len(), 4);

    // malformed input is rejected at construction
    assert!(SegmentFamily::chain(&[0.0, 1.0, 0.5]).is_err());
    assert!(SegmentFamily::chebyshev(4, 3.0).is_err());
    Ok(())
}
