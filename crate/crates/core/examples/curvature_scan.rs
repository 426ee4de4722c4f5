//! Sampled sectional-curvature scans of a few model metrics.
//!
//! `cargo run --example curvature_scan`

use nnq::builders::{Factor, ProductMetric};
use nnq::geom::{curvature_scan, SCAN_CSV_HEADER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let metrics = [
        ProductMetric::new("S3", vec![Factor::round(3, 1.0)])?,
        ProductMetric::new("S2xS3", vec![Factor::round(2, 1.0), Factor::round(3, 1.0)])?,
        ProductMetric::new("berger(0.3)", vec![Factor::Berger { n: 3, r: 1.0, eps: 0.3 }])?,
        // a negatively curved chart, to see a failing verdict
        ProductMetric::new("H2", vec![Factor::hyperbolic_plane(2.0)])?,
    ];
    println!("{SCAN_CSV_HEADER}");
    for m in &metrics {
        let report = curvature_scan(m.metric(), 2000, 5, 1, 1e-7)?;
        println!("{}", report.csv_row());
    }
    Ok(())
}
