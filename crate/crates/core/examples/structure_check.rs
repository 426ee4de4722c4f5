//! Circle-action structures on catalog manifolds, checked item by item on the
//! realized metrics, plus a deliberately wrong polarization claim.
//!
//! `cargo run --example structure_check`

use nnq::builders::ProfileKind;
use nnq::catalog::{realize, ManifoldDescriptor};
use nnq::collapse::{build_structure, corrupted_polarized, evaluate_structure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for tag in ["X5.0", "X5.2", "P4.0"] {
        let d: ManifoldDescriptor = tag.parse()?;
        let s = build_structure(&d)?;
        let real = realize(&d, ProfileKind::CollarTorpedo)?;
        let v = evaluate_structure(&s, &real.space)?;
        println!("{tag}: {:?}-structure, polarized {}, free circle {:?}", v.kind, v.polarized, s.global_free_circle);
        for item in &v.items {
            println!("  [{}] {} {}: {}", if item.passed { "ok" } else { "FAIL" }, item.item, item.name, item.detail);
        }
    }
    let d: ManifoldDescriptor = "P4.0".parse()?;
    let real = realize(&d, ProfileKind::CollarTorpedo)?;
    let bad = evaluate_structure(&corrupted_polarized(&build_structure(&d)?), &real.space)?;
    if let Some(item) = bad.first_violation() {
        println!("corrupted P4.0: item {} fails ({})", item.item, item.detail);
    }
    Ok(())
}
