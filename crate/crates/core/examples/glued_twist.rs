//! Two disk-bundle blocks glued along their boundary by the identity or by an
//! essential rotation loop, with every check the catalog runs.
//!
//! `cargo run --example glued_twist [-- X7.2]`

use nnq::builders::ProfileKind;
use nnq::catalog::{realize, ManifoldDescriptor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tag = std::env::args().nth(1).unwrap_or_else(|| "X5.2".into());
    let d: ManifoldDescriptor = tag.parse()?;
    println!("{d}");
    for kind in [ProfileKind::CollarTorpedo, ProfileKind::Hemisphere] {
        let r = realize(&d, kind)?;
        let g = &r.gluing;
        println!("{} profile, gluing {}", kind.as_str(), g.gluing);
        println!("  fiber defect {:.1e}, deck defect {:.1e}, full boundary defect {:.3}", g.fiber_defect, g.deck_defect, g.full_defect);
        for b in &r.boundary {
            println!("  {}: {:?}, product defect {:.1e}", b.block, b.mode, b.product_defect);
        }
        println!("  interface jets {:?}", r.glued.jets);
        let s = r.scan(5000, 5, 1, 1e-7)?;
        println!("  K in [{:.2e}, {:.5}], {}", s.min_k, s.max_k, s.verdict.as_str());
    }
    Ok(())
}
