//! Brown invariants of surfaces and the bordism ledger that compares the
//! characteristic submanifolds of catalog pairs.
//!
//! `cargo run --example brown_ledger`

use nnq::catalog::ManifoldDescriptor;
use nnq::pin::{brown_invariant, class_of, distinguish, QuadraticEnhancement, Symbolic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rp2 = QuadraticEnhancement::diagonal(&[1])?;
    let rp2_bar = QuadraticEnhancement::diagonal(&[3])?;
    println!("beta(RP2) = {}, beta(-RP2) = {}", brown_invariant(&rp2)?, brown_invariant(&rp2_bar)?);
    println!("beta(RP2 + RP2) = {}", brown_invariant(&rp2.direct_sum(&rp2))?);
    println!("Gauss sum of the Arf-one torus: {:?}", QuadraticEnhancement::hyperbolic(2, 2)?.gauss_sum());

    let sum = Symbolic::circle_sum(Symbolic::projective(2), Symbolic::projective(2));
    let c = class_of(&sum)?;
    println!("[{sum}] = {} in {}", c.element, c.group);

    for (a, b) in [("P4.0", "P4.2"), ("X5.0", "X5.2"), ("X5.0", "X5.0"), ("X7.0", "X7.2")] {
        let (da, db): (ManifoldDescriptor, ManifoldDescriptor) = (a.parse()?, b.parse()?);
        let r = distinguish(&da.characteristic_tag(), &db.characteristic_tag())?;
        println!("{a} vs {b}: {} vs {} -> {:?} ({:?})", r.pair[0].rendered, r.pair[1].rendered, r.verdict, r.basis);
    }
    Ok(())
}
