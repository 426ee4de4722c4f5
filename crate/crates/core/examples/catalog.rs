//! The manifold catalog and the command surface, driven in-process.
//!
//! `cargo run --example catalog`

use nnq::catalog::{catalog_list, run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for d in catalog_list(2, 3)? {
        println!(
            "{:<5} dim {:>2}  orientable {:<5}  block {:<14}  characteristic {}",
            d.tag(),
            d.dim,
            d.orientable,
            d.blocks[0].name,
            d.characteristic
        );
    }
    let mut out = Vec::new();
    let outcome = run(["nnq", "distinguish", "--pair", "P4.0,P4.2"], &mut out)?;
    println!("{}", String::from_utf8(out)?.lines().next().unwrap_or_default());
    println!("passed: {}", outcome.passed());
    Ok(())
}
