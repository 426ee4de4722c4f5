//! Volume and curvature along collapsing families: Berger shrinking of the
//! Hopf circles on `X`, axis-rotation caps on `P`.
//!
//! `cargo run --example collapse_trace`

use nnq::catalog::ManifoldDescriptor;
use nnq::collapse::trace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps = [1.0, 0.5, 0.25, 0.1, 0.05, 0.02];
    for tag in ["X5.0", "P4.2"] {
        let d: ManifoldDescriptor = tag.parse()?;
        let t = trace(&d, &eps, 1000, 1)?;
        println!("{tag} (polarized: {})", t.polarized);
        print!("{}", t.to_csv());
        println!("volume ratio {:.4}, max|K| {:.4}, min K {:.2e}\n", t.volume_ratio, t.max_abs_k(), t.min_k());
    }
    Ok(())
}
