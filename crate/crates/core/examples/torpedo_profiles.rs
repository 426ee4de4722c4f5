//! The two disk profiles: a hemisphere, and a torpedo with a product collar.
//!
//! `cargo run --example torpedo_profiles`

use nnq::builders::{make_profile, ProfileKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [ProfileKind::Hemisphere, ProfileKind::CollarTorpedo] {
        let p = make_profile(kind, 1.0, 5)?;
        println!("{}: t_max {:.5}, collar [{:.5}, {:.5}]", kind.as_str(), p.t_max(), p.collar_start(), p.t_max());
        let max_k = (1..200).map(|i| p.gauss_curvature(p.t_max() * i as f64 / 200.0)).fold(0.0, f64::max);
        println!("  max Gauss curvature {max_k:.5}");
        for k in 1..=5 {
            println!("  f^({k})(t_max) = {:+.3e}", p.derivative(k, p.t_max()));
        }
    }
    // (t, f, f', f'') table for plotting
    let torpedo = make_profile(ProfileKind::CollarTorpedo, 1.0, 5)?;
    print!("{}", torpedo.csv_table(10));
    Ok(())
}
