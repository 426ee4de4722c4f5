//! `(S² × S^{2k−1}) / T` for the free involution `T = (half-turn, antipodal)`.
//!
//! `cargo run --example quotient_bundle`

use nnq::builders::{
    sphere_bundle_quotient, verify_free, verify_isometry, FactorMap, ProductMap, SmoothMap,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in [2, 3] {
        let q = sphere_bundle_quotient(format!("X{}.0", 2 * k + 1), 2 * k - 1)?;
        let cover = q.cover();
        let t = ProductMap::new("T", vec![FactorMap::HalfTurn, FactorMap::Antipodal]);
        let iso = verify_isometry(cover.metric(), &SmoothMap::from_product(cover, &t), 500, 1, 1e-10)?;
        let free = verify_free(cover, &t, 500, 1, 1e-6)?;
        let scan = q.scan(5000, 5, 1, 1e-7)?;
        println!(
            "{}: isometry defect {:.1e}, min displacement {:.3}, volume {:.4} (cover {:.4}), K in [{:.2e}, {:.6}]",
            q.id(),
            iso.max_defect,
            free.min_distance,
            q.volume()?,
            cover.volume()?,
            scan.min_k,
            scan.max_k
        );
    }
    Ok(())
}
