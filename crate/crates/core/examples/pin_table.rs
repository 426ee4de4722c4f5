//! Stiefel–Whitney classes of projective spaces and their pin obstructions.
//!
//! `cargo run --example pin_table`

use nnq::pin::{pin_table_csv, pin_verdicts, sw_number_top, total_sw_rp};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 2..=8 {
        let v = pin_verdicts(n)?;
        println!(
            "RP^{n}: w = {}, top number {}, spin {}, pin+ {}, pin- {}",
            total_sw_rp(n)?,
            sw_number_top(n)?,
            v.spin,
            v.pin_plus,
            v.pin_minus
        );
    }
    print!("{}", pin_table_csv(12)?);
    Ok(())
}
