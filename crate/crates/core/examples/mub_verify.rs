//! Build the complete set of mutually unbiased bases for a few dimensions and
//! check orthonormality and unbiasedness.

use bsm_core::mub::{build_mubs, verify_mubs, Dimension};

fn main() -> bsm_core::error::Result<()> {
    for d in [2, 3, 5, 7, 11] {
        let family = build_mubs(Dimension::new(d)?);
        let v = verify_mubs(&family, 1e-10);
        println!(
            "d={d:<3} bases={:<3} orthonormality={:.2e} unbiasedness={:.2e} pass={}",
            family.bases().len(),
            v.max_orthonormality_deviation,
            v.max_unbiasedness_deviation,
            v.pass
        );
    }
    // Non-prime dimensions are rejected.
    println!("d=4: {}", Dimension::new(4).unwrap_err());
    Ok(())
}
