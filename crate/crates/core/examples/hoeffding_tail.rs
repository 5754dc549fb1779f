//! How often the honest index set falls short of n/η, against the Hoeffding
//! bound.

use bsm_core::mub::{build_mubs, Dimension};
use bsm_core::wse::{check_hoeffding_tail, WseParams};

fn main() -> bsm_core::error::Result<()> {
    let dim = Dimension::new(2)?;
    let family = build_mubs(dim);
    for n in [24, 72, 240, 720] {
        let r = check_hoeffding_tail(&WseParams::new(n, dim)?, &family, 6, 20_000, 1)?;
        println!("n={n:<4} tail={:.5} bound={:.5} pass={}", r.empirical_tail, r.bound, r.pass);
    }
    Ok(())
}
