//! Encoding bit strings as fixed-size subsets via the combinatorial number
//! system.

use bsm_core::bits::BitString;
use bsm_core::ot::make_subset_code;

fn main() -> bsm_core::error::Result<()> {
    let code = make_subset_code(12, 6)?;
    println!("m={} k={} C(m,k)={} t={}", code.m(), code.k(), code.binomial(), code.t());
    for v in 0..8 {
        let w = BitString::from_u64(v, code.t());
        let s = code.enc(&w)?;
        println!("{w} -> {s:?} -> {}", code.dec(&s)?);
    }

    let big = make_subset_code(600, 6)?;
    println!("m=600: k={} t={} bits", big.k(), big.t());
    Ok(())
}
