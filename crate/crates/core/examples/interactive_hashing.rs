//! Interactive hashing of a t-bit string: Alice's t−1 linear queries leave two
//! candidates, one of which is Bob's input.

use bsm_core::bits::BitString;
use bsm_core::ot::ih::{sibling_distribution_exhaustive, IhAlice, IhBob};
use bsm_core::rng::seeded;

fn main() -> bsm_core::error::Result<()> {
    let mut rng = seeded(9);
    let w = BitString::from_u64(0b1011_0110, 8);
    let bob = IhBob::new(w.clone());
    let mut alice = IhAlice::new(w.len());
    while alice.rounds_remaining() > 0 {
        let q = alice.next_query(&mut rng);
        let a = bob.respond(&q);
        println!("query {q}  answer {}", a as u8);
        alice.record(q, a);
    }
    let tr = alice.finish()?;
    println!("w0 = {}  w1 = {}  w = {}  c = {:?}", tr.w0, tr.w1, w, tr.index_of(&w));

    let dist = sibling_distribution_exhaustive(&BitString::zeros(4))?;
    println!("sibling of 0000 over all query sequences: {} distinct, counts {:?}", dist.len(), dist.values().collect::<Vec<_>>());
    Ok(())
}
