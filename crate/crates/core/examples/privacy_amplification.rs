//! Toeplitz two-universal hashing of dit strings.

use bsm_core::bits::BitString;
use bsm_core::ot::extractor::{bits_per_dit, pack_dits, toeplitz_extract, toeplitz_hash, ExtractorSeed};
use bsm_core::rng::seeded;
use rand::Rng;

fn main() -> bsm_core::error::Result<()> {
    let d = 3;
    let x = [2, 0, 1, 1, 2, 0];
    println!("{} bits per dit, packed input {}", bits_per_dit(d), pack_dits(&x, d)?);

    let mut rng = seeded(3);
    let n_bits = x.len() * bits_per_dit(d);
    let seed = ExtractorSeed::random(n_bits, 4, &mut rng)?;
    for i in 0..4 {
        println!("row {i}: {}", seed.row(i));
    }
    println!("hash = {}", toeplitz_extract(&x, d, &seed)?);

    // Collision rate for inputs differing in one bit over fresh seeds, against 2^-ell.
    let (ell, trials) = (6, 100_000);
    let mut hits = 0;
    for _ in 0..trials {
        let a = BitString::random(32, &mut rng);
        let mut b = a.clone();
        let pos = rng.random_range(0..32);
        b.set(pos, !b.get(pos));
        let s = ExtractorSeed::random(32, ell, &mut rng)?;
        hits += (toeplitz_hash(&a, &s)? == toeplitz_hash(&b, &s)?) as u32;
    }
    println!("collision rate {:.5} vs 2^-{ell} = {:.5}", hits as f64 / trials as f64, 0.5f64.powi(ell as i32));
    Ok(())
}
