//! Average measurement entropy over all bases for Haar-random states, compared
//! with the lower bound log₂(d+1) − 1.

use bsm_core::mub::{avg_mub_entropy, build_mubs, uncertainty_bound, Dimension};
use bsm_core::qsim::haar_random_state;
use bsm_core::rng::seeded;

fn main() -> bsm_core::error::Result<()> {
    let mut rng = seeded(2024);
    for d in [2, 3, 5, 7] {
        let family = build_mubs(Dimension::new(d)?);
        let bound = uncertainty_bound(d);
        let mut min = f64::INFINITY;
        for _ in 0..2_000 {
            let psi = haar_random_state(d, &mut rng);
            min = min.min(avg_mub_entropy(&psi, &family)?);
        }
        let tight = avg_mub_entropy(family.basis(0).vector(0), &family)?;
        println!("d={d}: bound={bound:.6} min over samples={min:.6} basis state={tight:.6}");
    }
    Ok(())
}
