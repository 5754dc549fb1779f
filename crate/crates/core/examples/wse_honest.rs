//! Honest weak string erasure: Alice sends n qudits, Bob measures in random
//! bases, and the index set I collects the positions where the bases agree.

use bsm_core::mub::{build_mubs, Dimension};
use bsm_core::rng::seeded;
use bsm_core::wse::{check_index_distribution, run_honest, run_honest_trials, WseParams};

fn main() -> bsm_core::error::Result<()> {
    let dim = Dimension::new(3)?;
    let family = build_mubs(dim);
    let params = WseParams::new(20, dim)?;

    let tr = run_honest(&params, &family, &mut seeded(1))?;
    println!("I = {:?}", tr.index_set);
    println!("mismatches on I: {}", tr.mismatches());

    let runs = run_honest_trials(&params, &family, 7, 20_000)?;
    let report = check_index_distribution(&runs, 0.001)?;
    println!(
        "Pr(i in I) target {:.4}, max |z| = {:.2}, max pairwise |z| = {:.2}, pass = {}",
        report.p, report.max_marginal_z, report.max_pairwise_z, report.pass
    );
    Ok(())
}
