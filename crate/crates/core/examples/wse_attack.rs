//! A dishonest Bob who stores a fraction of the qudits in noisy memory and
//! measures the rest immediately. Prints the min-entropy rate he leaves behind.

use bsm_core::mub::{build_mubs, Dimension};
use bsm_core::qsim::DepolarizingChannel;
use bsm_core::wse::{min_entropy_rate_estimate, run_adversarial_trials, AdversaryStrategy, RateMode, Selection, WseParams};

fn main() -> bsm_core::error::Result<()> {
    let d = 5;
    let dim = Dimension::new(d)?;
    let family = build_mubs(dim);
    let params = WseParams::new(1_000, dim)?;

    let mut strategies = vec![("measure-random-mub", AdversaryStrategy::MeasureRandomMub)];
    for (nu, r) in [(0.3, 1.0), (0.3, 0.5), (0.8, 0.9)] {
        let channel = DepolarizingChannel::new(d, r)?;
        strategies.push(("store-subset", AdversaryStrategy::StoreSubset { storage_rate: nu, channel, selection: Selection::RandomSubset }));
    }
    for (name, s) in &strategies {
        let rec = run_adversarial_trials(&params, &family, s, 11, 200)?;
        let sampled = min_entropy_rate_estimate(&rec, RateMode::Sampled)?;
        println!(
            "{name:<20} {:<28} analytic={:.4} sampled={:.4} ± {:.4}",
            format!("{s:?}").chars().take(28).collect::<String>(),
            s.analytic_rate(d),
            sampled.rate,
            sampled.sigma
        );
    }
    Ok(())
}
