//! Capacity, strong-converse exponent γ(R) and the WSE parameters λ, ε(n) for a
//! depolarizing memory.

use bsm_core::secparams::{capacity, security_report, strong_converse_gamma, ChannelModel};

fn main() -> bsm_core::error::Result<()> {
    let ch = ChannelModel::depolarizing(2, 0.8)?;
    println!("C = {:.6}", capacity(&ch));
    for rate in [0.5, 0.9, 1.0, 1.5, 2.0] {
        println!("gamma({rate}) = {:.9}", strong_converse_gamma(&ch, rate)?);
    }

    let rep = security_report(5, 0.05, 0.3, ChannelModel::identity(5)?, &[10_000_000, 100_000_000, 1_000_000_000])?;
    println!("d=5 nu=0.3: lambda = {:.6}, f = {:.4e}", rep.lambda, rep.f);
    for (n, e) in &rep.epsilon {
        println!("  epsilon(n={n}) = {e:.4e}");
    }
    Ok(())
}
