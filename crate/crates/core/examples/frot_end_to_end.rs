//! Fully randomized OT from honest WSE: many runs, correctness, the choice-bit
//! balance, and a replayed transcript.

use bsm_core::mub::{build_mubs, Dimension};
use bsm_core::ot::checks::check_c_independence;
use bsm_core::ot::{replay_frot, run_frot_trials, summarize, FrotTranscript};
use bsm_core::secparams::{ot_parameters, OtMode, OtRequest};

fn main() -> bsm_core::error::Result<()> {
    let d = 2;
    let params = ot_parameters(&OtRequest {
        n: 48, beta: 4, omega: 3.0, lambda: 1.0, d, mode: OtMode::Demo, wse_epsilon: 0.0, ell_override: None,
    })?;
    let runs = run_frot_trials(&params, &build_mubs(Dimension::new(d)?), 5, 10_000)?;
    let s = summarize(&params, &runs)?;
    println!("ell={} t={} sufficient={}/{} correct={}", s.ell, s.t, s.sufficient_runs, s.trials, s.correct_among_sufficient);
    println!("Pr(c=0) = {:.4} ± {:.4}", s.c0_frequency, s.c0_sigma);

    let c = check_c_independence(&runs, 0.001)?;
    println!("c vs w parity p = {:.3}, pass = {}", c.parity_test.p_value, c.pass);

    let tr = &runs[0];
    println!("run 0: c={} s0={} s1={} y={}", tr.c, tr.s0, tr.s1, tr.y);
    let json = tr.to_json()?;
    replay_frot(&FrotTranscript::from_json(&json)?)?;
    println!("transcript ({} bytes) replays cleanly", json.len());
    Ok(())
}
