//! OT parameter selection in strict and demo mode.

use bsm_core::secparams::{ot_parameters, OtMode, OtRequest};

fn main() {
    let base = OtRequest { n: 0, beta: 2_304, omega: 3.0, lambda: 1.0, d: 2, mode: OtMode::Strict, wse_epsilon: 0.0, ell_override: None };
    for m in [6, 6_000, 60_000, 120_000] {
        let req = OtRequest { n: m * base.beta, ..base };
        match ot_parameters(&req) {
            Ok(p) => println!("strict n={:<9} ell={:<6} error={:.3e}", p.n, p.ell, p.error),
            Err(e) => println!("strict n={:<9} rejected: {e}", req.n),
        }
    }
    let small = OtRequest { n: 600, beta: 100, lambda: 0.5, ..base };
    println!("strict beta=100: {}", ot_parameters(&small).unwrap_err());

    let demo = ot_parameters(&OtRequest { n: 24, beta: 4, mode: OtMode::Demo, ..base }).unwrap();
    println!("demo n=24 ell={} formula={} binding={}", demo.ell, demo.ell_formula, demo.error_binding);
}
