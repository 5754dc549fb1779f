//! Largest secure storage rate ν* against depolarizing memory with retention r,
//! using the uncertainty bound and the older 1/2 bound.

use bsm_core::secparams::{retention_grid, security_region};

fn main() -> bsm_core::error::Result<()> {
    let grid = retention_grid(0.05, 10)?;
    for d in [2, 3, 5] {
        println!("d = {d}");
        println!("{:>6} {:>10} {:>10} {:>10}", "r", "C_N", "new", "old");
        for p in security_region(d, &grid)? {
            println!("{:>6.3} {:>10.6} {:>10.6} {:>10.6}", p.r, p.capacity, p.nu_star_new, p.nu_star_old);
        }
    }
    Ok(())
}
