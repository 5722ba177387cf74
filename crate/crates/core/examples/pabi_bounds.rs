//! Divergence bounds from shifted divergences and the optimal shift allocation.

use mixlab::pabi::{optimal_shift_allocation, pabi_divergence_bound, pabi_report};
use mixlab::{BoundInputs, PabiMode, Result};

pub fn main() -> Result<()> {
    let (d, eta, m, big_m) = (1.0, 0.05, 1.0, 2.0);
    for t in [1, 10, 50, 200] {
        let inp = BoundInputs::langevin(2.0, d, eta, m, big_m, t)?;
        let cont = pabi_divergence_bound(&inp, PabiMode::Continuous)?;
        let piece = pabi_divergence_bound(&inp, PabiMode::Piecewise)?;
        println!("T={t:>3}: continuous {cont:.3e}, piecewise {piece:.3e}");
    }
    let alloc = optimal_shift_allocation(0.9, d, 6)?;
    println!(
        "shifts {:?}",
        alloc.shifts.iter().map(|a| (a * 1e4).round() / 1e4).collect::<Vec<_>>()
    );
    println!(
        "sum c^-t a_t = {:.6}, objective {:.6}",
        alloc.constraint(0.9),
        alloc.objective()
    );
    let report = pabi_report(&BoundInputs::langevin(1.0, d, eta, 0.0, 0.0, 100)?, PabiMode::Piecewise)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
