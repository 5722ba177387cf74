//! Exact laws for quadratic potentials and the random-walk escape construction.

use mixlab::oracles::{
    exact_iterate_law, exact_renyi_gap, random_walk_escape, sc_lower_bound_value, simulate_iterate_variance, Horizon,
    QuadraticChainLaw,
};
use mixlab::pabi::mixing_time_lower_convex;
use mixlab::Result;

pub fn main() -> Result<()> {
    let q = QuadraticChainLaw::new(1.0, 0.1, Horizon::Finite(20))?;
    let law = exact_iterate_law(&q)?;
    let stationary = exact_iterate_law(&q.at(Horizon::Infinite))?;
    let mc = simulate_iterate_variance(&q, 20_000, 1, None)?;
    println!(
        "Var X_20 = {:.5} (MC {:.5} +- {:.5}), stationary {:.5}",
        law.variance, mc.variance, mc.stderr, stationary.variance
    );

    let c = q.contraction();
    for t in [1, 5, 10, 20] {
        println!(
            "T={t:>2}: D_2 gap {:.4e} >= {:.4e}",
            exact_renyi_gap(2.0, c, t)?,
            sc_lower_bound_value(2.0, c, t)
        );
    }

    let (d, eta) = (1.0, 1.0 / 400.0);
    let t = mixing_time_lower_convex(d, eta)?.value as usize;
    let esc = random_walk_escape(d, eta, t, 10_000, 3, None)?;
    println!(
        "escape after T={t}: P = {:.4} +- {:.4}, ceiling {:.4}",
        esc.probability, esc.stderr, esc.ceiling
    );
    Ok(())
}
