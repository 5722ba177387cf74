//! Shifted Renyi divergence between small discrete laws.

use mixlab::divergences::{renyi_discrete, shifted_renyi_discrete, shifted_renyi_discrete_solve};
use mixlab::{DiscreteDist, Result};

pub fn main() -> Result<()> {
    let mu = DiscreteDist::new(vec![0.0, 1.0], vec![0.5, 0.5])?;
    let nu = DiscreteDist::new(vec![0.0, 1.0, 2.0], vec![0.6, 0.3, 0.1])?;
    println!("plain D_2 = {:.6}", renyi_discrete(2.0, &mu, &nu)?);
    for z in [0.0, 0.5, 1.0, 2.0] {
        let sol = shifted_renyi_discrete_solve(2.0, &mu, &nu, z)?;
        println!(
            "z = {z}: D_2^(z) = {:.6}, minimizer weights {:?}, {} iterations",
            sol.value,
            sol.mu_prime
                .map(|m| m.weights().iter().map(|w| (w * 1e4).round() / 1e4).collect::<Vec<_>>()),
            sol.iterations
        );
    }
    // two Diracs at distance eps agree once the shift covers eps
    let d = shifted_renyi_discrete(3.0, &DiscreteDist::dirac(0.0), &DiscreteDist::dirac(0.25), 0.25)?;
    println!("Dirac pair at distance 0.25, z = 0.25: {d}");
    Ok(())
}
