//! Empirical TV between the corner-started chain and a stationary proxy.

use mixlab::experiments::{estimate_mixing_curve, tv_guarantee};
use mixlab::{ChainConfig, ConvexBody, FiniteSumPotential, Init, PotentialComponent, Result};

pub fn main() -> Result<()> {
    let (d, eta) = (1.0, 0.01);
    let cfg = ChainConfig::new(
        ConvexBody::centered_interval(d)?,
        FiniteSumPotential::single(PotentialComponent::zero(1))?,
        eta,
        0,
        Init::corner(),
    )
    .with_seed(5);
    let grid = [0, 10, 50, 100, 200, 400];
    for p in estimate_mixing_curve(&cfg, 20_000, &grid, None)? {
        let g = tv_guarantee(p.t, d, eta, 0.0, 0.0)?;
        println!("T={:>3}: TV {:.4} +- {:.4}, guarantee {g:?}", p.t, p.tv, p.stderr);
    }
    Ok(())
}
