//! One projected stochastic Langevin trajectory, printed as CSV.

use mixlab::chain::{run_chain, write_trajectories_csv};
use mixlab::{ChainConfig, ConvexBody, FiniteSumPotential, Init, PotentialComponent, Result};

pub fn main() -> Result<()> {
    let potential = FiniteSumPotential::new(vec![
        PotentialComponent::quadratic(2.0, vec![0.3])?,
        PotentialComponent::quadratic(1.0, vec![-0.2])?,
        PotentialComponent::zero(1),
    ])?;
    let cfg = ChainConfig::new(ConvexBody::interval(-1.0, 1.0)?, potential, 0.01, 8, Init::corner())
        .with_batch_size(2)
        .with_seed(42);
    let traj = run_chain(&cfg, 0)?;
    let mut csv = Vec::new();
    write_trajectories_csv(&mut csv, &[(0, &traj)])?;
    print!("{}", String::from_utf8_lossy(&csv));
    // same seed and chain index, same path
    assert_eq!(run_chain(&cfg, 0)?, traj);
    Ok(())
}
