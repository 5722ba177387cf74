//! Two chains driven by shared noise, and the auxiliary unprojected process.

use mixlab::chain::{run_auxiliary_cni, run_coupled_pair};
use mixlab::{ChainConfig, ConvexBody, FiniteSumPotential, Init, PotentialComponent, Result};

pub fn main() -> Result<()> {
    let cfg = ChainConfig::new(
        ConvexBody::interval(-1.0, 1.0)?,
        FiniteSumPotential::single(PotentialComponent::quadratic(1.0, vec![0.0])?)?,
        0.1,
        30,
        Init::corner(),
    )
    .with_seed(7);
    let c = cfg.contraction()?;
    let (a, b) = run_coupled_pair(&cfg, &[-1.0], &[1.0], 0)?;
    for t in [0, 1, 5, 10, 30] {
        let gap = (a.states[t][0] - b.states[t][0]).abs();
        println!("T={t:>2}: |X - X'| = {gap:.6}, c^T D = {:.6}", c.powi(t as i32) * 2.0);
    }
    let aux = run_auxiliary_cni(&cfg, &[-1.0], 0)?;
    let y = aux.auxiliary.as_ref().expect("auxiliary path");
    println!("auxiliary Y_T = {:.4}, projected X_T = {:.4}", y[30][0], aux.last()[0]);
    Ok(())
}
