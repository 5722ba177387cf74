//! Closed-form Gaussian Renyi divergences, discrete divergences and the comparison inequalities.

use mixlab::divergences::{
    comparison_bounds, hellinger_discrete, renyi_discrete, renyi_gaussian, tv_discrete, write_divergence_csv,
    DivergenceKind, DivergenceValue,
};
use mixlab::{DiscreteDist, Gaussian1D, Result};

pub fn main() -> Result<()> {
    let g0 = Gaussian1D::new(0.5, 1.0)?;
    let g1 = Gaussian1D::standard();
    for alpha in [1.0, 2.0, 4.0] {
        println!("D_{alpha}(N(0.5,1) || N(0,1)) = {:.6}", renyi_gaussian(alpha, g0, g1)?);
    }

    let mu = DiscreteDist::new(vec![0.0, 1.0, 2.0], vec![0.5, 0.3, 0.2])?;
    let nu = DiscreteDist::new(vec![0.0, 1.0, 2.0], vec![0.2, 0.3, 0.5])?;
    let kl = renyi_discrete(1.0, &mu, &nu)?;
    let d2 = renyi_discrete(2.0, &mu, &nu)?;
    let b = comparison_bounds(kl, d2)?;
    println!("TV {:.4} <= {:.4}", tv_discrete(&mu, &nu), b.tv_bound);
    println!("H  {:.4} <= {:.4}", hellinger_discrete(&mu, &nu), b.hellinger_bound);
    println!("chi^2 = {:.4}", b.chi2);

    let rows = [
        DivergenceValue {
            kind: DivergenceKind::Kl,
            value: kl,
        },
        DivergenceValue {
            kind: DivergenceKind::Renyi { alpha: 2.0 },
            value: d2,
        },
        DivergenceValue {
            kind: DivergenceKind::Tv,
            value: tv_discrete(&mu, &nu),
        },
    ];
    let mut csv = Vec::new();
    write_divergence_csv(&mut csv, &rows)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
