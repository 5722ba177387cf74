//! Shifted Renyi solver against exhaustive search over three-point laws.

use mixlab::divergences::{renyi_discrete, shifted_renyi_discrete_solve};
use mixlab::DiscreteDist;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cdf(support: &[f64], weights: &[f64], x: f64) -> f64 {
    support
        .iter()
        .zip(weights)
        .filter(|(s, _)| **s <= x + 1e-12)
        .map(|(_, w)| w)
        .sum()
}

/// `W_∞(μ, μ') ≤ z` on the line iff `F_μ(x − z) ≤ F_μ'(x) ≤ F_μ(x + z)` for all `x`.
fn within_shift(mu: &DiscreteDist, support: &[f64], weights: &[f64], z: f64) -> bool {
    let mut points: Vec<f64> = mu.support().to_vec();
    points.extend_from_slice(support);
    let extra: Vec<f64> = points.iter().flat_map(|p| [p - z, p + z]).collect();
    points.extend(extra);
    points.iter().all(|&x| {
        let f = cdf(support, weights, x);
        cdf(mu.support(), mu.weights(), x - z) <= f + 1e-9 && f <= cdf(mu.support(), mu.weights(), x + z) + 1e-9
    })
}

/// Minimum of `D_α(μ' ‖ ν)` over feasible `μ'` on `ν`'s support, on a simplex grid of step `h`.
fn grid_minimum(alpha: f64, mu: &DiscreteDist, nu: &DiscreteDist, z: f64, h: f64) -> f64 {
    let n = (1.0 / h).round() as usize;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let w = [i as f64 * h, j as f64 * h, (n - i - j) as f64 * h];
            if !within_shift(mu, nu.support(), &w, z) {
                continue;
            }
            let cand = DiscreteDist::new(nu.support().to_vec(), w.to_vec()).unwrap();
            best = best.min(renyi_discrete(alpha, &cand, nu).unwrap());
        }
    }
    best
}

fn random_law<R: Rng>(rng: &mut R, support: Vec<f64>) -> DiscreteDist {
    let w: Vec<f64> = (0..support.len()).map(|_| rng.random_range(0.1..1.0)).collect();
    let s: f64 = w.iter().sum();
    DiscreteDist::new(support, w.iter().map(|x| x / s).collect()).unwrap()
}

#[test]
fn matches_exhaustive_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-3;
    for case in 0..6 {
        let mu = random_law(&mut rng, vec![0.0, 1.0, 2.0]);
        let nu = random_law(&mut rng, vec![0.5, 1.5, 2.5]);
        let z = [0.5, 0.75, 1.5][case % 3];
        let alpha = [1.0, 2.0][case % 2];
        let sol = shifted_renyi_discrete_solve(alpha, &mu, &nu, z).unwrap();
        let grid = grid_minimum(alpha, &mu, &nu, z, h);
        assert!(sol.converged, "{sol:?}");
        // the solver may beat the grid, but only by the grid's resolution
        assert!(
            sol.value <= grid + 1e-9,
            "case {case}: solver {} > grid {grid}",
            sol.value
        );
        assert!(
            sol.value >= grid - 5e-3,
            "case {case}: solver {} << grid {grid}",
            sol.value
        );
        let mp = sol.mu_prime.expect("finite value has a minimizer");
        assert!(within_shift(&mu, mp.support(), mp.weights(), z));
        assert!((renyi_discrete(alpha, &mp, &nu).unwrap() - sol.value).abs() <= 1e-9);
    }
}

#[test]
fn infeasible_shift_is_infinite() {
    let mu = DiscreteDist::dirac(0.0);
    let nu = DiscreteDist::new(vec![1.0, 2.0], vec![0.5, 0.5]).unwrap();
    let sol = shifted_renyi_discrete_solve(2.0, &mu, &nu, 0.5).unwrap();
    assert_eq!(sol.value, f64::INFINITY);
    assert!(sol.mu_prime.is_none());
}
