//! Gradient-step contraction for smooth, strongly convex potentials.

use mixlab::potentials::contraction_coefficient;
use mixlab::{FiniteSumPotential, PotentialComponent, Result};

pub fn main() -> Result<()> {
    let f = FiniteSumPotential::new(vec![
        PotentialComponent::quadratic(1.0, vec![0.0, 0.0])?,
        PotentialComponent::diagonal(vec![0.5, 3.0], vec![1.0, -1.0])?,
    ])?;
    let (m, big_m) = (f.strong_convexity(), f.smoothness());
    println!("m = {m}, M = {big_m}, minimizer {:?}", f.minimizer());
    for eta in [0.05, 0.1, 2.0 / (m + big_m), 0.4] {
        let c = contraction_coefficient(m, big_m, eta)?;
        let (x, y) = ([1.0, 2.0], [-0.5, 0.3]);
        let batch = [0, 1];
        let gx = f.gradient_step(&batch, eta, &x)?;
        let gy = f.gradient_step(&batch, eta, &y)?;
        let before = dist(&x, &y);
        let after = dist(&gx, &gy);
        println!(
            "eta {eta:.4}: c = {c:.4}, |x-y| {before:.4} -> {after:.4} (<= {:.4})",
            c * before
        );
    }
    Ok(())
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}
