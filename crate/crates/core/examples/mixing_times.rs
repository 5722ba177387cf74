//! Upper and lower mixing-time bounds, including the unconstrained diameter proxy.

use mixlab::pabi::{
    mixing_time_lower_convex, mixing_time_lower_strongly_convex, mixing_time_upper_convex,
    mixing_time_upper_strongly_convex, unconstrained_diameter_adapter,
};
use mixlab::potentials::contraction_coefficient;
use mixlab::{ConvexBody, Metric, Result};

pub fn main() -> Result<()> {
    let (d, eta) = (1.0, 0.01);
    for metric in [Metric::Tv, Metric::Kl, Metric::Renyi { alpha: 4.0 }] {
        let r = mixing_time_upper_convex(d, eta, 0.1, metric)?;
        println!("convex upper ({}, eps 0.1): {}", metric.name(), r.value);
    }
    println!("convex lower: {}", mixing_time_lower_convex(d, eta)?.value);

    let (m, big_m) = (1.0, 4.0);
    let up = mixing_time_upper_strongly_convex(d, eta, m, big_m, 0.01, Metric::Renyi { alpha: 2.0 })?;
    let c = contraction_coefficient(m, big_m, eta)?;
    let lo = mixing_time_lower_strongly_convex(2.0, c, 0.01)?;
    println!("strongly convex, D_2 <= 0.01: lower {} <= upper {}", lo.value, up.value);

    let patch = unconstrained_diameter_adapter(&ConvexBody::whole_space(1)?, Some(20.0), 0.1)?;
    println!(
        "whole space with proxy D = {}: TV target {}, T = {}",
        patch.diameter,
        patch.tv_target,
        patch.tv_mixing_time(eta)?.value
    );
    Ok(())
}
