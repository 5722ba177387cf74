//! Closed-form laws for the lower-bound constructions and Monte Carlo checks
//! of the random-walk escape estimates.
//!
//! Strongly convex construction: `f(x) = λx²/2` on the real line, started at 0.
//! The iterate is `X_T = Σ_{s<T} (1−ηλ)^{T−1−s} Z_s`, so with `c = |1−ηλ|`
//!
//! ```text
//! X_T ~ N(0, 2η (1 − c^{2T}) / (1 − c²)),   π_η = N(0, 2η / (1 − c²)).
//! ```

use serde::{Deserialize, Serialize};

use crate::chain::{sample_ensemble, ChainConfig, EnsembleSpec, Init};
use crate::divergences::{log1p_minus, Gaussian1D};
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::potentials::{FiniteSumPotential, PotentialComponent};
use crate::rng::{chain_rng, map_chains};

/// Fewest trials accepted by the escape estimators.
pub const MIN_ESCAPE_TRIALS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Horizon {
    Finite(usize),
    /// The stationary law.
    Infinite,
}

/// The chain `X_{t+1} = (1 − ηλ) X_t + Z_t` with `X_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticChainLaw {
    pub lambda: f64,
    pub eta: f64,
    pub horizon: Horizon,
}

impl QuadraticChainLaw {
    pub fn new(lambda: f64, eta: f64, horizon: Horizon) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidPotential(format!("curvature must be >= 0, got {lambda}")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::arg(format!("eta must be positive, got {eta}")));
        }
        let q = QuadraticChainLaw { lambda, eta, horizon };
        if q.contraction() > 1.0 + 1e-12 {
            return Err(Error::StepsizeTooLarge {
                eta,
                limit: 2.0 / lambda,
            });
        }
        Ok(q)
    }

    /// Curvature attaining `max(|1−ηm|, |1−ηM|)`; ties go to `M`.
    pub fn from_regularity(m: f64, big_m: f64, eta: f64, horizon: Horizon) -> Result<Self> {
        let lambda = if (1.0 - eta * big_m).abs() >= (1.0 - eta * m).abs() {
            big_m
        } else {
            m
        };
        Self::new(lambda, eta, horizon)
    }

    pub fn contraction(&self) -> f64 {
        (1.0 - self.eta * self.lambda).abs()
    }

    pub fn at(self, horizon: Horizon) -> Self {
        QuadraticChainLaw { horizon, ..self }
    }
}

/// Law of `X_T` (or of `π_η` for [`Horizon::Infinite`]).
pub fn exact_iterate_law(q: &QuadraticChainLaw) -> Result<Gaussian1D> {
    let c = q.contraction();
    let two_eta = 2.0 * q.eta;
    let variance = match q.horizon {
        Horizon::Infinite if c >= 1.0 => {
            return Err(Error::arg("no stationary law when the contraction coefficient is 1"))
        }
        Horizon::Infinite => two_eta / (1.0 - c * c),
        Horizon::Finite(0) => 0.0,
        Horizon::Finite(_) if c == 0.0 => two_eta,
        Horizon::Finite(t) if c >= 1.0 => two_eta * t as f64,
        Horizon::Finite(t) => {
            let ln_c = c.ln();
            two_eta * (-(2.0 * t as f64 * ln_c).exp_m1()) / (-(2.0 * ln_c).exp_m1())
        }
    };
    Gaussian1D::new(0.0, variance)
}

/// `D_α(X_T ‖ π_η)` for the quadratic construction.
///
/// With `x = c^{2T}` and `β = 1 − α` the divergence is
/// `(1/2β) ln(1 − βx) − ½ ln(1 − x)`, and `½(−x − ln(1 − x))` at `α = 1`.
/// Both are evaluated as `g(−βx)/2β − g(−x)/2` with `g(u) = ln(1+u) − u`,
/// which avoids cancellation when `x` is small.
pub fn exact_renyi_gap(alpha: f64, c: f64, horizon: usize) -> Result<f64> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::arg(format!("Renyi order must be >= 1, got {alpha}")));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::arg(format!("need c in (0, 1), got {c}")));
    }
    if horizon == 0 {
        return Err(Error::arg("horizon must be at least 1"));
    }
    let x = (2.0 * horizon as f64 * c.ln()).exp();
    let beta = 1.0 - alpha;
    debug_assert!(1.0 - beta * x > 0.0);
    let stationary_part = -0.5 * log1p_minus(-x);
    if beta == 0.0 {
        return Ok(stationary_part);
    }
    Ok(log1p_minus(-beta * x) / (2.0 * beta) + stationary_part)
}

/// `αc^{4T}/4`.
///
/// Below [`exact_renyi_gap`] for `α ≤ 2`. For `α > 2` the gap is
/// `αx²/4 − Σ_{k≥3} (β^{k−1} − 1) x^k/(2k)` with `x = c^{2T}`, `β = 1 − α`, which
/// falls below `αx²/4` for all `x` under a threshold (about 0.84 at `α = 4`),
/// so for every large enough `T`.
pub fn sc_lower_bound_value(alpha: f64, c: f64, horizon: usize) -> f64 {
    alpha * c.powf(4.0 * horizon as f64) / 4.0
}

/// Monte Carlo probability with its normal-approximation standard error and an analytic ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub probability: f64,
    pub stderr: f64,
    pub ceiling: f64,
    pub trials: usize,
}

impl TailEstimate {
    fn from_hits(hits: usize, trials: usize, ceiling: f64) -> Self {
        let p = hits as f64 / trials as f64;
        TailEstimate {
            probability: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            ceiling,
            trials,
        }
    }

    /// Estimate does not exceed the ceiling by more than three standard errors.
    pub fn within_ceiling(&self) -> bool {
        self.probability <= self.ceiling + 3.0 * self.stderr
    }
}

/// Zero potential on `[−D/2, D/2]` started at `−D/4`: estimates `P[X_T ≥ 0]`
/// against the ceiling `exp(−D²/(64Tη))`.
pub fn random_walk_escape(
    diameter: f64,
    eta: f64,
    horizon: usize,
    trials: usize,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<TailEstimate> {
    if trials < MIN_ESCAPE_TRIALS {
        return Err(Error::arg(format!(
            "need at least {MIN_ESCAPE_TRIALS} trials, got {trials}"
        )));
    }
    let cfg = ChainConfig::new(
        ConvexBody::centered_interval(diameter)?,
        FiniteSumPotential::single(PotentialComponent::zero(1))?,
        eta,
        horizon,
        Init::Point(vec![-diameter / 4.0]),
    )
    .with_seed(master_seed);
    let snap = sample_ensemble(&cfg, EnsembleSpec::new(trials).workers(workers), &[horizon])?;
    let hits = snap[0].data.iter().filter(|x| **x >= 0.0).count();
    let ceiling = (-diameter * diameter / (64.0 * horizon as f64 * eta)).exp();
    Ok(TailEstimate::from_hits(hits, trials, ceiling))
}

/// Which excursions of the walk count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `max_t S_t ≥ a`.
    Upper,
    /// `max_t |S_t| ≥ a`.
    Both,
}

/// Estimates `P(max_{t ≤ T} S_t ≥ a)` (or the two-sided version) for a walk with
/// standard normal steps, against the ceiling `exp(−a²/(2T))`.
///
/// The one-sided ceiling is a Doob maximal bound. The two-sided event can
/// exceed it when `a` is close to `√T` (for long walks the probability
/// approaches about 0.63 at `a = √T`, above `e^{−1/2}`).
pub fn random_walk_sup_tail(
    a: f64,
    horizon: usize,
    side: Side,
    trials: usize,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<TailEstimate> {
    use rand_distr::{Distribution, StandardNormal};
    if !(a > 0.0) || horizon == 0 {
        return Err(Error::arg("need a > 0 and T >= 1"));
    }
    if trials < MIN_ESCAPE_TRIALS {
        return Err(Error::arg(format!(
            "need at least {MIN_ESCAPE_TRIALS} trials, got {trials}"
        )));
    }
    let hit = map_chains(0, trials, workers, |idx| {
        let mut rng = chain_rng(master_seed, idx);
        let mut s = 0.0f64;
        let mut crossed = false;
        for _ in 0..horizon {
            let xi: f64 = StandardNormal.sample(&mut rng);
            s += xi;
            crossed |= match side {
                Side::Upper => s >= a,
                Side::Both => s.abs() >= a,
            };
        }
        crossed
    })?;
    let hits = hit.iter().filter(|h| **h).count();
    Ok(TailEstimate::from_hits(
        hits,
        trials,
        (-a * a / (2.0 * horizon as f64)).exp(),
    ))
}

/// Sample variance with the standard error `sqrt((m₄ − s⁴)/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceEstimate {
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
}

pub fn sample_variance(xs: &[f64]) -> Result<VarianceEstimate> {
    if xs.len() < 2 {
        return Err(Error::EmptySamples);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for x in xs {
        let d = (x - mean).powi(2);
        m2 += d;
        m4 += d * d;
    }
    let variance = m2 / (n - 1.0);
    let m4 = m4 / n;
    let pop = m2 / n;
    Ok(VarianceEstimate {
        mean,
        variance,
        stderr: ((m4 - pop * pop).max(0.0) / n).sqrt(),
    })
}

/// Simulates the quadratic construction on the real line and returns the
/// variance of `X_T` over `chains` runs.
pub fn simulate_iterate_variance(
    q: &QuadraticChainLaw,
    chains: usize,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<VarianceEstimate> {
    let Horizon::Finite(t) = q.horizon else {
        return Err(Error::arg("simulation needs a finite horizon"));
    };
    let potential = if q.lambda == 0.0 {
        PotentialComponent::zero(1)
    } else {
        PotentialComponent::quadratic(q.lambda, vec![0.0])?
    };
    let cfg = ChainConfig::new(
        ConvexBody::whole_space(1)?,
        FiniteSumPotential::single(potential)?,
        q.eta,
        t,
        Init::Point(vec![0.0]),
    )
    .with_seed(master_seed);
    let snap = sample_ensemble(&cfg, EnsembleSpec::new(chains).workers(workers), &[t])?;
    sample_variance(&snap[0].data)
}
