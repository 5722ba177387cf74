//! Mixing-time and divergence bound calculators.
//!
//! The central estimate: two contractive noisy iterations with shared
//! `c`-contractions, Gaussian noise of variance `σ²` and starts at most `D`
//! apart satisfy
//!
//! ```text
//! D_α(X_T ‖ X'_T) ≤ (α D² / 2σ²) · inf { Σ a_t² : a ≥ 0, Σ_t c^{-t} a_t = D } / D²
//! ```
//!
//! The infimum is attained at `a_t = c^{-t} β D` with
//! `β = (c² − 1)/(1 − c^{-2T})`, giving the "continuous" bound; the
//! "piecewise" bound substitutes the simpler allocations (`D/T` each when
//! `c = 1`, everything on the last step otherwise).
//!
//! Every iteration count is the ceiling of a real-valued formula, snapped to
//! the nearest integer when within `1e-9` relative so that `2·1/0.0025` is 800.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::potentials::contraction_coefficient;

/// Distance in which mixing is measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "snake_case")]
pub enum Metric {
    Tv,
    Kl,
    ChiSquared,
    Hellinger,
    Renyi { alpha: f64 },
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Tv => "tv",
            Metric::Kl => "kl",
            Metric::ChiSquared => "chi_squared",
            Metric::Hellinger => "hellinger",
            Metric::Renyi { .. } => "renyi",
        }
    }

    /// Rényi order the metric reduces to (1 for TV, KL and Hellinger, 2 for χ²).
    pub fn alpha(&self) -> f64 {
        match self {
            Metric::Renyi { alpha } => *alpha,
            Metric::ChiSquared => 2.0,
            _ => 1.0,
        }
    }

    /// `(α, threshold)` such that `D_α ≤ threshold` implies error `≤ ε` in this metric.
    fn renyi_target(&self, eps: f64) -> (f64, f64) {
        match self {
            Metric::Renyi { alpha } => (*alpha, eps),
            Metric::Kl => (1.0, eps),
            Metric::Tv => (1.0, 2.0 * eps * eps),
            Metric::ChiSquared => (2.0, eps.ln_1p()),
            Metric::Hellinger => (1.0, eps * eps),
        }
    }
}

/// Where a bound's constants come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantProvenance {
    /// The constant is given explicitly.
    Stated,
    /// Constants made explicit from a bound known only up to `≲`.
    ProofInstantiated,
}

/// Parameters shared by the bound calculators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub alpha: f64,
    pub diameter: f64,
    /// Per-coordinate noise variance; `2η` for the Langevin chain.
    pub sigma2: f64,
    pub c: f64,
    pub horizon: usize,
    pub eta: f64,
    pub m: f64,
    pub big_m: f64,
    pub eps: f64,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs {
            alpha: 1.0,
            diameter: 1.0,
            sigma2: 1.0,
            c: 1.0,
            horizon: 1,
            eta: 0.5,
            m: 0.0,
            big_m: 0.0,
            eps: 0.25,
        }
    }
}

impl BoundInputs {
    /// Inputs for the Langevin chain: `σ² = 2η` and `c` from `(m, M, η)`.
    pub fn langevin(alpha: f64, diameter: f64, eta: f64, m: f64, big_m: f64, horizon: usize) -> Result<Self> {
        Ok(BoundInputs {
            alpha,
            diameter,
            sigma2: 2.0 * eta,
            c: contraction_coefficient(m, big_m, eta)?,
            horizon,
            eta,
            m,
            big_m,
            eps: 0.25,
        })
    }
}

/// Output of a calculator together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub value: f64,
    pub formula_id: &'static str,
    pub metric: Option<Metric>,
    pub contraction: Option<f64>,
    pub allocation: Option<Vec<f64>>,
    pub beta_alloc: Option<f64>,
    pub constants: ConstantProvenance,
    /// Error level actually certified in TV when a diameter proxy was used.
    pub tv_target: Option<f64>,
}

impl BoundReport {
    fn new(value: f64, formula_id: &'static str, constants: ConstantProvenance) -> Self {
        BoundReport {
            value,
            formula_id,
            metric: None,
            contraction: None,
            allocation: None,
            beta_alloc: None,
            constants,
            tv_target: None,
        }
    }

    fn metric(mut self, metric: Metric) -> Self {
        self.metric = Some(metric);
        self
    }
}

/// Ceiling that treats values within `1e-9` relative of an integer as that integer.
pub fn ceil_snapped(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!("{name} must be positive and finite, got {v}")))
    }
}

fn nonnegative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!("{name} must be >= 0 and finite, got {v}")))
    }
}

fn order(alpha: f64) -> Result<()> {
    if alpha >= 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!("Renyi order must be >= 1, got {alpha}")))
    }
}

fn unit_contraction(c: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::arg(format!(
            "contraction coefficient must lie in [0, 1], got {c}"
        )))
    }
}

/// Which form of the divergence bound to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PabiMode {
    Piecewise,
    Continuous,
}

/// `β = (c² − 1)/(1 − c^{-2T})`, evaluated as `(1 − c²) c^{2T} / (1 − c^{2T})`
/// and replaced by its limit `1/T` when `|1 − c| < 1e-12`.
pub fn allocation_beta(c: f64, horizon: usize) -> f64 {
    let t = horizon as f64;
    if (1.0 - c).abs() < 1e-12 {
        return 1.0 / t;
    }
    if c == 0.0 {
        return 0.0;
    }
    let ln_c = c.ln();
    let c2t = (2.0 * t * ln_c).exp();
    (-(2.0 * ln_c).exp_m1()) * c2t / (-(2.0 * t * ln_c).exp_m1())
}

/// Rényi bound between the final iterates of two coupled contractive noisy iterations.
pub fn pabi_divergence_bound(inp: &BoundInputs, mode: PabiMode) -> Result<f64> {
    order(inp.alpha)?;
    nonnegative("diameter", inp.diameter)?;
    positive("sigma2", inp.sigma2)?;
    unit_contraction(inp.c)?;
    if inp.horizon == 0 {
        return Err(Error::arg("horizon must be at least 1"));
    }
    let scale = inp.alpha * inp.diameter * inp.diameter / (2.0 * inp.sigma2);
    let factor = match mode {
        PabiMode::Piecewise if inp.c == 1.0 => 1.0 / inp.horizon as f64,
        PabiMode::Piecewise => inp.c.powf(2.0 * inp.horizon as f64),
        PabiMode::Continuous => allocation_beta(inp.c, inp.horizon),
    };
    Ok(scale * factor)
}

/// [`pabi_divergence_bound`] with the allocation attached in continuous mode.
pub fn pabi_report(inp: &BoundInputs, mode: PabiMode) -> Result<BoundReport> {
    let value = pabi_divergence_bound(inp, mode)?;
    let mut report = match mode {
        PabiMode::Piecewise => BoundReport::new(value, "pabi_piecewise", ConstantProvenance::Stated),
        PabiMode::Continuous => BoundReport::new(value, "pabi_continuous", ConstantProvenance::Stated),
    }
    .metric(Metric::Renyi { alpha: inp.alpha });
    report.contraction = Some(inp.c);
    if mode == PabiMode::Continuous && inp.c > 0.0 {
        let alloc = optimal_shift_allocation(inp.c, inp.diameter, inp.horizon)?;
        report.beta_alloc = Some(alloc.beta);
        report.allocation = Some(alloc.shifts);
    }
    Ok(report)
}

/// Shift budget per step minimizing `Σ a_t²` subject to `Σ c^{-t} a_t = D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftAllocation {
    /// `a_1..a_T`.
    pub shifts: Vec<f64>,
    pub beta: f64,
}

impl ShiftAllocation {
    pub fn objective(&self) -> f64 {
        self.shifts.iter().map(|a| a * a).sum()
    }

    /// `Σ_t c^{-t} a_t`, evaluated as `Σ_t a_t / c^t`.
    pub fn constraint(&self, c: f64) -> f64 {
        self.shifts
            .iter()
            .enumerate()
            .map(|(i, a)| a / c.powi(i as i32 + 1))
            .sum()
    }
}

/// `a_t = c^{-t} β D`, i.e. `D (1 − c²) c^{2T−t} / (1 − c^{2T})`; `D/T` each for `c = 1`.
pub fn optimal_shift_allocation(c: f64, diameter: f64, horizon: usize) -> Result<ShiftAllocation> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::arg(format!("allocation needs c in (0, 1], got {c}")));
    }
    nonnegative("diameter", diameter)?;
    if horizon == 0 {
        return Err(Error::arg("horizon must be at least 1"));
    }
    let beta = allocation_beta(c, horizon);
    let shifts = if (1.0 - c).abs() < 1e-12 {
        vec![diameter / horizon as f64; horizon]
    } else {
        let t = horizon as f64;
        let ln_c = c.ln();
        let ratio = (-(2.0 * ln_c).exp_m1()) / (-(2.0 * t * ln_c).exp_m1());
        (1..=horizon)
            .map(|s| diameter * ratio * ((2.0 * t - s as f64) * ln_c).exp())
            .collect()
    };
    Ok(ShiftAllocation { shifts, beta })
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::arg(format!("target error must lie in (0, 1), got {eps}")))
    }
}

/// Mixing-time upper bound for convex potentials on a body of diameter `D`.
///
/// TV: `⌈2D²/η⌉` for `ε ≥ 1/4`, otherwise `⌈2D²/η⌉ · ⌈log₂(1/ε)⌉`.
/// Rényi-α: `⌈αD²/(4η)⌉ + ⌈2D²/η⌉ · ⌈log₂(2e^{α−1}/ε)⌉` (reach `D_α ≤ 1`, then
/// contract the α-Hellinger divergence from `2e^{α−1}` to `ε` in TV-mixing blocks).
/// KL is Rényi-1, χ² is Rényi-2 at `ln(1+ε)`, Hellinger is KL at `ε²`.
pub fn mixing_time_upper_convex(diameter: f64, eta: f64, eps: f64, metric: Metric) -> Result<BoundReport> {
    nonnegative("diameter", diameter)?;
    positive("eta", eta)?;
    check_eps(eps)?;
    let block = ceil_snapped(2.0 * diameter * diameter / eta);
    let renyi_time = |alpha: f64, target: f64| -> Result<f64> {
        order(alpha)?;
        let phase1 = ceil_snapped(alpha * diameter * diameter / (4.0 * eta));
        let blocks = ceil_snapped((2.0 * (alpha - 1.0).exp() / target).log2()).max(0.0);
        Ok(phase1 + block * blocks)
    };
    let report = match metric {
        Metric::Tv => {
            let value = if eps >= 0.25 {
                block
            } else {
                block * ceil_snapped((1.0 / eps).log2())
            };
            BoundReport::new(value, "convex_upper", ConstantProvenance::Stated)
        }
        Metric::Renyi { alpha } => BoundReport::new(
            renyi_time(alpha, eps)?,
            "convex_upper",
            ConstantProvenance::ProofInstantiated,
        ),
        Metric::Kl => BoundReport::new(
            renyi_time(1.0, eps)?,
            "convex_upper",
            ConstantProvenance::ProofInstantiated,
        ),
        Metric::ChiSquared => BoundReport::new(
            renyi_time(2.0, eps.ln_1p())?,
            "convex_upper",
            ConstantProvenance::ProofInstantiated,
        ),
        Metric::Hellinger => BoundReport::new(
            renyi_time(1.0, eps * eps)?,
            "convex_upper",
            ConstantProvenance::ProofInstantiated,
        ),
    };
    let mut report = report.metric(metric);
    report.contraction = Some(1.0);
    Ok(report)
}

/// Mixing-time upper bound for m-strongly convex, M-smooth potentials: the
/// smallest `T ≥ 1` with `(αD²/4η) c^{2T}` below the metric's Rényi threshold.
/// Falls back to [`mixing_time_upper_convex`] when `m = 0` or `c = 1`.
pub fn mixing_time_upper_strongly_convex(
    diameter: f64,
    eta: f64,
    m: f64,
    big_m: f64,
    eps: f64,
    metric: Metric,
) -> Result<BoundReport> {
    nonnegative("diameter", diameter)?;
    positive("eta", eta)?;
    check_eps(eps)?;
    let c = contraction_coefficient(m, big_m, eta)?;
    if m == 0.0 || c >= 1.0 {
        return mixing_time_upper_convex(diameter, eta, eps, metric);
    }
    let (alpha, threshold) = metric.renyi_target(eps);
    order(alpha)?;
    let initial = alpha * diameter * diameter / (4.0 * eta);
    let value = if c == 0.0 || initial <= threshold {
        1.0
    } else {
        ceil_snapped(0.5 * (initial / threshold).ln() / -c.ln()).max(1.0)
    };
    let mut report =
        BoundReport::new(value, "strongly_convex_upper", ConstantProvenance::ProofInstantiated).metric(metric);
    report.contraction = Some(c);
    Ok(report)
}

/// `⌈D²/(100η)⌉`: the zero potential on `[−D/2, D/2]` cannot reach TV ¼ sooner.
pub fn mixing_time_lower_convex(diameter: f64, eta: f64) -> Result<BoundReport> {
    positive("diameter", diameter)?;
    positive("eta", eta)?;
    Ok(BoundReport::new(
        ceil_snapped(diameter * diameter / (100.0 * eta)),
        "convex_lower",
        ConstantProvenance::Stated,
    )
    .metric(Metric::Tv))
}

/// Largest `T` with `αc^{4T}/4 > ε`; zero when `ε ≥ α/4`.
///
/// Certified only for `α ≤ 2`: for larger `α` the exact divergence of the
/// quadratic construction drops below `αc^{4T}/4`, so the count can overshoot.
pub fn mixing_time_lower_strongly_convex(alpha: f64, c: f64, eps: f64) -> Result<BoundReport> {
    order(alpha)?;
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::arg(format!("lower bound needs c in (0, 1), got {c}")));
    }
    positive("eps", eps)?;
    let value = if eps >= alpha / 4.0 {
        0.0
    } else {
        let x = (alpha / (4.0 * eps)).ln() / (4.0 * -c.ln());
        (ceil_snapped(x) - 1.0).max(0.0)
    };
    let mut report =
        BoundReport::new(value, "strongly_convex_lower", ConstantProvenance::Stated).metric(Metric::Renyi { alpha });
    report.contraction = Some(c);
    Ok(report)
}

/// Diameter substitution for the calculators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterPatch {
    pub diameter: f64,
    pub eps: f64,
    /// TV level certified for the original chain: `ε` for bounded bodies,
    /// `3ε` when a proxy diameter capturing all but `ε` mass is used.
    pub tv_target: f64,
    pub proxied: bool,
}

impl DiameterPatch {
    pub fn apply(&self, inputs: BoundInputs) -> BoundInputs {
        BoundInputs {
            diameter: self.diameter,
            eps: self.eps,
            ..inputs
        }
    }

    /// TV mixing time at the patched diameter, tagged with the certified level.
    pub fn tv_mixing_time(&self, eta: f64) -> Result<BoundReport> {
        let mut report = mixing_time_upper_convex(self.diameter, eta, self.eps, Metric::Tv)?;
        report.tv_target = Some(self.tv_target);
        Ok(report)
    }
}

/// Uses the body's diameter when finite; otherwise requires a caller-supplied
/// `D_{η,ε}` (radius of a ball around a mode holding all but `ε` of the
/// stationary mass). The chain must then start at a mode of the potential.
pub fn unconstrained_diameter_adapter(body: &ConvexBody, d_proxy: Option<f64>, eps: f64) -> Result<DiameterPatch> {
    check_eps(eps)?;
    match body.diameter() {
        crate::geometry::Diameter::Finite(d) => Ok(DiameterPatch {
            diameter: d,
            eps,
            tv_target: eps,
            proxied: false,
        }),
        crate::geometry::Diameter::Infinite => {
            let d = d_proxy.ok_or(Error::UnboundedBody)?;
            positive("diameter proxy", d)?;
            Ok(DiameterPatch {
                diameter: d,
                eps,
                tv_target: 3.0 * eps,
                proxied: true,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(alpha: f64, d: f64, sigma2: f64, c: f64, t: usize) -> BoundInputs {
        BoundInputs {
            alpha,
            diameter: d,
            sigma2,
            c,
            horizon: t,
            ..Default::default()
        }
    }

    #[test]
    fn pabi_piecewise_cases() {
        let b = pabi_divergence_bound(&inputs(2.0, 3.0, 0.5, 1.0, 4), PabiMode::Piecewise).unwrap();
        assert!((b - 2.0 * 9.0 / (2.0 * 0.5 * 4.0)).abs() < 1e-14);
        let b = pabi_divergence_bound(&inputs(1.0, 1.0, 0.2, 0.8, 5), PabiMode::Piecewise).unwrap();
        assert!((b - 0.8f64.powi(10) / 0.4).abs() < 1e-14);
    }

    #[test]
    fn pabi_continuous_is_continuous_at_one() {
        for t in [1, 3, 50, 1000] {
            let at_one = pabi_divergence_bound(&inputs(1.5, 2.0, 0.3, 1.0, t), PabiMode::Continuous).unwrap();
            let near = pabi_divergence_bound(&inputs(1.5, 2.0, 0.3, 1.0 - 1e-13, t), PabiMode::Continuous).unwrap();
            assert!((at_one - near).abs() <= 1e-9 * at_one);
            let close = pabi_divergence_bound(&inputs(1.5, 2.0, 0.3, 1.0 - 1e-9, t), PabiMode::Continuous).unwrap();
            assert!((at_one - close).abs() <= 1e-5 * at_one, "t={t}");
        }
    }

    #[test]
    fn continuous_never_exceeds_piecewise() {
        for c in (1..=100).map(|k| k as f64 / 100.0) {
            for t in [1, 2, 5, 17, 64, 300] {
                let i = inputs(1.0, 1.0, 1.0, c, t);
                let cont = pabi_divergence_bound(&i, PabiMode::Continuous).unwrap();
                let piece = pabi_divergence_bound(&i, PabiMode::Piecewise).unwrap();
                assert!(cont <= piece * (1.0 + 1e-12), "c={c} t={t}");
            }
        }
    }

    #[test]
    fn allocation_examples() {
        let a = optimal_shift_allocation(1.0, 1.0, 4).unwrap();
        assert_eq!(a.shifts, vec![0.25; 4]);
        assert!((a.objective() - 0.25).abs() < 1e-15);

        // c = 1/2, T = 2: minimize a1² + a2² s.t. 2a1 + 4a2 = 1 → a = (1/10, 1/5)
        let a = optimal_shift_allocation(0.5, 1.0, 2).unwrap();
        assert!((a.shifts[0] - 0.1).abs() < 1e-15 && (a.shifts[1] - 0.2).abs() < 1e-15);
        assert!((a.constraint(0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn allocation_feasible_and_matches_continuous_bound() {
        for c in [0.05, 0.3, 0.7, 0.95, 0.999, 1.0] {
            for t in [1, 2, 7, 40] {
                for d in [0.5, 1.0, 3.0] {
                    let a = optimal_shift_allocation(c, d, t).unwrap();
                    assert!((a.constraint(c) - d).abs() <= 1e-10 * d.max(1.0), "c={c} t={t}");
                    let (alpha, sigma2) = (2.0, 0.7);
                    let bound = pabi_divergence_bound(&inputs(alpha, d, sigma2, c, t), PabiMode::Continuous).unwrap();
                    let via_alloc = alpha / (2.0 * sigma2) * a.objective();
                    assert!((bound - via_alloc).abs() <= 1e-10 * bound.max(1.0));
                }
            }
        }
    }

    #[test]
    fn report_carries_allocation() {
        let r = pabi_report(&inputs(1.0, 1.0, 1.0, 0.9, 3), PabiMode::Continuous).unwrap();
        assert_eq!(r.allocation.as_ref().unwrap().len(), 3);
        assert!(r.beta_alloc.is_some());
    }

    #[test]
    fn convex_upper_examples() {
        let d = 1.0;
        let eta = 0.01;
        let tv = |eps| mixing_time_upper_convex(d, eta, eps, Metric::Tv).unwrap().value;
        assert_eq!(tv(0.25), 200.0);
        assert_eq!(tv(0.5), 200.0);
        // ⌈log₂ 16⌉ = 4 blocks
        assert_eq!(tv(1.0 / 16.0), 800.0);
        assert_eq!(tv(0.1), 800.0);
        let kl = mixing_time_upper_convex(d, eta, 0.1, Metric::Kl).unwrap();
        assert_eq!(kl.value, 1025.0);
        assert_eq!(kl.constants, ConstantProvenance::ProofInstantiated);
        let r = mixing_time_upper_convex(d, eta, 0.1, Metric::Renyi { alpha: 1.0 }).unwrap();
        assert_eq!(r.value, 1025.0);
        // α = 3: ⌈75⌉ + 200·⌈log₂(2e²/0.1)⌉ = 75 + 200·8
        let r = mixing_time_upper_convex(d, eta, 0.1, Metric::Renyi { alpha: 3.0 }).unwrap();
        assert_eq!(r.value, 75.0 + 200.0 * 8.0);
        assert!(mixing_time_upper_convex(d, eta, 1.0, Metric::Tv).is_err());
        assert_eq!(
            mixing_time_upper_convex(1.0, 1.0 / 400.0, 0.25, Metric::Tv)
                .unwrap()
                .value,
            800.0
        );
    }

    #[test]
    fn convex_reductions() {
        let (d, eta, eps) = (2.0, 0.05, 0.2);
        let chi = mixing_time_upper_convex(d, eta, eps, Metric::ChiSquared).unwrap().value;
        let r2 = mixing_time_upper_convex(d, eta, eps.ln_1p(), Metric::Renyi { alpha: 2.0 })
            .unwrap()
            .value;
        assert_eq!(chi, r2);
        let h = mixing_time_upper_convex(d, eta, eps, Metric::Hellinger).unwrap().value;
        let kl = mixing_time_upper_convex(d, eta, eps * eps, Metric::Kl).unwrap().value;
        assert_eq!(h, kl);
    }

    #[test]
    fn strongly_convex_upper_examples() {
        let r = mixing_time_upper_strongly_convex(1.0, 0.1, 1.0, 1.0, 1e-3, Metric::Kl).unwrap();
        assert_eq!(r.value, 38.0);
        assert!((r.contraction.unwrap() - 0.9).abs() < 1e-15);
        // scan: first T where the Rényi bound drops below ε
        let first = (1..).find(|&t| 2.5 * 0.9f64.powi(2 * t) <= 1e-3).unwrap();
        assert_eq!(first as f64, r.value);

        // already below threshold at one step
        let r = mixing_time_upper_strongly_convex(0.1, 0.1, 1.0, 1.0, 0.05, Metric::Kl).unwrap();
        assert_eq!(r.value, 1.0);
        // m = 0 redirects
        let r = mixing_time_upper_strongly_convex(1.0, 0.1, 0.0, 1.0, 0.25, Metric::Tv).unwrap();
        assert_eq!(r.formula_id, "convex_upper");
        // c = 0
        let r = mixing_time_upper_strongly_convex(1.0, 0.5, 2.0, 2.0, 0.01, Metric::Kl).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn strongly_convex_rate_shape_for_small_steps() {
        // η < 1/M: c = 1 − ηm, so T·ηm / ln(αD²/(4ηε)) stays near 1/2
        for &eta in &[1e-2, 1e-3, 1e-4] {
            let r = mixing_time_upper_strongly_convex(1.0, eta, 1.0, 2.0, 1e-3, Metric::Kl).unwrap();
            assert!((r.contraction.unwrap() - (1.0 - eta)).abs() < 1e-15);
            let shape = r.value * eta / (1.0 / (4.0 * eta * 1e-3)).ln();
            assert!((shape - 0.5).abs() < 0.05, "eta={eta} shape={shape}");
        }
    }

    #[test]
    fn convex_lower_examples() {
        assert_eq!(mixing_time_lower_convex(1.0, 0.01).unwrap().value, 1.0);
        assert_eq!(mixing_time_lower_convex(10.0, 0.01).unwrap().value, 100.0);
        assert_eq!(mixing_time_lower_convex(1.0, 1.0 / 400.0).unwrap().value, 4.0);
        for eta in [0.001, 0.0123, 0.07] {
            let a = mixing_time_lower_convex(3.0, eta).unwrap().value;
            let b = mixing_time_lower_convex(6.0, eta).unwrap().value;
            assert!(b >= 4.0 * a - 3.0 && b <= 4.0 * a);
        }
    }

    #[test]
    fn strongly_convex_lower_examples() {
        assert_eq!(mixing_time_lower_strongly_convex(1.0, 0.9, 1e-3).unwrap().value, 13.0);
        assert_eq!(mixing_time_lower_strongly_convex(1.0, 0.9, 0.25).unwrap().value, 0.0);
        assert_eq!(mixing_time_lower_strongly_convex(2.0, 0.5, 0.7).unwrap().value, 0.0);
        for c in [0.3, 0.6, 0.9, 0.99] {
            for eps in [1e-2, 1e-4, 1e-7] {
                let one = mixing_time_lower_strongly_convex(1.0, c, eps).unwrap().value;
                let two = mixing_time_lower_strongly_convex(2.0, c, eps).unwrap().value;
                let shift = (2f64.ln() / (4.0 * -f64::ln(c))).floor();
                let diff = two - one;
                assert!(diff == shift || diff == shift + 1.0, "c={c} eps={eps} diff={diff}");
                // the defining inequality
                let t = one as i32;
                assert!(c.powi(4 * t) / 4.0 > eps);
                assert!(c.powi(4 * (t + 1)) / 4.0 <= eps * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn upper_dominates_lower_convex() {
        for d in [0.01, 0.3, 1.0, 5.0, 40.0] {
            for eta in [1e-4, 3e-3, 0.05, 0.5, 2.0] {
                let up = mixing_time_upper_convex(d, eta, 0.25, Metric::Tv).unwrap().value;
                let lo = mixing_time_lower_convex(d, eta).unwrap().value;
                assert!(up >= lo && up <= 200.0 * lo, "d={d} eta={eta}");
            }
        }
    }

    #[test]
    fn strongly_convex_sandwich() {
        for d in [1.0, 4.0] {
            for eta in [0.01, 0.1, 0.4] {
                for (m, big_m) in [(0.5, 1.0), (1.0, 2.0), (0.2, 4.0)] {
                    if eta >= 2.0 / big_m || d * d < eta {
                        continue;
                    }
                    let c = contraction_coefficient(m, big_m, eta).unwrap();
                    for alpha in [1.0, 2.0, 4.0] {
                        for eps in [1e-2, 1e-4] {
                            let up = mixing_time_upper_strongly_convex(d, eta, m, big_m, eps, Metric::Renyi { alpha })
                                .unwrap()
                                .value;
                            let lo = mixing_time_lower_strongly_convex(alpha, c, eps).unwrap().value;
                            assert!(lo <= up, "d={d} eta={eta} m={m} M={big_m} alpha={alpha} eps={eps}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn adapter_cases() {
        let iv = ConvexBody::centered_interval(2.0).unwrap();
        let p = unconstrained_diameter_adapter(&iv, None, 0.1).unwrap();
        assert_eq!((p.diameter, p.tv_target, p.proxied), (2.0, 0.1, false));
        let base = BoundInputs::default();
        assert_eq!(p.apply(base).diameter, 2.0);

        let ws = ConvexBody::whole_space(1).unwrap();
        assert_eq!(
            unconstrained_diameter_adapter(&ws, None, 0.01),
            Err(Error::UnboundedBody)
        );
        let p = unconstrained_diameter_adapter(&ws, Some(5.0), 0.01).unwrap();
        assert!((p.tv_target - 0.03).abs() < 1e-15);
        let eta = 0.1;
        let r = p.tv_mixing_time(eta).unwrap();
        assert_eq!(r.value, 2.0 * 25.0 / eta * 7.0);
        assert_eq!(r.tv_target, Some(p.tv_target));
    }
}
