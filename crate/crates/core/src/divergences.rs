//! Rényi-family divergences on Gaussians and finite discrete laws, plus the
//! shifted Rényi divergence
//! `D_α^{(z)}(μ ‖ ν) = inf { D_α(μ' ‖ ν) : W_∞(μ, μ') ≤ z }`
//! on small one-dimensional supports.
//!
//! Order `α = 1` is always the KL divergence, evaluated from its own formula.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest support size accepted by [`shifted_renyi_discrete`].
pub const SHIFTED_ORACLE_MAX_SUPPORT: usize = 16;

/// Bin count used by the mixing experiments.
pub const DEFAULT_TV_BINS: usize = 64;

/// Univariate Gaussian; zero variance is a point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian1D {
    pub mean: f64,
    pub variance: f64,
}

impl Gaussian1D {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !(mean.is_finite() && variance.is_finite() && variance >= 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "Gaussian needs finite mean and variance >= 0, got ({mean}, {variance})"
            )));
        }
        Ok(Gaussian1D { mean, variance })
    }

    pub fn standard() -> Self {
        Gaussian1D {
            mean: 0.0,
            variance: 1.0,
        }
    }
}

/// Finite law on the real line with strictly increasing support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDist {
    support: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(support: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::InvalidDistribution(
                "support and weights must be nonempty and of equal length".into(),
            ));
        }
        if support.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDistribution("support points must be finite".into()));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDistribution("support must be strictly increasing".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidDistribution("weights must be >= 0".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteDist { support, weights })
    }

    /// Sorts, merges repeated points and renormalizes away rounding drift.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
        if pairs.iter().any(|(x, w)| x.is_nan() || w.is_nan()) {
            return Err(Error::InvalidDistribution("NaN in pairs".into()));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut support: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pairs.len());
        for (x, w) in pairs {
            if support.last() == Some(&x) {
                *weights.last_mut().unwrap() += w;
            } else {
                support.push(x);
                weights.push(w);
            }
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        DiscreteDist::new(support, weights)
    }

    pub fn dirac(x: f64) -> Self {
        DiscreteDist {
            support: vec![x],
            weights: vec![1.0],
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Pushforward under `f`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_pairs(self.support.iter().map(|&x| f(x)).zip(self.weights.iter().copied()))
    }

    /// Law of `X + Y` for independent `X ~ self`, `Y ~ other`.
    pub fn convolve(&self, other: &DiscreteDist) -> Result<Self> {
        let mut pairs = Vec::with_capacity(self.len() * other.len());
        for (x, p) in self.support.iter().zip(&self.weights) {
            for (y, q) in other.support.iter().zip(&other.weights) {
                pairs.push((x + y, p * q));
            }
        }
        Self::from_pairs(pairs)
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().zip(&self.weights).map(|(x, w)| x * w).sum()
    }
}

/// Paired masses of `μ` and `ν` on the union of their supports.
fn aligned(mu: &DiscreteDist, nu: &DiscreteDist) -> Vec<(f64, f64)> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(mu.len() + nu.len());
    while i < mu.len() || j < nu.len() {
        let take_mu = j >= nu.len() || (i < mu.len() && mu.support[i] <= nu.support[j]);
        let take_nu = i >= mu.len() || (j < nu.len() && nu.support[j] <= mu.support[i]);
        let p = if take_mu { mu.weights[i] } else { 0.0 };
        let q = if take_nu { nu.weights[j] } else { 0.0 };
        out.push((p, q));
        if take_mu {
            i += 1;
        }
        if take_nu {
            j += 1;
        }
    }
    out
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha >= 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!("Renyi order must be >= 1, got {alpha}")))
    }
}

/// `ln(1+u) − u`, accurate for small `u`.
pub(crate) fn log1p_minus(u: f64) -> f64 {
    if u.abs() < 0.01 {
        // Σ_{k≥2} (−1)^{k+1} u^k / k
        let mut power = u;
        let mut sum = 0.0;
        for k in 2..=12 {
            power *= -u;
            sum -= power / k as f64;
        }
        -sum
    } else {
        u.ln_1p() - u
    }
}

/// Closed-form `D_α(g0 ‖ g1)`.
///
/// With `δ = (σ0² − σ1²)/σ1²`, `β = 1 − α` and `g(u) = ln(1+u) − u` the log
/// term is `g(βδ)/2β − g(δ)/2`, accurate both as α → 1 and as δ → 0.
pub fn renyi_gaussian(alpha: f64, g0: Gaussian1D, g1: Gaussian1D) -> Result<f64> {
    check_order(alpha)?;
    if g1.variance <= 0.0 {
        return Err(Error::DegenerateReference);
    }
    let d2 = (g1.mean - g0.mean).powi(2);
    let delta = (g0.variance - g1.variance) / g1.variance;
    if alpha == 1.0 {
        if g0.variance == 0.0 {
            return Ok(f64::INFINITY);
        }
        return Ok(-0.5 * log1p_minus(delta) + 0.5 * d2 / g1.variance);
    }
    let sigma_alpha_sq = (1.0 - alpha) * g0.variance + alpha * g1.variance;
    if sigma_alpha_sq <= 0.0 {
        return Err(Error::OrderTooLargeForVariancePair { alpha, sigma_alpha_sq });
    }
    if g0.variance == 0.0 {
        return Ok(f64::INFINITY);
    }
    let beta = 1.0 - alpha;
    let log_term = log1p_minus(beta * delta) / (2.0 * beta) - 0.5 * log1p_minus(delta);
    Ok(alpha * d2 / (2.0 * sigma_alpha_sq) + log_term)
}

/// `D_α(μ ‖ ν)` on the merged support; `+∞` when `μ` charges a point `ν` does not.
/// Support points are matched by exact equality.
pub fn renyi_discrete(alpha: f64, mu: &DiscreteDist, nu: &DiscreteDist) -> Result<f64> {
    check_order(alpha)?;
    let pairs = aligned(mu, nu);
    if pairs.iter().any(|&(p, q)| p > 0.0 && q == 0.0) {
        return Ok(f64::INFINITY);
    }
    let live = pairs.iter().filter(|(p, _)| *p > 0.0);
    if alpha == 1.0 {
        let kl: f64 = live.map(|&(p, q)| p * (p / q).ln()).sum();
        return Ok(kl.max(0.0));
    }
    let s: f64 = live.map(|&(p, q)| (p / q).powf(alpha) * q).sum();
    Ok((s.ln() / (alpha - 1.0)).max(0.0))
}

/// `½ Σ |μ_i − ν_i|`.
pub fn tv_discrete(mu: &DiscreteDist, nu: &DiscreteDist) -> f64 {
    0.5 * aligned(mu, nu).iter().map(|(p, q)| (p - q).abs()).sum::<f64>()
}

/// Hellinger distance `sqrt(Σ (√μ_i − √ν_i)²)`.
pub fn hellinger_discrete(mu: &DiscreteDist, nu: &DiscreteDist) -> f64 {
    aligned(mu, nu)
        .iter()
        .map(|(p, q)| (p.sqrt() - q.sqrt()).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// `Σ (μ_i − ν_i)² / ν_i`.
pub fn chi_squared_discrete(mu: &DiscreteDist, nu: &DiscreteDist) -> f64 {
    let mut total = 0.0;
    for (p, q) in aligned(mu, nu) {
        if q == 0.0 {
            if p > 0.0 {
                return f64::INFINITY;
            }
        } else {
            total += (p - q).powi(2) / q;
        }
    }
    total
}

/// Bounds implied by a KL value and a Rényi-2 value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonBounds {
    /// Pinsker: `sqrt(KL/2)`.
    pub tv_bound: f64,
    /// `sqrt(KL)`.
    pub hellinger_bound: f64,
    /// Exact: `exp(D_2) − 1`.
    pub chi2: f64,
}

pub fn comparison_bounds(kl: f64, d2: f64) -> Result<ComparisonBounds> {
    if !(kl >= 0.0 && d2 >= 0.0) {
        return Err(Error::arg(format!("divergences must be >= 0, got kl={kl}, d2={d2}")));
    }
    Ok(ComparisonBounds {
        tv_bound: (kl / 2.0).sqrt(),
        hellinger_bound: kl.sqrt(),
        chi2: d2.exp_m1(),
    })
}

/// `H_α = (exp((α−1) D_α) − 1)/(α − 1)`.
pub fn hellinger_alpha_from_renyi(alpha: f64, d_alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::arg(format!("Hellinger-alpha needs alpha > 1, got {alpha}")));
    }
    Ok(((alpha - 1.0) * d_alpha).exp_m1() / (alpha - 1.0))
}

/// Inverse of [`hellinger_alpha_from_renyi`]: `ln(1 + (α−1) H_α)/(α − 1)`.
pub fn renyi_from_hellinger_alpha(alpha: f64, h_alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::arg(format!("Hellinger-alpha needs alpha > 1, got {alpha}")));
    }
    Ok(((alpha - 1.0) * h_alpha).ln_1p() / (alpha - 1.0))
}

/// Upper bound on the shifted divergence between Gaussians obtained by
/// translating `g0` toward `g1` by at most `z`. No optimality is claimed.
pub fn shifted_renyi_gaussian_translation_bound(alpha: f64, g0: Gaussian1D, g1: Gaussian1D, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::arg(format!("shift must be >= 0, got {z}")));
    }
    let s = (g0.mean - g1.mean).clamp(-z, z);
    renyi_gaussian(
        alpha,
        Gaussian1D {
            mean: g0.mean - s,
            variance: g0.variance,
        },
        g1,
    )
}

/// Minimizer found for a shifted divergence.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedRenyiSolution {
    pub value: f64,
    /// The minimizing `μ'`, supported on `ν`'s support.
    pub mu_prime: Option<DiscreteDist>,
    pub iterations: usize,
    /// Frank–Wolfe duality gap of the final coupling (objective units).
    pub gap: f64,
    pub converged: bool,
}

/// Objective `Σ_j ν_j h(μ'_j/ν_j)` with `h(r) = r ln r` (α = 1) or `r^α` (α > 1).
struct ShiftObjective {
    alpha: f64,
    nu: Vec<f64>,
}

impl ShiftObjective {
    fn value(&self, col: &[f64]) -> f64 {
        col.iter()
            .zip(&self.nu)
            .map(|(&m, &n)| {
                if m <= 0.0 {
                    0.0
                } else if self.alpha == 1.0 {
                    m * (m / n).ln()
                } else {
                    n * (m / n).powf(self.alpha)
                }
            })
            .sum()
    }

    fn grad(&self, col: &[f64], out: &mut [f64]) {
        for ((o, &m), &n) in out.iter_mut().zip(col).zip(&self.nu) {
            *o = if self.alpha == 1.0 {
                (m.max(1e-300) / n).ln() + 1.0
            } else {
                self.alpha * (m.max(0.0) / n).powf(self.alpha - 1.0)
            };
        }
    }

    fn divergence(&self, objective: f64) -> f64 {
        if self.alpha == 1.0 {
            objective.max(0.0)
        } else {
            (objective.ln() / (self.alpha - 1.0)).max(0.0)
        }
    }
}

/// Couplings `P` with row sums `μ_i` and zeros outside the `|x_i − y_j| ≤ z` pattern.
struct CouplingPolytope {
    rows: Vec<f64>,
    /// Allowed column indices per row.
    allowed: Vec<Vec<usize>>,
    cols: usize,
}

impl CouplingPolytope {
    fn column_sums(&self, p: &[Vec<f64>], out: &mut [f64]) {
        out.fill(0.0);
        for (row, cols) in p.iter().zip(&self.allowed) {
            for (v, &j) in row.iter().zip(cols) {
                out[j] += v;
            }
        }
    }

    fn project(&self, p: &mut [Vec<f64>]) {
        for (row, &mass) in p.iter_mut().zip(&self.rows) {
            project_scaled_simplex(row, mass);
        }
    }

    /// `⟨∇, P⟩ − Σ_i μ_i min_{j allowed} ∇_j`.
    fn fw_gap(&self, p: &[Vec<f64>], g: &[f64]) -> f64 {
        let mut gap = 0.0;
        for ((row, cols), &mass) in p.iter().zip(&self.allowed).zip(&self.rows) {
            let inner: f64 = row.iter().zip(cols).map(|(v, &j)| v * g[j]).sum();
            let best = cols.iter().map(|&j| g[j]).fold(f64::INFINITY, f64::min);
            gap += inner - mass * best;
        }
        gap.max(0.0)
    }
}

/// Euclidean projection onto `{p ≥ 0, Σ p = mass}`.
fn project_scaled_simplex(v: &mut [f64], mass: f64) {
    if v.len() == 1 {
        v[0] = mass;
        return;
    }
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cum += uk;
        let t = (cum - mass) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

const SHIFT_MAX_ITERS: usize = 200_000;
const SHIFT_REL_CHANGE: f64 = 1e-10;
const SHIFT_GAP_TOL: f64 = 1e-7;

/// `D_α^{(z)}(μ ‖ ν)` for one-dimensional finite laws with at most
/// [`SHIFTED_ORACLE_MAX_SUPPORT`] points each.
pub fn shifted_renyi_discrete(alpha: f64, mu: &DiscreteDist, nu: &DiscreteDist, z: f64) -> Result<f64> {
    Ok(shifted_renyi_discrete_solve(alpha, mu, nu, z)?.value)
}

/// Solves the shifted divergence as a convex program over couplings.
///
/// Feasible `μ'` are the column sums of couplings `P` whose rows sum to `μ`
/// and which vanish where `|x_i − y_j| > z`; columns range over the points
/// `ν` charges, since any other `μ'` has infinite divergence. The objective is
/// convex in `P`. It is minimized by accelerated projected gradient with
/// backtracking and restarts; convergence requires a relative objective change
/// below `1e-10` together with a Frank–Wolfe gap below `1e-7`. If that does not
/// happen within the iteration budget, Frank–Wolfe with line search continues
/// from the best coupling found.
pub fn shifted_renyi_discrete_solve(
    alpha: f64,
    mu: &DiscreteDist,
    nu: &DiscreteDist,
    z: f64,
) -> Result<ShiftedRenyiSolution> {
    check_order(alpha)?;
    if !(z >= 0.0) {
        return Err(Error::arg(format!("shift must be >= 0, got {z}")));
    }
    for d in [mu, nu] {
        if d.len() > SHIFTED_ORACLE_MAX_SUPPORT {
            return Err(Error::OracleScaleExceeded {
                size: d.len(),
                limit: SHIFTED_ORACLE_MAX_SUPPORT,
            });
        }
    }

    let rows: Vec<(f64, f64)> = mu
        .support
        .iter()
        .zip(&mu.weights)
        .filter(|(_, w)| **w > 0.0)
        .map(|(x, w)| (*x, *w))
        .collect();
    let cols: Vec<(f64, f64)> = nu
        .support
        .iter()
        .zip(&nu.weights)
        .filter(|(_, w)| **w > 0.0)
        .map(|(y, w)| (*y, *w))
        .collect();
    let mut allowed = Vec::with_capacity(rows.len());
    for &(x, _) in &rows {
        let reach: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|(_, (y, _))| (x - y).abs() <= z + 1e-12 * x.abs().max(y.abs()).max(1.0))
            .map(|(j, _)| j)
            .collect();
        if reach.is_empty() {
            return Ok(ShiftedRenyiSolution {
                value: f64::INFINITY,
                mu_prime: None,
                iterations: 0,
                gap: 0.0,
                converged: true,
            });
        }
        allowed.push(reach);
    }
    let poly = CouplingPolytope {
        rows: rows.iter().map(|r| r.1).collect(),
        allowed,
        cols: cols.len(),
    };
    let obj = ShiftObjective {
        alpha,
        nu: cols.iter().map(|c| c.1).collect(),
    };

    let (p, f, iterations, gap, converged) = minimize_over_couplings(&poly, &obj);
    let mut col = vec![0.0; poly.cols];
    poly.column_sums(&p, &mut col);
    let mu_prime = DiscreteDist::from_pairs(cols.iter().map(|c| c.0).zip(col.iter().map(|v| v.max(0.0)))).ok();
    Ok(ShiftedRenyiSolution {
        value: obj.divergence(f),
        mu_prime,
        iterations,
        gap,
        converged,
    })
}

type Coupling = Vec<Vec<f64>>;

fn minimize_over_couplings(poly: &CouplingPolytope, obj: &ShiftObjective) -> (Coupling, f64, usize, f64, bool) {
    let mut x: Coupling = poly
        .allowed
        .iter()
        .zip(&poly.rows)
        .map(|(cols, &mass)| vec![mass / cols.len() as f64; cols.len()])
        .collect();
    let mut col = vec![0.0; poly.cols];
    let mut g = vec![0.0; poly.cols];
    let eval = |p: &Coupling, col: &mut [f64]| {
        poly.column_sums(p, col);
        obj.value(col)
    };

    let mut fx = eval(&x, &mut col);
    let mut y = x.clone();
    let mut momentum = 1.0f64;
    let mut lipschitz = 1.0f64;
    let mut iterations = 0;
    let mut gap = f64::INFINITY;
    let mut converged = false;

    while iterations < SHIFT_MAX_ITERS {
        iterations += 1;
        let fy = eval(&y, &mut col);
        obj.grad(&col, &mut g);

        // backtracking on the quadratic upper model at y
        let mut candidate;
        let mut f_cand;
        loop {
            candidate = y
                .iter()
                .zip(&poly.allowed)
                .map(|(row, cols)| {
                    row.iter()
                        .zip(cols)
                        .map(|(v, &j)| v - g[j] / lipschitz)
                        .collect::<Vec<f64>>()
                })
                .collect::<Coupling>();
            poly.project(&mut candidate);
            f_cand = eval(&candidate, &mut col);
            let mut lin = 0.0;
            let mut sq = 0.0;
            for ((cr, yr), cols) in candidate.iter().zip(&y).zip(&poly.allowed) {
                for ((c, yv), &j) in cr.iter().zip(yr).zip(cols) {
                    lin += g[j] * (c - yv);
                    sq += (c - yv) * (c - yv);
                }
            }
            if f_cand <= fy + lin + 0.5 * lipschitz * sq + 1e-15 * fy.abs().max(1.0) || lipschitz > 1e300 {
                break;
            }
            lipschitz *= 2.0;
        }

        let restart = f_cand > fx;
        let rel_change = (fx - f_cand).abs() / fx.abs().max(1e-12);
        if restart {
            // function-value restart: drop momentum and retry from x
            momentum = 1.0;
            y = x.clone();
            if rel_change < SHIFT_REL_CHANGE {
                poly.column_sums(&x, &mut col);
                obj.grad(&col, &mut g);
                gap = poly.fw_gap(&x, &g);
                if gap <= SHIFT_GAP_TOL * fx.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            continue;
        }

        let next_momentum = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let beta = (momentum - 1.0) / next_momentum;
        y = candidate
            .iter()
            .zip(&x)
            .map(|(cr, xr)| cr.iter().zip(xr).map(|(c, xv)| c + beta * (c - xv)).collect())
            .collect();
        poly.project(&mut y);
        x = candidate;
        momentum = next_momentum;
        let prev = fx;
        fx = f_cand;
        lipschitz *= 0.9;

        if (prev - fx).abs() <= SHIFT_REL_CHANGE * fx.abs().max(1e-12) || iterations % 64 == 0 {
            poly.column_sums(&x, &mut col);
            obj.grad(&col, &mut g);
            gap = poly.fw_gap(&x, &g);
            if gap <= SHIFT_GAP_TOL * fx.abs().max(1.0) {
                converged = true;
                break;
            }
        }
    }

    if !converged {
        let (fx2, gap2, extra, ok) = frank_wolfe(poly, obj, &mut x, SHIFT_MAX_ITERS);
        fx = fx2;
        gap = gap2;
        iterations += extra;
        converged = ok;
    }
    (x, fx, iterations, gap, converged)
}

/// Frank–Wolfe with golden-section line search over the product of simplices.
fn frank_wolfe(
    poly: &CouplingPolytope,
    obj: &ShiftObjective,
    x: &mut Coupling,
    max_iters: usize,
) -> (f64, f64, usize, bool) {
    let mut col = vec![0.0; poly.cols];
    let mut g = vec![0.0; poly.cols];
    let mut fx = 0.0;
    let mut gap = f64::INFINITY;
    for it in 1..=max_iters {
        poly.column_sums(x, &mut col);
        fx = obj.value(&col);
        obj.grad(&col, &mut g);
        gap = poly.fw_gap(x, &g);
        if gap <= SHIFT_GAP_TOL * fx.abs().max(1.0) {
            return (fx, gap, it, true);
        }
        let vertex: Coupling = poly
            .allowed
            .iter()
            .zip(&poly.rows)
            .map(|(cols, &mass)| {
                let best = (0..cols.len())
                    .min_by(|&a, &b| g[cols[a]].total_cmp(&g[cols[b]]))
                    .unwrap();
                let mut v = vec![0.0; cols.len()];
                v[best] = mass;
                v
            })
            .collect();
        let blend = |s: f64| -> Coupling {
            x.iter()
                .zip(&vertex)
                .map(|(xr, vr)| xr.iter().zip(vr).map(|(a, b)| a + s * (b - a)).collect())
                .collect()
        };
        let mut tmp = vec![0.0; poly.cols];
        let mut f_at = |s: f64| {
            poly.column_sums(&blend(s), &mut tmp);
            obj.value(&tmp)
        };
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..60 {
            let a = hi - phi * (hi - lo);
            let b = lo + phi * (hi - lo);
            if f_at(a) <= f_at(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let step = 0.5 * (lo + hi);
        if f_at(step) < fx {
            *x = blend(step);
        } else {
            return (fx, gap, it, false);
        }
    }
    (fx, gap, max_iters, false)
}

/// `½ Σ_k |p̂_k − q̂_k|` over `bins` equal-width bins spanning the pooled range.
pub fn empirical_tv(samples_a: &[f64], samples_b: &[f64], bins: usize) -> Result<f64> {
    Ok(empirical_tv_with_stderr(samples_a, samples_b, bins)?.0)
}

/// [`empirical_tv`] with a normal-approximation standard error: the spread of
/// `½ Σ_k s_k (p̂_k − q̂_k)` with the signs `s_k` frozen at their observed values.
pub fn empirical_tv_with_stderr(samples_a: &[f64], samples_b: &[f64], bins: usize) -> Result<(f64, f64)> {
    if samples_a.is_empty() || samples_b.is_empty() {
        return Err(Error::EmptySamples);
    }
    if bins < 2 {
        return Err(Error::arg(format!("need at least 2 bins, got {bins}")));
    }
    let (lo, hi) = samples_a
        .iter()
        .chain(samples_b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::arg("samples must be finite"));
    }
    let width = hi - lo;
    let histogram = |s: &[f64]| {
        let mut h = vec![0.0; bins];
        for &x in s {
            let k = if width > 0.0 {
                (((x - lo) / width) * bins as f64).floor().clamp(0.0, (bins - 1) as f64) as usize
            } else {
                0
            };
            h[k] += 1.0;
        }
        let n = s.len() as f64;
        h.iter_mut().for_each(|v| *v /= n);
        h
    };
    let p = histogram(samples_a);
    let q = histogram(samples_b);
    let tv = 0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let sign = |a: f64, b: f64| if a >= b { 1.0 } else { -1.0 };
    let mean_p: f64 = p.iter().zip(&q).map(|(a, b)| sign(*a, *b) * a).sum();
    let mean_q: f64 = p.iter().zip(&q).map(|(a, b)| sign(*a, *b) * b).sum();
    let var = (1.0 - mean_p * mean_p).max(0.0) / samples_a.len() as f64
        + (1.0 - mean_q * mean_q).max(0.0) / samples_b.len() as f64;
    Ok((tv, 0.5 * var.sqrt()))
}

/// Which divergence a [`DivergenceValue`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivergenceKind {
    Renyi { alpha: f64 },
    Kl,
    Tv,
    ChiSq,
    Hellinger,
    HellingerAlpha { alpha: f64 },
}

impl DivergenceKind {
    pub fn name(&self) -> &'static str {
        match self {
            DivergenceKind::Renyi { .. } => "renyi",
            DivergenceKind::Kl => "kl",
            DivergenceKind::Tv => "tv",
            DivergenceKind::ChiSq => "chi_sq",
            DivergenceKind::Hellinger => "hellinger",
            DivergenceKind::HellingerAlpha { .. } => "hellinger_alpha",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            DivergenceKind::Renyi { alpha } | DivergenceKind::HellingerAlpha { alpha } => Some(*alpha),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceValue {
    pub kind: DivergenceKind,
    /// Nonnegative; may be `+∞`.
    pub value: f64,
}

/// Writes rows as CSV `kind,alpha,value`; `alpha` is empty where it does not apply.
pub fn write_divergence_csv<W: Write>(out: W, rows: &[DivergenceValue]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "alpha", "value"])?;
    for r in rows {
        let alpha = r.kind.alpha().map(|a| a.to_string()).unwrap_or_default();
        w.write_record([r.kind.name().to_string(), alpha, r.value.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
