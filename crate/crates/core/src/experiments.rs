//! Config-driven experiment runs and their CSV/JSON outputs.
//!
//! Every run is a pure function of the config (including its seed); the
//! worker count only changes how fast it finishes.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::chain::{run_chain, sample_ensemble, write_trajectories_csv, ChainConfig, EnsembleSpec, Init};
use crate::divergences::{
    comparison_bounds, empirical_tv_with_stderr, hellinger_discrete, renyi_discrete, renyi_gaussian,
    shifted_renyi_discrete, tv_discrete, DiscreteDist, Gaussian1D, DEFAULT_TV_BINS,
};
use crate::error::{Error, Result};
use crate::geometry::{distance, ConvexBody};
use crate::oracles::{
    exact_iterate_law, exact_renyi_gap, random_walk_escape, random_walk_sup_tail, sc_lower_bound_value,
    simulate_iterate_variance, Horizon, QuadraticChainLaw, Side,
};
use crate::pabi::{
    mixing_time_lower_convex, mixing_time_lower_strongly_convex, mixing_time_upper_convex,
    mixing_time_upper_strongly_convex, optimal_shift_allocation, pabi_divergence_bound, unconstrained_diameter_adapter,
    BoundInputs, BoundReport, Metric, PabiMode,
};
use crate::potentials::{contraction_coefficient, FiniteSumPotential, PotentialComponent};

/// Slack granted to the 64-bin TV estimator.
pub const TV_ESTIMATOR_BUDGET: f64 = 0.05;

const DEFAULT_CHAINS: usize = 100_000;
const GRID_POINTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Bound,
    Simulate,
    Lower,
    Verify,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Bound => "bound",
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Lower => "lower",
            ExperimentKind::Verify => "verify",
        }
    }
}

/// Metric names accepted in configs; `renyi` expands over `alphas`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    Tv,
    Kl,
    ChiSquared,
    Hellinger,
    Renyi,
}

fn default_batch() -> usize {
    1
}
fn default_alphas() -> Vec<f64> {
    vec![1.0, 2.0]
}
fn default_eps() -> f64 {
    0.25
}
fn default_chains() -> usize {
    DEFAULT_CHAINS
}
fn default_metrics() -> Vec<MetricName> {
    vec![MetricName::Tv, MetricName::Kl, MetricName::Renyi]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Usually supplied by the CLI subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ExperimentKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<ConvexBody>,
    /// Defaults to the zero potential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<FiniteSumPotential>,
    pub eta: f64,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    /// Explicit horizons; simulate falls back to a log-spaced grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizons: Option<Vec<usize>>,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<MetricName>,
    #[serde(default = "default_chains")]
    pub chains: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Defaults to the body's corner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<Init>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter_proxy: Option<f64>,
    /// Number of corner-started trajectories to export from a simulate run.
    #[serde(default)]
    pub export_trajectories: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, eta: f64) -> Self {
        ExperimentConfig {
            kind: Some(kind),
            body: None,
            potential: None,
            eta,
            batch_size: 1,
            horizons: None,
            alphas: default_alphas(),
            eps: default_eps(),
            metrics: default_metrics(),
            chains: DEFAULT_CHAINS,
            master_seed: 0,
            init: None,
            diameter_proxy: None,
            export_trajectories: 0,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn kind(&self) -> Result<ExperimentKind> {
        self.kind
            .ok_or_else(|| Error::config("kind", "experiment kind is not set"))
    }

    fn body(&self) -> Result<ConvexBody> {
        let body = self
            .body
            .clone()
            .ok_or_else(|| Error::config("body", "this experiment needs a body"))?;
        body.validate().map_err(|e| Error::config("body", e.to_string()))?;
        Ok(body)
    }

    fn potential(&self, dim: usize) -> Result<FiniteSumPotential> {
        match &self.potential {
            Some(p) if p.dim() != dim => Err(Error::config(
                "potential",
                format!("potential has dimension {}, body has {dim}", p.dim()),
            )),
            Some(p) => Ok(p.clone()),
            None => FiniteSumPotential::single(PotentialComponent::zero(dim)),
        }
    }

    /// The chain described by the config, started from `init` (default: corner).
    pub fn chain_config(&self) -> Result<ChainConfig> {
        let body = self.body()?;
        let potential = self.potential(body.dim())?;
        let cfg = ChainConfig {
            body,
            potential,
            eta: self.eta,
            batch_size: self.batch_size,
            horizon: 0,
            init: self.init.clone().unwrap_or_else(Init::corner),
            master_seed: self.master_seed,
            diameter_proxy: self.diameter_proxy,
        };
        cfg.validate().map_err(field_error)?;
        Ok(cfg)
    }

    /// Checks every field the selected experiment reads.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind()?;
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::config(
                "eta",
                format!("must be positive and finite, got {}", self.eta),
            ));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::config("eps", format!("must lie in (0, 1), got {}", self.eps)));
        }
        if self.alphas.is_empty() {
            return Err(Error::config("alphas", "need at least one order"));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a >= 1.0 && a.is_finite())) {
            return Err(Error::config("alphas", format!("orders must be >= 1, got {a}")));
        }
        if matches!(&self.horizons, Some(h) if h.is_empty()) {
            return Err(Error::config("horizons", "grid must not be empty"));
        }
        if kind != ExperimentKind::Bound && self.chains == 0 {
            return Err(Error::config("chains", "must be at least 1"));
        }
        match kind {
            ExperimentKind::Bound => {
                if self.metrics.is_empty() {
                    return Err(Error::config("metrics", "need at least one metric"));
                }
                let body = self.body()?;
                let potential = self.potential(body.dim())?;
                contraction_coefficient(potential.strong_convexity(), potential.smoothness(), self.eta)
                    .map_err(field_error)?;
                unconstrained_diameter_adapter(&body, self.diameter_proxy, self.eps).map_err(field_error)?;
            }
            ExperimentKind::Simulate => {
                let cfg = self.chain_config()?;
                if cfg.body.dim() != 1 {
                    return Err(Error::config("body", "mixing curves need a one-dimensional body"));
                }
                cfg.stationary_burn_in().map_err(field_error)?;
            }
            ExperimentKind::Lower => {
                let body = self.body()?;
                if !matches!(body, ConvexBody::Interval { .. }) {
                    return Err(Error::config("body", "the lower-bound construction needs an interval"));
                }
                if self.chains < crate::oracles::MIN_ESCAPE_TRIALS {
                    return Err(Error::config(
                        "chains",
                        format!("need at least {} trials", crate::oracles::MIN_ESCAPE_TRIALS),
                    ));
                }
                let p = self.potential(1)?;
                contraction_coefficient(p.strong_convexity(), p.smoothness(), self.eta).map_err(field_error)?;
            }
            ExperimentKind::Verify => {}
        }
        Ok(())
    }
}

/// Attaches the config field responsible for a module-level error.
fn field_error(e: Error) -> Error {
    let field = match &e {
        Error::Config { .. } => return e,
        Error::StepsizeTooLarge { .. } => "eta",
        Error::BatchSizeOutOfRange { .. } | Error::EmptyBatch => "batch_size",
        Error::InitOutsideBody => "init",
        Error::DimensionMismatch { .. } | Error::InvalidPotential(_) => "potential",
        Error::InvalidBody(_) => "body",
        Error::UnboundedBody => "diameter_proxy",
        _ => "config",
    };
    Error::config(field, e.to_string())
}

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    /// Parameter echo as compact JSON.
    pub params: String,
    pub metric: String,
    #[serde(rename = "T")]
    pub horizon: Option<usize>,
    pub theoretical: Option<f64>,
    pub empirical: Option<f64>,
    pub stderr: Option<f64>,
    /// Present only where a tolerance is defined.
    pub pass: Option<bool>,
}

impl ResultRow {
    fn new(experiment: &str, params: serde_json::Value, metric: &str) -> Self {
        ResultRow {
            experiment: experiment.to_string(),
            params: params.to_string(),
            metric: metric.to_string(),
            horizon: None,
            theoretical: None,
            empirical: None,
            stderr: None,
            pass: None,
        }
    }

    fn at(mut self, t: usize) -> Self {
        self.horizon = Some(t);
        self
    }

    fn theory(mut self, v: f64) -> Self {
        self.theoretical = Some(v);
        self
    }

    fn measured(mut self, v: f64, stderr: Option<f64>) -> Self {
        self.empirical = Some(v);
        self.stderr = stderr;
        self
    }

    fn check(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }
}

/// Everything a run produces, keyed by file name.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub kind: ExperimentKind,
    pub rows: Vec<ResultRow>,
    pub files: Vec<(String, Vec<u8>)>,
}

impl ExperimentOutput {
    /// No row failed its tolerance.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass != Some(false))
    }

    pub fn file(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (name, bytes) in &self.files {
            fs::write(dir.join(name), bytes)?;
        }
        Ok(())
    }
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

/// Hex SHA-256 over the tool version and the canonical config JSON.
pub fn provenance_hash(cfg: &ExperimentConfig) -> Result<String> {
    let mut h = Sha256::new();
    h.update(concat!("mixlab ", env!("CARGO_PKG_VERSION"), "\n").as_bytes());
    h.update(serde_json::to_vec(cfg)?);
    Ok(hex::encode(h.finalize()))
}

/// Validates and runs the configured experiment.
pub fn run_experiment(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let kind = cfg.kind()?;
    let mut files = Vec::new();
    let rows = match kind {
        ExperimentKind::Bound => run_bound(cfg, &mut files)?,
        ExperimentKind::Simulate => run_simulate(cfg, workers, &mut files)?,
        ExperimentKind::Lower => run_lower(cfg, workers, &mut files)?,
        ExperimentKind::Verify => verify_suite(cfg.master_seed, cfg.chains, workers)?,
    };
    files.push(("results.csv".into(), csv_bytes(&rows)?));
    files.push(("results.json".into(), serde_json::to_vec_pretty(&rows)?));
    let sidecar = json!({
        "config": cfg,
        "provenance": {
            "tool": "mixlab",
            "version": env!("CARGO_PKG_VERSION"),
            "hash": provenance_hash(cfg)?,
        },
    });
    files.push(("config.json".into(), serde_json::to_vec_pretty(&sidecar)?));
    files.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(ExperimentOutput { kind, rows, files })
}

#[derive(Serialize)]
struct BoundCsvRow {
    formula_id: &'static str,
    metric: &'static str,
    alpha: f64,
    #[serde(rename = "D")]
    diameter: f64,
    eta: f64,
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
    eps: f64,
    value: f64,
}

fn expand_metrics(cfg: &ExperimentConfig) -> Vec<Metric> {
    let mut out = Vec::new();
    for name in &cfg.metrics {
        match name {
            MetricName::Tv => out.push(Metric::Tv),
            MetricName::Kl => out.push(Metric::Kl),
            MetricName::ChiSquared => out.push(Metric::ChiSquared),
            MetricName::Hellinger => out.push(Metric::Hellinger),
            MetricName::Renyi => out.extend(cfg.alphas.iter().map(|&alpha| Metric::Renyi { alpha })),
        }
    }
    out
}

fn run_bound(cfg: &ExperimentConfig, files: &mut Vec<(String, Vec<u8>)>) -> Result<Vec<ResultRow>> {
    let body = cfg.body()?;
    let potential = cfg.potential(body.dim())?;
    let (m, big_m) = (potential.strong_convexity(), potential.smoothness());
    let c = contraction_coefficient(m, big_m, cfg.eta)?;
    let patch = unconstrained_diameter_adapter(&body, cfg.diameter_proxy, cfg.eps)?;
    let d = patch.diameter;

    let mut reports: Vec<(BoundReport, f64)> = Vec::new();
    for metric in expand_metrics(cfg) {
        reports.push((mixing_time_upper_convex(d, cfg.eta, cfg.eps, metric)?, cfg.eps));
        if m > 0.0 && c < 1.0 {
            reports.push((
                mixing_time_upper_strongly_convex(d, cfg.eta, m, big_m, cfg.eps, metric)?,
                cfg.eps,
            ));
        }
        match metric {
            Metric::Tv if d > 0.0 => reports.push((mixing_time_lower_convex(d, cfg.eta)?, 0.25)),
            Metric::Kl | Metric::Renyi { .. } if m > 0.0 && c > 0.0 && c < 1.0 => {
                reports.push((mixing_time_lower_strongly_convex(metric.alpha(), c, cfg.eps)?, cfg.eps))
            }
            _ => {}
        }
    }

    let mut csv_rows = Vec::new();
    let mut rows = Vec::new();
    for (r, eps) in &reports {
        let metric = r.metric.unwrap_or(Metric::Tv);
        let alpha = metric.alpha();
        csv_rows.push(BoundCsvRow {
            formula_id: r.formula_id,
            metric: metric.name(),
            alpha,
            diameter: d,
            eta: cfg.eta,
            m,
            big_m,
            eps: *eps,
            value: r.value,
        });
        let mut params = json!({
            "formula_id": r.formula_id,
            "alpha": alpha,
            "D": d,
            "eta": cfg.eta,
            "m": m,
            "M": big_m,
            "eps": eps,
            "constants": r.constants,
        });
        if patch.proxied {
            params["tv_target"] = json!(patch.tv_target);
        }
        rows.push(ResultRow::new("bound", params, metric.name()).theory(r.value));
    }
    if let Some(horizons) = &cfg.horizons {
        for &t in horizons.iter().filter(|t| **t > 0) {
            for &alpha in &cfg.alphas {
                let inp = BoundInputs {
                    eps: cfg.eps,
                    ..BoundInputs::langevin(alpha, d, cfg.eta, m, big_m, t)?
                };
                for (mode, id) in [
                    (PabiMode::Piecewise, "pabi_piecewise"),
                    (PabiMode::Continuous, "pabi_continuous"),
                ] {
                    let v = pabi_divergence_bound(&inp, mode)?;
                    let params = json!({"formula_id": id, "alpha": alpha, "D": d, "eta": cfg.eta, "c": c});
                    rows.push(ResultRow::new("bound", params, "renyi").at(t).theory(v));
                }
            }
        }
    }
    files.push(("bounds.csv".into(), csv_bytes(&csv_rows)?));
    Ok(rows)
}

/// One point of a mixing curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    #[serde(rename = "T")]
    pub t: usize,
    pub tv: f64,
    pub stderr: f64,
}

/// Empirical TV between the time-`T` law of `chain` (started from its `init`)
/// and a stationary-proxy ensemble, for each `T` in `grid`.
///
/// The two ensembles use disjoint chain indices: `0..chains` for the curve and
/// `chains..2·chains` for the proxy.
pub fn estimate_mixing_curve(
    chain: &ChainConfig,
    chains: usize,
    grid: &[usize],
    workers: Option<usize>,
) -> Result<Vec<CurvePoint>> {
    if chain.body.dim() != 1 {
        return Err(Error::arg("mixing curves need a one-dimensional body"));
    }
    let spec = EnsembleSpec::new(chains).workers(workers);
    let snaps = sample_ensemble(chain, spec, grid)?;
    let proxy_cfg = chain.clone().with_init(Init::stationary_proxy());
    let proxy = sample_ensemble(&proxy_cfg, spec.offset(chains as u64), &[0])?;
    snaps
        .iter()
        .map(|s| {
            let (tv, stderr) = empirical_tv_with_stderr(&s.data, &proxy[0].data, DEFAULT_TV_BINS)?;
            Ok(CurvePoint { t: s.t, tv, stderr })
        })
        .collect()
}

/// `n` log-spaced horizons from `lo` to `hi`, rounded and deduplicated.
pub fn log_grid(lo: usize, hi: usize, n: usize) -> Vec<usize> {
    let lo = lo.max(1);
    let hi = hi.max(lo);
    let ratio = hi as f64 / lo as f64;
    let mut grid: Vec<usize> = (0..n)
        .map(|k| {
            let f = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.0 };
            (lo as f64 * ratio.powf(f)).round() as usize
        })
        .collect();
    grid.dedup();
    grid
}

/// Default simulate grid: from the TV lower bound to four times the TV-¼ upper bound.
pub fn default_mixing_grid(diameter: f64, eta: f64, m: f64, big_m: f64) -> Result<Vec<usize>> {
    let lower = mixing_time_lower_convex(diameter, eta)?.value as usize;
    let upper = mixing_time_upper_strongly_convex(diameter, eta, m, big_m, 0.25, Metric::Tv)?
        .value
        .min(mixing_time_upper_convex(diameter, eta, 0.25, Metric::Tv)?.value) as usize;
    Ok(log_grid(lower, 4 * upper, GRID_POINTS))
}

/// TV level the upper bounds certify after `t` steps, if below 1.
///
/// Convex: `k = ⌊t / ⌈2D²/η⌉⌋` blocks give `¼` for `k = 1` and `2^{−k}` after.
/// Strongly convex: Pinsker applied to the KL bound `(D²/4η) c^{2t}`.
pub fn tv_guarantee(t: usize, diameter: f64, eta: f64, m: f64, big_m: f64) -> Result<Option<f64>> {
    let block = mixing_time_upper_convex(diameter, eta, 0.25, Metric::Tv)?.value;
    let mut best = f64::INFINITY;
    if block == 0.0 {
        best = 0.0;
    } else {
        let k = (t as f64 / block).floor();
        if k >= 1.0 {
            best = if k == 1.0 { 0.25 } else { 0.5f64.powf(k) };
        }
    }
    let c = contraction_coefficient(m, big_m, eta)?;
    if m > 0.0 && c < 1.0 {
        let kl = diameter * diameter / (4.0 * eta) * c.powf(2.0 * t as f64);
        best = best.min((kl / 2.0).sqrt());
    }
    Ok((best < 1.0).then_some(best))
}

#[derive(Serialize)]
struct CurveCsvRow {
    #[serde(rename = "T")]
    t: usize,
    tv: f64,
    stderr: f64,
    guarantee: Option<f64>,
}

fn run_simulate(
    cfg: &ExperimentConfig,
    workers: Option<usize>,
    files: &mut Vec<(String, Vec<u8>)>,
) -> Result<Vec<ResultRow>> {
    let chain = cfg.chain_config()?;
    let d = chain.body.diameter().finite().or_else(|_| {
        cfg.diameter_proxy
            .ok_or_else(|| Error::config("diameter_proxy", "unbounded bodies need a diameter proxy"))
    })?;
    let (m, big_m) = (chain.potential.strong_convexity(), chain.potential.smoothness());
    let grid = match &cfg.horizons {
        Some(h) => h.clone(),
        None => default_mixing_grid(d, cfg.eta, m, big_m)?,
    };
    let curve = estimate_mixing_curve(&chain, cfg.chains, &grid, workers)?;

    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for p in &curve {
        let guarantee = tv_guarantee(p.t, d, cfg.eta, m, big_m)?;
        let params = json!({"D": d, "eta": cfg.eta, "m": m, "M": big_m, "chains": cfg.chains, "bins": DEFAULT_TV_BINS});
        let mut row = ResultRow::new("simulate", params, "tv")
            .at(p.t)
            .measured(p.tv, Some(p.stderr));
        if let Some(g) = guarantee {
            row = row.theory(g).check(p.tv <= g + TV_ESTIMATOR_BUDGET);
        }
        rows.push(row);
        csv_rows.push(CurveCsvRow {
            t: p.t,
            tv: p.tv,
            stderr: p.stderr,
            guarantee,
        });
    }
    files.push(("mixing_curve.csv".into(), csv_bytes(&csv_rows)?));

    if cfg.export_trajectories > 0 {
        let horizon = grid.iter().copied().max().unwrap_or(0);
        let run_cfg = chain.clone().with_horizon(horizon);
        let trajectories = (0..cfg.export_trajectories as u64)
            .map(|i| run_chain(&run_cfg, i).map(|tr| (i, tr)))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<(u64, &crate::chain::Trajectory)> = trajectories.iter().map(|(i, t)| (*i, t)).collect();
        let mut buf = Vec::new();
        write_trajectories_csv(&mut buf, &refs)?;
        files.push(("trajectories.csv".into(), buf));
    }
    Ok(rows)
}

#[derive(Serialize)]
struct LowerCsvRow {
    construction: &'static str,
    param_json: String,
    #[serde(rename = "T")]
    t: usize,
    analytic: f64,
    empirical: f64,
    stderr: f64,
}

fn run_lower(
    cfg: &ExperimentConfig,
    workers: Option<usize>,
    files: &mut Vec<(String, Vec<u8>)>,
) -> Result<Vec<ResultRow>> {
    let body = cfg.body()?;
    let d = body.diameter().finite()?;
    let potential = cfg.potential(1)?;
    let horizons = match &cfg.horizons {
        Some(h) => h.clone(),
        None => vec![mixing_time_lower_convex(d, cfg.eta)?.value as usize],
    };
    let mut csv_rows = Vec::new();
    let mut rows = Vec::new();

    for &t in &horizons {
        let est = random_walk_escape(d, cfg.eta, t, cfg.chains, cfg.master_seed, workers)?;
        let params = json!({"D": d, "eta": cfg.eta, "start": -d / 4.0});
        csv_rows.push(LowerCsvRow {
            construction: "convex_zero_potential",
            param_json: params.to_string(),
            t,
            analytic: est.ceiling,
            empirical: est.probability,
            stderr: est.stderr,
        });
        rows.push(
            ResultRow::new("lower", params, "escape_probability")
                .at(t)
                .theory(est.ceiling)
                .measured(est.probability, Some(est.stderr))
                .check(est.within_ceiling()),
        );
    }

    let (m, big_m) = (potential.strong_convexity(), potential.smoothness());
    if m > 0.0 {
        let q = QuadraticChainLaw::from_regularity(m, big_m, cfg.eta, Horizon::Infinite)?;
        let c = q.contraction();
        if c > 0.0 && c < 1.0 {
            for &t in horizons.iter().filter(|t| **t > 0) {
                for &alpha in &cfg.alphas {
                    let lower = sc_lower_bound_value(alpha, c, t);
                    let exact = exact_renyi_gap(alpha, c, t)?;
                    let params = json!({"alpha": alpha, "lambda": q.lambda, "eta": cfg.eta, "c": c});
                    csv_rows.push(LowerCsvRow {
                        construction: "sc_quadratic",
                        param_json: params.to_string(),
                        t,
                        analytic: lower,
                        empirical: exact,
                        stderr: 0.0,
                    });
                    rows.push(
                        ResultRow::new("lower", params, "renyi")
                            .at(t)
                            .theory(lower)
                            .measured(exact, Some(0.0))
                            .check(exact >= lower * (1.0 - 1e-12)),
                    );
                }
                let qt = q.at(Horizon::Finite(t));
                let var = exact_iterate_law(&qt)?.variance;
                let sim = simulate_iterate_variance(&qt, cfg.chains, cfg.master_seed, workers)?;
                let params = json!({"lambda": q.lambda, "eta": cfg.eta, "c": c});
                csv_rows.push(LowerCsvRow {
                    construction: "sc_quadratic_variance",
                    param_json: params.to_string(),
                    t,
                    analytic: var,
                    empirical: sim.variance,
                    stderr: sim.stderr,
                });
                rows.push(
                    ResultRow::new("lower", params, "variance")
                        .at(t)
                        .theory(var)
                        .measured(sim.variance, Some(sim.stderr))
                        .check((sim.variance - var).abs() <= 3.0 * sim.stderr),
                );
            }
        }
    }
    files.push(("lower.csv".into(), csv_bytes(&csv_rows)?));
    Ok(rows)
}

fn invariant(name: &str, params: serde_json::Value, worst: f64, limit: f64) -> ResultRow {
    ResultRow::new("verify", params, name)
        .theory(limit)
        .measured(worst, None)
        .check(worst <= limit)
}

fn random_dist<R: Rng>(rng: &mut R, support: &[f64]) -> DiscreteDist {
    let w: Vec<f64> = support.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    DiscreteDist::from_pairs(support.iter().copied().zip(w.iter().map(|x| x / total))).expect("valid weights")
}

/// Simpson's rule on `[lo, hi]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for k in 1..n {
        s += f(lo + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// The invariant suite behind `mixlab verify`: one row per property, each
/// reporting the worst violation seen against its allowed slack.
pub fn verify_suite(seed: u64, chains: usize, workers: Option<usize>) -> Result<Vec<ResultRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();

    // gradient steps are c-contractive
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let m: f64 = rng.random_range(0.0..2.0);
        let big_m: f64 = m + rng.random_range(0.0..3.0);
        let eta = rng.random_range(0.0..2.0 / big_m.max(1e-9));
        let curv = vec![m, big_m];
        let comp = PotentialComponent::diagonal(curv, vec![rng.random_range(-1.0..1.0), 0.0])?;
        let f = FiniteSumPotential::single(comp)?;
        let c = contraction_coefficient(m, big_m, eta)?;
        let x: Vec<f64> = (0..2).map(|_| rng.random_range(-5.0..5.0)).collect();
        let y: Vec<f64> = (0..2).map(|_| rng.random_range(-5.0..5.0)).collect();
        let gx = f.gradient_step(&[0], eta, &x)?;
        let gy = f.gradient_step(&[0], eta, &y)?;
        worst = worst.max(distance(&gx, &gy) - c * distance(&x, &y));
    }
    rows.push(invariant(
        "gradient_step_contractivity",
        json!({"trials": 10_000}),
        worst,
        1e-12,
    ));

    // projections are non-expansive
    let bodies = [
        ConvexBody::ball(vec![0.5, -0.5], 1.5)?,
        ConvexBody::boxed(vec![-1.0, 0.0], vec![2.0, 1.0])?,
    ];
    let mut worst = f64::NEG_INFINITY;
    for body in &bodies {
        for _ in 0..5_000 {
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-4.0..4.0)).collect();
            let y: Vec<f64> = (0..2).map(|_| rng.random_range(-4.0..4.0)).collect();
            worst = worst.max(distance(&body.project(&x)?, &body.project(&y)?) - distance(&x, &y));
        }
    }
    rows.push(invariant(
        "projection_nonexpansive",
        json!({"trials": 10_000}),
        worst,
        1e-12,
    ));

    // strongly convex sandwich: every term of the series
    // D_α − αx²/4 = Σ_{k≥3} (1 − β^{k−1}) x^k / 2k (x = c^{2T}, β = 1 − α)
    // is nonnegative only for α ≤ 2, so larger orders are reported, not asserted
    for (label, alphas) in [("", &[1.0, 1.5, 2.0][..]), ("_alpha_above_2", &[4.0][..])] {
        let (mut worst, mut worst_ratio) = (f64::NEG_INFINITY, 0.0f64);
        for &alpha in alphas {
            for c in [0.5, 0.9, 0.99] {
                for t in 1..=50 {
                    let exact = exact_renyi_gap(alpha, c, t)?;
                    let lower = sc_lower_bound_value(alpha, c, t);
                    worst = worst.max((lower - exact) / lower);
                    if c.powi(2 * t as i32) < 0.1 {
                        worst_ratio = worst_ratio.max(((exact / lower) - 1.5).abs() - 0.5);
                    }
                }
            }
        }
        let params = json!({"alphas": alphas, "c": [0.5, 0.9, 0.99], "T": "1..50"});
        let mut a = invariant(&format!("sc_lower_le_exact_gap{label}"), params.clone(), worst, 1e-12);
        let mut b = invariant(&format!("exact_gap_ratio_in_1_2{label}"), params, worst_ratio, 1e-12);
        if !label.is_empty() {
            a.pass = None;
            b.pass = None;
        }
        rows.push(a);
        rows.push(b);
    }

    // exact linear-Gaussian CNI ≤ continuous ≤ piecewise
    let mut worst = f64::NEG_INFINITY;
    for c in [0.1, 0.5, 0.9, 0.999, 1.0] {
        for t in [1, 2, 5, 20, 100] {
            for alpha in [1.0, 2.0, 4.0] {
                let eta = 0.05;
                let inp = BoundInputs {
                    alpha,
                    diameter: 1.0,
                    sigma2: 2.0 * eta,
                    c,
                    horizon: t,
                    ..BoundInputs::default()
                };
                let cont = pabi_divergence_bound(&inp, PabiMode::Continuous)?;
                let piece = pabi_divergence_bound(&inp, PabiMode::Piecewise)?;
                let exact = linear_cni_divergence(alpha, c, t, 1.0, 2.0 * eta);
                worst = worst.max((exact - cont) / cont).max((cont - piece) / piece);
            }
        }
    }
    rows.push(invariant(
        "pabi_exact_le_continuous_le_piecewise",
        json!({"grid": 75}),
        worst,
        1e-10,
    ));

    // allocation feasibility and objective identity
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let c = rng.random_range(0.3..1.0);
        let d = rng.random_range(0.1..3.0);
        let t = rng.random_range(1..40);
        let a = optimal_shift_allocation(c, d, t)?;
        worst = worst
            .max((a.constraint(c) - d).abs() / d)
            .max((a.objective() - d * d * a.beta).abs() / (d * d * a.beta));
    }
    rows.push(invariant(
        "allocation_feasible_and_consistent",
        json!({"cases": 50}),
        worst,
        1e-10,
    ));

    // Gaussian closed form vs quadrature
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let g0 = Gaussian1D::new(rng.random_range(-1.0..1.0), rng.random_range(0.5..1.5))?;
        let g1 = Gaussian1D::new(rng.random_range(-1.0..1.0), rng.random_range(0.8..2.0))?;
        for alpha in [1.0, 2.0] {
            if (1.0 - alpha) * g0.variance + alpha * g1.variance <= 0.1 {
                continue;
            }
            let closed = renyi_gaussian(alpha, g0, g1)?;
            let quad = gaussian_renyi_quadrature(alpha, g0, g1);
            worst = worst.max((closed - quad).abs());
        }
    }
    rows.push(invariant(
        "renyi_gaussian_vs_quadrature",
        json!({"pairs": 20}),
        worst,
        1e-8,
    ));

    // comparison inequalities and data processing on random discrete pairs
    let support: Vec<f64> = (0..6).map(|i| i as f64).collect();
    let (mut worst_cmp, mut worst_dp, mut worst_mono) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..200 {
        let mu = random_dist(&mut rng, &support);
        let nu = random_dist(&mut rng, &support);
        let kl = renyi_discrete(1.0, &mu, &nu)?;
        let d2 = renyi_discrete(2.0, &mu, &nu)?;
        let b = comparison_bounds(kl, d2)?;
        worst_cmp = worst_cmp
            .max(tv_discrete(&mu, &nu) - b.tv_bound)
            .max(hellinger_discrete(&mu, &nu) - b.hellinger_bound)
            .max((crate::divergences::chi_squared_discrete(&mu, &nu) - b.chi2).abs());
        let cut = rng.random_range(1..5) as f64;
        // merge the adjacent points cut − 1 and cut
        let merge = |x: f64| if x == cut { cut - 1.0 } else { x };
        let (hm, hn) = (mu.map(merge)?, nu.map(merge)?);
        let mut prev = 0.0;
        for alpha in [1.0, 1.5, 2.0, 4.0] {
            let full = renyi_discrete(alpha, &mu, &nu)?;
            worst_dp = worst_dp.max(renyi_discrete(alpha, &hm, &hn)? - full);
            worst_mono = worst_mono.max(prev - full);
            prev = full;
        }
    }
    rows.push(invariant(
        "comparison_inequalities",
        json!({"pairs": 200}),
        worst_cmp,
        1e-12,
    ));
    rows.push(invariant(
        "data_processing_coarsening",
        json!({"pairs": 200}),
        worst_dp,
        1e-10,
    ));
    rows.push(invariant(
        "renyi_monotone_in_alpha",
        json!({"alphas": [1, 1.5, 2, 4]}),
        worst_mono,
        1e-12,
    ));

    // shifted divergence: z = 0 identity, monotone in z, Dirac shift
    let (mut worst_zero, mut worst_mono) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..20 {
        let mu = random_dist(&mut rng, &support[..4]);
        let nu = random_dist(&mut rng, &support[..5]);
        for alpha in [1.0, 2.0] {
            let plain = renyi_discrete(alpha, &mu, &nu)?;
            let mut prev = shifted_renyi_discrete(alpha, &mu, &nu, 0.0)?;
            worst_zero = worst_zero.max((prev - plain).abs());
            for z in [0.5, 1.0, 2.0, 4.0] {
                let v = shifted_renyi_discrete(alpha, &mu, &nu, z)?;
                worst_mono = worst_mono.max(v - prev);
                prev = v;
            }
        }
    }
    let dirac = shifted_renyi_discrete(1.0, &DiscreteDist::dirac(0.3), &DiscreteDist::dirac(0.8), 0.5)?;
    rows.push(invariant(
        "shifted_zero_shift_identity",
        json!({"pairs": 20}),
        worst_zero,
        1e-10,
    ));
    rows.push(invariant(
        "shifted_nonincreasing_in_z",
        json!({"z": [0, 0.5, 1, 2, 4]}),
        worst_mono,
        1e-8,
    ));
    rows.push(invariant(
        "shifted_dirac_within_shift",
        json!({"x": 0.3, "y": 0.8, "z": 0.5}),
        dirac,
        0.0,
    ));

    // stationary variance is the fixed point of v ↦ c²v + 2η
    let q = QuadraticChainLaw::new(1.0, 0.1, Horizon::Infinite)?;
    let v = exact_iterate_law(&q)?.variance;
    let c = q.contraction();
    rows.push(invariant(
        "stationary_variance_fixed_point",
        json!({"lambda": 1, "eta": 0.1}),
        (c * c * v + 0.2 - v).abs(),
        1e-14,
    ));

    // Monte Carlo: iterate variance, escape ceiling, walk supremum
    let trials = chains.max(crate::oracles::MIN_ESCAPE_TRIALS);
    let qt = q.at(Horizon::Finite(5));
    let exact = exact_iterate_law(&qt)?.variance;
    let sim = simulate_iterate_variance(&qt, trials, seed, workers)?;
    rows.push(
        ResultRow::new(
            "verify",
            json!({"lambda": 1, "eta": 0.1, "chains": trials}),
            "iterate_variance",
        )
        .at(5)
        .theory(exact)
        .measured(sim.variance, Some(sim.stderr))
        .check((sim.variance - exact).abs() <= 3.0 * sim.stderr),
    );
    let eta = 1.0 / 400.0;
    let t = mixing_time_lower_convex(1.0, eta)?.value as usize;
    let esc = random_walk_escape(1.0, eta, t, trials, seed, workers)?;
    rows.push(
        ResultRow::new(
            "verify",
            json!({"D": 1, "eta": eta, "start": -0.25}),
            "escape_probability",
        )
        .at(t)
        .theory(esc.ceiling)
        .measured(esc.probability, Some(esc.stderr))
        .check(esc.within_ceiling() && esc.probability < 0.25),
    );
    for (a, t) in [(3.0, 4), (6.0, 16), (10.0, 25)] {
        let tail = random_walk_sup_tail(a, t, Side::Upper, trials, seed, workers)?;
        rows.push(
            ResultRow::new("verify", json!({"a": a, "side": "upper"}), "walk_sup_tail")
                .at(t)
                .theory(tail.ceiling)
                .measured(tail.probability, Some(tail.stderr))
                .check(tail.within_ceiling()),
        );
    }
    Ok(rows)
}

/// `D_α` between the time-`T` laws of `X ↦ cX + Z` started `D` apart:
/// both are Gaussian with equal variance `σ² Σ_{s<T} c^{2s}` and means `c^T D` apart.
pub fn linear_cni_divergence(alpha: f64, c: f64, horizon: usize, diameter: f64, sigma2: f64) -> f64 {
    let t = horizon as f64;
    let (gap2, var) = if c == 1.0 {
        (diameter * diameter, sigma2 * t)
    } else {
        let ln_c = c.ln();
        (
            diameter * diameter * (2.0 * t * ln_c).exp(),
            sigma2 * (-(2.0 * t * ln_c).exp_m1()) / (-(2.0 * ln_c).exp_m1()),
        )
    };
    alpha * gap2 / (2.0 * var)
}

/// `D_α` by Simpson quadrature of `∫ p^α q^{1−α}` (or `∫ p ln(p/q)`) over
/// ±12 standard deviations of the integrand's own Gaussian shape.
fn gaussian_renyi_quadrature(alpha: f64, g0: Gaussian1D, g1: Gaussian1D) -> f64 {
    let log_pdf = |g: Gaussian1D, x: f64| {
        -(x - g.mean).powi(2) / (2.0 * g.variance) - 0.5 * (2.0 * std::f64::consts::PI * g.variance).ln()
    };
    let (center, sd) = if alpha == 1.0 {
        (g0.mean, g0.variance.sqrt())
    } else {
        let va = (1.0 - alpha) * g0.variance + alpha * g1.variance;
        (
            (alpha * g1.variance * g0.mean + (1.0 - alpha) * g0.variance * g1.mean) / va,
            (g0.variance * g1.variance / va).sqrt(),
        )
    };
    let (lo, hi) = (center - 12.0 * sd, center + 12.0 * sd);
    if alpha == 1.0 {
        simpson(
            |x| log_pdf(g0, x).exp() * (log_pdf(g0, x) - log_pdf(g1, x)),
            lo,
            hi,
            20_000,
        )
    } else {
        let integral = simpson(
            |x| (alpha * log_pdf(g0, x) + (1.0 - alpha) * log_pdf(g1, x)).exp(),
            lo,
            hi,
            20_000,
        );
        integral.ln() / (alpha - 1.0)
    }
}
