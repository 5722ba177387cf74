//! The projected stochastic Langevin chain
//! `X_{t+1} = Π_K[X_t − (η/b) Σ_{i∈B_t} ∇f_i(X_t) + Z_t]`, `Z_t ~ N(0, 2η I)`,
//! together with coupled runs and the auxiliary unprojected sequence
//! `Y_{t+1} = φ_{t+1}(Y_t) + Z_t`, `φ_{t+1}(y) = Π(y) − (η/b) Σ ∇f_i(Π(y))`.
//!
//! All randomness for chain `i` comes from [`chain_rng`]`(master_seed, i)`:
//! first the batch for step `t`, then its Gaussian vector. Two runs sharing a
//! chain index therefore share a tape.

use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::pabi::{self, Metric};
use crate::potentials::{contraction_coefficient, FiniteSumPotential};
use crate::rng::{chain_rng, map_chains};

/// Named starting points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitMarker {
    /// Burn in for four times the TV-¼ upper bound from the potential's mode.
    #[serde(rename = "stationary-proxy")]
    StationaryProxy,
    /// The body's extreme point, see [`ConvexBody::corner`].
    #[serde(rename = "corner")]
    Corner,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Init {
    Point(Vec<f64>),
    Marker(InitMarker),
}

impl Init {
    pub fn stationary_proxy() -> Self {
        Init::Marker(InitMarker::StationaryProxy)
    }

    pub fn corner() -> Self {
        Init::Marker(InitMarker::Corner)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub body: ConvexBody,
    pub potential: FiniteSumPotential,
    pub eta: f64,
    pub batch_size: usize,
    pub horizon: usize,
    pub init: Init,
    pub master_seed: u64,
    /// Stand-in diameter for unbounded bodies, used only to size burn-in.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter_proxy: Option<f64>,
}

impl ChainConfig {
    /// Full-batch chain on a single-component potential.
    pub fn new(body: ConvexBody, potential: FiniteSumPotential, eta: f64, horizon: usize, init: Init) -> Self {
        ChainConfig {
            body,
            potential,
            eta,
            batch_size: 1,
            horizon,
            init,
            master_seed: 0,
            diameter_proxy: None,
        }
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn with_batch_size(mut self, b: usize) -> Self {
        self.batch_size = b;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.body.validate()?;
        if self.body.dim() != self.potential.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.body.dim(),
                got: self.potential.dim(),
            });
        }
        let n = self.potential.len();
        if self.batch_size == 0 || self.batch_size > n {
            return Err(Error::BatchSizeOutOfRange { b: self.batch_size, n });
        }
        self.contraction()?;
        if let Init::Point(p) = &self.init {
            self.check_init(p)?;
        }
        if let Some(d) = self.diameter_proxy {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::arg(format!("diameter proxy must be positive, got {d}")));
            }
        }
        Ok(())
    }

    fn check_init(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.body.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.body.dim(),
                got: p.len(),
            });
        }
        if !self.body.contains(p) {
            return Err(Error::InitOutsideBody);
        }
        Ok(())
    }

    /// Contraction coefficient of one stochastic gradient step.
    pub fn contraction(&self) -> Result<f64> {
        contraction_coefficient(self.potential.strong_convexity(), self.potential.smoothness(), self.eta)
    }

    /// Per-coordinate noise variance `2η`.
    pub fn noise_variance(&self) -> f64 {
        2.0 * self.eta
    }

    /// Burn-in length used by the stationary proxy: four times the TV-¼
    /// mixing upper bound for this body and potential.
    pub fn stationary_burn_in(&self) -> Result<usize> {
        let d = match self.diameter_proxy {
            Some(d) if !self.body.diameter().is_finite() => d,
            _ => self.body.diameter().finite()?,
        };
        if d == 0.0 {
            return Ok(0);
        }
        let convex = pabi::mixing_time_upper_convex(d, self.eta, 0.25, Metric::Tv)?.value;
        let m = self.potential.strong_convexity();
        let bound = if m > 0.0 {
            let sc =
                pabi::mixing_time_upper_strongly_convex(d, self.eta, m, self.potential.smoothness(), 0.25, Metric::Tv)?
                    .value;
            convex.min(sc)
        } else {
            convex
        };
        Ok(4 * bound as usize)
    }

    /// Starting point and burn-in length implied by `init`.
    pub fn resolve_init(&self) -> Result<(Vec<f64>, usize)> {
        match &self.init {
            Init::Point(p) => {
                self.check_init(p)?;
                Ok((p.clone(), 0))
            }
            Init::Marker(InitMarker::Corner) => Ok((self.body.corner()?, 0)),
            Init::Marker(InitMarker::StationaryProxy) => {
                let start = self.body.project(&self.potential.minimizer())?;
                Ok((start, self.stationary_burn_in()?))
            }
        }
    }
}

/// Uniform `b`-subset of `0..n` without replacement (partial Fisher–Yates).
pub fn sample_batch<R: Rng + ?Sized>(n: usize, b: usize, rng: &mut R) -> Result<Vec<usize>> {
    if b == 0 || b > n {
        return Err(Error::BatchSizeOutOfRange { b, n });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    partial_shuffle(&mut perm, b, rng);
    let mut out = perm[..b].to_vec();
    out.sort_unstable();
    Ok(out)
}

fn partial_shuffle<R: Rng + ?Sized>(perm: &mut [usize], b: usize, rng: &mut R) {
    let n = perm.len();
    for i in 0..b {
        let j = rng.random_range(i..n);
        perm.swap(i, j);
    }
}

/// Lazily generated batches and Gaussian increments for one chain.
pub struct TapeStream {
    rng: ChaCha8Rng,
    perm: Vec<usize>,
    batch_size: usize,
    noise_sd: f64,
}

impl TapeStream {
    pub fn new(cfg: &ChainConfig, chain_index: u64) -> Self {
        TapeStream {
            rng: chain_rng(cfg.master_seed, chain_index),
            perm: (0..cfg.potential.len()).collect(),
            batch_size: cfg.batch_size,
            noise_sd: cfg.noise_variance().sqrt(),
        }
    }

    /// Draws the next step: fills `z` with the noise and returns the batch.
    /// A full batch consumes no randomness.
    pub fn next_into(&mut self, z: &mut [f64]) -> &[usize] {
        if self.batch_size < self.perm.len() {
            partial_shuffle(&mut self.perm, self.batch_size, &mut self.rng);
        }
        for zi in z.iter_mut() {
            let g: f64 = StandardNormal.sample(&mut self.rng);
            *zi = self.noise_sd * g;
        }
        &self.perm[..self.batch_size]
    }
}

/// A recorded tape: `noise[t]` and `batches[t]` drive step `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseAndBatchTape {
    pub noise: Vec<Vec<f64>>,
    pub batches: Vec<Vec<usize>>,
}

impl NoiseAndBatchTape {
    /// Records `steps` draws of chain `chain_index`.
    pub fn record(cfg: &ChainConfig, chain_index: u64, steps: usize) -> Self {
        let mut stream = TapeStream::new(cfg, chain_index);
        let dim = cfg.body.dim();
        let mut noise = Vec::with_capacity(steps);
        let mut batches = Vec::with_capacity(steps);
        for _ in 0..steps {
            let mut z = vec![0.0; dim];
            let b = stream.next_into(&mut z);
            let mut b = b.to_vec();
            b.sort_unstable();
            batches.push(b);
            noise.push(z);
        }
        NoiseAndBatchTape { noise, batches }
    }

    pub fn len(&self) -> usize {
        self.noise.len()
    }

    pub fn is_empty(&self) -> bool {
        self.noise.is_empty()
    }
}

/// States `X_0..X_T`, plus `Y_0..Y_T` when the auxiliary sequence is tracked.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<Vec<f64>>,
    pub auxiliary: Option<Vec<Vec<f64>>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory holds X_0")
    }

    pub fn horizon(&self) -> usize {
        self.states.len() - 1
    }
}

/// One Langevin step `Π_K[x − η·G(x) + z]`.
pub fn step(cfg: &ChainConfig, x: &[f64], z: &[f64], batch: &[usize]) -> Result<Vec<f64>> {
    let dim = cfg.body.dim();
    for v in [x, z] {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    cfg.potential.check_batch(batch)?;
    let mut out = x.to_vec();
    let mut grad = vec![0.0; dim];
    step_in_place(cfg, &mut out, z, batch, &mut grad);
    Ok(out)
}

fn step_in_place(cfg: &ChainConfig, x: &mut [f64], z: &[f64], batch: &[usize], grad: &mut [f64]) {
    cfg.potential.minibatch_gradient_into(batch, x, grad);
    for ((xi, gi), zi) in x.iter_mut().zip(grad.iter()).zip(z) {
        *xi = *xi - cfg.eta * *gi + zi;
    }
    cfg.body.project_in_place(x);
}

/// `φ(y) + z` for the auxiliary sequence.
fn auxiliary_step(cfg: &ChainConfig, y: &mut [f64], z: &[f64], batch: &[usize], grad: &mut [f64]) {
    cfg.body.project_in_place(y);
    cfg.potential.minibatch_gradient_into(batch, y, grad);
    for ((yi, gi), zi) in y.iter_mut().zip(grad.iter()).zip(z) {
        *yi = *yi - cfg.eta * *gi + zi;
    }
}

fn check_tape_entry(cfg: &ChainConfig, z: &[f64], batch: &[usize]) -> Result<()> {
    if z.len() != cfg.body.dim() {
        return Err(Error::DimensionMismatch {
            expected: cfg.body.dim(),
            got: z.len(),
        });
    }
    cfg.potential.check_batch(batch)
}

/// Runs the chain from an explicit point over a recorded tape.
pub fn run_chain_with_tape(cfg: &ChainConfig, init: &[f64], tape: &NoiseAndBatchTape) -> Result<Trajectory> {
    cfg.validate()?;
    cfg.check_init(init)?;
    let mut x = init.to_vec();
    let mut grad = vec![0.0; x.len()];
    let mut states = Vec::with_capacity(tape.len() + 1);
    states.push(x.clone());
    for (z, b) in tape.noise.iter().zip(&tape.batches) {
        check_tape_entry(cfg, z, b)?;
        step_in_place(cfg, &mut x, z, b, &mut grad);
        states.push(x.clone());
    }
    Ok(Trajectory {
        states,
        auxiliary: None,
    })
}

/// Runs chain `chain_index` for `cfg.horizon` steps after any burn-in.
pub fn run_chain(cfg: &ChainConfig, chain_index: u64) -> Result<Trajectory> {
    cfg.validate()?;
    let (mut x, burn_in) = cfg.resolve_init()?;
    let mut stream = TapeStream::new(cfg, chain_index);
    let mut z = vec![0.0; x.len()];
    let mut grad = vec![0.0; x.len()];
    for _ in 0..burn_in {
        let b = stream.next_into(&mut z);
        step_in_place(cfg, &mut x, &z, b, &mut grad);
    }
    let mut states = Vec::with_capacity(cfg.horizon + 1);
    states.push(x.clone());
    for _ in 0..cfg.horizon {
        let b = stream.next_into(&mut z);
        step_in_place(cfg, &mut x, &z, b, &mut grad);
        states.push(x.clone());
    }
    Ok(Trajectory {
        states,
        auxiliary: None,
    })
}

/// Two chains from different starts driven by the tape of chain `chain_index`.
pub fn run_coupled_pair(
    cfg: &ChainConfig,
    init_a: &[f64],
    init_b: &[f64],
    chain_index: u64,
) -> Result<(Trajectory, Trajectory)> {
    cfg.validate()?;
    let tape = NoiseAndBatchTape::record(cfg, chain_index, cfg.horizon);
    Ok((
        run_chain_with_tape(cfg, init_a, &tape)?,
        run_chain_with_tape(cfg, init_b, &tape)?,
    ))
}

/// Auxiliary sequence over a recorded tape, with `X_t = Π_K[Y_t]` recorded alongside.
pub fn run_auxiliary_cni_with_tape(cfg: &ChainConfig, init: &[f64], tape: &NoiseAndBatchTape) -> Result<Trajectory> {
    cfg.validate()?;
    cfg.check_init(init)?;
    let mut y = init.to_vec();
    let mut grad = vec![0.0; y.len()];
    let mut aux = Vec::with_capacity(tape.len() + 1);
    let mut states = Vec::with_capacity(tape.len() + 1);
    aux.push(y.clone());
    states.push(y.clone());
    for (z, b) in tape.noise.iter().zip(&tape.batches) {
        check_tape_entry(cfg, z, b)?;
        auxiliary_step(cfg, &mut y, z, b, &mut grad);
        let mut x = y.clone();
        cfg.body.project_in_place(&mut x);
        aux.push(y.clone());
        states.push(x);
    }
    Ok(Trajectory {
        states,
        auxiliary: Some(aux),
    })
}

/// Auxiliary sequence for chain `chain_index` from an explicit point.
pub fn run_auxiliary_cni(cfg: &ChainConfig, init: &[f64], chain_index: u64) -> Result<Trajectory> {
    let tape = NoiseAndBatchTape::record(cfg, chain_index, cfg.horizon);
    run_auxiliary_cni_with_tape(cfg, init, &tape)
}

/// States of a chain ensemble at a set of times, stored chain-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: usize,
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Snapshot {
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, chain: usize) -> &[f64] {
        &self.data[chain * self.dim..(chain + 1) * self.dim]
    }

    /// Coordinate `k` of every chain.
    pub fn coordinate(&self, k: usize) -> Vec<f64> {
        self.data.iter().skip(k).step_by(self.dim).copied().collect()
    }
}

/// Which chains to run and on how many threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub chains: usize,
    pub first_index: u64,
    pub workers: Option<usize>,
}

impl EnsembleSpec {
    pub fn new(chains: usize) -> Self {
        EnsembleSpec {
            chains,
            first_index: 0,
            workers: None,
        }
    }

    pub fn offset(mut self, first_index: u64) -> Self {
        self.first_index = first_index;
        self
    }

    pub fn workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }
}

/// Runs an ensemble and returns the states at each requested time
/// (times are measured after burn-in and sorted ascending).
pub fn sample_ensemble(cfg: &ChainConfig, spec: EnsembleSpec, times: &[usize]) -> Result<Vec<Snapshot>> {
    cfg.validate()?;
    if spec.chains == 0 {
        return Err(Error::arg("ensemble needs at least one chain"));
    }
    let mut times = times.to_vec();
    times.sort_unstable();
    times.dedup();
    let (start, burn_in) = cfg.resolve_init()?;
    let dim = start.len();
    let t_max = times.last().copied().unwrap_or(0);

    let per_chain = map_chains(spec.first_index, spec.chains, spec.workers, |idx| {
        let mut stream = TapeStream::new(cfg, idx);
        let mut x = start.clone();
        let mut z = vec![0.0; dim];
        let mut grad = vec![0.0; dim];
        for _ in 0..burn_in {
            let b = stream.next_into(&mut z);
            step_in_place(cfg, &mut x, &z, b, &mut grad);
        }
        let mut out = Vec::with_capacity(times.len() * dim);
        let mut next = 0;
        for t in 0..=t_max {
            if t > 0 {
                let b = stream.next_into(&mut z);
                step_in_place(cfg, &mut x, &z, b, &mut grad);
            }
            while next < times.len() && times[next] == t {
                out.extend_from_slice(&x);
                next += 1;
            }
        }
        out
    })?;

    Ok(times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut data = Vec::with_capacity(spec.chains * dim);
            for chain in &per_chain {
                data.extend_from_slice(&chain[k * dim..(k + 1) * dim]);
            }
            Snapshot { t, dim, data }
        })
        .collect())
}

/// Writes trajectories as CSV with columns `chain_id,t,x_0..x_{d-1}`.
pub fn write_trajectories_csv<W: Write>(out: W, trajectories: &[(u64, &Trajectory)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dim = trajectories.first().map(|(_, tr)| tr.states[0].len()).unwrap_or(1);
    let mut header = vec!["chain_id".to_string(), "t".to_string()];
    header.extend((0..dim).map(|k| format!("x_{k}")));
    w.write_record(&header)?;
    for (id, tr) in trajectories {
        for (t, x) in tr.states.iter().enumerate() {
            let mut row = vec![id.to_string(), t.to_string()];
            row.extend(x.iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::PotentialComponent;

    fn zero_on(body: ConvexBody) -> FiniteSumPotential {
        FiniteSumPotential::single(PotentialComponent::zero(body.dim())).unwrap()
    }

    fn quad(lambda: f64) -> FiniteSumPotential {
        FiniteSumPotential::single(PotentialComponent::quadratic(lambda, vec![0.0]).unwrap()).unwrap()
    }

    #[test]
    fn batch_edge_cases() {
        let mut rng = chain_rng(0, 0);
        assert_eq!(sample_batch(5, 5, &mut rng).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(
            sample_batch(3, 4, &mut rng),
            Err(Error::BatchSizeOutOfRange { b: 4, n: 3 })
        );
        assert!(sample_batch(3, 0, &mut rng).is_err());
    }

    #[test]
    fn step_examples() {
        let ws = ConvexBody::whole_space(1).unwrap();
        let cfg = ChainConfig::new(ws.clone(), zero_on(ws), 0.1, 1, Init::Point(vec![0.0]));
        assert_eq!(step(&cfg, &[0.25], &[0.5], &[0]).unwrap(), vec![0.75]);

        let iv = ConvexBody::interval(-0.5, 0.5).unwrap();
        let cfg = ChainConfig::new(iv.clone(), zero_on(iv), 0.1, 1, Init::Point(vec![0.0]));
        assert_eq!(step(&cfg, &[0.4], &[0.3], &[0]).unwrap(), vec![0.5]);

        let ws = ConvexBody::whole_space(1).unwrap();
        let cfg = ChainConfig::new(ws, quad(1.0), 0.1, 1, Init::Point(vec![0.0]));
        let x = step(&cfg, &[1.0], &[0.0], &[0]).unwrap();
        assert!((x[0] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn zero_horizon_is_init() {
        let iv = ConvexBody::interval(-1.0, 1.0).unwrap();
        let cfg = ChainConfig::new(iv.clone(), zero_on(iv), 0.01, 0, Init::Point(vec![0.3]));
        let tr = run_chain(&cfg, 0).unwrap();
        assert_eq!(tr.states, vec![vec![0.3]]);
    }

    #[test]
    fn zero_potential_telescopes() {
        let ws = ConvexBody::whole_space(2).unwrap();
        let cfg = ChainConfig::new(ws.clone(), zero_on(ws), 0.05, 50, Init::Point(vec![1.0, -1.0])).with_seed(3);
        let tape = NoiseAndBatchTape::record(&cfg, 4, 50);
        let tr = run_chain_with_tape(&cfg, &[1.0, -1.0], &tape).unwrap();
        for k in 0..2 {
            let sum: f64 = tape.noise.iter().map(|z| z[k]).sum();
            let init = [1.0, -1.0][k];
            assert!((tr.last()[k] - (init + sum)).abs() < 1e-12);
        }
        assert_eq!(tr, run_chain(&cfg, 4).unwrap());
    }

    #[test]
    fn quadratic_unroll_matches() {
        let (lambda, eta, t) = (1.5, 0.2, 40);
        let ws = ConvexBody::whole_space(1).unwrap();
        let cfg = ChainConfig::new(ws, quad(lambda), eta, t, Init::Point(vec![0.0])).with_seed(8);
        let tape = NoiseAndBatchTape::record(&cfg, 0, t);
        let tr = run_chain_with_tape(&cfg, &[0.0], &tape).unwrap();
        let r: f64 = 1.0 - eta * lambda;
        let closed: f64 = (0..t).map(|s| r.powi((t - 1 - s) as i32) * tape.noise[s][0]).sum();
        assert!((tr.last()[0] - closed).abs() < 1e-10);
    }

    #[test]
    fn coupled_pair_examples() {
        let ws = ConvexBody::whole_space(1).unwrap();
        let cfg = ChainConfig::new(ws.clone(), zero_on(ws.clone()), 0.1, 30, Init::Point(vec![0.0]));
        let (a, b) = run_coupled_pair(&cfg, &[0.5], &[0.5], 2).unwrap();
        assert_eq!(a, b);
        let (a, b) = run_coupled_pair(&cfg, &[1.0], &[-2.0], 2).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            assert!((x[0] - y[0] - 3.0).abs() < 1e-12);
        }

        let (lambda, eta) = (2.0, 0.15);
        let cfg = ChainConfig::new(ws, quad(lambda), eta, 30, Init::Point(vec![0.0]));
        let (a, b) = run_coupled_pair(&cfg, &[1.0], &[-1.0], 9).unwrap();
        for (t, (x, y)) in a.states.iter().zip(&b.states).enumerate() {
            let gap = (1.0f64 - eta * lambda).powi(t as i32) * 2.0;
            assert!((x[0] - y[0] - gap).abs() < 1e-10);
        }
    }

    #[test]
    fn auxiliary_sequence_projects_onto_chain() {
        let iv = ConvexBody::interval(-0.5, 0.5).unwrap();
        let cfg = ChainConfig::new(iv.clone(), zero_on(iv), 0.01, 200, Init::Point(vec![0.4])).with_seed(5);
        let tape = NoiseAndBatchTape::record(&cfg, 1, 200);
        let chain = run_chain_with_tape(&cfg, &[0.4], &tape).unwrap();
        let aux = run_auxiliary_cni_with_tape(&cfg, &[0.4], &tape).unwrap();
        assert_eq!(chain.states, aux.states);
        for (x, y) in aux.states.iter().zip(aux.auxiliary.as_ref().unwrap()) {
            assert_eq!(*x, cfg.body.project(y).unwrap());
        }

        let ws = ConvexBody::whole_space(1).unwrap();
        let cfg = ChainConfig::new(ws, quad(1.0), 0.1, 20, Init::Point(vec![0.7]));
        let aux = run_auxiliary_cni(&cfg, &[0.7], 0).unwrap();
        assert_eq!(&aux.states, aux.auxiliary.as_ref().unwrap());
    }

    #[test]
    fn auxiliary_first_step_matches_chain_step() {
        let iv = ConvexBody::interval(-1.0, 1.0).unwrap();
        let cfg = ChainConfig::new(iv, quad(3.0), 0.2, 1, Init::Point(vec![0.9]));
        let tape = NoiseAndBatchTape::record(&cfg, 0, 1);
        let aux = run_auxiliary_cni_with_tape(&cfg, &[0.9], &tape).unwrap();
        let direct = step(&cfg, &[0.9], &tape.noise[0], &tape.batches[0]).unwrap();
        assert_eq!(aux.states[1], direct);
    }

    #[test]
    fn minibatch_tapes_have_batch_size() {
        let comps = (1..=6)
            .map(|k| PotentialComponent::quadratic(k as f64 * 0.1, vec![0.0, 0.0]).unwrap())
            .collect();
        let body = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let cfg = ChainConfig::new(
            body,
            FiniteSumPotential::new(comps).unwrap(),
            0.05,
            10,
            Init::Point(vec![0.0, 0.0]),
        )
        .with_batch_size(3);
        let tape = NoiseAndBatchTape::record(&cfg, 7, 10);
        assert!(tape
            .batches
            .iter()
            .all(|b| b.len() == 3 && b.windows(2).all(|w| w[0] < w[1])));
        assert_eq!(tape, NoiseAndBatchTape::record(&cfg, 7, 10));
        let tr = run_chain(&cfg, 7).unwrap();
        assert!(tr.states.iter().all(|x| cfg.body.contains(x)));
    }

    #[test]
    fn config_validation() {
        let iv = ConvexBody::interval(-1.0, 1.0).unwrap();
        let cfg = ChainConfig::new(iv.clone(), quad(1.0), 0.1, 5, Init::Point(vec![2.0]));
        assert_eq!(cfg.validate(), Err(Error::InitOutsideBody));
        let cfg = ChainConfig::new(iv.clone(), quad(1.0), 3.0, 5, Init::Point(vec![0.0]));
        assert!(matches!(cfg.validate(), Err(Error::StepsizeTooLarge { .. })));
        let cfg = ChainConfig::new(iv, quad(1.0), 0.1, 5, Init::Point(vec![0.0])).with_batch_size(2);
        assert!(matches!(cfg.validate(), Err(Error::BatchSizeOutOfRange { .. })));
        let ws = ConvexBody::whole_space(1).unwrap();
        let cfg = ChainConfig::new(ws, quad(1.0), 0.1, 5, Init::stationary_proxy());
        assert_eq!(cfg.resolve_init(), Err(Error::UnboundedBody));
    }

    #[test]
    fn stationary_proxy_burn_in() {
        let iv = ConvexBody::centered_interval(1.0).unwrap();
        let cfg = ChainConfig::new(iv.clone(), zero_on(iv), 1.0 / 400.0, 0, Init::stationary_proxy());
        assert_eq!(cfg.resolve_init().unwrap(), (vec![0.0], 3200));
    }

    #[test]
    fn init_json_forms() {
        let p: Init = serde_json::from_str("[0.5]").unwrap();
        assert_eq!(p, Init::Point(vec![0.5]));
        let s: Init = serde_json::from_str("\"stationary-proxy\"").unwrap();
        assert_eq!(s, Init::stationary_proxy());
        let c: Init = serde_json::from_str("\"corner\"").unwrap();
        assert_eq!(c, Init::corner());
    }

    #[test]
    fn ensemble_matches_single_runs() {
        let iv = ConvexBody::interval(-0.5, 0.5).unwrap();
        let cfg = ChainConfig::new(iv.clone(), zero_on(iv), 0.01, 0, Init::corner()).with_seed(21);
        let snaps = sample_ensemble(&cfg, EnsembleSpec::new(16).offset(100), &[10, 3]).unwrap();
        assert_eq!(snaps[0].t, 3);
        for chain in 0..16 {
            let tr = run_chain(&cfg.clone().with_horizon(10), 100 + chain as u64).unwrap();
            assert_eq!(snaps[0].point(chain), tr.states[3].as_slice());
            assert_eq!(snaps[1].point(chain), tr.states[10].as_slice());
        }
    }

    #[test]
    fn trajectory_csv_columns() {
        let tr = Trajectory {
            states: vec![vec![0.0, 1.0], vec![0.5, 1.5]],
            auxiliary: None,
        };
        let mut buf = Vec::new();
        write_trajectories_csv(&mut buf, &[(3, &tr)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "chain_id,t,x_0,x_1\n3,0,0,1\n3,1,0.5,1.5\n");
    }
}
