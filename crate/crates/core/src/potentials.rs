//! Convex potentials with declared regularity `(m, M)`.
//!
//! Only closed-form families are provided: the zero potential and isotropic or
//! diagonal quadratics. Each component knows its own strong-convexity and
//! smoothness constants, so the bound calculators never need to inspect a
//! function body.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One summand `f_i` of a finite-sum potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialComponent {
    /// `f ≡ 0` on R^dim.
    Zero { dim: usize },
    /// `(λ/2)‖x − center‖²`.
    Quadratic { lambda: f64, center: Vec<f64> },
    /// `Σ_k (κ_k/2)(x_k − center_k)²`.
    Diagonal { curvature: Vec<f64>, center: Vec<f64> },
}

impl PotentialComponent {
    pub fn zero(dim: usize) -> Self {
        PotentialComponent::Zero { dim }
    }

    pub fn quadratic(lambda: f64, center: Vec<f64>) -> Result<Self> {
        let p = PotentialComponent::Quadratic { lambda, center };
        p.validate()?;
        Ok(p)
    }

    pub fn diagonal(curvature: Vec<f64>, center: Vec<f64>) -> Result<Self> {
        let p = PotentialComponent::Diagonal { curvature, center };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialComponent::Zero { dim } if *dim == 0 => {
                Err(Error::InvalidPotential("dimension must be positive".into()))
            }
            PotentialComponent::Zero { .. } => Ok(()),
            PotentialComponent::Quadratic { lambda, center } => {
                if !(lambda.is_finite() && *lambda >= 0.0) {
                    return Err(Error::InvalidPotential(format!(
                        "curvature must be finite and >= 0, got {lambda}"
                    )));
                }
                if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidPotential("center must be finite".into()));
                }
                Ok(())
            }
            PotentialComponent::Diagonal { curvature, center } => {
                if curvature.is_empty() || curvature.len() != center.len() {
                    return Err(Error::InvalidPotential(
                        "curvature and center must have equal nonzero length".into(),
                    ));
                }
                if curvature.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
                    return Err(Error::InvalidPotential("curvatures must be finite and >= 0".into()));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidPotential("center must be finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PotentialComponent::Zero { dim } => *dim,
            PotentialComponent::Quadratic { center, .. } => center.len(),
            PotentialComponent::Diagonal { center, .. } => center.len(),
        }
    }

    /// Strong-convexity constant `m`.
    pub fn strong_convexity(&self) -> f64 {
        match self {
            PotentialComponent::Zero { .. } => 0.0,
            PotentialComponent::Quadratic { lambda, .. } => *lambda,
            PotentialComponent::Diagonal { curvature, .. } => curvature.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    /// Smoothness constant `M`.
    pub fn smoothness(&self) -> f64 {
        match self {
            PotentialComponent::Zero { .. } => 0.0,
            PotentialComponent::Quadratic { lambda, .. } => *lambda,
            PotentialComponent::Diagonal { curvature, .. } => curvature.iter().copied().fold(0.0, f64::max),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self {
            PotentialComponent::Zero { .. } => 0.0,
            PotentialComponent::Quadratic { lambda, center } => {
                0.5 * lambda * x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>()
            }
            PotentialComponent::Diagonal { curvature, center } => x
                .iter()
                .zip(center)
                .zip(curvature)
                .map(|((a, c), k)| 0.5 * k * (a - c) * (a - c))
                .sum(),
        })
    }

    /// Exact gradient at `x`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut out = vec![0.0; x.len()];
        self.accumulate_gradient(x, 1.0, &mut out);
        Ok(out)
    }

    /// `out += weight · ∇f(x)`; dimensions are the caller's responsibility.
    pub(crate) fn accumulate_gradient(&self, x: &[f64], weight: f64, out: &mut [f64]) {
        match self {
            PotentialComponent::Zero { .. } => {}
            PotentialComponent::Quadratic { lambda, center } => {
                for ((o, a), c) in out.iter_mut().zip(x).zip(center) {
                    *o += weight * lambda * (a - c);
                }
            }
            PotentialComponent::Diagonal { curvature, center } => {
                for (((o, a), c), k) in out.iter_mut().zip(x).zip(center).zip(curvature) {
                    *o += weight * k * (a - c);
                }
            }
        }
    }
}

/// `f = Σ_i f_i` with stochastic access through minibatch averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFiniteSum", into = "RawFiniteSum")]
pub struct FiniteSumPotential {
    components: Vec<PotentialComponent>,
}

#[derive(Serialize, Deserialize)]
struct RawFiniteSum {
    components: Vec<PotentialComponent>,
}

impl TryFrom<RawFiniteSum> for FiniteSumPotential {
    type Error = Error;

    fn try_from(raw: RawFiniteSum) -> Result<Self> {
        FiniteSumPotential::new(raw.components)
    }
}

impl From<FiniteSumPotential> for RawFiniteSum {
    fn from(p: FiniteSumPotential) -> Self {
        RawFiniteSum {
            components: p.components,
        }
    }
}

impl FiniteSumPotential {
    pub fn new(components: Vec<PotentialComponent>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidPotential("at least one component required".into()))?;
        let dim = first.dim();
        for c in &components {
            c.validate()?;
            if c.dim() != dim {
                return Err(Error::InvalidPotential(format!(
                    "component dimensions differ: {} vs {dim}",
                    c.dim()
                )));
            }
        }
        Ok(FiniteSumPotential { components })
    }

    pub fn single(component: PotentialComponent) -> Result<Self> {
        Self::new(vec![component])
    }

    pub fn components(&self) -> &[PotentialComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    /// Aggregate `m`: the smallest component constant.
    pub fn strong_convexity(&self) -> f64 {
        self.components
            .iter()
            .map(PotentialComponent::strong_convexity)
            .fold(f64::INFINITY, f64::min)
    }

    /// Aggregate `M`: the largest component constant.
    pub fn smoothness(&self) -> f64 {
        self.components
            .iter()
            .map(PotentialComponent::smoothness)
            .fold(0.0, f64::max)
    }

    /// `Σ_i ∇f_i(x)`.
    pub fn sum_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut out = vec![0.0; x.len()];
        for c in &self.components {
            c.accumulate_gradient(x, 1.0, &mut out);
        }
        Ok(out)
    }

    /// `(1/b) Σ_{i∈B} ∇f_i(x)` with zero-based indices.
    pub fn minibatch_gradient(&self, batch: &[usize], x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        self.check_batch(batch)?;
        let mut out = vec![0.0; x.len()];
        self.minibatch_gradient_into(batch, x, &mut out);
        Ok(out)
    }

    pub(crate) fn check_batch(&self, batch: &[usize]) -> Result<()> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if let Some(&index) = batch.iter().find(|&&i| i >= self.len()) {
            return Err(Error::BatchIndexOutOfRange { index, n: self.len() });
        }
        Ok(())
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Unchecked minibatch average written into `out`.
    pub(crate) fn minibatch_gradient_into(&self, batch: &[usize], x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let w = 1.0 / batch.len() as f64;
        for &i in batch {
            self.components[i].accumulate_gradient(x, w, out);
        }
    }

    /// `x − η · minibatch_gradient(batch, x)`.
    pub fn gradient_step(&self, batch: &[usize], eta: f64, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.minibatch_gradient(batch, x)?;
        Ok(x.iter().zip(&g).map(|(a, gi)| a - eta * gi).collect())
    }

    /// A minimizer of the averaged potential. Coordinates with zero total
    /// curvature are left at the origin.
    pub fn minimizer(&self) -> Vec<f64> {
        let d = self.dim();
        let mut num = vec![0.0; d];
        let mut den = vec![0.0; d];
        for c in &self.components {
            match c {
                PotentialComponent::Zero { .. } => {}
                PotentialComponent::Quadratic { lambda, center } => {
                    for k in 0..d {
                        num[k] += lambda * center[k];
                        den[k] += lambda;
                    }
                }
                PotentialComponent::Diagonal { curvature, center } => {
                    for k in 0..d {
                        num[k] += curvature[k] * center[k];
                        den[k] += curvature[k];
                    }
                }
            }
        }
        num.iter()
            .zip(&den)
            .map(|(n, s)| if *s > 0.0 { n / s } else { 0.0 })
            .collect()
    }
}

/// Lipschitz constant of `x ↦ x − η∇f(x)` for an m-strongly convex, M-smooth `f`:
/// `max(|1 − ηm|, |1 − ηM|)`.
///
/// Fails with [`Error::StepsizeTooLarge`] when `η > 2/M`. With `M = 0` any
/// positive stepsize is admissible and the coefficient is 1.
pub fn contraction_coefficient(m: f64, big_m: f64, eta: f64) -> Result<f64> {
    if !(m >= 0.0 && big_m >= m && big_m.is_finite()) {
        return Err(Error::arg(format!("need 0 <= m <= M < inf, got m={m}, M={big_m}")));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::arg(format!("stepsize must be positive, got {eta}")));
    }
    if big_m > 0.0 {
        let limit = 2.0 / big_m;
        if eta > limit * (1.0 + 1e-12) {
            return Err(Error::StepsizeTooLarge { eta, limit });
        }
    }
    let c = (1.0 - eta * m).abs().max((1.0 - eta * big_m).abs());
    Ok(c.min(1.0))
}
