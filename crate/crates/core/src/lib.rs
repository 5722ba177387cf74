//! Mixing-time toolkit for the projected Langevin algorithm
//! `X_{t+1} = Π_K[X_t − (η/b) Σ_{i∈B_t} ∇f_i(X_t) + Z_t]`, `Z_t ~ N(0, 2η I)`.
//!
//! - [`geometry`]: convex bodies and Euclidean projection.
//! - [`potentials`]: finite-sum quadratic potentials and the step contraction coefficient.
//! - [`chain`]: seeded chains, coupled pairs, auxiliary iterations and ensembles.
//! - [`divergences`]: Rényi-family divergences, shifted Rényi on small supports, empirical TV.
//! - [`pabi`]: divergence bounds and mixing-time calculators.
//! - [`oracles`]: closed-form laws and Monte Carlo checks for the lower-bound constructions.
//! - [`experiments`]: config-driven runs behind the `mixlab` binary.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod divergences;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod oracles;
pub mod pabi;
pub mod potentials;
pub mod rng;

pub use chain::{ChainConfig, EnsembleSpec, Init, Trajectory};
pub use divergences::{DiscreteDist, Gaussian1D};
pub use error::{Error, Result};
pub use geometry::{ConvexBody, Diameter};
pub use pabi::{BoundInputs, BoundReport, Metric, PabiMode};
pub use potentials::{FiniteSumPotential, PotentialComponent};
