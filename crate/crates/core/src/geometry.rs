//! Convex bodies with closed-form Euclidean projections.
//!
//! Every body here projects exactly: intervals and boxes clamp coordinatewise,
//! balls rescale radially, and the whole space is the identity. General
//! polytopes are deliberately absent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack on the ball radius so that projected points are fixed points.
const BALL_SLACK: f64 = 8.0 * f64::EPSILON;

/// A closed convex subset of R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    WholeSpace { dim: usize },
    Interval { lo: f64, hi: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

/// Diameter of a body. Unbounded bodies carry a tag, never `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diameter {
    Finite(f64),
    Infinite,
}

impl Diameter {
    /// The finite value, or [`Error::UnboundedBody`].
    pub fn finite(self) -> Result<f64> {
        match self {
            Diameter::Finite(d) => Ok(d),
            Diameter::Infinite => Err(Error::UnboundedBody),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Diameter::Finite(_))
    }
}

impl ConvexBody {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        let body = ConvexBody::Interval { lo, hi };
        body.validate()?;
        Ok(body)
    }

    /// Symmetric interval `[-d/2, d/2]`.
    pub fn centered_interval(diameter: f64) -> Result<Self> {
        Self::interval(-diameter / 2.0, diameter / 2.0)
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let body = ConvexBody::Box { lo, hi };
        body.validate()?;
        Ok(body)
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let body = ConvexBody::Ball { center, radius };
        body.validate()?;
        Ok(body)
    }

    pub fn whole_space(dim: usize) -> Result<Self> {
        let body = ConvexBody::WholeSpace { dim };
        body.validate()?;
        Ok(body)
    }

    /// Checks the variant invariants. Deserialized bodies should pass through here.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            ConvexBody::WholeSpace { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidBody("dimension must be positive".into()));
                }
            }
            ConvexBody::Interval { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                    return Err(Error::InvalidBody(format!(
                        "interval needs finite lo <= hi, got [{lo}, {hi}]"
                    )));
                }
            }
            ConvexBody::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return Err(Error::InvalidBody(
                        "box bounds must be nonempty and of equal length".into(),
                    ));
                }
                if !finite(lo) || !finite(hi) || lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return Err(Error::InvalidBody("box needs finite lo <= hi".into()));
                }
            }
            ConvexBody::Ball { center, radius } => {
                if center.is_empty() || !finite(center) {
                    return Err(Error::InvalidBody("ball center must be finite".into()));
                }
                if !(radius.is_finite() && *radius >= 0.0) {
                    return Err(Error::InvalidBody(format!(
                        "ball radius must be finite and >= 0, got {radius}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::WholeSpace { dim } => *dim,
            ConvexBody::Interval { .. } => 1,
            ConvexBody::Box { lo, .. } => lo.len(),
            ConvexBody::Ball { center, .. } => center.len(),
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

    /// Nearest point of the body to `x` in Euclidean norm.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut out = x.to_vec();
        self.project_in_place(&mut out);
        Ok(out)
    }

    /// In-place projection. The caller guarantees `x.len() == self.dim()`.
    pub fn project_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        match self {
            ConvexBody::WholeSpace { .. } => {}
            ConvexBody::Interval { lo, hi } => x[0] = x[0].clamp(*lo, *hi),
            ConvexBody::Box { lo, hi } => {
                for ((xi, l), h) in x.iter_mut().zip(lo).zip(hi) {
                    *xi = xi.clamp(*l, *h);
                }
            }
            ConvexBody::Ball { center, radius } => {
                let dist = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
                if dist <= radius * (1.0 + BALL_SLACK) {
                    return;
                }
                let scale = radius / dist;
                for (xi, c) in x.iter_mut().zip(center) {
                    *xi = c + (*xi - c) * scale;
                }
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            ConvexBody::WholeSpace { .. } => x.iter().all(|v| v.is_finite()),
            ConvexBody::Interval { lo, hi } => *lo <= x[0] && x[0] <= *hi,
            ConvexBody::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *l <= *v && *v <= *h),
            ConvexBody::Ball { center, radius } => {
                let dist = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
                dist <= radius * (1.0 + BALL_SLACK)
            }
        }
    }

    /// Supremum distance between two points of the body.
    pub fn diameter(&self) -> Diameter {
        match self {
            ConvexBody::WholeSpace { .. } => Diameter::Infinite,
            ConvexBody::Interval { lo, hi } => Diameter::Finite(hi - lo),
            ConvexBody::Box { lo, hi } => {
                Diameter::Finite(lo.iter().zip(hi).map(|(l, h)| (h - l) * (h - l)).sum::<f64>().sqrt())
            }
            ConvexBody::Ball { radius, .. } => Diameter::Finite(2.0 * radius),
        }
    }

    /// Midpoint of the body (origin for the whole space).
    pub fn center(&self) -> Vec<f64> {
        match self {
            ConvexBody::WholeSpace { dim } => vec![0.0; *dim],
            ConvexBody::Interval { lo, hi } => vec![0.5 * (lo + hi)],
            ConvexBody::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect(),
            ConvexBody::Ball { center, .. } => center.clone(),
        }
    }

    /// An extreme point used as the worst-case start: the low corner for
    /// intervals and boxes, `center - r e_1` for balls.
    pub fn corner(&self) -> Result<Vec<f64>> {
        match self {
            ConvexBody::WholeSpace { .. } => Err(Error::UnboundedBody),
            ConvexBody::Interval { lo, .. } => Ok(vec![*lo]),
            ConvexBody::Box { lo, .. } => Ok(lo.clone()),
            ConvexBody::Ball { center, radius } => {
                let mut c = center.clone();
                c[0] -= radius;
                Ok(c)
            }
        }
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bodies() -> Vec<ConvexBody> {
        vec![
            ConvexBody::interval(-1.0, 1.0).unwrap(),
            ConvexBody::boxed(vec![0.0, -1.0, 2.0], vec![3.0, 4.0, 2.5]).unwrap(),
            ConvexBody::ball(vec![0.5, -0.5], 1.5).unwrap(),
            ConvexBody::ball(vec![0.0; 4], 0.0).unwrap(),
            ConvexBody::whole_space(2).unwrap(),
        ]
    }

    fn random_point(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
        (0..dim).map(|_| rng.random_range(-scale..scale)).collect()
    }

    #[test]
    fn interval_clamps() {
        let k = ConvexBody::interval(-1.0, 1.0).unwrap();
        assert_eq!(k.project(&[2.0]).unwrap(), vec![1.0]);
        assert_eq!(k.project(&[-7.0]).unwrap(), vec![-1.0]);
        assert_eq!(k.project(&[0.3]).unwrap(), vec![0.3]);
    }

    #[test]
    fn ball_projection_matches_dense_boundary_search() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let p = k.project(&[3.0, 4.0]).unwrap();
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);

        // argmin over 10^6 boundary angles
        let n = 1_000_000;
        let (mut best, mut best_d) = ((0.0, 0.0), f64::INFINITY);
        for i in 0..n {
            let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let q = (th.cos(), th.sin());
            let d = (q.0 - 3.0f64).hypot(q.1 - 4.0);
            if d < best_d {
                best_d = d;
                best = q;
            }
        }
        assert!((best.0 - p[0]).abs() < 1e-5 && (best.1 - p[1]).abs() < 1e-5);
    }

    #[test]
    fn members_are_fixed_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in bodies() {
            for _ in 0..1000 {
                let x = random_point(&mut rng, k.dim(), 5.0);
                let p = k.project(&x).unwrap();
                assert!(k.contains(&p), "{k:?} {p:?}");
                if k.contains(&x) {
                    assert_eq!(p, x);
                }
            }
        }
    }

    #[test]
    fn projection_is_idempotent_and_nonexpansive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in bodies() {
            for _ in 0..10_000 {
                let x = random_point(&mut rng, k.dim(), 6.0);
                let y = random_point(&mut rng, k.dim(), 6.0);
                let px = k.project(&x).unwrap();
                let py = k.project(&y).unwrap();
                assert_eq!(k.project(&px).unwrap(), px);
                assert!(distance(&px, &py) <= distance(&x, &y) + 1e-12);
            }
        }
    }

    #[test]
    fn diameters() {
        assert_eq!(
            ConvexBody::centered_interval(3.0).unwrap().diameter(),
            Diameter::Finite(3.0)
        );
        assert_eq!(
            ConvexBody::ball(vec![1.0, 1.0], 2.0).unwrap().diameter(),
            Diameter::Finite(4.0)
        );
        assert_eq!(ConvexBody::whole_space(3).unwrap().diameter(), Diameter::Infinite);
        assert_eq!(
            ConvexBody::whole_space(1).unwrap().diameter().finite(),
            Err(Error::UnboundedBody)
        );
    }

    #[test]
    fn box_diameter_matches_sampled_supremum() {
        let k = ConvexBody::boxed(vec![0.0, 0.0], vec![3.0, 4.0]).unwrap();
        assert_eq!(k.diameter(), Diameter::Finite(5.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut sup: f64 = 0.0;
        for _ in 0..200_000 {
            let a = [rng.random_range(0.0..=3.0), rng.random_range(0.0..=4.0)];
            let b = [rng.random_range(0.0..=3.0), rng.random_range(0.0..=4.0)];
            sup = sup.max(distance(&a, &b));
        }
        assert!(sup <= 5.0 && sup > 4.7, "sampled sup {sup}");
    }

    #[test]
    fn invalid_bodies_rejected() {
        assert!(ConvexBody::interval(1.0, 0.0).is_err());
        assert!(ConvexBody::ball(vec![0.0], -1.0).is_err());
        assert!(ConvexBody::boxed(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(ConvexBody::whole_space(0).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(k.project(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn config_json_shape() {
        let k: ConvexBody = serde_json::from_str(r#"{"kind":"interval","lo":-0.5,"hi":0.5}"#).unwrap();
        assert_eq!(k, ConvexBody::interval(-0.5, 0.5).unwrap());
        let w: ConvexBody = serde_json::from_str(r#"{"kind":"whole_space","dim":2}"#).unwrap();
        assert_eq!(w.dim(), 2);
    }
}
