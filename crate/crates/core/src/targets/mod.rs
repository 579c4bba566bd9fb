//! Target distributions, described by the gradient of an unnormalized log
//! density and a coordinate box support.
//!
//! Everything the discrepancy programs need from a target is the score
//! `∇ log p` at sample points plus the box bounds `(α_j, β_j)`. Samplers
//! additionally use the log density itself, and the posterior targets expose
//! a per-datum decomposition through [`DataModel`].

mod gaussian;
mod gmm;
mod logistic;
mod spec;
mod uniform;

pub use gaussian::StandardGaussian;
pub use gmm::{GmmConfig, GmmPosterior};
pub use logistic::{LogisticPosterior, NODAL_CSV};
pub use spec::{LogisticDataset, TargetSpec};
pub use uniform::UnitCube;

use crate::error::{Error, Result};

/// An open interval `(lo, hi)`; either endpoint may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Parameter(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// The endpoints that are real numbers, lower first.
    pub fn finite_endpoints(&self) -> impl Iterator<Item = f64> {
        [self.lo, self.hi].into_iter().filter(|b| b.is_finite())
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }
}

/// A target distribution `P` on a box in `R^d`.
///
/// Implementations must be immutable after construction; every method may be
/// called concurrently.
pub trait Target: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn support(&self) -> &[Interval];

    /// Log density up to an additive constant. `-inf` outside the support.
    fn log_density(&self, x: &[f64]) -> f64;

    /// Writes `∇ log p(x)` into `out` without validating `x`.
    fn score_into(&self, x: &[f64], out: &mut [f64]);

    fn univariate_cdf(&self) -> Option<&dyn UnivariateCdf> {
        None
    }

    fn data_model(&self) -> Option<&dyn DataModel> {
        None
    }

    /// Fails unless `x` has the right length and lies strictly inside the support.
    fn check_interior(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        for (j, (&xj, iv)) in x.iter().zip(self.support()).enumerate() {
            if !iv.contains(xj) {
                return Err(Error::Domain(format!(
                    "coordinate {j} = {xj} is not inside ({}, {})",
                    iv.lo, iv.hi
                )));
            }
        }
        Ok(())
    }

    /// Checked gradient of the log density.
    fn grad_log_density(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_interior(x)?;
        let mut out = vec![0.0; self.dim()];
        self.score_into(x, &mut out);
        if let Some(coordinate) = out.iter().position(|g| !g.is_finite()) {
            return Err(Error::Numerical { coordinate });
        }
        Ok(out)
    }
}

/// Closed-form one-dimensional distribution functionals.
///
/// `lower_partial_moment(x) = E[(x - Z)^+] = ∫_{-∞}^x F(s) ds` and
/// `upper_partial_moment(x) = E[(Z - x)^+] = ∫_x^∞ (1 - F(s)) ds`.
pub trait UnivariateCdf {
    fn cdf(&self, x: f64) -> f64;
    fn lower_partial_moment(&self, x: f64) -> f64;
    fn upper_partial_moment(&self, x: f64) -> f64;
}

/// Posterior-style decomposition `log p(θ) = log π(θ) + Σ_i log ℓ_i(θ)`.
pub trait DataModel: Send + Sync {
    fn n_data(&self) -> usize;

    fn dim(&self) -> usize;

    fn log_prior(&self, theta: &[f64]) -> f64;

    /// Overwrites `out` with `∇ log π(θ)`.
    fn grad_log_prior(&self, theta: &[f64], out: &mut [f64]);

    fn log_likelihood(&self, datum: usize, theta: &[f64]) -> f64;

    /// `out += scale * ∇ log ℓ_datum(θ)`.
    fn add_grad_log_likelihood(&self, datum: usize, theta: &[f64], scale: f64, out: &mut [f64]);

    /// Full-data log likelihood, summed in index order.
    fn total_log_likelihood(&self, theta: &[f64]) -> f64 {
        (0..self.n_data())
            .map(|i| self.log_likelihood(i, theta))
            .sum()
    }
}

/// `F_P(x)` for univariate targets that publish a CDF.
pub fn target_cdf(target: &dyn Target, x: f64) -> Result<f64> {
    target
        .univariate_cdf()
        .map(|c| c.cdf(x))
        .ok_or_else(|| Error::UnsupportedTarget(target.name().to_string()))
}

/// Central finite-difference gradient of `target.log_density`; test helper
/// kept public so downstream crates can run the same check.
pub fn finite_difference_score(target: &dyn Target, x: &[f64], step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|j| {
            probe[j] = x[j] + step;
            let up = target.log_density(&probe);
            probe[j] = x[j] - step;
            let down = target.log_density(&probe);
            probe[j] = x[j];
            (up - down) / (2.0 * step)
        })
        .collect()
}

pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^t)` without overflow.
pub(crate) fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_rejects_empty() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn sigmoid_and_softplus_are_stable() {
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(sigmoid(-800.0), 0.0);
        assert_eq!(sigmoid(800.0), 1.0);
        assert!((softplus(800.0) - 800.0).abs() < 1e-12);
        assert!(softplus(-800.0) >= 0.0);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
    }
}
