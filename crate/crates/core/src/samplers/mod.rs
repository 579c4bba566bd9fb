//! Sample sequence generators: independent draws, low-discrepancy and
//! herding sequences, and the Markov chains whose output quality the
//! discrepancy is used to judge.
//!
//! Every generator is a pure function of its inputs and seed. Chains use
//! `ChaCha8` streams so that results are identical across platforms.

mod iid;
mod langevin;
mod metropolis;
mod quasi;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use iid::{iid_points, iid_sequence, IidDistribution};
pub use langevin::{mala, sgld};
pub use metropolis::{arwmh, rwmh};
pub use quasi::{herding_1d, sobol_1d};

use crate::error::{Error, Result};
use crate::samples::PointSet;
use crate::targets::{DataModel, Target};

/// Settings shared by the chain samplers. Fields a sampler does not use are
/// ignored by it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    pub seed: u64,
    pub n_steps: usize,
    /// Langevin step size ε (SGLD, MALA).
    pub step_size: f64,
    /// Random-walk proposal standard deviation (RWMH, ARWMH).
    pub proposal_scale: f64,
    /// Sequential-test level ε (ARWMH); 0 always consumes the full dataset.
    pub tolerance: f64,
    pub minibatch_size: usize,
    pub burn_in: usize,
    pub thinning_stride: usize,
    /// Starting state; the origin when absent.
    pub initial: Option<Vec<f64>>,
    /// Stop early once this many likelihood evaluations have been spent.
    pub max_likelihood_evals: Option<u64>,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            seed: 0,
            n_steps: 1000,
            step_size: 0.01,
            proposal_scale: 1.0,
            tolerance: 0.0,
            minibatch_size: 1,
            burn_in: 0,
            thinning_stride: 1,
            initial: None,
            max_likelihood_evals: None,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Parameter(what.to_string()));
        if self.n_steps == 0 {
            return bad("n_steps must be positive");
        }
        if self.minibatch_size == 0 {
            return bad("minibatch_size must be positive");
        }
        if self.thinning_stride == 0 {
            return bad("thinning_stride must be at least 1");
        }
        if !(0.0..1.0).contains(&self.tolerance) {
            return bad("tolerance must lie in [0, 1)");
        }
        if !(self.step_size >= 0.0 && self.step_size.is_finite()) {
            return bad("step_size must be nonnegative and finite");
        }
        if !(self.proposal_scale >= 0.0 && self.proposal_scale.is_finite()) {
            return bad("proposal_scale must be nonnegative and finite");
        }
        Ok(())
    }

    fn start(&self, target: &dyn Target) -> Result<Vec<f64>> {
        let x = self.initial.clone().unwrap_or_else(|| vec![0.0; target.dim()]);
        target.check_interior(&x)?;
        Ok(x)
    }

    fn exhausted(&self, evals: u64) -> bool {
        self.max_likelihood_evals.is_some_and(|cap| evals >= cap)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Output of a chain sampler: the state after every step and the cumulative
/// number of per-datum likelihood evaluations spent up to that step.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub sampler: &'static str,
    pub config: ChainConfig,
    pub points: PointSet,
    pub likelihood_evals: Vec<u64>,
    pub accepted: usize,
}

impl Chain {
    fn new(sampler: &'static str, config: &ChainConfig, dim: usize) -> Self {
        Chain {
            sampler,
            config: config.clone(),
            points: PointSet::empty(dim),
            likelihood_evals: Vec::with_capacity(config.n_steps.min(1 << 20)),
            accepted: 0,
        }
    }

    fn record(&mut self, state: &[f64], evals: u64) {
        self.points.push(state);
        self.likelihood_evals.push(evals);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.len().max(1) as f64
    }

    /// Drops `burn_in` steps and keeps the last state of every block of
    /// `stride` steps: `⌊(n − burn_in) / stride⌋` points.
    pub fn thinned(&self, burn_in: usize, stride: usize) -> Result<PointSet> {
        if stride == 0 {
            return Err(Error::Parameter("thinning stride must be at least 1".into()));
        }
        let count = self.len().saturating_sub(burn_in) / stride;
        Ok(self.select(&(0..count).map(|k| burn_in + (k + 1) * stride - 1).collect::<Vec<_>>()))
    }

    /// Thinning with the stride and burn-in stored in the config.
    pub fn post_processed(&self) -> Result<PointSet> {
        self.thinned(self.config.burn_in, self.config.thinning_stride)
    }

    /// Index of the first step taken after `evals` likelihood evaluations
    /// have been spent.
    pub fn first_step_after(&self, evals: u64) -> usize {
        self.likelihood_evals.partition_point(|&e| e <= evals)
    }

    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut out = PointSet::empty(self.points.dim());
        for &i in indices {
            out.push(self.points.row(i));
        }
        out
    }

    /// `{sampler, config, seed, likelihood_evals}`
    pub fn write_sidecar(&self, out: impl Write) -> Result<()> {
        let doc = serde_json::json!({
            "sampler": self.sampler,
            "config": self.config,
            "seed": self.config.seed,
            "likelihood_evals": self.likelihood_evals,
        });
        serde_json::to_writer_pretty(out, &doc)?;
        Ok(())
    }
}

/// `k` indices spread evenly over `start..end`, always including both ends
/// when `k ≥ 2`. Returns all indices when the range is shorter than `k`.
pub fn evenly_spaced(start: usize, end: usize, k: usize) -> Vec<usize> {
    let len = end.saturating_sub(start);
    if k == 0 || len == 0 {
        return Vec::new();
    }
    if len <= k {
        return (start..end).collect();
    }
    if k == 1 {
        return vec![end - 1];
    }
    (0..k)
        .map(|i| start + (i as u128 * (len - 1) as u128 / (k - 1) as u128) as usize)
        .collect()
}

fn data_model(target: &dyn Target) -> Result<&dyn DataModel> {
    target.data_model().ok_or_else(|| {
        Error::UnsupportedTarget(format!("{} has no per-datum likelihood decomposition", target.name()))
    })
}

/// Likelihood evaluations charged for one full-data density or gradient.
fn full_data_cost(target: &dyn Target) -> u64 {
    target.data_model().map_or(1, |m| m.n_data() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::StandardGaussian;

    #[test]
    fn thinning_lengths() {
        let g = StandardGaussian::new(1);
        for (n, burn, stride) in [(100, 0, 1), (100, 10, 3), (7, 10, 1), (50, 0, 50), (50, 1, 50)] {
            let cfg = ChainConfig {
                n_steps: n,
                proposal_scale: 0.5,
                ..Default::default()
            };
            let chain = rwmh(&g, &cfg).unwrap();
            let kept = chain.thinned(burn, stride).unwrap();
            assert_eq!(kept.len(), n.saturating_sub(burn) / stride);
            if !kept.is_empty() {
                assert_eq!(kept.row(0), chain.points.row(burn + stride - 1));
            }
        }
    }

    #[test]
    fn evenly_spaced_indices() {
        assert_eq!(evenly_spaced(0, 10, 3), vec![0, 4, 9]);
        assert_eq!(evenly_spaced(5, 8, 10), vec![5, 6, 7]);
        assert_eq!(evenly_spaced(0, 1000, 1000), (0..1000).collect::<Vec<_>>());
        let picks = evenly_spaced(100, 100_000, 1000);
        assert_eq!(picks.len(), 1000);
        assert!(picks.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*picks.last().unwrap(), 99_999);
    }

    #[test]
    fn first_step_after_budget() {
        let mut chain = Chain::new("test", &ChainConfig::default(), 1);
        for (i, e) in [2, 4, 6, 8].into_iter().enumerate() {
            chain.record(&[i as f64], e);
        }
        assert_eq!(chain.first_step_after(0), 0);
        assert_eq!(chain.first_step_after(4), 2);
        assert_eq!(chain.first_step_after(100), 4);
    }

    #[test]
    fn evaluation_budget_stops_chain() {
        let post = crate::targets::LogisticPosterior::nodal();
        let cfg = ChainConfig {
            n_steps: 1000,
            proposal_scale: 0.1,
            max_likelihood_evals: Some(53 * 10 + 1),
            ..Default::default()
        };
        let chain = rwmh(&post, &cfg).unwrap();
        assert_eq!(chain.len(), 11);
        assert_eq!(chain.likelihood_evals.last(), Some(&(53 * 11)));
    }

    #[test]
    fn config_validation() {
        let ok = ChainConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            ChainConfig { tolerance: 1.0, ..ok.clone() },
            ChainConfig { minibatch_size: 0, ..ok.clone() },
            ChainConfig { thinning_stride: 0, ..ok.clone() },
            ChainConfig { step_size: -1.0, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn sidecar_fields() {
        let g = StandardGaussian::new(1);
        let chain = rwmh(&g, &ChainConfig { n_steps: 3, seed: 9, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        chain.write_sidecar(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["sampler"], "rwmh");
        assert_eq!(v["seed"], 9);
        assert_eq!(v["likelihood_evals"], serde_json::json!([1, 2, 3]));
    }
}
