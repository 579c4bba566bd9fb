use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{DataModel, Interval, Target};
use crate::error::{Error, Result};

/// Parameters of the bimodal mixture posterior and its synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GmmConfig {
    pub prior_vars: (f64, f64),
    pub obs_var: f64,
    pub n_obs: usize,
    pub true_theta: (f64, f64),
    pub seed: u64,
}

impl Default for GmmConfig {
    fn default() -> Self {
        GmmConfig {
            prior_vars: (10.0, 1.0),
            obs_var: 2.0,
            n_obs: 100,
            true_theta: (0.0, 1.0),
            seed: 1,
        }
    }
}

/// Posterior over `θ = (θ1, θ2)` with priors `θ1 ~ N(0, σ1²)`, `θ2 ~ N(0, σ2²)`
/// and observations `x ~ ½ N(θ1, σx²) + ½ N(θ1 + θ2, σx²)`.
#[derive(Debug, Clone)]
pub struct GmmPosterior {
    data: Vec<f64>,
    prior_vars: (f64, f64),
    obs_var: f64,
    support: Vec<Interval>,
}

impl GmmPosterior {
    pub fn new(data: Vec<f64>, prior_vars: (f64, f64), obs_var: f64) -> Result<Self> {
        if !(prior_vars.0 > 0.0 && prior_vars.1 > 0.0 && obs_var > 0.0) {
            return Err(Error::Parameter("GMM variances must be positive".into()));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("GMM data must be finite".into()));
        }
        Ok(GmmPosterior {
            data,
            prior_vars,
            obs_var,
            support: vec![Interval::REAL_LINE; 2],
        })
    }

    /// Draws the dataset from the model at `config.true_theta`.
    pub fn generate(config: &GmmConfig) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let noise = Normal::new(0.0, config.obs_var.sqrt())
            .map_err(|e| Error::Parameter(e.to_string()))?;
        let (t1, t2) = config.true_theta;
        let data = (0..config.n_obs)
            .map(|_| {
                let centre = if rand::Rng::gen_bool(&mut rng, 0.5) {
                    t1
                } else {
                    t1 + t2
                };
                centre + noise.sample(&mut rng)
            })
            .collect();
        GmmPosterior::new(data, config.prior_vars, config.obs_var)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Log of each component's (unnormalized) likelihood and the posterior
    /// responsibility of the second component.
    fn components(&self, x: f64, theta: &[f64]) -> (f64, f64) {
        let a = -0.5 * (x - theta[0]).powi(2) / self.obs_var;
        let b = -0.5 * (x - theta[0] - theta[1]).powi(2) / self.obs_var;
        let m = a.max(b);
        let log_mix = m + ((a - m).exp() + (b - m).exp()).ln() + 0.5f64.ln();
        let r = 1.0 / (1.0 + (a - b).exp());
        (log_mix, r)
    }
}

impl Target for GmmPosterior {
    fn name(&self) -> &str {
        "gmm-posterior"
    }

    fn dim(&self) -> usize {
        2
    }

    fn support(&self) -> &[Interval] {
        &self.support
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        self.log_prior(x) + self.total_log_likelihood(x)
    }

    fn score_into(&self, x: &[f64], out: &mut [f64]) {
        self.grad_log_prior(x, out);
        for i in 0..self.data.len() {
            self.add_grad_log_likelihood(i, x, 1.0, out);
        }
    }

    fn data_model(&self) -> Option<&dyn DataModel> {
        Some(self)
    }
}

impl DataModel for GmmPosterior {
    fn n_data(&self) -> usize {
        self.data.len()
    }

    fn dim(&self) -> usize {
        2
    }

    fn log_prior(&self, theta: &[f64]) -> f64 {
        -0.5 * (theta[0] * theta[0] / self.prior_vars.0 + theta[1] * theta[1] / self.prior_vars.1)
    }

    fn grad_log_prior(&self, theta: &[f64], out: &mut [f64]) {
        out[0] = -theta[0] / self.prior_vars.0;
        out[1] = -theta[1] / self.prior_vars.1;
    }

    fn log_likelihood(&self, datum: usize, theta: &[f64]) -> f64 {
        self.components(self.data[datum], theta).0
    }

    fn add_grad_log_likelihood(&self, datum: usize, theta: &[f64], scale: f64, out: &mut [f64]) {
        let x = self.data[datum];
        let (_, r) = self.components(x, theta);
        let da = (x - theta[0]) / self.obs_var;
        let db = (x - theta[0] - theta[1]) / self.obs_var;
        out[0] += scale * ((1.0 - r) * da + r * db);
        out[1] += scale * r * db;
    }
}
