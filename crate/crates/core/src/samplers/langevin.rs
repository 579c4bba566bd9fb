use rand::seq::index;
use rand_distr::{Distribution, StandardNormal, Uniform};

use super::{data_model, full_data_cost, Chain, ChainConfig};
use crate::error::{Error, Result};
use crate::targets::Target;

/// Stochastic gradient Langevin dynamics without a Metropolis correction:
///
/// `θ ← θ + (ε/2)(∇log π(θ) + (N/m) Σ_{i∈B} ∇log ℓ_i(θ)) + N(0, εI)`
///
/// with a fresh minibatch `B` of size `m` drawn without replacement each
/// step (the full dataset when `m ≥ N`). Each step costs `|B|` evaluations.
pub fn sgld(target: &dyn Target, config: &ChainConfig) -> Result<Chain> {
    config.validate()?;
    let model = data_model(target)?;
    let n_data = model.n_data();
    let batch = config.minibatch_size.min(n_data);
    let scale = n_data as f64 / batch as f64;
    let eps = config.step_size;
    let noise_sd = eps.sqrt();

    let mut rng = config.rng();
    let mut theta = config.start(target)?;
    let mut grad = vec![0.0; theta.len()];
    let mut chain = Chain::new("sgld", config, theta.len());
    let mut evals = 0u64;
    for step in 0..config.n_steps {
        model.grad_log_prior(&theta, &mut grad);
        for i in index::sample(&mut rng, n_data, batch) {
            model.add_grad_log_likelihood(i, &theta, scale, &mut grad);
        }
        evals += batch as u64;
        for (t, g) in theta.iter_mut().zip(&grad) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *t += 0.5 * eps * g + noise_sd * z;
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Diverged { step });
        }
        chain.record(&theta, evals);
        if config.exhausted(evals) {
            break;
        }
    }
    chain.accepted = chain.len();
    Ok(chain)
}

/// Metropolis-adjusted Langevin algorithm with proposal
/// `θ' = θ + (ε/2)∇log p(θ) + √ε ξ`. Each step charges one full pass
/// over the data.
pub fn mala(target: &dyn Target, config: &ChainConfig) -> Result<Chain> {
    config.validate()?;
    let eps = config.step_size;
    let cost = full_data_cost(target);
    let d = target.dim();
    let mut rng = config.rng();
    let unit = Uniform::new(0.0f64, 1.0);

    let mut theta = config.start(target)?;
    let mut log_p = target.log_density(&theta);
    let mut grad = vec![0.0; d];
    target.score_into(&theta, &mut grad);
    let mut proposal = vec![0.0; d];
    let mut proposal_grad = vec![0.0; d];
    let mut chain = Chain::new("mala", config, d);
    let mut evals = 0u64;

    // log q(to | from) up to a constant
    let log_q = |to: &[f64], from: &[f64], from_grad: &[f64]| -> f64 {
        -to.iter()
            .zip(from)
            .zip(from_grad)
            .map(|((t, f), g)| (t - f - 0.5 * eps * g).powi(2))
            .sum::<f64>()
            / (2.0 * eps)
    };

    for step in 0..config.n_steps {
        for k in 0..d {
            let z: f64 = StandardNormal.sample(&mut rng);
            proposal[k] = theta[k] + 0.5 * eps * grad[k] + eps.sqrt() * z;
        }
        let u: f64 = unit.sample(&mut rng);
        evals += cost;
        let proposal_log_p = target.log_density(&proposal);
        if proposal_log_p.is_nan() {
            return Err(Error::Diverged { step });
        }
        if proposal_log_p > f64::NEG_INFINITY {
            target.score_into(&proposal, &mut proposal_grad);
            let log_ratio = proposal_log_p - log_p + log_q(&theta, &proposal, &proposal_grad)
                - log_q(&proposal, &theta, &grad);
            if u.ln() < log_ratio {
                theta.copy_from_slice(&proposal);
                grad.copy_from_slice(&proposal_grad);
                log_p = proposal_log_p;
                chain.accepted += 1;
            }
        }
        if !log_p.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Diverged { step });
        }
        chain.record(&theta, evals);
        if config.exhausted(evals) {
            break;
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{GmmPosterior, StandardGaussian, UnitCube};

    fn variance(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        (mean, xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n)
    }

    #[test]
    fn zero_step_is_constant() {
        let g = StandardGaussian::new(2);
        let cfg = ChainConfig {
            step_size: 0.0,
            n_steps: 20,
            initial: Some(vec![0.3, -1.0]),
            ..Default::default()
        };
        let chain = sgld(&g, &cfg).unwrap();
        assert!(chain.points.rows().all(|r| r == [0.3, -1.0]));
    }

    #[test]
    fn sgld_gaussian_variance() {
        let cfg = ChainConfig {
            step_size: 0.01,
            n_steps: 200_000,
            seed: 4,
            ..Default::default()
        };
        let chain = sgld(&StandardGaussian::new(1), &cfg).unwrap();
        let (_, var) = variance(chain.points.coords());
        assert!((var - 1.0).abs() <= 0.1, "{var}");
    }

    #[test]
    fn sgld_reproducible_and_counts_batches() {
        let post = GmmPosterior::generate(&Default::default()).unwrap();
        let cfg = ChainConfig {
            step_size: 5e-3,
            minibatch_size: 5,
            n_steps: 100,
            seed: 3,
            ..Default::default()
        };
        let a = sgld(&post, &cfg).unwrap();
        assert_eq!(a, sgld(&post, &cfg).unwrap());
        assert_eq!(a.likelihood_evals.last(), Some(&500));
    }

    #[test]
    fn sgld_needs_data_model() {
        let err = sgld(&UnitCube::new(1), &ChainConfig { initial: Some(vec![0.5]), ..Default::default() });
        assert!(matches!(err, Err(Error::UnsupportedTarget(_))));
    }

    #[test]
    fn sgld_divergence_reports_step() {
        let cfg = ChainConfig {
            step_size: 1e3,
            n_steps: 10_000,
            initial: Some(vec![1.0]),
            ..Default::default()
        };
        assert!(matches!(sgld(&StandardGaussian::new(1), &cfg), Err(Error::Diverged { .. })));
    }

    #[test]
    fn mala_gaussian_moments() {
        let cfg = ChainConfig {
            step_size: 0.5,
            n_steps: 100_000,
            seed: 5,
            ..Default::default()
        };
        let chain = mala(&StandardGaussian::new(1), &cfg).unwrap();
        let (mean, var) = variance(chain.points.coords());
        assert!(mean.abs() <= 0.05, "{mean}");
        assert!((var - 1.0).abs() <= 0.1, "{var}");
    }
}
