use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{full_data_cost, Chain, ChainConfig};
use crate::error::{Error, Result};
use crate::targets::{DataModel, Target};

/// Per-datum log likelihoods at the current state, cached so a proposal
/// costs one evaluation per datum examined.
struct State<'a> {
    model: Option<&'a dyn DataModel>,
    theta: Vec<f64>,
    log_prior: f64,
    log_lik: Vec<f64>,
    log_p: f64,
}

impl<'a> State<'a> {
    fn new(target: &'a dyn Target, theta: Vec<f64>) -> Self {
        let model = target.data_model();
        let (log_prior, log_lik) = match model {
            Some(m) => (
                m.log_prior(&theta),
                (0..m.n_data()).map(|i| m.log_likelihood(i, &theta)).collect(),
            ),
            None => (0.0, Vec::new()),
        };
        let log_p = target.log_density(&theta);
        State {
            model,
            theta,
            log_prior,
            log_lik,
            log_p,
        }
    }
}

/// Exact log acceptance ratio, shared by RWMH and the exhausted-data
/// fallback of ARWMH so the two make identical decisions.
/// Returns the ratio and the proposal's per-datum log likelihoods.
fn exact_log_ratio(target: &dyn Target, state: &State, proposal: &[f64]) -> (f64, Vec<f64>) {
    match state.model {
        Some(m) => {
            let lik: Vec<f64> = (0..m.n_data()).map(|i| m.log_likelihood(i, proposal)).collect();
            let diff: f64 = lik.iter().zip(&state.log_lik).map(|(a, b)| a - b).sum();
            (m.log_prior(proposal) - state.log_prior + diff, lik)
        }
        None => (target.log_density(proposal) - state.log_p, Vec::new()),
    }
}

fn accept(target: &dyn Target, state: &mut State, proposal: &[f64], lik: Vec<f64>) {
    state.theta.copy_from_slice(proposal);
    if let Some(m) = state.model {
        state.log_prior = m.log_prior(proposal);
        state.log_lik = lik;
    }
    state.log_p = target.log_density(proposal);
}

fn propose(rng: &mut ChaCha8Rng, theta: &[f64], scale: f64, out: &mut [f64]) {
    for (o, t) in out.iter_mut().zip(theta) {
        let z: f64 = StandardNormal.sample(rng);
        *o = t + scale * z;
    }
}

/// Random-walk Metropolis–Hastings with Gaussian proposals of standard
/// deviation `proposal_scale`. Every accept/reject test charges the full
/// dataset size.
pub fn rwmh(target: &dyn Target, config: &ChainConfig) -> Result<Chain> {
    config.validate()?;
    let cost = full_data_cost(target);
    let mut rng = config.rng();
    let unit = Uniform::new(0.0f64, 1.0);
    let mut state = State::new(target, config.start(target)?);
    let mut proposal = vec![0.0; state.theta.len()];
    let mut chain = Chain::new("rwmh", config, state.theta.len());
    let mut evals = 0u64;
    for step in 0..config.n_steps {
        propose(&mut rng, &state.theta, config.proposal_scale, &mut proposal);
        let u: f64 = unit.sample(&mut rng);
        evals += cost;
        if target.check_interior(&proposal).is_ok() {
            let (log_ratio, lik) = exact_log_ratio(target, &state, &proposal);
            if log_ratio.is_nan() {
                return Err(Error::Diverged { step });
            }
            if u.ln() < log_ratio {
                accept(target, &mut state, &proposal, lik);
                chain.accepted += 1;
            }
        }
        chain.record(&state.theta, evals);
        if config.exhausted(evals) {
            break;
        }
    }
    Ok(chain)
}

/// Approximate random-walk Metropolis–Hastings with a sequential t-test.
///
/// For each proposal the uniform `u` is drawn first, giving the threshold
/// `μ₀ = (ln u + log π(θ) − log π(θ'))/N`. Data are then consumed in random
/// minibatches of size `m` without replacement, tracking the mean `l̄` and
/// standard deviation `s` of `ℓ_i(θ') − ℓ_i(θ)`. With `n` points seen, the
/// statistic `t = (l̄ − μ₀) / (s/√n · √(1 − (n−1)/(N−1)))` is compared
/// against Student's t with `n − 1` degrees of freedom; once the two-sided
/// tail `1 − F(|t|)` drops below `tolerance`, the proposal is accepted iff
/// `l̄ > μ₀`. If the data run out first the exact test is applied.
///
/// Minibatch order is drawn from a separate random stream, so the proposal
/// and threshold draws match [`rwmh`] for the same seed and a tolerance of
/// zero reproduces its decisions exactly.
pub fn arwmh(target: &dyn Target, config: &ChainConfig) -> Result<Chain> {
    config.validate()?;
    let model = super::data_model(target)?;
    let n_data = model.n_data();
    let batch = config.minibatch_size;
    let mut rng = config.rng();
    let mut batch_rng = config.rng();
    batch_rng.set_stream(1);
    let unit = Uniform::new(0.0f64, 1.0);

    let mut state = State::new(target, config.start(target)?);
    let mut proposal = vec![0.0; state.theta.len()];
    let mut order: Vec<usize> = (0..n_data).collect();
    let mut proposal_lik = vec![f64::NAN; n_data];
    let mut chain = Chain::new("arwmh", config, state.theta.len());
    let mut evals = 0u64;

    for step in 0..config.n_steps {
        propose(&mut rng, &state.theta, config.proposal_scale, &mut proposal);
        let u: f64 = unit.sample(&mut rng);
        if target.check_interior(&proposal).is_err() {
            chain.record(&state.theta, evals);
            continue;
        }
        let mu0 = (u.ln() + state.log_prior - model.log_prior(&proposal)) / n_data as f64;

        order.shuffle(&mut batch_rng);
        let (mut seen, mut sum, mut sum_sq) = (0usize, 0.0, 0.0);
        let mut decision = None;
        while seen < n_data {
            let end = (seen + batch).min(n_data);
            for &i in &order[seen..end] {
                let l = model.log_likelihood(i, &proposal);
                proposal_lik[i] = l;
                let diff = l - state.log_lik[i];
                sum += diff;
                sum_sq += diff * diff;
            }
            evals += (end - seen) as u64;
            seen = end;
            if seen == n_data || seen < 2 {
                continue;
            }
            let n = seen as f64;
            let mean = sum / n;
            let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            let correction = (1.0 - (n - 1.0) / (n_data as f64 - 1.0)).max(0.0);
            let se = (var / n).sqrt() * correction.sqrt();
            let tail = if se > 0.0 {
                let t = ((mean - mu0) / se).abs();
                let dist = StudentsT::new(0.0, 1.0, n - 1.0).expect("positive degrees of freedom");
                1.0 - dist.cdf(t)
            } else if mean != mu0 {
                0.0
            } else {
                1.0
            };
            if tail < config.tolerance {
                decision = Some(mean > mu0);
                break;
            }
        }
        let accepted = match decision {
            Some(d) => d,
            None => {
                // data exhausted; recompute in index order to match the exact test
                let diff: f64 = proposal_lik.iter().zip(&state.log_lik).map(|(a, b)| a - b).sum();
                let log_ratio = model.log_prior(&proposal) - state.log_prior + diff;
                if log_ratio.is_nan() {
                    return Err(Error::Diverged { step });
                }
                u.ln() < log_ratio
            }
        };
        if accepted {
            let lik = if seen == n_data {
                proposal_lik.clone()
            } else {
                (0..n_data).map(|i| model.log_likelihood(i, &proposal)).collect()
            };
            accept(target, &mut state, &proposal, lik);
            chain.accepted += 1;
        }
        chain.record(&state.theta, evals);
        if config.exhausted(evals) {
            break;
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{LogisticPosterior, StandardGaussian};

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        (mean, xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n)
    }

    #[test]
    fn tiny_proposals_are_accepted() {
        let cfg = ChainConfig {
            proposal_scale: 1e-4,
            n_steps: 2000,
            ..Default::default()
        };
        assert!(rwmh(&StandardGaussian::new(1), &cfg).unwrap().acceptance_rate() > 0.95);
    }

    #[test]
    fn rwmh_gaussian_moments() {
        let cfg = ChainConfig {
            proposal_scale: 2.4,
            n_steps: 100_000,
            seed: 8,
            ..Default::default()
        };
        let chain = rwmh(&StandardGaussian::new(1), &cfg).unwrap();
        let (mean, var) = moments(chain.points.coords());
        assert!(mean.abs() <= 0.05, "{mean}");
        assert!((var - 1.0).abs() <= 0.1, "{var}");
    }

    #[test]
    fn rwmh_charges_full_dataset() {
        let post = LogisticPosterior::nodal();
        let cfg = ChainConfig {
            proposal_scale: 0.1,
            n_steps: 10,
            ..Default::default()
        };
        let chain = rwmh(&post, &cfg).unwrap();
        assert_eq!(chain.likelihood_evals, (1..=10).map(|k| 53 * k).collect::<Vec<u64>>());
    }

    #[test]
    fn zero_tolerance_matches_exact_chain() {
        let post = LogisticPosterior::nodal();
        let cfg = ChainConfig {
            proposal_scale: 0.15,
            n_steps: 500,
            minibatch_size: 2,
            tolerance: 0.0,
            seed: 12,
            ..Default::default()
        };
        let exact = rwmh(&post, &cfg).unwrap();
        let approx = arwmh(&post, &cfg).unwrap();
        assert_eq!(exact.points, approx.points);
        assert_eq!(exact.likelihood_evals, approx.likelihood_evals);
        assert!(exact.accepted > 0);
    }

    #[test]
    fn positive_tolerance_saves_evaluations() {
        let post = LogisticPosterior::nodal();
        let cfg = ChainConfig {
            proposal_scale: 0.15,
            n_steps: 500,
            minibatch_size: 2,
            tolerance: 0.1,
            seed: 12,
            ..Default::default()
        };
        let chain = arwmh(&post, &cfg).unwrap();
        let per_step = *chain.likelihood_evals.last().unwrap() as f64 / cfg.n_steps as f64;
        assert!(per_step < 53.0, "{per_step}");
        assert_eq!(chain, arwmh(&post, &cfg).unwrap());
    }
}
