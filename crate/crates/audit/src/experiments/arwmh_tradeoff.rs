//! Exact against approximate random-walk Metropolis–Hastings on the
//! logistic regression posterior, compared at matched likelihood budgets.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use stein_core::metrics::{error_measures, ErrorMeasures};
use stein_core::samplers::{arwmh, evenly_spaced, mala, rwmh, Chain, ChainConfig};
use stein_core::stein::{spanner_discrepancy, SteinFactors};
use stein_core::targets::LogisticPosterior;
use stein_core::{Error, PointSet, Result, WeightedSample};

use super::{count_below, validate_schedule, validate_seeds, DEFAULT_SCHEDULE};
use crate::output::{cell, num, write_json, Table};

#[derive(Debug, Clone, Serialize)]
pub struct SurrogateConfig {
    pub n_steps: usize,
    pub step_size: f64,
    pub burn_in: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub seeds: Vec<u64>,
    /// Sequential-test levels; 0 runs the exact chain.
    pub tolerances: Vec<f64>,
    pub budget: u64,
    pub burn_in_evals: u64,
    pub thin_to: usize,
    pub minibatch_size: usize,
    pub proposal_scale: f64,
    pub n_schedule: Vec<usize>,
    pub t: f64,
    pub factors: SteinFactors,
    pub surrogate: SurrogateConfig,
}

impl Config {
    pub fn desk() -> Self {
        Config {
            seeds: (0..5).collect(),
            tolerances: vec![0.0, 0.1],
            budget: 100_000,
            burn_in_evals: 1_000,
            thin_to: 1000,
            minibatch_size: 2,
            proposal_scale: 0.05,
            n_schedule: DEFAULT_SCHEDULE.to_vec(),
            t: 2.0,
            factors: SteinFactors::UNIT,
            surrogate: SurrogateConfig {
                n_steps: 100_000,
                step_size: 0.05,
                burn_in: 1_000,
                seed: 20_160_101,
            },
        }
    }

    pub fn paper_scale() -> Self {
        let mut c = Config::desk();
        c.surrogate.n_steps = 10_000_000;
        c
    }
}

pub fn method_name(tolerance: f64) -> &'static str {
    if tolerance == 0.0 {
        "rwmh"
    } else {
        "arwmh"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub method: &'static str,
    pub tolerance: f64,
    pub seed: u64,
    pub n_prefix: usize,
    pub likelihood_evals: u64,
    pub stein: f64,
    pub errors: ErrorMeasures,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub n_prefix: usize,
    /// Seeds where the exact chain has the smaller value, out of the total.
    pub exact_better: usize,
    pub approximate_better: usize,
    pub seeds: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub budget: u64,
    pub burn_in_evals: u64,
    pub thin_to: usize,
    pub proposal_scale: f64,
    pub minibatch_size: usize,
    pub surrogate: SurrogateConfig,
    pub surrogate_points: usize,
    /// Stein comparison at the earliest prefix with at least 10 points.
    pub earliest: Option<Comparison>,
    /// Stein comparison on the full thinned sequences.
    pub final_stein: Option<Comparison>,
    /// Seeds where all three error measures order the chains as the final
    /// Stein values do.
    pub errors_agree_with_stein: usize,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl Report {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut t = Table::new(&[
            "method",
            "tolerance",
            "seed",
            "n_prefix",
            "likelihood_evals",
            "stein",
            "prob_err",
            "mean_err",
            "second_moment_err",
        ]);
        for r in &self.rows {
            t.push(vec![
                cell(r.method),
                num(r.tolerance),
                cell(r.seed),
                cell(r.n_prefix),
                cell(r.likelihood_evals),
                num(r.stein),
                num(r.errors.prob_error),
                num(r.errors.mean_error),
                num(r.errors.second_moment_error),
            ]);
        }
        let notes = format!("surrogate=mala surrogate_steps={}", self.summary.surrogate.n_steps);
        t.write(&dir.join("arwmh_tradeoff.csv"), "arwmh-tradeoff", &notes)?;
        write_json(&dir.join("arwmh_tradeoff_summary.json"), &self.summary)
    }
}

/// MALA reference sample with the burn-in removed.
pub fn surrogate_sample(target: &LogisticPosterior, config: &SurrogateConfig) -> Result<WeightedSample> {
    let chain = mala(
        target,
        &ChainConfig {
            seed: config.seed,
            n_steps: config.n_steps,
            step_size: config.step_size,
            ..Default::default()
        },
    )?;
    chain.thinned(config.burn_in, 1)?.prefix(chain.len() - config.burn_in)
}

/// Runs one chain to the budget and thins the post-burn-in part.
/// Returns the thinned points and the evaluation count at each of them.
pub fn budgeted_chain(target: &LogisticPosterior, config: &Config, tolerance: f64, seed: u64) -> Result<(PointSet, Vec<u64>)> {
    let chain_config = ChainConfig {
        seed,
        // every step costs at least one evaluation
        n_steps: config.budget as usize,
        proposal_scale: config.proposal_scale,
        tolerance,
        minibatch_size: config.minibatch_size,
        max_likelihood_evals: Some(config.budget),
        ..Default::default()
    };
    let chain: Chain = if tolerance == 0.0 {
        rwmh(target, &chain_config)?
    } else {
        arwmh(target, &chain_config)?
    };
    let start = chain.first_step_after(config.burn_in_evals);
    let picks = evenly_spaced(start, chain.len(), config.thin_to);
    let evals = picks.iter().map(|&i| chain.likelihood_evals[i]).collect();
    Ok((chain.select(&picks), evals))
}

pub fn run(config: &Config) -> Result<Report> {
    validate_seeds(&config.seeds)?;
    validate_schedule(&config.n_schedule)?;
    if config.tolerances.is_empty() {
        return Err(Error::Parameter("at least one tolerance is required".into()));
    }
    let target = LogisticPosterior::nodal();
    let surrogate = surrogate_sample(&target, &config.surrogate)?;
    let covariates = PointSet::new(target_dim(&target), covariate_rows(&target))?;

    let jobs: Vec<(u64, f64)> = config
        .seeds
        .iter()
        .flat_map(|&s| config.tolerances.iter().map(move |&tol| (s, tol)))
        .collect();
    let per_chain: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(seed, tolerance)| {
            let (points, evals) = budgeted_chain(&target, config, tolerance, seed)?;
            config
                .n_schedule
                .iter()
                .filter(|&&n| n <= points.len())
                .map(|&n| {
                    let sample = points.prefix(n)?;
                    Ok(Row {
                        method: method_name(tolerance),
                        tolerance,
                        seed,
                        n_prefix: n,
                        likelihood_evals: evals[n - 1],
                        stein: spanner_discrepancy(&sample, &target, config.t, config.factors)?.total,
                        errors: error_measures(&sample, &surrogate, &covariates)?,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Row> = per_chain.into_iter().flatten().collect();
    let summary = summarize(&rows, config, surrogate.len());
    Ok(Report { rows, summary })
}

fn target_dim(target: &LogisticPosterior) -> usize {
    stein_core::targets::Target::dim(target)
}

fn covariate_rows(target: &LogisticPosterior) -> Vec<f64> {
    (0..target.labels().len()).flat_map(|l| target.covariate(l).to_vec()).collect()
}

fn summarize(rows: &[Row], config: &Config, surrogate_points: usize) -> Summary {
    let exact = config.tolerances.iter().copied().find(|&t| t == 0.0);
    let approx = config.tolerances.iter().copied().find(|&t| t > 0.0);
    let find = |tol: f64, seed: u64, n: usize| {
        rows.iter()
            .find(|r| r.tolerance == tol && r.seed == seed && r.n_prefix == n)
    };
    let compare = |n: usize, value: fn(&Row) -> f64| -> Option<Comparison> {
        let (e, a) = (exact?, approx?);
        let pairs: Vec<(f64, f64)> = config
            .seeds
            .iter()
            .filter_map(|&s| Some((value(find(e, s, n)?), value(find(a, s, n)?))))
            .collect();
        if pairs.is_empty() {
            return None;
        }
        let (exact_better, seeds) = count_below(pairs.iter().copied());
        let (approximate_better, _) = count_below(pairs.iter().map(|&(x, y)| (y, x)));
        Some(Comparison {
            n_prefix: n,
            exact_better,
            approximate_better,
            seeds,
        })
    };
    let available: Vec<usize> = config
        .n_schedule
        .iter()
        .copied()
        .filter(|&n| rows.iter().any(|r| r.n_prefix == n))
        .collect();
    let earliest = available.iter().find(|&&n| n >= 10).and_then(|&n| compare(n, |r| r.stein));
    let last = available.last().copied();
    let final_stein = last.and_then(|n| compare(n, |r| r.stein));

    let mut errors_agree_with_stein = 0;
    if let (Some(e), Some(a), Some(n)) = (exact, approx, last) {
        for &s in &config.seeds {
            if let (Some(x), Some(y)) = (find(e, s, n), find(a, s, n)) {
                let stein_order = x.stein < y.stein;
                let agree = [
                    (x.errors.prob_error, y.errors.prob_error),
                    (x.errors.mean_error, y.errors.mean_error),
                    (x.errors.second_moment_error, y.errors.second_moment_error),
                ]
                .iter()
                .all(|&(p, q)| (p < q) == stein_order);
                errors_agree_with_stein += usize::from(agree);
            }
        }
    }
    Summary {
        budget: config.budget,
        burn_in_evals: config.burn_in_evals,
        thin_to: config.thin_to,
        proposal_scale: config.proposal_scale,
        minibatch_size: config.minibatch_size,
        surrogate: config.surrogate.clone(),
        surrogate_points,
        earliest,
        final_stein,
        errors_agree_with_stein,
    }
}
