//! Step-size selection for SGLD on the mixture posterior: median spanner
//! discrepancy against median effective sample size over repeated runs.

use std::path::Path;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use stein_core::metrics::{median, min_effective_sample_size};
use stein_core::samplers::{sgld, ChainConfig};
use stein_core::stein::{spanner_discrepancy, SteinFactors};
use stein_core::targets::{GmmConfig, GmmPosterior};
use stein_core::{PointSet, Result};

use super::{parse_floats, validate_seeds};
use crate::output::{cell, num, write_json, Table};

pub const DEFAULT_GRID: [f64; 4] = [5e-5, 5e-4, 5e-3, 5e-2];

#[derive(Debug, Clone)]
pub struct Config {
    pub step_grid: Vec<f64>,
    pub n: usize,
    pub n_sequences: usize,
    pub minibatch_size: usize,
    pub base_seed: u64,
    pub t: f64,
    pub factors: SteinFactors,
    pub gmm: GmmConfig,
    /// Sequence whose points are written out for scatter plots.
    pub sample_sequence: usize,
}

impl Config {
    pub fn desk() -> Self {
        Config {
            step_grid: DEFAULT_GRID.to_vec(),
            n: 1000,
            n_sequences: 10,
            minibatch_size: 5,
            base_seed: 0,
            t: 2.0,
            factors: SteinFactors::UNIT,
            gmm: GmmConfig::default(),
            sample_sequence: 0,
        }
    }

    pub fn paper_scale() -> Self {
        Config {
            n_sequences: 50,
            ..Config::desk()
        }
    }

    pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
        parse_floats(text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub epsilon: f64,
    pub seq_id: usize,
    pub stein: f64,
    pub ess: f64,
    /// Failure of either diagnostic; the value columns are then NaN.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepSummary {
    pub epsilon: f64,
    pub median_stein: Option<f64>,
    pub median_ess: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Selection {
    pub n: usize,
    pub n_sequences: usize,
    pub minibatch_size: usize,
    pub per_step: Vec<StepSummary>,
    pub epsilon_stein: Option<f64>,
    pub epsilon_ess: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<Row>,
    pub samples: Vec<(f64, PointSet)>,
    pub selection: Selection,
}

impl Report {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut t = Table::new(&["epsilon", "seq_id", "stein", "ess", "error"]);
        for r in &self.rows {
            t.push(vec![
                num(r.epsilon),
                cell(r.seq_id),
                num(r.stein),
                num(r.ess),
                r.error.clone().unwrap_or_default().replace(',', ";"),
            ]);
        }
        t.write(&dir.join("sgld_select.csv"), "sgld-select", "")?;
        let mut s = Table::new(&["epsilon", "theta1", "theta2"]);
        for (eps, points) in &self.samples {
            for x in points.rows() {
                s.push(vec![num(*eps), num(x[0]), num(x[1])]);
            }
        }
        s.write(&dir.join("sgld_select_samples.csv"), "sgld-select", "")?;
        write_json(&dir.join("sgld_select_selection.json"), &self.selection)
    }
}

/// Initial state of a sequence: a draw from the prior.
fn prior_draw(gmm: &GmmConfig, seed: u64) -> Vec<f64> {
    use rand_distr::{Distribution, Normal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_1417);
    let (v1, v2) = gmm.prior_vars;
    vec![
        Normal::new(0.0, v1.sqrt()).expect("positive").sample(&mut rng),
        Normal::new(0.0, v2.sqrt()).expect("positive").sample(&mut rng),
    ]
}

pub fn run(config: &Config) -> Result<Report> {
    validate_seeds(&[config.base_seed])?;
    let target = GmmPosterior::generate(&config.gmm)?;
    let jobs: Vec<(f64, usize)> = config
        .step_grid
        .iter()
        .flat_map(|&e| (0..config.n_sequences).map(move |s| (e, s)))
        .collect();
    let results: Vec<(Row, Option<PointSet>)> = jobs
        .par_iter()
        .map(|&(epsilon, seq_id)| {
            let seed = config.base_seed + seq_id as u64;
            let chain_config = ChainConfig {
                seed,
                n_steps: config.n,
                step_size: epsilon,
                minibatch_size: config.minibatch_size,
                initial: Some(prior_draw(&config.gmm, seed)),
                ..Default::default()
            };
            let mut row = Row {
                epsilon,
                seq_id,
                stein: f64::NAN,
                ess: f64::NAN,
                error: None,
            };
            let chain = match sgld(&target, &chain_config) {
                Ok(c) => c,
                Err(e) => {
                    row.error = Some(e.to_string());
                    return Ok((row, None));
                }
            };
            let sample = chain.points.prefix(chain.len())?;
            match spanner_discrepancy(&sample, &target, config.t, config.factors) {
                Ok(r) => row.stein = r.total,
                Err(e) if e.class() == stein_core::ErrorClass::Solver => return Err(e),
                Err(e) => row.error = Some(e.to_string()),
            }
            match min_effective_sample_size(&chain.points) {
                Ok(ess) => row.ess = ess,
                Err(e) => row.error = Some(e.to_string()),
            }
            let keep = (seq_id == config.sample_sequence).then(|| chain.points.clone());
            Ok((row, keep))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for (row, keep) in results {
        if let Some(points) = keep {
            samples.push((row.epsilon, points));
        }
        rows.push(row);
    }
    let per_step: Vec<StepSummary> = config
        .step_grid
        .iter()
        .map(|&epsilon| {
            let finite = |f: fn(&Row) -> f64| -> Vec<f64> {
                rows.iter()
                    .filter(|r| r.epsilon == epsilon)
                    .map(f)
                    .filter(|v| v.is_finite())
                    .collect()
            };
            StepSummary {
                epsilon,
                median_stein: median(&finite(|r| r.stein)),
                median_ess: median(&finite(|r| r.ess)),
            }
        })
        .collect();
    let pick = |key: fn(&StepSummary) -> Option<f64>, better: fn(f64, f64) -> bool| {
        per_step
            .iter()
            .filter_map(|s| key(s).map(|v| (s.epsilon, v)))
            .fold(None, |best: Option<(f64, f64)>, (e, v)| match best {
                Some((_, bv)) if !better(v, bv) => best,
                _ => Some((e, v)),
            })
            .map(|(e, _)| e)
    };
    let selection = Selection {
        n: config.n,
        n_sequences: config.n_sequences,
        minibatch_size: config.minibatch_size,
        epsilon_stein: pick(|s| s.median_stein, |a, b| a < b),
        epsilon_ess: pick(|s| s.median_ess, |a, b| a > b),
        per_step,
    };
    Ok(Report {
        rows,
        samples,
        selection,
    })
}
