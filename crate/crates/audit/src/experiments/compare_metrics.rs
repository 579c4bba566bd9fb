//! Non-uniform graph Stein discrepancy next to the Wasserstein distance on
//! i.i.d. prefixes from a univariate target.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use stein_core::metrics::{spearman, wasserstein_1d};
use stein_core::samplers::{iid_sequence, IidDistribution};
use stein_core::stein::{univariate_complete_discrepancy, SteinFactors};
use stein_core::targets::{StandardGaussian, Target, UnitCube};
use stein_core::{Error, Result};

use super::{validate_schedule, validate_seeds, DEFAULT_SCHEDULE};
use crate::output::{cell, num, write_json, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Gaussian,
    Uniform01,
}

impl Which {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "gaussian" => Ok(Which::Gaussian),
            "uniform01" => Ok(Which::Uniform01),
            other => Err(Error::UnsupportedTarget(format!(
                "{other} (expected gaussian or uniform01)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Which::Gaussian => "gaussian",
            Which::Uniform01 => "uniform01",
        }
    }

    /// Factors for which the Stein discrepancy upper bounds Wasserstein.
    pub fn default_factors(self) -> SteinFactors {
        match self {
            Which::Gaussian => SteinFactors::GAUSSIAN_NONUNIFORM,
            Which::Uniform01 => SteinFactors::UNIFORM01_NONUNIFORM,
        }
    }

    fn sampler(self) -> IidDistribution {
        match self {
            Which::Gaussian => IidDistribution::Gaussian,
            Which::Uniform01 => IidDistribution::Uniform01,
        }
    }

    fn target(self) -> Box<dyn Target> {
        match self {
            Which::Gaussian => Box::new(StandardGaussian::new(1)),
            Which::Uniform01 => Box::new(UnitCube::new(1)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub target: Which,
    pub seeds: Vec<u64>,
    pub n_schedule: Vec<usize>,
    pub factors: Option<SteinFactors>,
}

impl Config {
    pub fn new(target: Which) -> Self {
        Config {
            target,
            seeds: (0..5).collect(),
            n_schedule: DEFAULT_SCHEDULE.to_vec(),
            factors: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub seed: u64,
    pub n: usize,
    pub graph_stein_nonuniform: f64,
    pub wasserstein: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedSummary {
    pub seed: u64,
    /// Rank correlation of the two columns over the schedule.
    pub spearman: Option<f64>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub target: Which,
    pub factors: SteinFactors,
    pub n_schedule: Vec<usize>,
    pub per_seed: Vec<SeedSummary>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl Report {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut t = Table::new(&["seed", "n", "graph_stein_nonuniform", "wasserstein"]);
        for r in &self.rows {
            t.push(vec![cell(r.seed), cell(r.n), num(r.graph_stein_nonuniform), num(r.wasserstein)]);
        }
        let name = format!("compare_metrics_{}", self.summary.target.name());
        let notes = format!("target={}", self.summary.target.name());
        t.write(&dir.join(format!("{name}.csv")), "compare-metrics", &notes)?;
        write_json(&dir.join(format!("{name}_summary.json")), &self.summary)
    }
}

pub fn run(config: &Config) -> Result<Report> {
    validate_seeds(&config.seeds)?;
    validate_schedule(&config.n_schedule)?;
    let factors = config.factors.unwrap_or_else(|| config.target.default_factors());
    let target = config.target.target();
    let n_max = *config.n_schedule.last().expect("validated");

    let per_seed: Vec<Vec<Row>> = config
        .seeds
        .par_iter()
        .map(|&seed| {
            let seq = iid_sequence(config.target.sampler(), n_max, seed);
            config
                .n_schedule
                .iter()
                .map(|&n| {
                    let sample = seq.prefix(n)?;
                    Ok(Row {
                        seed,
                        n,
                        graph_stein_nonuniform: univariate_complete_discrepancy(&sample, target.as_ref(), factors)?
                            .total,
                        wasserstein: wasserstein_1d(&sample, target.as_ref())?,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let summaries = per_seed
        .iter()
        .zip(&config.seeds)
        .map(|(rows, &seed)| {
            let stein: Vec<f64> = rows.iter().map(|r| r.graph_stein_nonuniform).collect();
            let wass: Vec<f64> = rows.iter().map(|r| r.wasserstein).collect();
            let ratios: Vec<f64> = stein.iter().zip(&wass).map(|(s, w)| s / w).collect();
            SeedSummary {
                seed,
                spearman: spearman(&stein, &wass),
                min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    Ok(Report {
        rows: per_seed.into_iter().flatten().collect(),
        summary: Summary {
            target: config.target,
            factors,
            n_schedule: config.n_schedule.clone(),
            per_seed: summaries,
        },
    })
}
