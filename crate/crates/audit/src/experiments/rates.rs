//! Convergence rates of the complete graph discrepancy for Unif(0, 1)
//! under i.i.d., Sobol, and kernel herding sequences.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use stein_core::metrics::{fit_rate, median};
use stein_core::samplers::{herding_1d, iid_sequence, sobol_1d, IidDistribution};
use stein_core::stein::{univariate_complete_discrepancy, SteinFactors};
use stein_core::targets::UnitCube;
use stein_core::{PointSet, Result};

use super::{validate_schedule, validate_seeds};
use crate::output::{cell, num, write_json, Table};

pub const SAMPLERS: [&str; 3] = ["iid_uniform", "sobol", "herding"];

#[derive(Debug, Clone)]
pub struct Config {
    /// Seeds of the i.i.d. sequences; the reported value is their median.
    pub seeds: Vec<u64>,
    pub n_schedule: Vec<usize>,
    pub factors: SteinFactors,
    pub herding_grid: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seeds: (0..50).collect(),
            n_schedule: vec![10, 20, 50, 100, 200],
            factors: SteinFactors::UNIT,
            herding_grid: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sampler: &'static str,
    /// `None` for deterministic sequences.
    pub seed: Option<u64>,
    pub n: usize,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fit {
    pub sampler: &'static str,
    pub slope: f64,
    pub intercept: f64,
    /// Values the line is fitted to; the per-n median for i.i.d. sequences.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub n_schedule: Vec<usize>,
    pub iid_seeds: usize,
    pub factors: SteinFactors,
    pub fits: Vec<Fit>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl Report {
    pub fn slope(&self, sampler: &str) -> Option<f64> {
        self.summary.fits.iter().find(|f| f.sampler == sampler).map(|f| f.slope)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut t = Table::new(&["sampler", "seed", "n", "discrepancy"]);
        for r in &self.rows {
            let seed = r.seed.map(cell).unwrap_or_default();
            t.push(vec![cell(r.sampler), seed, cell(r.n), num(r.discrepancy)]);
        }
        t.write(&dir.join("rates.csv"), "rates", "")?;
        write_json(&dir.join("rates_summary.json"), &self.summary)
    }
}

fn curve(seq: &PointSet, config: &Config) -> Result<Vec<f64>> {
    let target = UnitCube::new(1);
    config
        .n_schedule
        .iter()
        .map(|&n| Ok(univariate_complete_discrepancy(&seq.prefix(n)?, &target, config.factors)?.total))
        .collect()
}

pub fn run(config: &Config) -> Result<Report> {
    validate_seeds(&config.seeds)?;
    validate_schedule(&config.n_schedule)?;
    let n_max = *config.n_schedule.last().expect("validated");
    let ns: Vec<f64> = config.n_schedule.iter().map(|&n| n as f64).collect();

    let iid: Vec<Vec<f64>> = config
        .seeds
        .par_iter()
        .map(|&seed| curve(&iid_sequence(IidDistribution::Uniform01, n_max, seed), config))
        .collect::<Result<_>>()?;
    let sobol = curve(&sobol_1d(n_max), config)?;
    let herding = curve(&herding_1d(n_max, config.herding_grid)?, config)?;

    let mut rows = Vec::new();
    for (values, &seed) in iid.iter().zip(&config.seeds) {
        for (&n, &v) in config.n_schedule.iter().zip(values) {
            rows.push(Row {
                sampler: SAMPLERS[0],
                seed: Some(seed),
                n,
                discrepancy: v,
            });
        }
    }
    for (name, values) in [(SAMPLERS[1], &sobol), (SAMPLERS[2], &herding)] {
        for (&n, &v) in config.n_schedule.iter().zip(values) {
            rows.push(Row {
                sampler: name,
                seed: None,
                n,
                discrepancy: v,
            });
        }
    }

    let iid_median: Vec<f64> = (0..ns.len())
        .map(|k| median(&iid.iter().map(|c| c[k]).collect::<Vec<_>>()).expect("seeds"))
        .collect();
    let fits = [(SAMPLERS[0], iid_median), (SAMPLERS[1], sobol), (SAMPLERS[2], herding)]
        .into_iter()
        .map(|(sampler, values)| {
            let (slope, intercept) = fit_rate(&ns, &values)?;
            Ok(Fit {
                sampler,
                slope,
                intercept,
                values,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Report {
        rows,
        summary: Summary {
            n_schedule: config.n_schedule.clone(),
            iid_seeds: config.seeds.len(),
            factors: config.factors,
            fits,
        },
    })
}
