//! Discrepancy of i.i.d. Gaussian and scaled Student's t prefixes against a
//! standard normal target, with the recovered Stein and test functions.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use stein_core::metrics::{fit_rate, median};
use stein_core::samplers::{iid_sequence, IidDistribution};
use stein_core::stein::{recover_test_function, univariate_complete_discrepancy, SteinFactors};
use stein_core::targets::StandardGaussian;
use stein_core::Result;

use super::{validate_schedule, validate_seeds, DEFAULT_SCHEDULE};
use crate::output::{cell, num, write_json, Table};

const DISTS: [IidDistribution; 2] = [IidDistribution::Gaussian, IidDistribution::ScaledStudentT];

#[derive(Debug, Clone)]
pub struct Config {
    pub seeds: Vec<u64>,
    pub n_schedule: Vec<usize>,
    pub factors: SteinFactors,
    /// Seed whose optimal functions are reported.
    pub function_seed: Option<u64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seeds: (0..10).collect(),
            n_schedule: DEFAULT_SCHEDULE.to_vec(),
            factors: SteinFactors::UNIT,
            function_seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub seed: u64,
    pub dist: &'static str,
    pub n: usize,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionRow {
    pub dist: &'static str,
    pub n: usize,
    pub x: f64,
    pub g: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Slopes {
    pub dist: &'static str,
    /// Slope fitted to the per-n median over seeds.
    pub median_curve_slope: f64,
    pub median_of_seed_slopes: f64,
    pub seed_slopes: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub n_schedule: Vec<usize>,
    pub seeds: Vec<u64>,
    pub factors: SteinFactors,
    pub slopes: Vec<Slopes>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<Row>,
    pub functions: Vec<FunctionRow>,
    pub summary: Summary,
}

impl Report {
    pub fn slopes(&self, dist: IidDistribution) -> Option<&Slopes> {
        self.summary.slopes.iter().find(|s| s.dist == dist.name())
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut t = Table::new(&["seed", "dist", "n", "discrepancy"]);
        for r in &self.rows {
            t.push(vec![cell(r.seed), cell(r.dist), cell(r.n), num(r.discrepancy)]);
        }
        t.write(&dir.join("gaussian_vs_t.csv"), "gaussian-vs-t", "")?;
        let mut f = Table::new(&["dist", "n", "x", "g", "h"]);
        for r in &self.functions {
            f.push(vec![cell(r.dist), cell(r.n), num(r.x), num(r.g), num(r.h)]);
        }
        f.write(&dir.join("gaussian_vs_t_functions.csv"), "gaussian-vs-t", "")?;
        write_json(&dir.join("gaussian_vs_t_summary.json"), &self.summary)
    }
}

pub fn run(config: &Config) -> Result<Report> {
    validate_seeds(&config.seeds)?;
    validate_schedule(&config.n_schedule)?;
    let target = StandardGaussian::new(1);
    let n_max = *config.n_schedule.last().expect("validated");
    let function_seed = config.function_seed.unwrap_or(config.seeds[0]);

    let jobs: Vec<(u64, IidDistribution)> = config
        .seeds
        .iter()
        .flat_map(|&s| DISTS.iter().map(move |&d| (s, d)))
        .collect();
    let results: Vec<(Vec<Row>, Vec<FunctionRow>)> = jobs
        .par_iter()
        .map(|&(seed, dist)| {
            let seq = iid_sequence(dist, n_max, seed);
            let mut rows = Vec::new();
            let mut functions = Vec::new();
            for &n in &config.n_schedule {
                let sample = seq.prefix(n)?;
                let result = univariate_complete_discrepancy(&sample, &target, config.factors)?;
                rows.push(Row {
                    seed,
                    dist: dist.name(),
                    n,
                    discrepancy: result.total,
                });
                if seed == function_seed {
                    let mut table = recover_test_function(&result, &sample, &target, None)?;
                    table.sort_by(|a, b| a.x[0].total_cmp(&b.x[0]));
                    functions.extend(table.into_iter().map(|p| FunctionRow {
                        dist: dist.name(),
                        n,
                        x: p.x[0],
                        g: p.g[0],
                        h: p.h,
                    }));
                }
            }
            Ok((rows, functions))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut functions = Vec::new();
    for (r, f) in results {
        rows.extend(r);
        functions.extend(f);
    }
    let ns: Vec<f64> = config.n_schedule.iter().map(|&n| n as f64).collect();
    let mut slopes = Vec::new();
    for dist in DISTS {
        let of = |seed: u64| -> Vec<f64> {
            rows.iter()
                .filter(|r| r.dist == dist.name() && r.seed == seed)
                .map(|r| r.discrepancy)
                .collect()
        };
        let seed_slopes = config
            .seeds
            .iter()
            .map(|&s| fit_rate(&ns, &of(s)).map(|f| f.0))
            .collect::<Result<Vec<_>>>()?;
        let medians: Vec<f64> = (0..ns.len())
            .map(|k| median(&config.seeds.iter().map(|&s| of(s)[k]).collect::<Vec<_>>()).expect("seeds"))
            .collect();
        slopes.push(Slopes {
            dist: dist.name(),
            median_curve_slope: fit_rate(&ns, &medians)?.0,
            median_of_seed_slopes: median(&seed_slopes).expect("seeds"),
            seed_slopes,
        });
    }
    Ok(Report {
        rows,
        functions,
        summary: Summary {
            n_schedule: config.n_schedule.clone(),
            seeds: config.seeds.clone(),
            factors: config.factors,
            slopes,
        },
    })
}
