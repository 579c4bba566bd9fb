//! Discrepancy of one sample file against one target description.

use std::fs;
use std::path::PathBuf;

use stein_core::stein::{
    spanner_discrepancy, univariate_complete_discrepancy, DiscrepancyResult, DiscrepancySummary, SteinFactors,
};
use stein_core::{Result, TargetSpec, WeightedSample};

use crate::output::{ensure_dir, write_json};

#[derive(Debug, Clone)]
pub struct Config {
    pub sample: PathBuf,
    pub target: PathBuf,
    pub t: f64,
    pub factors: SteinFactors,
    pub univariate: bool,
    pub certificates: bool,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: DiscrepancyResult,
    pub summary: DiscrepancySummary,
    pub result_path: Option<PathBuf>,
}

pub fn run(config: &Config) -> Result<Outcome> {
    let sample = WeightedSample::load_csv(&config.sample)?;
    let target = TargetSpec::from_path(&config.target)?.build()?;
    let result = if config.univariate {
        univariate_complete_discrepancy(&sample, target.as_ref(), config.factors)?
    } else {
        spanner_discrepancy(&sample, target.as_ref(), config.t, config.factors)?
    };

    let mut certificate_path = None;
    let mut result_path = None;
    if let Some(dir) = &config.out_dir {
        ensure_dir(dir)?;
        if config.certificates {
            let path = dir.join("certificates.csv");
            result.write_certificates_csv(std::io::BufWriter::new(fs::File::create(&path)?))?;
            certificate_path = Some(path.display().to_string());
        }
    }
    let summary = result.summary(sample.len(), certificate_path);
    if let Some(dir) = &config.out_dir {
        let path = dir.join("discrepancy.json");
        write_json(&path, &summary)?;
        result_path = Some(path);
    }
    Ok(Outcome {
        result,
        summary,
        result_path,
    })
}

pub fn render(summary: &DiscrepancySummary) -> String {
    let mut out = format!("total {:?}\n", summary.total);
    for (j, r) in summary.per_coordinate.iter().enumerate() {
        out.push_str(&format!("coordinate {} {:?}\n", j + 1, r));
    }
    out
}
