//! The experiment suite: each module turns a small config into in-memory
//! rows plus a summary, and knows how to write them as artifacts.

pub mod arwmh_tradeoff;
pub mod compare_metrics;
pub mod density_grid;
pub mod discrepancy;
pub mod gaussian_vs_t;
pub mod rates;
pub mod sgld_select;

use stein_core::{Error, Result};

/// Prefix sizes used when none are given.
pub const DEFAULT_SCHEDULE: [usize; 7] = [10, 20, 50, 100, 200, 500, 1000];

pub fn validate_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 {
        return Err(Error::Parameter("prefix schedule must be nonempty and positive".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("prefix schedule must be strictly increasing".into()));
    }
    Ok(())
}

pub fn validate_seeds(seeds: &[u64]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::Parameter("at least one seed is required".into()));
    }
    Ok(())
}

/// `"10"` means seeds `0..10`; `"3..7"` a half-open range; `"1,5,9"` a list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Input(format!("cannot parse seeds `{text}`"));
    let text = text.trim();
    let seeds = if let Some((a, b)) = text.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..b).collect()
    } else if text.contains(',') {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<Vec<u64>>>()?
    } else {
        let count: u64 = text.parse().map_err(|_| bad())?;
        (0..count).collect()
    };
    validate_seeds(&seeds)?;
    Ok(seeds)
}

pub fn parse_schedule(text: &str) -> Result<Vec<usize>> {
    let schedule = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Input(format!("cannot parse prefix schedule `{text}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_schedule(&schedule).map_err(|e| Error::Input(e.to_string()))?;
    Ok(schedule)
}

pub fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Input(format!("cannot parse number list `{text}`")))
        })
        .collect()
}

/// Number of items for which `a < b`, and the number compared.
pub fn count_below(pairs: impl IntoIterator<Item = (f64, f64)>) -> (usize, usize) {
    pairs
        .into_iter()
        .fold((0, 0), |(wins, total), (a, b)| (wins + usize::from(a < b), total + 1))
}
