use crate::error::{Error, Result};
use crate::samples::PointSet;

const MIN_LENGTH: usize = 10;

/// Effective sample size `n / τ` of a scalar chain, with the integrated
/// autocorrelation time `τ` truncated by Geyer's initial positive sequence:
/// pair sums `γ(2m) + γ(2m+1)` of the autocovariance are accumulated while
/// positive. The result is capped at `n`.
pub fn effective_sample_size(chain: &[f64]) -> Result<f64> {
    let n = chain.len();
    if n < MIN_LENGTH {
        return Err(Error::Parameter(format!(
            "effective sample size needs at least {MIN_LENGTH} draws, got {n}"
        )));
    }
    if let Some(row) = chain.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { row });
    }
    let mean = chain.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = chain.iter().map(|x| x - mean).collect();
    let autocov = |lag: usize| -> f64 {
        centred[..n - lag]
            .iter()
            .zip(&centred[lag..])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64
    };
    let gamma0 = autocov(0);
    // rounding in the mean leaves a tiny residual variance for constant chains
    if gamma0 <= (1e-14 * mean.abs()).powi(2) {
        return Err(Error::Degenerate("chain has zero variance".into()));
    }
    let mut pair_sum_total = 0.0;
    let mut m = 0;
    while 2 * m + 1 < n {
        let pair = autocov(2 * m) + autocov(2 * m + 1);
        if pair <= 0.0 {
            break;
        }
        pair_sum_total += pair;
        m += 1;
    }
    let tau = (2.0 * pair_sum_total - gamma0) / gamma0;
    if !(tau > 0.0) {
        return Ok(n as f64);
    }
    Ok((n as f64 / tau).min(n as f64))
}

/// Smallest per-coordinate effective sample size of a multivariate chain.
pub fn min_effective_sample_size(chain: &PointSet) -> Result<f64> {
    let d = chain.dim();
    let mut column = vec![0.0; chain.len()];
    let mut best = f64::INFINITY;
    for j in 0..d {
        for (slot, row) in column.iter_mut().zip(chain.rows()) {
            *slot = row[j];
        }
        best = best.min(effective_sample_size(&column)?);
    }
    Ok(best)
}
