use serde::Serialize;

use crate::error::{Error, Result};
use crate::samples::{PointSet, WeightedSample};
use crate::targets::sigmoid;

/// Errors of a sample against a surrogate sample of the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorMeasures {
    /// `max_l |E_Q σ(⟨X, w_l⟩) − E_Q* σ(⟨Z, w_l⟩)| / ‖w_l‖_∞`
    pub prob_error: f64,
    /// `max_j |E_Q X_j − E_Q* Z_j| / max_j |E_Q* Z_j|`
    pub mean_error: f64,
    /// `max_{j,k} |E_Q X_j X_k − E_Q* Z_j Z_k| / max_{j,k} |E_Q* Z_j Z_k|`
    pub second_moment_error: f64,
}

fn means(s: &WeightedSample) -> Vec<f64> {
    let d = s.dim();
    let mut m = vec![0.0; d];
    for (x, q) in s.points().rows().zip(s.weights()) {
        for j in 0..d {
            m[j] += q * x[j];
        }
    }
    m
}

fn second_moments(s: &WeightedSample) -> Vec<f64> {
    let d = s.dim();
    let mut m = vec![0.0; d * d];
    for (x, q) in s.points().rows().zip(s.weights()) {
        for j in 0..d {
            for k in 0..d {
                m[j * d + k] += q * x[j] * x[k];
            }
        }
    }
    m
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Probability, mean, and second-moment errors of `sample` relative to
/// `surrogate`, with expectations taken as weighted sample means. Each row
/// of `covariates` is a direction `w_l`.
pub fn error_measures(
    sample: &WeightedSample,
    surrogate: &WeightedSample,
    covariates: &PointSet,
) -> Result<ErrorMeasures> {
    let d = surrogate.dim();
    for actual in [sample.dim(), covariates.dim()] {
        if actual != d {
            return Err(Error::Dimension { expected: d, actual });
        }
    }

    let mut prob_error: f64 = 0.0;
    for (l, w) in covariates.rows().enumerate() {
        let scale = max_abs(w);
        if scale == 0.0 {
            return Err(Error::Degenerate(format!("covariate row {l} is zero")));
        }
        let expect = |s: &WeightedSample| s.expect(|x| sigmoid(x.iter().zip(w).map(|(a, b)| a * b).sum()));
        prob_error = prob_error.max((expect(sample) - expect(surrogate)).abs() / scale);
    }

    let (m_q, m_s) = (means(sample), means(surrogate));
    let mean_scale = max_abs(&m_s);
    let (s_q, s_s) = (second_moments(sample), second_moments(surrogate));
    let second_scale = max_abs(&s_s);
    if mean_scale == 0.0 || second_scale == 0.0 {
        return Err(Error::Degenerate("surrogate moment normalizer is zero".into()));
    }
    Ok(ErrorMeasures {
        prob_error,
        mean_error: max_abs_diff(&m_q, &m_s) / mean_scale,
        second_moment_error: max_abs_diff(&s_q, &s_s) / second_scale,
    })
}
