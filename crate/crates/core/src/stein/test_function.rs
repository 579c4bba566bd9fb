use super::{sample_scores, DiscrepancyResult};
use crate::error::{Error, Result};
use crate::samples::WeightedSample;
use crate::targets::Target;

/// Recovered Stein function `g` and discriminating test function
/// `h = T_P g` at one sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionPoint {
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    pub h: f64,
}

/// Evaluates the optimal `g` and `h(x_i) = Σ_j γ_ji ∇_j log p(x_i) + Γ_jji`
/// at each sample point. With `coordinate = Some(j)` only `g_j` and its
/// contribution to `h` are reported, so `Σ q h` equals `r_j` instead of the
/// total.
pub fn recover_test_function(
    result: &DiscrepancyResult,
    sample: &WeightedSample,
    target: &dyn Target,
    coordinate: Option<usize>,
) -> Result<Vec<TestFunctionPoint>> {
    let d = sample.dim();
    if result.vertex_of_sample.len() != sample.len() || result.certificates.len() != d {
        return Err(Error::Parameter("result does not belong to this sample".into()));
    }
    let coords: Vec<usize> = match coordinate {
        Some(j) if j < d => vec![j],
        Some(j) => {
            return Err(Error::Parameter(format!("coordinate {j} out of range for dimension {d}")))
        }
        None => (0..d).collect(),
    };
    let scores = sample_scores(sample, target)?;
    Ok(sample
        .points()
        .rows()
        .enumerate()
        .map(|(i, x)| {
            let v = result.vertex_of_sample[i];
            let mut h = 0.0;
            let g = coords
                .iter()
                .map(|&j| {
                    let cert = &result.certificates[j];
                    h += cert.gamma[v] * scores[i * d + j] + cert.grad(j, v);
                    cert.gamma[v]
                })
                .collect();
            TestFunctionPoint { x: x.to_vec(), g, h }
        })
        .collect())
}
