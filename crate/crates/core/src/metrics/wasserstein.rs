use crate::error::{Error, Result};
use crate::samples::WeightedSample;
use crate::targets::{Target, UnivariateCdf};

/// `∫ |F_Q(x) − F_P(x)| dx` for a univariate target with a known CDF.
///
/// Between consecutive atoms `F_Q` is a constant `c` and the integral of
/// `|c − F_P|` follows from the partial moments `L(x) = ∫_{-∞}^x F_P` and
/// `U(x) = ∫_x^∞ (1 − F_P)`, splitting the segment where `F_P` crosses `c`.
pub fn wasserstein_1d(sample: &WeightedSample, target: &dyn Target) -> Result<f64> {
    if sample.dim() != 1 || target.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            actual: sample.dim().max(target.dim()),
        });
    }
    let cdf = target
        .univariate_cdf()
        .ok_or_else(|| Error::UnsupportedTarget(format!("{} has no closed-form CDF", target.name())))?;

    let mut atoms: Vec<(f64, f64)> = sample
        .points()
        .coords()
        .iter()
        .copied()
        .zip(sample.weights().iter().copied())
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));

    let first = atoms[0].0;
    let last = atoms[atoms.len() - 1].0;
    let mut total = cdf.lower_partial_moment(first) + cdf.upper_partial_moment(last);
    let mut level = 0.0;
    for pair in atoms.windows(2) {
        level += pair[0].1;
        total += segment(cdf, pair[0].0, pair[1].0, level.min(1.0));
    }
    Ok(total.max(0.0))
}

/// `∫_a^b |c − F(x)| dx` for nondecreasing `F`.
fn segment(cdf: &dyn UnivariateCdf, a: f64, b: f64, c: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let area_below = |lo: f64, hi: f64| cdf.lower_partial_moment(hi) - cdf.lower_partial_moment(lo);
    let (fa, fb) = (cdf.cdf(a), cdf.cdf(b));
    if fb <= c {
        return c * (b - a) - area_below(a, b);
    }
    if fa >= c {
        return area_below(a, b) - c * (b - a);
    }
    let (mut lo, mut hi) = (a, b);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cdf.cdf(mid) < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    (c * (s - a) - area_below(a, s)) + (area_below(s, b) - c * (b - s))
}
