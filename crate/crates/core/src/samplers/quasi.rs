use crate::error::{Error, Result};
use crate::samples::PointSet;

/// Base-2 radical inverse of `i`: the bits of `i` mirrored about the binary point.
fn radical_inverse(i: u64) -> f64 {
    i.reverse_bits() as f64 / 2f64.powi(64)
}

/// First `n` terms of the one-dimensional Sobol sequence, which is the
/// van der Corput sequence in base 2 started at index 1:
/// `0.5, 0.25, 0.75, 0.125, …`.
pub fn sobol_1d(n: usize) -> PointSet {
    let coords = (1..=n as u64).map(radical_inverse).collect();
    PointSet::new(1, coords).expect("one dimension")
}

/// Greedy kernel herding for Unif(0, 1) over the candidate grid
/// `(g + 1) / (G + 1)`, `g < G`.
///
/// The kernel `k(x, y) = min(x, y) − xy` reproduces the Sobolev space with
/// norm `∫ h′²` and zero boundary values; its mean embedding under the
/// uniform distribution is `x(1 − x)/2`. Step `t` picks the candidate
/// maximizing `μ(x) − Σ_{s ≤ t} k(x, x_s) / (t + 1)`, breaking ties towards
/// the smaller candidate.
pub fn herding_1d(n: usize, grid_size: usize) -> Result<PointSet> {
    if grid_size < 100 {
        return Err(Error::Parameter(format!("herding grid needs at least 100 candidates, got {grid_size}")));
    }
    let grid: Vec<f64> = (0..grid_size)
        .map(|g| (g + 1) as f64 / (grid_size + 1) as f64)
        .collect();
    let embedding: Vec<f64> = grid.iter().map(|x| 0.5 * x * (1.0 - x)).collect();
    let mut kernel_sum = vec![0.0; grid_size];
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let scale = 1.0 / (t + 1) as f64;
        let mut best = 0;
        let mut best_value = f64::NEG_INFINITY;
        for (g, (&mu, &ks)) in embedding.iter().zip(&kernel_sum).enumerate() {
            let value = mu - scale * ks;
            if value > best_value {
                best = g;
                best_value = value;
            }
        }
        let chosen = grid[best];
        for (ks, &x) in kernel_sum.iter_mut().zip(&grid) {
            *ks += x.min(chosen) - x * chosen;
        }
        out.push(chosen);
    }
    PointSet::new(1, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sobol_prefix() {
        assert_eq!(sobol_1d(7).coords(), &[0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]);
    }

    #[test]
    fn sobol_terms_distinct() {
        let mut v = sobol_1d(1 << 16).coords().to_vec();
        v.sort_by(f64::total_cmp);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(v[0] > 0.0 && v[v.len() - 1] < 1.0);
    }

    #[test]
    fn herding_starts_at_midpoint_and_balances_mean() {
        let seq = herding_1d(200, 10_000).unwrap();
        assert!((seq.coords()[0] - 0.5).abs() < 1e-4);
        for n in 10..=200 {
            let mean = seq.coords()[..n].iter().sum::<f64>() / n as f64;
            assert!((mean - 0.5).abs() <= 2.0 / n as f64, "n = {n}: {mean}");
        }
    }

    #[test]
    fn herding_is_deterministic() {
        assert_eq!(herding_1d(50, 500).unwrap(), herding_1d(50, 500).unwrap());
        assert!(herding_1d(5, 10).is_err());
    }
}
