use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Open01, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::samples::PointSet;

const T_DOF: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IidDistribution {
    Gaussian,
    Uniform01,
    /// Student's t with 10 degrees of freedom scaled to unit variance.
    ScaledStudentT,
}

impl IidDistribution {
    pub fn name(self) -> &'static str {
        match self {
            IidDistribution::Gaussian => "gaussian",
            IidDistribution::Uniform01 => "uniform01",
            IidDistribution::ScaledStudentT => "scaled_t",
        }
    }
}

/// `n` independent draws in one dimension.
pub fn iid_sequence(dist: IidDistribution, n: usize, seed: u64) -> PointSet {
    iid_points(dist, n, 1, seed)
}

/// `n` independent draws in `dim` dimensions with independent coordinates,
/// generated row by row so shorter runs are prefixes of longer ones.
pub fn iid_points(dist: IidDistribution, n: usize, dim: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_scale = ((T_DOF - 2.0) / T_DOF).sqrt();
    let student = StudentT::new(T_DOF).expect("positive degrees of freedom");
    let coords = (0..n * dim)
        .map(|_| match dist {
            IidDistribution::Gaussian => StandardNormal.sample(&mut rng),
            IidDistribution::Uniform01 => Open01.sample(&mut rng),
            IidDistribution::ScaledStudentT => t_scale * student.sample(&mut rng),
        })
        .collect();
    PointSet::new(dim, coords).expect("dimension is positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(p: &PointSet) -> (f64, f64) {
        let n = p.len() as f64;
        let mean = p.coords().iter().sum::<f64>() / n;
        let var = p.coords().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn gaussian_moments() {
        let n = 100_000;
        let (mean, var) = moments(&iid_sequence(IidDistribution::Gaussian, n, 1));
        assert!(mean.abs() <= 3.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() <= 0.05);
    }

    #[test]
    fn scaled_t_has_unit_variance() {
        let (_, var) = moments(&iid_sequence(IidDistribution::ScaledStudentT, 100_000, 2));
        assert!((var - 1.0).abs() <= 0.05, "{var}");
    }

    #[test]
    fn uniform_is_open_unit_interval() {
        let p = iid_sequence(IidDistribution::Uniform01, 10_000, 3);
        assert!(p.coords().iter().all(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn reproducible_and_prefix_stable() {
        let a = iid_points(IidDistribution::Gaussian, 100, 2, 7);
        let b = iid_points(IidDistribution::Gaussian, 100, 2, 7);
        let c = iid_points(IidDistribution::Gaussian, 50, 2, 7);
        assert_eq!(a, b);
        assert_eq!(&a.coords()[..100], c.coords());
    }
}
