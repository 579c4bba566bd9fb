use statrs::function::erf::erfc;

use super::{DataModel, Interval, Target, UnivariateCdf};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal `N(0, I_d)`.
///
/// As a [`DataModel`] it is a single datum carrying the whole density under a
/// flat prior, so full-batch gradient samplers run on it unchanged.
#[derive(Debug, Clone)]
pub struct StandardGaussian {
    support: Vec<Interval>,
}

impl StandardGaussian {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        StandardGaussian {
            support: vec![Interval::REAL_LINE; dim],
        }
    }
}

pub(crate) fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub(crate) fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

impl Target for StandardGaussian {
    fn name(&self) -> &str {
        "gaussian"
    }

    fn dim(&self) -> usize {
        self.support.len()
    }

    fn support(&self) -> &[Interval] {
        &self.support
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        -0.5 * x.iter().map(|v| v * v).sum::<f64>()
    }

    fn score_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, v) in out.iter_mut().zip(x) {
            *o = -v;
        }
    }

    fn univariate_cdf(&self) -> Option<&dyn UnivariateCdf> {
        (Target::dim(self) == 1).then_some(self as &dyn UnivariateCdf)
    }

    fn data_model(&self) -> Option<&dyn DataModel> {
        Some(self)
    }
}

impl UnivariateCdf for StandardGaussian {
    fn cdf(&self, x: f64) -> f64 {
        normal_cdf(x)
    }

    fn lower_partial_moment(&self, x: f64) -> f64 {
        x * normal_cdf(x) + normal_pdf(x)
    }

    fn upper_partial_moment(&self, x: f64) -> f64 {
        normal_pdf(x) - x * normal_sf(x)
    }
}

impl DataModel for StandardGaussian {
    fn n_data(&self) -> usize {
        1
    }

    fn dim(&self) -> usize {
        self.support.len()
    }

    fn log_prior(&self, _theta: &[f64]) -> f64 {
        0.0
    }

    fn grad_log_prior(&self, _theta: &[f64], out: &mut [f64]) {
        out.fill(0.0);
    }

    fn log_likelihood(&self, _datum: usize, theta: &[f64]) -> f64 {
        self.log_density(theta)
    }

    fn add_grad_log_likelihood(&self, _datum: usize, theta: &[f64], scale: f64, out: &mut [f64]) {
        for (o, v) in out.iter_mut().zip(theta) {
            *o -= scale * v;
        }
    }
}
