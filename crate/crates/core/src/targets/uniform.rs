use super::{Interval, Target, UnivariateCdf};

/// Uniform distribution on the open unit cube `(0, 1)^d`.
///
/// The score is identically zero inside the cube; the boundary enters the
/// discrepancy only through the boundary compatibility rows.
#[derive(Debug, Clone)]
pub struct UnitCube {
    support: Vec<Interval>,
}

impl UnitCube {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        UnitCube {
            support: vec![Interval { lo: 0.0, hi: 1.0 }; dim],
        }
    }
}

impl Target for UnitCube {
    fn name(&self) -> &str {
        "uniform01"
    }

    fn dim(&self) -> usize {
        self.support.len()
    }

    fn support(&self) -> &[Interval] {
        &self.support
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        if x.iter().all(|&v| 0.0 < v && v < 1.0) {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    }

    fn score_into(&self, _x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
    }

    fn univariate_cdf(&self) -> Option<&dyn UnivariateCdf> {
        (self.dim() == 1).then_some(self as &dyn UnivariateCdf)
    }
}

impl UnivariateCdf for UnitCube {
    fn cdf(&self, x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    fn lower_partial_moment(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x < 1.0 {
            0.5 * x * x
        } else {
            x - 0.5
        }
    }

    fn upper_partial_moment(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.5 - x
        } else if x < 1.0 {
            0.5 * (1.0 - x) * (1.0 - x)
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::targets::target_cdf;

    #[test]
    fn zero_score_inside() {
        let u = UnitCube::new(1);
        assert_eq!(u.grad_log_density(&[0.3]).unwrap(), vec![0.0]);
    }

    #[test]
    fn boundary_points_are_outside() {
        let u = UnitCube::new(1);
        assert!(matches!(u.grad_log_density(&[0.0]), Err(Error::Domain(_))));
        assert!(matches!(u.grad_log_density(&[1.2]), Err(Error::Domain(_))));
    }

    #[test]
    fn cdf_is_identity_on_unit_interval() {
        let u = UnitCube::new(1);
        assert_eq!(target_cdf(&u, 0.5).unwrap(), 0.5);
        assert_eq!(target_cdf(&u, -1.0).unwrap(), 0.0);
        assert_eq!(target_cdf(&u, 2.0).unwrap(), 1.0);
    }
}
