use super::{sample_scores, solve_coordinate, DiscrepancyResult, Formulation, SteinFactors};
use crate::error::{Error, Result};
use crate::lp::LinearProgram;
use crate::samples::{PointSet, WeightedSample};
use crate::targets::Target;

/// The one-dimensional complete graph program.
///
/// Vertices are the sample points together with the finite support
/// endpoints, sorted. Endpoints carry zero mass and `γ = 0`; constraints join
/// consecutive vertices only. Returns the program, the sorted vertex
/// coordinates, and the vertex index of each sample point.
pub fn build_univariate_lp(
    sample: &WeightedSample,
    target: &dyn Target,
    factors: SteinFactors,
) -> Result<(LinearProgram, Vec<f64>, Vec<usize>)> {
    if sample.dim() != 1 || target.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            actual: sample.dim().max(target.dim()),
        });
    }
    let scores = sample_scores(sample, target)?;
    let SteinFactors { c1, c2, c3 } = factors;

    // (position, Some(sample index) | None for an endpoint)
    let mut order: Vec<(f64, Option<usize>)> = sample
        .points()
        .coords()
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, Some(i)))
        .collect();
    order.extend(target.support()[0].finite_endpoints().map(|b| (b, None)));
    order.sort_by(|a, b| a.0.total_cmp(&b.0));

    let m = order.len();
    let mut lp = LinearProgram::new(2 * m);
    let mut vertex_of_sample = vec![0; sample.len()];
    for (v, &(_, origin)) in order.iter().enumerate() {
        lp.set_bounds(m + v, -c2, c2);
        match origin {
            Some(i) => {
                vertex_of_sample[i] = v;
                let q = sample.weights()[i];
                lp.set_objective(v, q * scores[i]);
                lp.set_objective(m + v, q);
                lp.set_bounds(v, -c1, c1);
            }
            None => lp.set_bounds(v, 0.0, 0.0),
        }
    }
    for v in 0..m.saturating_sub(1) {
        let gap = order[v + 1].0 - order[v].0;
        lp.add_abs_row(&[(v, 1.0), (v + 1, -1.0)], c2 * gap);
        lp.add_abs_row(&[(m + v, 1.0), (m + v + 1, -1.0)], c3 * gap);
        // γ_v − γ_{v+1} − Γ_a (x_v − x_{v+1}) with x_v − x_{v+1} = −gap
        for anchor in [v, v + 1] {
            lp.add_abs_row(&[(v, 1.0), (v + 1, -1.0), (m + anchor, gap)], 0.5 * c3 * gap * gap);
        }
    }
    let vertices = order.iter().map(|&(x, _)| x).collect();
    Ok((lp, vertices, vertex_of_sample))
}

/// Complete graph Stein discrepancy for a univariate target.
pub fn univariate_complete_discrepancy(
    sample: &WeightedSample,
    target: &dyn Target,
    factors: SteinFactors,
) -> Result<DiscrepancyResult> {
    let (lp, vertices, vertex_of_sample) = build_univariate_lp(sample, target, factors)?;
    let (value, certificate) = solve_coordinate(&lp, vertices.len(), 0)?;
    Ok(DiscrepancyResult {
        total: value,
        per_coordinate: vec![value],
        certificates: vec![certificate],
        vertices: PointSet::new(1, vertices)?,
        vertex_of_sample,
        factors,
        formulation: Formulation::Univariate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{StandardGaussian, UnitCube};

    fn points(xs: &[f64]) -> WeightedSample {
        WeightedSample::from_points(PointSet::new(1, xs.to_vec()).unwrap(), None).unwrap()
    }

    #[test]
    fn uniform_single_point() {
        let u = UnitCube::new(1);
        let r = univariate_complete_discrepancy(&points(&[0.5]), &u, SteinFactors::UNIT).unwrap();
        assert!((r.total - 0.25).abs() < 1e-9);
        // Γ ≤ 0.25 binds before c2 = 0.5
        let r = univariate_complete_discrepancy(&points(&[0.5]), &u, SteinFactors::new(0.5, 0.5, 1.0).unwrap())
            .unwrap();
        assert!((r.total - 0.25).abs() < 1e-9);
    }

    #[test]
    fn endpoints_are_vertices_with_zero_gamma() {
        let u = UnitCube::new(1);
        let (lp, vertices, map) = build_univariate_lp(&points(&[0.7, 0.2]), &u, SteinFactors::UNIT).unwrap();
        assert_eq!(vertices, vec![0.0, 0.2, 0.7, 1.0]);
        assert_eq!(map, vec![2, 1]);
        assert_eq!(lp.bounds(0), (0.0, 0.0));
        assert_eq!(lp.bounds(3), (0.0, 0.0));
        assert_eq!(lp.row_count(), 3 * 8);
    }

    #[test]
    fn gaussian_single_point() {
        let r = univariate_complete_discrepancy(&points(&[0.0]), &StandardGaussian::new(1), SteinFactors::UNIT)
            .unwrap();
        assert!((r.total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_multivariate() {
        let s = WeightedSample::from_rows(&[vec![0.1, 0.2]], None).unwrap();
        let err = univariate_complete_discrepancy(&s, &StandardGaussian::new(2), SteinFactors::UNIT).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }
}
