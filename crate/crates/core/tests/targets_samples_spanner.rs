//! Target gradients, sample canonicalization, and spanner stretch.

use proptest::prelude::*;
use stein_core::spanner::{complete_graph, greedy_spanner, verify_stretch};
use stein_core::targets::{
    finite_difference_score, GmmConfig, GmmPosterior, LogisticPosterior, StandardGaussian, Target, UnitCube,
};
use stein_core::{PointSet, WeightedSample};

fn assert_gradient_matches(target: &dyn Target, x: &[f64]) {
    let exact = target.grad_log_density(x).unwrap();
    let numeric = finite_difference_score(target, x, 1e-5);
    for (k, (a, b)) in exact.iter().zip(&numeric).enumerate() {
        let scale = a.abs().max(b.abs()).max(1.0);
        assert!((a - b).abs() <= 1e-4 * scale, "{} coordinate {k}: {a} vs {b}", target.name());
    }
}

#[test]
fn gradients_match_finite_differences() {
    assert_gradient_matches(&StandardGaussian::new(1), &[0.7]);
    assert_gradient_matches(&StandardGaussian::new(3), &[0.3, -1.2, 2.0]);
    assert_gradient_matches(&UnitCube::new(2), &[0.2, 0.9]);
    let gmm = GmmPosterior::generate(&GmmConfig::default()).unwrap();
    for theta in [[0.0, 1.0], [1.0, -1.0], [-0.4, 0.3]] {
        assert_gradient_matches(&gmm, &theta);
    }
    let nodal = LogisticPosterior::nodal();
    assert_gradient_matches(&nodal, &[0.0; 6]);
    assert_gradient_matches(&nodal, &[-0.5, 0.2, -0.3, 1.0, 0.7, 1.5]);
    let synthetic = LogisticPosterior::synthetic(80, 4, 3).unwrap();
    assert_gradient_matches(&synthetic, &[0.1, -0.2, 0.3, -0.4]);
}

/// All-pairs shortest paths by Floyd–Warshall.
fn graph_distances(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(i, l, w) in edges {
        dist[i][l] = dist[i][l].min(w);
        dist[l][i] = dist[l][i].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for l in 0..n {
                let via = dist[i][k] + dist[k][l];
                if via < dist[i][l] {
                    dist[i][l] = via;
                }
            }
        }
    }
    dist
}

fn points_strategy(max_n: usize, dim: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-5.0f64..5.0, dim), 1..max_n)
        .prop_map(|rows| PointSet::from_rows(&rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_spanner_has_stretch(points in points_strategy(25, 2), t in 1.0f64..3.0) {
        let g = greedy_spanner(&points, t).unwrap();
        prop_assert!(verify_stretch(&points, &g, t).unwrap());
        let edges: Vec<_> = g.edges().iter().map(|e| (e.i, e.l, e.weight)).collect();
        let dist = graph_distances(points.len(), &edges);
        for i in 0..points.len() {
            for l in 0..points.len() {
                prop_assert!(dist[i][l] <= t * points.l1_distance(i, l) * (1.0 + 1e-9) + 1e-12);
            }
        }
        prop_assert!(g.edges().len() <= complete_graph(&points).edges().len());
    }

    #[test]
    fn merging_is_permutation_invariant(
        rows in prop::collection::vec(prop::collection::vec(prop::sample::select(vec![-1.0, 0.0, 0.5, 2.0]), 2), 1..30),
        seed in any::<u64>(),
    ) {
        let weights: Vec<f64> = (0..rows.len()).map(|i| 1.0 + ((i as u64 ^ seed) % 5) as f64).collect();
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| (i as u64).wrapping_mul(seed | 1).rotate_left(17));
        let permuted_rows: Vec<Vec<f64>> = order.iter().map(|&i| rows[i].clone()).collect();
        let permuted_weights: Vec<f64> = order.iter().map(|&i| weights[i]).collect();
        let a = WeightedSample::from_rows(&rows, Some(&weights)).unwrap();
        let b = WeightedSample::from_rows(&permuted_rows, Some(&permuted_weights)).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, q) in a.points().rows().zip(a.weights()) {
            let pos = b.points().rows().position(|y| y == x).unwrap();
            prop_assert!((q - b.weights()[pos]).abs() <= 1e-12);
        }
        prop_assert!((a.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn unit_stretch_keeps_every_non_redundant_pair() {
    // collinear points: every longer pair is exactly bridged, so t = 1 keeps only neighbours
    let points = PointSet::new(1, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    let g = greedy_spanner(&points, 1.0).unwrap();
    assert_eq!(g.edges().len(), 3);
    assert!(verify_stretch(&points, &g, 1.0).unwrap());
}
