//! Solver results against brute-force vertex enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stein_core::lp::{solve, LinearProgram, LpStatus};

/// Dense constraint `a·x ≤ b`.
struct Halfspace {
    a: Vec<f64>,
    b: f64,
}

/// Solves the square system by Gaussian elimination with partial pivoting.
fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

fn combinations(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for i in start..n {
        current.push(i);
        combinations(n, k, i + 1, current, out);
        current.pop();
    }
}

/// Maximum of `c·x` over a bounded polyhedron, by checking every basic point.
fn vertex_enumeration(c: &[f64], constraints: &[Halfspace]) -> Option<f64> {
    let n = c.len();
    let mut subsets = Vec::new();
    combinations(constraints.len(), n, 0, &mut Vec::new(), &mut subsets);
    let mut best: Option<f64> = None;
    for subset in subsets {
        let m = subset.iter().map(|&i| constraints[i].a.clone()).collect();
        let rhs = subset.iter().map(|&i| constraints[i].b).collect();
        let Some(x) = solve_square(m, rhs) else { continue };
        let feasible = constraints
            .iter()
            .all(|h| h.a.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>() <= h.b + 1e-9);
        if feasible {
            let value: f64 = c.iter().zip(&x).map(|(a, v)| a * v).sum();
            best = Some(best.map_or(value, |b: f64| b.max(value)));
        }
    }
    best
}

#[test]
fn random_programs_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut solved = 0;
    for case in 0..50 {
        let n = rng.gen_range(1..=6);
        let rows = rng.gen_range(0..=8);
        let mut lp = LinearProgram::new(n);
        let mut halfspaces = Vec::new();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        for (j, &cj) in c.iter().enumerate() {
            lp.set_objective(j, cj);
            let lo = rng.gen_range(-3.0..0.0);
            let hi = lo + rng.gen_range(0.5..4.0);
            lp.set_bounds(j, lo, hi);
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            halfspaces.push(Halfspace { a: e.clone(), b: hi });
            e[j] = -1.0;
            halfspaces.push(Halfspace { a: e, b: -lo });
        }
        for _ in 0..rows {
            let a: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.7) { rng.gen_range(-2.0..2.0) } else { 0.0 })
                .collect();
            // some rows may cut off the whole box, exercising infeasibility
            let b = rng.gen_range(-2.5..3.0);
            let terms: Vec<(usize, f64)> = a.iter().copied().enumerate().collect();
            lp.add_row(&terms, b);
            halfspaces.push(Halfspace { a, b });
        }
        let sol = solve(&lp).unwrap();
        match vertex_enumeration(&c, &halfspaces) {
            Some(best) => {
                assert_eq!(sol.status, LpStatus::Optimal, "case {case}");
                assert!(
                    (sol.objective_value - best).abs() <= 1e-6,
                    "case {case}: solver {} vs enumeration {best}",
                    sol.objective_value
                );
                assert!(lp.max_violation(&sol.primal) <= 1e-7);
                solved += 1;
            }
            None => assert_eq!(sol.status, LpStatus::Infeasible, "case {case}"),
        }
    }
    assert!(solved >= 25, "only {solved} feasible cases");
}
