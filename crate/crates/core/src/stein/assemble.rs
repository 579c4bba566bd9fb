use super::{sample_scores, SteinFactors};
use crate::error::{Error, Result};
use crate::lp::LinearProgram;
use crate::samples::WeightedSample;
use crate::spanner::SpannerGraph;
use crate::targets::Target;

/// Variable index of `γ_i`.
#[inline]
fn gamma(i: usize) -> usize {
    i
}

/// Variable index of `Γ_{k,i}` (gradient component `k` at vertex `i`).
#[inline]
fn grad(n: usize, k: usize, i: usize) -> usize {
    n + k * n + i
}

/// Program for coordinate `j` (zero-based) of the graph Stein discrepancy.
///
/// Variables: `γ_j` (one per vertex) followed by `Γ_j` component-major.
/// Every absolute-value constraint is written as two rows.
pub fn build_coordinate_lp(
    sample: &WeightedSample,
    target: &dyn Target,
    graph: &SpannerGraph,
    j: usize,
    factors: SteinFactors,
) -> Result<LinearProgram> {
    let scores = sample_scores(sample, target)?;
    assemble(sample, target, graph, j, factors, &scores)
}

pub(super) fn assemble(
    sample: &WeightedSample,
    target: &dyn Target,
    graph: &SpannerGraph,
    j: usize,
    factors: SteinFactors,
    scores: &[f64],
) -> Result<LinearProgram> {
    let n = sample.len();
    let d = sample.dim();
    if j >= d {
        return Err(Error::Parameter(format!("coordinate {j} out of range for dimension {d}")));
    }
    if graph.vertex_count() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: graph.vertex_count(),
        });
    }
    let SteinFactors { c1, c2, c3 } = factors;
    let points = sample.points();

    let mut lp = LinearProgram::new(n * (d + 1));
    for (i, &q) in sample.weights().iter().enumerate() {
        lp.set_objective(gamma(i), q * scores[i * d + j]);
        lp.set_objective(grad(n, j, i), q);
        lp.set_bounds(gamma(i), -c1, c1);
        for k in 0..d {
            lp.set_bounds(grad(n, k, i), -c2, c2);
        }
    }

    let mut taylor = Vec::with_capacity(d + 2);
    for e in graph.edges() {
        let (i, l, w) = (e.i, e.l, e.weight);
        lp.add_abs_row(&[(gamma(i), 1.0), (gamma(l), -1.0)], c2 * w);
        for k in 0..d {
            lp.add_abs_row(&[(grad(n, k, i), 1.0), (grad(n, k, l), -1.0)], c3 * w);
        }
        let (vi, vl) = (points.row(i), points.row(l));
        // γ_i − γ_l − ⟨Γ e_a, v_i − v_l⟩ for a ∈ {i, l}
        for anchor in [i, l] {
            taylor.clear();
            taylor.push((gamma(i), 1.0));
            taylor.push((gamma(l), -1.0));
            for k in 0..d {
                taylor.push((grad(n, k, anchor), -(vi[k] - vl[k])));
            }
            lp.add_abs_row(&taylor, 0.5 * c3 * w * w);
        }
    }

    for b in target.support()[j].finite_endpoints() {
        for i in 0..n {
            let delta = points.row(i)[j] - b;
            lp.add_abs_row(&[(gamma(i), 1.0)], c2 * delta.abs());
            for k in (0..d).filter(|&k| k != j) {
                lp.add_abs_row(&[(grad(n, k, i), 1.0)], c3 * delta.abs());
            }
            lp.add_abs_row(&[(gamma(i), 1.0), (grad(n, j, i), -delta)], 0.5 * c3 * delta * delta);
        }
    }
    Ok(lp)
}
