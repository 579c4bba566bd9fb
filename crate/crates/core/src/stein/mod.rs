//! Graph Stein discrepancies.
//!
//! For the Langevin Stein operator `(T g)(x) = ⟨g(x), ∇log p(x)⟩ + ⟨∇, g(x)⟩`
//! and the ℓ1 norm, the graph Stein discrepancy of a weighted sample `Q`
//! splits into one linear program per coordinate `j`. Coordinate `j`
//! optimizes the function values `γ_j ∈ R^|V|` and gradient values
//! `Γ_j ∈ R^{d×|V|}` of `g_j` at the graph vertices, subject to magnitude
//! bounds at each vertex, Lipschitz and Taylor compatibility rows along each
//! graph edge, and boundary compatibility rows for every finite endpoint of
//! the support in coordinate `j`. The discrepancy is the sum of the `d`
//! optima.
//!
//! Two drivers are provided:
//!
//! - [`spanner_discrepancy`] builds a greedy t-spanner over the sample
//!   points and solves the coordinate programs in parallel.
//! - [`univariate_complete_discrepancy`] handles `d = 1` exactly: sorting the
//!   points together with the finite support endpoints and constraining only
//!   consecutive neighbours is equivalent to the complete graph.

mod assemble;
mod test_function;
mod univariate;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

pub use assemble::build_coordinate_lp;
pub use test_function::{recover_test_function, TestFunctionPoint};
pub use univariate::{build_univariate_lp, univariate_complete_discrepancy};

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus};
use crate::samples::{PointSet, WeightedSample};
use crate::spanner::{complete_graph, greedy_spanner, SpannerGraph};
use crate::targets::Target;

/// Bounds `(c1, c2, c3)` on `|g|`, `|∇g|`, and the Lipschitz constant of `∇g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteinFactors {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for SteinFactors {
    fn default() -> Self {
        SteinFactors::UNIT
    }
}

impl SteinFactors {
    pub const UNIT: SteinFactors = SteinFactors {
        c1: 1.0,
        c2: 1.0,
        c3: 1.0,
    };
    /// Factors under which the discrepancy upper bounds Wasserstein for Unif(0, 1).
    pub const UNIFORM01_NONUNIFORM: SteinFactors = SteinFactors {
        c1: 0.5,
        c2: 0.5,
        c3: 1.0,
    };
    /// Factors under which the discrepancy upper bounds Wasserstein for N(0, 1).
    pub const GAUSSIAN_NONUNIFORM: SteinFactors = SteinFactors {
        c1: 1.0,
        c2: 4.0,
        c3: 2.0,
    };

    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let f = SteinFactors { c1, c2, c3 };
        if [c1, c2, c3].iter().all(|c| c.is_finite() && *c > 0.0) {
            Ok(f)
        } else {
            Err(Error::Parameter(format!(
                "Stein factors must be positive and finite, got ({c1}, {c2}, {c3})"
            )))
        }
    }

    /// Accepts `"c1,c2,c3"` or a preset name.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "unit" => return Ok(SteinFactors::UNIT),
            "uniform01-nonuniform" => return Ok(SteinFactors::UNIFORM01_NONUNIFORM),
            "gaussian-nonuniform" => return Ok(SteinFactors::GAUSSIAN_NONUNIFORM),
            _ => {}
        }
        let parts: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Input(format!("cannot parse Stein factors `{text}`")))?;
        match parts[..] {
            [c1, c2, c3] => SteinFactors::new(c1, c2, c3),
            _ => Err(Error::Input(format!("expected three Stein factors, got `{text}`"))),
        }
    }

    pub fn scaled(self, lambda: f64) -> Result<Self> {
        SteinFactors::new(self.c1 * lambda, self.c2 * lambda, self.c3 * lambda)
    }

    pub fn min(&self) -> f64 {
        self.c1.min(self.c2).min(self.c3)
    }

    pub fn max(&self) -> f64 {
        self.c1.max(self.c2).max(self.c3)
    }
}

/// Optimal function and gradient values of `g_j` at every graph vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// `γ_j`, one value per vertex.
    pub gamma: Vec<f64>,
    /// `Γ_j` stored gradient-component-major: `grad[k * |V| + i] = ∂_k g_j(v_i)`.
    pub grad: Vec<f64>,
}

impl Certificate {
    fn from_primal(primal: &[f64], vertices: usize) -> Self {
        Certificate {
            gamma: primal[..vertices].to_vec(),
            grad: primal[vertices..].to_vec(),
        }
    }

    pub fn zeros(vertices: usize, dim: usize) -> Self {
        Certificate {
            gamma: vec![0.0; vertices],
            grad: vec![0.0; vertices * dim],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.gamma.len()
    }

    pub fn grad(&self, k: usize, i: usize) -> f64 {
        self.grad[k * self.gamma.len() + i]
    }

    /// The LP variable vector this certificate corresponds to.
    pub fn as_primal(&self) -> Vec<f64> {
        let mut x = self.gamma.clone();
        x.extend_from_slice(&self.grad);
        x
    }
}

/// Which program family produced a result; needed to rebuild its LPs.
#[derive(Debug, Clone, PartialEq)]
pub enum Formulation {
    Graph(SpannerGraph),
    Univariate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyResult {
    pub total: f64,
    pub per_coordinate: Vec<f64>,
    pub certificates: Vec<Certificate>,
    /// Program vertices; for the univariate program these include the
    /// finite support endpoints.
    pub vertices: PointSet,
    /// `vertex_of_sample[i]` is the vertex holding sample point `i`.
    pub vertex_of_sample: Vec<usize>,
    pub factors: SteinFactors,
    pub formulation: Formulation,
}

impl DiscrepancyResult {
    pub fn stretch(&self) -> Option<f64> {
        match &self.formulation {
            Formulation::Graph(g) => Some(g.stretch()),
            Formulation::Univariate => None,
        }
    }

    pub fn edge_count(&self) -> Option<usize> {
        match &self.formulation {
            Formulation::Graph(g) => Some(g.edges().len()),
            Formulation::Univariate => None,
        }
    }

    /// Rebuilds the coordinate-`j` program this result was solved from.
    pub fn rebuild_lp(&self, sample: &WeightedSample, target: &dyn Target, j: usize) -> Result<LinearProgram> {
        match &self.formulation {
            Formulation::Graph(g) => build_coordinate_lp(sample, target, g, j, self.factors),
            Formulation::Univariate => build_univariate_lp(sample, target, self.factors).map(|(lp, _, _)| lp),
        }
    }

    /// Largest row or bound violation of any certificate in its own program.
    pub fn max_certificate_violation(&self, sample: &WeightedSample, target: &dyn Target) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (j, cert) in self.certificates.iter().enumerate() {
            let lp = self.rebuild_lp(sample, target, j)?;
            worst = worst.max(lp.max_violation(&cert.as_primal()));
        }
        Ok(worst)
    }

    /// Serializable summary for result files.
    pub fn summary(&self, n: usize, certificate_path: Option<String>) -> DiscrepancySummary {
        DiscrepancySummary {
            total: self.total,
            per_coordinate: self.per_coordinate.clone(),
            n,
            t: self.stretch(),
            factors: self.factors,
            edges: self.edge_count(),
            certificate_path,
        }
    }

    /// Writes `coordinate,vertex,x1..xd,gamma,Gamma1..Gammad` rows.
    pub fn write_certificates_csv(&self, mut out: impl Write) -> Result<()> {
        let d = self.vertices.dim();
        let gd = self.certificates.first().map_or(0, |c| c.grad.len() / c.gamma.len().max(1));
        let xs: Vec<String> = (1..=d).map(|k| format!("x{k}")).collect();
        let gs: Vec<String> = (1..=gd).map(|k| format!("Gamma{k}")).collect();
        writeln!(out, "coordinate,vertex,{},gamma,{}", xs.join(","), gs.join(","))?;
        for (j, cert) in self.certificates.iter().enumerate() {
            for i in 0..cert.vertex_count() {
                write!(out, "{},{}", j + 1, i)?;
                for v in self.vertices.row(i) {
                    write!(out, ",{v:?}")?;
                }
                write!(out, ",{:?}", cert.gamma[i] + 0.0)?;
                for k in 0..gd {
                    write!(out, ",{:?}", cert.grad(k, i) + 0.0)?;
                }
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancySummary {
    pub total: f64,
    pub per_coordinate: Vec<f64>,
    pub n: usize,
    pub t: Option<f64>,
    pub factors: SteinFactors,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_path: Option<String>,
}

/// Scores `∇ log p(x_i)` for every sample point, row-major; rejects points
/// outside the open support.
pub(crate) fn sample_scores(sample: &WeightedSample, target: &dyn Target) -> Result<Vec<f64>> {
    if sample.dim() != target.dim() {
        return Err(Error::Dimension {
            expected: target.dim(),
            actual: sample.dim(),
        });
    }
    let mut scores = Vec::with_capacity(sample.len() * sample.dim());
    for (i, x) in sample.points().rows().enumerate() {
        let g = target.grad_log_density(x).map_err(|e| match e {
            Error::Domain(m) => Error::Domain(format!("sample point {i}: {m}")),
            other => other,
        })?;
        scores.extend(g);
    }
    Ok(scores)
}

pub(crate) fn solve_coordinate(lp: &LinearProgram, vertices: usize, j: usize) -> Result<(f64, Certificate)> {
    let sol = lp::solve(lp).map_err(|e| e.at_coordinate(j))?;
    if sol.status != LpStatus::Optimal {
        // the zero certificate is always feasible and every variable is boxed
        return Err(Error::Solver {
            iterations: sol.iterations,
            message: format!("Stein program reported {:?}", sol.status),
        }
        .at_coordinate(j));
    }
    Ok((sol.objective_value, Certificate::from_primal(&sol.primal, vertices)))
}

/// Graph Stein discrepancy of `sample` over an explicit graph on its points.
pub fn graph_discrepancy(
    sample: &WeightedSample,
    target: &dyn Target,
    graph: &SpannerGraph,
    factors: SteinFactors,
) -> Result<DiscrepancyResult> {
    let scores = sample_scores(sample, target)?;
    let n = sample.len();
    let d = sample.dim();
    let solved: Vec<(f64, Certificate)> = (0..d)
        .into_par_iter()
        .map(|j| {
            let lp = assemble::assemble(sample, target, graph, j, factors, &scores)?;
            solve_coordinate(&lp, n, j)
        })
        .collect::<Result<_>>()?;
    let (per_coordinate, certificates): (Vec<f64>, Vec<Certificate>) = solved.into_iter().unzip();
    Ok(DiscrepancyResult {
        total: per_coordinate.iter().sum(),
        per_coordinate,
        certificates,
        vertices: sample.points().clone(),
        vertex_of_sample: (0..n).collect(),
        factors,
        formulation: Formulation::Graph(graph.clone()),
    })
}

/// Multivariate spanner Stein discrepancy: greedy t-spanner of the sample
/// support, then one program per coordinate.
pub fn spanner_discrepancy(
    sample: &WeightedSample,
    target: &dyn Target,
    t: f64,
    factors: SteinFactors,
) -> Result<DiscrepancyResult> {
    let graph = greedy_spanner(sample.points(), t)?;
    graph_discrepancy(sample, target, &graph, factors)
}

/// Complete graph Stein discrepancy in any dimension (quadratically many rows).
pub fn complete_graph_discrepancy(
    sample: &WeightedSample,
    target: &dyn Target,
    factors: SteinFactors,
) -> Result<DiscrepancyResult> {
    graph_discrepancy(sample, target, &complete_graph(sample.points()), factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{StandardGaussian, UnitCube};

    fn one_point(x: f64) -> WeightedSample {
        WeightedSample::from_rows(&[vec![x]], None).unwrap()
    }

    #[test]
    fn factor_parsing() {
        assert_eq!(SteinFactors::parse("1,4,2").unwrap(), SteinFactors::GAUSSIAN_NONUNIFORM);
        assert_eq!(
            SteinFactors::parse("uniform01-nonuniform").unwrap(),
            SteinFactors::UNIFORM01_NONUNIFORM
        );
        assert!(SteinFactors::parse("1,2").is_err());
        assert!(SteinFactors::parse("1,0,2").is_err());
        assert!(SteinFactors::parse("a,b,c").is_err());
    }

    #[test]
    fn gaussian_single_point_at_mode() {
        // objective reduces to max Γ ≤ 1
        let r = spanner_discrepancy(&one_point(0.0), &StandardGaussian::new(1), 2.0, SteinFactors::UNIT).unwrap();
        assert!((r.total - 1.0).abs() < 1e-9);
        assert!((r.certificates[0].grad(0, 0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_single_point_with_boundary_rows() {
        // γ pinned near zero by both boundaries gives |0.5 Γ| ≤ 0.125
        let r = spanner_discrepancy(&one_point(0.5), &UnitCube::new(1), 2.0, SteinFactors::UNIT).unwrap();
        assert!((r.total - 0.25).abs() < 1e-9, "{}", r.total);
    }

    #[test]
    fn homogeneous_scaling() {
        let s = WeightedSample::from_rows(&[vec![-0.3], vec![0.4], vec![1.1]], None).unwrap();
        let p = StandardGaussian::new(1);
        let base = spanner_discrepancy(&s, &p, 2.0, SteinFactors::UNIT).unwrap().total;
        let double = spanner_discrepancy(&s, &p, 2.0, SteinFactors::UNIT.scaled(2.0).unwrap())
            .unwrap()
            .total;
        assert!((double - 2.0 * base).abs() < 1e-7);
    }

    #[test]
    fn boundary_sample_is_a_domain_error() {
        let err = spanner_discrepancy(&one_point(1.0), &UnitCube::new(1), 2.0, SteinFactors::UNIT).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err:?}");
    }

    #[test]
    fn dimension_mismatch() {
        let err = spanner_discrepancy(&one_point(0.0), &StandardGaussian::new(2), 2.0, SteinFactors::UNIT)
            .unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }

    #[test]
    fn certificates_csv_layout() {
        let r = spanner_discrepancy(&one_point(0.0), &StandardGaussian::new(1), 2.0, SteinFactors::UNIT).unwrap();
        let mut buf = Vec::new();
        r.write_certificates_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("coordinate,vertex,x1,gamma,Gamma1"));
        assert!(lines.next().unwrap().starts_with("1,0,0.0,"));
    }
}
