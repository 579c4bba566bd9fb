//! Geometric t-spanners of sample points under the ℓ1 metric.
//!
//! A t-spanner keeps a path between every pair of points whose total ℓ1
//! length is at most `t` times their direct distance. The discrepancy
//! programs only impose edge constraints along graph edges, so a sparse
//! spanner trades a bounded loss of tightness for far fewer LP rows than the
//! complete graph.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::samples::PointSet;

const STRETCH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub l: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpannerGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    stretch: f64,
}

impl SpannerGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn stretch(&self) -> f64 {
        self.stretch
    }

    fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.i].push((e.l, e.weight));
            adj[e.l].push((e.i, e.weight));
        }
        adj
    }

    /// Writes `i,l,weight` rows.
    pub fn write_edge_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "i,l,weight")?;
        for e in &self.edges {
            writeln!(out, "{},{},{:?}", e.i, e.l, e.weight)?;
        }
        Ok(())
    }
}

/// Min-heap entry ordered by distance.
#[derive(Clone, Copy)]
struct Frontier {
    dist: f64,
    vertex: usize,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Dijkstra from `source`, abandoning paths longer than `limit`.
/// Returns the settled `(vertex, distance)` pairs.
fn bounded_dijkstra(
    adj: &[Vec<(usize, f64)>],
    source: usize,
    limit: f64,
    dist: &mut [f64],
    touched: &mut Vec<usize>,
) -> Vec<(usize, f64)> {
    let mut heap = BinaryHeap::new();
    let mut settled = Vec::new();
    dist[source] = 0.0;
    touched.push(source);
    heap.push(Frontier {
        dist: 0.0,
        vertex: source,
    });
    while let Some(Frontier { dist: d, vertex: u }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        settled.push((u, d));
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd <= limit && nd < dist[v] {
                if dist[v] == f64::INFINITY {
                    touched.push(v);
                }
                dist[v] = nd;
                heap.push(Frontier { dist: nd, vertex: v });
            }
        }
    }
    for &v in touched.iter() {
        dist[v] = f64::INFINITY;
    }
    touched.clear();
    settled
}

fn check_stretch(t: f64) -> Result<()> {
    if t.is_nan() || t < 1.0 {
        return Err(Error::Parameter(format!("stretch factor {t} is below 1")));
    }
    Ok(())
}

/// Greedy t-spanner: visit pairs by increasing ℓ1 distance (ties by `(i, l)`)
/// and add an edge exactly when the current graph distance exceeds `t` times
/// the pair's distance.
///
/// Known upper bounds on graph distances are cached in an `n × n` table so
/// most pairs are settled without a search; memory is `8n²` bytes.
pub fn greedy_spanner(points: &PointSet, t: f64) -> Result<SpannerGraph> {
    check_stretch(t)?;
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut pairs: Vec<(f64, u32, u32)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for l in i + 1..n {
            pairs.push((points.l1_distance(i, l), i as u32, l as u32));
        }
    }
    pairs.sort_unstable_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut bound = vec![f64::INFINITY; n * n];
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    let mut dist = vec![f64::INFINITY; n];
    let mut touched = Vec::new();
    for (w, i, l) in pairs {
        let (i, l) = (i as usize, l as usize);
        let limit = t * w;
        if bound[i * n + l] <= limit {
            continue;
        }
        let settled = bounded_dijkstra(&adj, i, limit, &mut dist, &mut touched);
        let mut reached = false;
        for (v, d) in settled {
            reached |= v == l;
            if d < bound[i * n + v] {
                bound[i * n + v] = d;
                bound[v * n + i] = d;
            }
        }
        if !reached {
            adj[i].push((l, w));
            adj[l].push((i, w));
            bound[i * n + l] = w;
            bound[l * n + i] = w;
            edges.push(Edge { i, l, weight: w });
        }
    }
    Ok(SpannerGraph {
        vertex_count: n,
        edges,
        stretch: t,
    })
}

/// Every pair of distinct points joined by an edge; stretch 1.
pub fn complete_graph(points: &PointSet) -> SpannerGraph {
    let n = points.len();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for l in i + 1..n {
            edges.push(Edge {
                i,
                l,
                weight: points.l1_distance(i, l),
            });
        }
    }
    SpannerGraph {
        vertex_count: n,
        edges,
        stretch: 1.0,
    }
}

/// Builds a graph from an explicit edge list; weights are recomputed as ℓ1
/// distances and endpoints normalized to `i < l`.
pub fn graph_from_edges(points: &PointSet, pairs: &[(usize, usize)], stretch: f64) -> Result<SpannerGraph> {
    let n = points.len();
    let mut edges = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        if a == b || a >= n || b >= n {
            return Err(Error::Parameter(format!("invalid edge ({a}, {b})")));
        }
        let (i, l) = (a.min(b), a.max(b));
        edges.push(Edge {
            i,
            l,
            weight: points.l1_distance(i, l),
        });
    }
    edges.sort_by_key(|e| (e.i, e.l));
    edges.dedup_by_key(|e| (e.i, e.l));
    Ok(SpannerGraph {
        vertex_count: n,
        edges,
        stretch,
    })
}

/// True iff every pair's shortest-path distance in `graph` is within
/// `t · ‖x_i − x_l‖₁` (up to a relative slack of 1e-9).
pub fn verify_stretch(points: &PointSet, graph: &SpannerGraph, t: f64) -> Result<bool> {
    check_stretch(t)?;
    let n = points.len();
    if graph.vertex_count != n {
        return Err(Error::Dimension {
            expected: n,
            actual: graph.vertex_count,
        });
    }
    let adj = graph.adjacency();
    let mut dist = vec![f64::INFINITY; n];
    let mut touched = Vec::new();
    let mut all = vec![f64::INFINITY; n];
    for i in 0..n {
        all.fill(f64::INFINITY);
        for (v, d) in bounded_dijkstra(&adj, i, f64::INFINITY, &mut dist, &mut touched) {
            all[v] = d;
        }
        for (l, &d) in all.iter().enumerate().skip(i + 1) {
            if d > t * points.l1_distance(i, l) * (1.0 + STRETCH_SLACK) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(dim: usize, coords: &[f64]) -> PointSet {
        PointSet::new(dim, coords.to_vec()).unwrap()
    }

    fn edge_pairs(g: &SpannerGraph) -> Vec<(usize, usize)> {
        g.edges().iter().map(|e| (e.i, e.l)).collect()
    }

    #[test]
    fn two_points_one_edge() {
        let g = greedy_spanner(&pts(2, &[0.0, 0.0, 1.0, 2.0]), 2.0).unwrap();
        assert_eq!(edge_pairs(&g), vec![(0, 1)]);
        assert_eq!(g.edges()[0].weight, 3.0);
    }

    #[test]
    fn collinear_points_skip_long_pair() {
        let g = greedy_spanner(&pts(1, &[0.0, 1.0, 2.0]), 2.0).unwrap();
        assert_eq!(edge_pairs(&g), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn stretch_below_one_is_rejected() {
        let p = pts(1, &[0.0, 1.0]);
        assert!(matches!(greedy_spanner(&p, 0.5), Err(Error::Parameter(_))));
        let g = complete_graph(&p);
        assert!(matches!(verify_stretch(&p, &g, 0.99), Err(Error::Parameter(_))));
    }

    #[test]
    fn star_graph_has_stretch_two() {
        let p = pts(2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let g = graph_from_edges(&p, &[(0, 1), (0, 2)], 2.0).unwrap();
        assert!(verify_stretch(&p, &g, 2.0).unwrap());
        // the detour (1,0) → (0,0) → (0,1) has the same ℓ1 length as the direct hop
        assert!(verify_stretch(&p, &g, 1.0).unwrap());
    }

    #[test]
    fn path_graphs_by_hand() {
        let p = pts(1, &[0.0, 1.0, 10.0]);
        let g = graph_from_edges(&p, &[(0, 1), (1, 2)], 1.05).unwrap();
        assert!(verify_stretch(&p, &g, 1.05).unwrap());
        let q = pts(1, &[0.0, 9.0, 10.0]);
        let g = graph_from_edges(&q, &[(0, 1), (1, 2)], 1.05).unwrap();
        assert!(verify_stretch(&q, &g, 1.05).unwrap());
        // a missing bridge breaks every stretch bound
        let g = graph_from_edges(&q, &[(0, 1)], 1.05).unwrap();
        assert!(!verify_stretch(&q, &g, 100.0).unwrap());
    }

    #[test]
    fn complete_graph_edge_counts() {
        assert_eq!(complete_graph(&pts(1, &[0.0])).edges().len(), 0);
        assert_eq!(complete_graph(&pts(1, &[0.0, 1.0, 3.0])).edges().len(), 3);
        let fifty: Vec<f64> = (0..50).map(f64::from).collect();
        let g = complete_graph(&pts(1, &fifty));
        assert_eq!(g.edges().len(), 1225);
        assert_eq!(g.stretch(), 1.0);
    }

    #[test]
    fn single_point_has_no_edges() {
        let g = greedy_spanner(&pts(3, &[1.0, 2.0, 3.0]), 2.0).unwrap();
        assert!(g.edges().is_empty());
        assert_eq!(g.vertex_count(), 1);
    }

    #[test]
    fn edge_csv_dump() {
        let g = greedy_spanner(&pts(1, &[0.0, 1.0, 2.0]), 2.0).unwrap();
        let mut buf = Vec::new();
        g.write_edge_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "i,l,weight\n0,1,1.0\n1,2,1.0\n");
    }
}
