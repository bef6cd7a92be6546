//! Undirected simple weighted graphs and their classical generators.
//!
//! A [`Graph`] is the shared topology of a classical random walk and a
//! quantum walk. Its generator on the classical side is the weighted
//! Laplacian `L = D - A`, with zero column sums and non-positive
//! off-diagonal entries.

use std::collections::VecDeque;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for symmetry checks on candidate Laplacians.
pub const DEFAULT_TOL_SYM: f64 = 1e-10;
/// Default tolerance for column-sum checks on candidate Laplacians.
pub const DEFAULT_TOL_SUM: f64 = 1e-10;

fn default_weight() -> f64 {
    1.0
}

/// A weighted edge in canonical orientation `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    #[serde(default = "default_weight")]
    pub w: f64,
}

/// Undirected simple weighted graph on vertices `0..n`.
///
/// Edges are stored in canonical orientation (`u < v`), sorted, with
/// strictly positive weights and no self-loops or duplicates.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Graph("vertex count must be positive".into()));
        }
        let mut canonical: Vec<Edge> = Vec::new();
        for (u, v, w) in edges {
            if u == v {
                return Err(Error::Graph(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::Graph(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if w <= 0.0 || !w.is_finite() {
                return Err(Error::Graph(format!(
                    "edge ({u},{v}) must have a strictly positive finite weight, got {w}"
                )));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            canonical.push(Edge { u, v, w });
        }
        canonical.sort_by_key(|e| (e.u, e.v));
        for pair in canonical.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(Error::Graph(format!(
                    "duplicate edge ({},{})",
                    pair[0].u, pair[0].v
                )));
            }
        }
        Ok(Graph { n, edges: canonical })
    }

    /// Builds an unweighted graph (all weights 1).
    pub fn unweighted(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of weights incident to vertex `j`.
    pub fn weighted_degree(&self, j: usize) -> f64 {
        self.edges
            .iter()
            .filter(|e| e.u == j || e.v == j)
            .map(|e| e.w)
            .sum()
    }

    /// Neighbors of `j` in increasing index order.
    pub fn neighbors(&self, j: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.u == j {
                    Some(e.v)
                } else if e.v == j {
                    Some(e.u)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Breadth-first connectivity from vertex 0.
    pub fn is_connected(&self) -> bool {
        if self.n == 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(j) = queue.pop_front() {
            for k in self.neighbors(j) {
                if !seen[k] {
                    seen[k] = true;
                    count += 1;
                    queue.push_back(k);
                }
            }
        }
        count == self.n
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            a[(e.u, e.v)] = e.w;
            a[(e.v, e.u)] = e.w;
        }
        a
    }

    pub fn to_json_string(&self) -> String {
        let file = GraphFile {
            n: self.n,
            edges: self.edges.clone(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(s)?;
        Self::new(file.n, file.edges.into_iter().map(|e| (e.u, e.v, e.w)))
    }

    // Named graphs used throughout the test and demo surface.

    /// Path graph on `n` vertices.
    pub fn path(n: usize) -> Result<Self> {
        Self::unweighted(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)))
    }

    /// Cycle graph on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Graph("cycle needs at least 3 vertices".into()));
        }
        Self::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        Self::unweighted(
            n,
            (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v))),
        )
    }

    /// Star with center 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Result<Self> {
        Self::unweighted(n, (1..n).map(|v| (0, v)))
    }

    /// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
    pub fn petersen() -> Self {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
            pairs.push((i, 5 + i));
        }
        Self::unweighted(10, pairs).expect("petersen construction is valid")
    }
}

/// Outcome of a single Laplacian invariant check.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub pass: bool,
    pub worst_violation: f64,
}

impl CheckResult {
    fn new(worst: f64, tol: f64) -> Self {
        CheckResult {
            pass: worst <= tol,
            worst_violation: worst,
        }
    }
}

/// Per-invariant validation report for a candidate Laplacian matrix.
///
/// `connected` is informational: disconnected generators are accepted,
/// the flag lets callers warn about them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidityReport {
    pub symmetry: CheckResult,
    pub column_sums: CheckResult,
    pub sign_pattern: CheckResult,
    pub diagonal: CheckResult,
    pub connected: bool,
    pub tol_sym: f64,
    pub tol_sum: f64,
}

impl ValidityReport {
    pub fn all_pass(&self) -> bool {
        self.symmetry.pass && self.column_sums.pass && self.sign_pattern.pass && self.diagonal.pass
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |name: &str, c: &CheckResult| {
            format!(
                "  {name}: {} (worst violation {:.3e})",
                if c.pass { "pass" } else { "FAIL" },
                c.worst_violation
            )
        };
        writeln!(f, "{}", line("symmetry", &self.symmetry))?;
        writeln!(f, "{}", line("column sums", &self.column_sums))?;
        writeln!(f, "{}", line("sign pattern", &self.sign_pattern))?;
        writeln!(f, "{}", line("diagonal", &self.diagonal))?;
        write!(f, "  connected: {}", self.connected)
    }
}

/// Real symmetric generator of the classical walk, `L = D - A`.
///
/// Off-diagonal entries are non-positive and every column sums to zero;
/// instances are produced by construction ([`laplacian`],
/// `correspondence_map`) or by validation ([`LaplacianMatrix::try_new`]).
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianMatrix {
    entries: DMatrix<f64>,
}

impl LaplacianMatrix {
    /// Validates an arbitrary matrix against the Laplacian invariants.
    pub fn try_new(entries: DMatrix<f64>, tol_sym: f64, tol_sum: f64) -> Result<Self> {
        let report = validate_laplacian(&entries, tol_sym, tol_sum)?;
        if !report.all_pass() {
            return Err(Error::InvalidLaplacian(Box::new(report)));
        }
        Ok(LaplacianMatrix { entries })
    }

    /// Wraps a matrix whose invariants hold by construction.
    pub(crate) fn from_construction(entries: DMatrix<f64>) -> Self {
        LaplacianMatrix { entries }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Builds the weighted Laplacian `L = D - A` of a graph.
///
/// Off-diagonal entries are `-w(j,k)` where an edge exists, diagonal
/// entries the weighted degree; the output satisfies every invariant
/// exactly.
pub fn laplacian(g: &Graph) -> LaplacianMatrix {
    let n = g.n();
    let mut m = DMatrix::zeros(n, n);
    for e in g.edges() {
        m[(e.u, e.v)] = -e.w;
        m[(e.v, e.u)] = -e.w;
        m[(e.u, e.u)] += e.w;
        m[(e.v, e.v)] += e.w;
    }
    LaplacianMatrix::from_construction(m)
}

/// Checks the Laplacian invariants of an arbitrary square matrix and
/// reports the worst violation of each.
///
/// Fails only on non-square input; invariant violations are reported,
/// not raised.
pub fn validate_laplacian(m: &DMatrix<f64>, tol_sym: f64, tol_sum: f64) -> Result<ValidityReport> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let n = m.nrows();

    let mut sym = 0.0f64;
    let mut sign = 0.0f64;
    let mut diag = 0.0f64;
    for j in 0..n {
        diag = diag.max(-m[(j, j)]);
        for k in 0..n {
            if j != k {
                sym = sym.max((m[(j, k)] - m[(k, j)]).abs());
                sign = sign.max(m[(j, k)]);
            }
        }
    }
    let mut sums = 0.0f64;
    for j in 0..n {
        let s: f64 = (0..n).map(|k| m[(k, j)]).sum();
        sums = sums.max(s.abs());
    }

    // Connectivity of the support pattern, via union of off-diagonal entries.
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(j) = queue.pop_front() {
        for k in 0..n {
            if k != j && !seen[k] && m[(k, j)] != 0.0 {
                seen[k] = true;
                count += 1;
                queue.push_back(k);
            }
        }
    }

    Ok(ValidityReport {
        symmetry: CheckResult::new(sym, tol_sym),
        column_sums: CheckResult::new(sums, tol_sum),
        sign_pattern: CheckResult::new(sign.max(0.0), tol_sym),
        diagonal: CheckResult::new(diag.max(0.0), tol_sym),
        connected: count == n,
        tol_sym,
        tol_sum,
    })
}

/// Recovers the graph whose Laplacian is `m`: edges exactly where
/// off-diagonal entries are nonzero, with weights `w = -m[j][k]`.
///
/// The input is validated first; failures carry the full report.
pub fn graph_from_laplacian(m: &DMatrix<f64>, tol_sym: f64, tol_sum: f64) -> Result<Graph> {
    let report = validate_laplacian(m, tol_sym, tol_sum)?;
    if !report.all_pass() {
        return Err(Error::InvalidLaplacian(Box::new(report)));
    }
    let n = m.nrows();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let w = -m[(u, v)];
            if w != 0.0 {
                edges.push((u, v, w));
            }
        }
    }
    Graph::new(n, edges)
}

impl LaplacianMatrix {
    /// The graph this Laplacian generates; exact inverse of [`laplacian`].
    pub fn to_graph(&self) -> Graph {
        graph_from_laplacian(&self.entries, DEFAULT_TOL_SYM, DEFAULT_TOL_SUM)
            .expect("validated Laplacian always yields a graph")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2_weighted(w: f64) -> Graph {
        Graph::new(2, [(0, 1, w)]).unwrap()
    }

    #[test]
    fn laplacian_of_p2() {
        let l = laplacian(&p2_weighted(1.0));
        let expect = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        assert_eq!(l.matrix(), &expect);
    }

    #[test]
    fn laplacian_of_triangle() {
        let l = laplacian(&Graph::complete(3).unwrap());
        for j in 0..3 {
            for k in 0..3 {
                let expect = if j == k { 2.0 } else { -1.0 };
                assert_eq!(l.matrix()[(j, k)], expect);
            }
        }
    }

    #[test]
    fn laplacian_is_linear_in_weight() {
        let l = laplacian(&p2_weighted(4.0));
        let expect = DMatrix::from_row_slice(2, 2, &[4.0, -4.0, -4.0, 4.0]);
        assert_eq!(l.matrix(), &expect);
    }

    #[test]
    fn validate_accepts_valid() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let report = validate_laplacian(&m, 1e-10, 1e-10).unwrap();
        assert!(report.all_pass());
        assert!(report.connected);
        assert_eq!(report.symmetry.worst_violation, 0.0);
    }

    #[test]
    fn validate_rejects_positive_offdiagonal() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let report = validate_laplacian(&m, 1e-10, 1e-10).unwrap();
        assert!(!report.sign_pattern.pass);
        assert_eq!(report.sign_pattern.worst_violation, 1.0);
    }

    #[test]
    fn validate_rejects_bad_column_sum() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 2.0]);
        let report = validate_laplacian(&m, 1e-10, 1e-10).unwrap();
        assert!(!report.column_sums.pass);
        assert!((report.column_sums.worst_violation - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validate_flags_disconnected() {
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        let report = validate_laplacian(laplacian(&g).matrix(), 1e-10, 1e-10).unwrap();
        assert!(report.all_pass());
        assert!(!report.connected);
    }

    #[test]
    fn validate_rejects_non_square() {
        let m = DMatrix::from_row_slice(2, 3, &[0.0; 6]);
        assert!(matches!(
            validate_laplacian(&m, 1e-10, 1e-10),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn graph_from_laplacian_round_trips() {
        for g in [
            p2_weighted(1.0),
            p2_weighted(4.0),
            Graph::complete(3).unwrap(),
            Graph::petersen(),
            Graph::new(4, [(0, 1, 0.5), (1, 2, 2.0), (2, 3, 3.25), (0, 3, 1.0)]).unwrap(),
        ] {
            let l = laplacian(&g);
            assert_eq!(l.to_graph(), g);
        }
    }

    #[test]
    fn graph_from_laplacian_rejects_invalid() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        match graph_from_laplacian(&m, 1e-10, 1e-10) {
            Err(Error::InvalidLaplacian(report)) => assert!(!report.sign_pattern.pass),
            other => panic!("expected InvalidLaplacian, got {other:?}"),
        }
    }

    #[test]
    fn graph_rejects_self_loops_and_duplicates() {
        assert!(Graph::unweighted(3, [(0, 0)]).is_err());
        assert!(Graph::unweighted(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::unweighted(3, [(0, 5)]).is_err());
        assert!(Graph::new(3, [(0, 1, 0.0)]).is_err());
        assert!(Graph::new(3, [(0, 1, -1.0)]).is_err());
    }

    #[test]
    fn graph_json_round_trip_and_default_weight() {
        let g = Graph::new(3, [(0, 1, 2.5), (1, 2, 1.0)]).unwrap();
        let back = Graph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(back, g);

        let parsed = Graph::from_json_str(
            r#"{"n": 2, "edges": [{"u": 0, "v": 1}]}"#,
        )
        .unwrap();
        assert_eq!(parsed.edges()[0].w, 1.0);
    }

    #[test]
    fn named_graphs_have_expected_counts() {
        assert_eq!(Graph::path(5).unwrap().edge_count(), 4);
        assert_eq!(Graph::cycle(6).unwrap().edge_count(), 6);
        assert_eq!(Graph::complete(5).unwrap().edge_count(), 10);
        assert_eq!(Graph::star(7).unwrap().edge_count(), 6);
        let p = Graph::petersen();
        assert_eq!((p.n(), p.edge_count()), (10, 15));
        assert!(p.is_connected());
        assert!((0..10).all(|j| p.weighted_degree(j) == 3.0));
    }
}
