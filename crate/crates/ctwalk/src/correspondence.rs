//! The quantum-to-classical correspondence: the map from a Hermitian
//! walk generator to the unique compatible classical generator, the
//! postulates that single it out, sampling of the full compatible
//! family, gauge fixing on a spanning tree, and parameter counting.
//!
//! The map sends `L_kj = [H^2]_jj d_jk - H_jk H_kj`: off-diagonal
//! entries become squared transition-amplitude moduli (with a sign),
//! the diagonal the local energy fluctuation. Phases and on-site
//! energies drop out, which is exactly why one classical walk
//! corresponds to infinitely many quantum walks.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    graph_from_laplacian, Graph, LaplacianMatrix, DEFAULT_TOL_SUM, DEFAULT_TOL_SYM,
};
use crate::linalg::HermitianMatrix;
use crate::quantum::{gauge_transform, HamiltonianSpec};

/// Maps a Hermitian generator to its classical counterpart:
/// `L_kj = -|H_jk|^2` off the diagonal and
/// `L_jj = sum_{s != j} |H_js|^2` on it.
///
/// The output is symmetric with exactly vanishing column sums and
/// non-positive off-diagonal entries, i.e. always a valid generator of
/// bi-stochastic evolution, whatever the structure of `H`.
pub fn correspondence_map(h: &HermitianMatrix) -> LaplacianMatrix {
    let n = h.dim();
    let m = h.matrix();
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = 0.0;
        for k in 0..n {
            if j != k {
                let w = m[(j, k)].norm_sqr();
                l[(k, j)] = -w;
                diag += w;
            }
        }
        l[(j, j)] = diag;
    }
    LaplacianMatrix::from_construction(l)
}

/// Pass/fail of one postulate with the worst violation observed.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PostulateCheck {
    pub pass: bool,
    pub violation: f64,
}

impl PostulateCheck {
    fn new(violation: f64, tol: f64) -> Self {
        PostulateCheck {
            pass: violation <= tol,
            violation,
        }
    }
}

/// Verification of the five requirements on a candidate `(H, L)` pair.
///
/// `a2` is `None` when `H` does not qualify as the Laplacian of an
/// unweighted graph (real symmetric, off-diagonal entries in {0, -1},
/// diagonal equal to the row degree).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PostulateReport {
    /// Topology preservation: identical off-diagonal zero patterns.
    pub t0: PostulateCheck,
    /// Column sums of the mapped generator vanish.
    pub a1: PostulateCheck,
    /// The map reproduces `L = H` on unweighted Laplacians.
    pub a2: Option<PostulateCheck>,
    /// Off-diagonal rates: `L_jk = -|H_jk|^2`.
    pub p3: PostulateCheck,
    /// Escape rates: `L_jj = sum_{s != j} |H_js|^2`.
    pub p4: PostulateCheck,
    pub tol: f64,
}

impl PostulateReport {
    pub fn all_pass(&self) -> bool {
        self.t0.pass
            && self.a1.pass
            && self.a2.map(|c| c.pass).unwrap_or(true)
            && self.p3.pass
            && self.p4.pass
    }
}

/// Does `H` qualify as the Laplacian matrix of an unweighted graph?
fn is_unweighted_laplacian(h: &HermitianMatrix, tol: f64) -> bool {
    let n = h.dim();
    let m = h.matrix();
    for j in 0..n {
        let mut degree = 0usize;
        for k in 0..n {
            let z = m[(j, k)];
            if z.im.abs() > tol {
                return false;
            }
            if j != k {
                if (z.re + 1.0).abs() <= tol {
                    degree += 1;
                } else if z.re.abs() > tol {
                    return false;
                }
            }
        }
        if (m[(j, j)].re - degree as f64).abs() > tol {
            return false;
        }
    }
    true
}

/// Checks the postulates for a given pair of generators at tolerance
/// `tol` (violations are reported per postulate, not raised).
pub fn verify_postulates(
    h: &HermitianMatrix,
    l: &LaplacianMatrix,
    tol: f64,
) -> Result<PostulateReport> {
    let n = h.dim();
    if l.dim() != n {
        return Err(Error::Dimension(format!(
            "H is {n}x{n} but L is {0}x{0}",
            l.dim()
        )));
    }
    let hm = h.matrix();
    let lm = l.matrix();
    let mapped = correspondence_map(h);

    let mut t0 = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                let h_zero = hm[(j, k)].norm() <= tol;
                let l_zero = lm[(j, k)].abs() <= tol;
                if h_zero != l_zero {
                    t0 = t0.max(hm[(j, k)].norm().max(lm[(j, k)].abs()));
                }
            }
        }
    }

    let mut a1 = 0.0f64;
    for j in 0..n {
        let s: f64 = (0..n).map(|k| mapped.matrix()[(k, j)]).sum();
        a1 = a1.max(s.abs());
    }

    let a2 = if is_unweighted_laplacian(h, tol) {
        let worst = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| (mapped.matrix()[(j, k)] - hm[(j, k)].re).abs())
            .fold(0.0, f64::max);
        Some(PostulateCheck::new(worst, tol))
    } else {
        None
    };

    let mut p3 = 0.0f64;
    let mut p4 = 0.0f64;
    for j in 0..n {
        let mut escape = 0.0;
        for k in 0..n {
            if j != k {
                p3 = p3.max((lm[(j, k)] + hm[(j, k)].norm_sqr()).abs());
                escape += hm[(j, k)].norm_sqr();
            }
        }
        p4 = p4.max((lm[(j, j)] - escape).abs());
    }

    Ok(PostulateReport {
        t0: PostulateCheck::new(t0, tol),
        a1: PostulateCheck::new(a1, tol),
        a2,
        p3: PostulateCheck::new(p3, tol),
        p4: PostulateCheck::new(p4, tol),
        tol,
    })
}

/// Free-parameter count of the Hamiltonian family compatible with an
/// unweighted graph: `N + E - 1` real parameters in total, of which
/// only `E` (the edge phases modulo vertex rotations) affect site
/// transfer probabilities.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ParameterCount {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub total_free: usize,
    pub effective: usize,
}

pub fn count_parameters(g: &Graph) -> ParameterCount {
    ParameterCount {
        n_vertices: g.n(),
        n_edges: g.edge_count(),
        total_free: g.n() + g.edge_count() - 1,
        effective: g.edge_count(),
    }
}

/// Draws `count` Hamiltonians compatible with `l`: edge moduli are
/// forced to `sqrt(-L_jk)`, phases are i.i.d. uniform over `[0, 2pi)`
/// and on-site energies i.i.d. uniform over `onsite_range`.
///
/// Sample `i` depends only on `(seed, i)`, so subsets are reproducible
/// and samples may be generated in parallel.
pub fn sample_compatible_hamiltonians(
    l: &LaplacianMatrix,
    count: usize,
    seed: u64,
    onsite_range: (f64, f64),
) -> Result<Vec<HamiltonianSpec>> {
    if count == 0 {
        return Err(Error::Spec("sample count must be at least 1".into()));
    }
    let (lo, hi) = onsite_range;
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Spec(format!(
            "invalid on-site energy range [{lo}, {hi}]"
        )));
    }
    let graph = graph_from_laplacian(l.matrix(), DEFAULT_TOL_SYM, DEFAULT_TOL_SUM)?;
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let phases: Vec<f64> = (0..graph.edge_count())
            .map(|_| rng.random_range(0.0..TAU))
            .collect();
        let onsite: Vec<f64> = (0..graph.n())
            .map(|_| if lo == hi { lo } else { rng.random_range(lo..hi) })
            .collect();
        samples.push(HamiltonianSpec::new(graph.clone(), phases, onsite, 1.0)?);
    }
    Ok(samples)
}

/// Result of fixing the gauge on a spanning tree.
#[derive(Clone, Debug)]
pub struct GaugeFixed {
    /// Gauge-equivalent Hamiltonian whose spanning-tree phases vanish.
    pub hamiltonian: HermitianMatrix,
    /// Vertex phases `alpha` that were applied.
    pub vertex_phases: Vec<f64>,
    /// False when the graph was disconnected and each component was
    /// fixed separately.
    pub connected: bool,
}

/// Phase picked up hopping `from -> to`, defined by
/// `H[to][from] = -|H[to][from]| e^{i theta}`.
fn hop_phase(h: &HermitianMatrix, from: usize, to: usize) -> f64 {
    (-h.matrix()[(to, from)]).arg()
}

fn check_topology(h: &HermitianMatrix, g: &Graph) -> Result<()> {
    let n = h.dim();
    if g.n() != n {
        return Err(Error::Dimension(format!(
            "Hamiltonian is {n}x{n} but graph has {} vertices",
            g.n()
        )));
    }
    let adj = g.adjacency();
    for j in 0..n {
        for k in 0..n {
            if j != k {
                let has_entry = h.matrix()[(j, k)].norm() > 0.0;
                let has_edge = adj[(j, k)] != 0.0;
                if has_entry != has_edge {
                    return Err(Error::Spec(format!(
                        "Hamiltonian support does not match the graph at ({j},{k})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Deterministic BFS spanning forest from the lowest-index vertex of
/// each component, children visited in index order. Returns parent
/// assignments (`parent[root] = root`).
fn bfs_forest(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if parent[root] != usize::MAX {
            continue;
        }
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(j) = queue.pop_front() {
            for k in g.neighbors(j) {
                if parent[k] == usize::MAX {
                    parent[k] = j;
                    queue.push_back(k);
                }
            }
        }
    }
    parent
}

/// Gauge-fixes `h` so that all phases vanish on the BFS spanning tree
/// rooted at vertex 0 (children in index order). The surviving
/// off-tree phases are the cycle holonomies, the gauge-invariant
/// content; transition probabilities are unchanged.
pub fn gauge_fix(h: &HermitianMatrix, g: &Graph) -> Result<GaugeFixed> {
    check_topology(h, g)?;
    let n = g.n();
    let parent = bfs_forest(g);

    // alpha in BFS order: zero at roots, alpha_child = alpha_parent +
    // theta(parent -> child) cancels each tree edge.
    let mut alpha = vec![0.0f64; n];
    let mut done = vec![false; n];
    for root in 0..n {
        if parent[root] != root || done[root] {
            continue;
        }
        done[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(j) = queue.pop_front() {
            for k in g.neighbors(j) {
                if parent[k] == j && !done[k] {
                    alpha[k] = alpha[j] + hop_phase(h, j, k);
                    done[k] = true;
                    queue.push_back(k);
                }
            }
        }
    }

    Ok(GaugeFixed {
        hamiltonian: gauge_transform(h, &alpha)?,
        vertex_phases: alpha,
        connected: g.is_connected(),
    })
}

/// Holonomy of the fundamental cycle closed by one off-tree edge.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CycleHolonomy {
    pub u: usize,
    pub v: usize,
    /// Directed phase sum around the cycle through `u -> v`, in `[0, 2pi)`.
    pub holonomy: f64,
}

/// The gauge-invariant phase content of `h` on `g`: one holonomy per
/// independent cycle (off-tree edge of the BFS spanning forest).
pub fn cycle_holonomies(h: &HermitianMatrix, g: &Graph) -> Result<Vec<CycleHolonomy>> {
    check_topology(h, g)?;
    let parent = bfs_forest(g);
    let fixed = gauge_fix(h, g)?;
    let mut out = Vec::new();
    for e in g.edges() {
        let is_tree = parent[e.u] == e.v || parent[e.v] == e.u;
        if !is_tree {
            // With tree phases zeroed, the residual phase on the edge is
            // the full directed sum around its fundamental cycle.
            let holonomy = hop_phase(&fixed.hamiltonian, e.u, e.v).rem_euclid(TAU);
            out.push(CycleHolonomy {
                u: e.u,
                v: e.v,
                holonomy,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::laplacian;
    use crate::quantum::{build_hamiltonian, transition_probabilities};
    use num_complex::Complex64;

    fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn map_fixes_laplacians() {
        let l = laplacian(&Graph::path(2).unwrap());
        let h = HermitianMatrix::from_real(l.matrix()).unwrap();
        assert_eq!(correspondence_map(&h).matrix(), l.matrix());
    }

    #[test]
    fn map_ignores_diagonal_and_phases() {
        // H = [[d1, -e^{i phi}], [-e^{-i phi}, d2]] always maps to the P2 Laplacian.
        for (d1, d2, phi) in [(0.0, 0.0, 0.0), (3.0, -1.0, 1.2), (100.0, 0.5, 4.4)] {
            let m = DMatrix::from_row_slice(
                2,
                2,
                &[
                    c(d1, 0.0),
                    -Complex64::from_polar(1.0, phi),
                    -Complex64::from_polar(1.0, -phi),
                    c(d2, 0.0),
                ],
            );
            let h = HermitianMatrix::new(m).unwrap();
            let l = correspondence_map(&h);
            let expect = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
            assert!(max_diff(l.matrix(), &expect) < 1e-15);
        }
    }

    #[test]
    fn map_of_zero_is_zero() {
        let h = HermitianMatrix::new(DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(correspondence_map(&h).matrix(), &DMatrix::zeros(3, 3));
    }

    #[test]
    fn map_output_is_always_a_valid_generator() {
        // Arbitrary Hermitian input, including diagonal entries and no
        // graph structure at all.
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(0.3, -0.7),
                c(-1.1, 0.2),
                c(0.3, 0.7),
                c(-5.0, 0.0),
                c(0.0, 0.9),
                c(-1.1, -0.2),
                c(0.0, -0.9),
                c(0.25, 0.0),
            ],
        );
        let h = HermitianMatrix::new(m).unwrap();
        let l = correspondence_map(&h);
        let report =
            crate::graph::validate_laplacian(l.matrix(), 1e-12, 1e-12).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn postulates_pass_on_laplacian_pair() {
        let l = laplacian(&Graph::path(2).unwrap());
        let h = HermitianMatrix::from_real(l.matrix()).unwrap();
        let report = verify_postulates(&h, &l, 1e-12).unwrap();
        assert!(report.all_pass());
        assert!(report.a2.is_some(), "P2 Laplacian qualifies for A2");
    }

    #[test]
    fn t0_fails_on_extra_entry() {
        let l = laplacian(&Graph::path(3).unwrap());
        // Add an off-pattern entry between 0 and 2.
        let mut m = l.matrix().map(|x| c(x, 0.0));
        m[(0, 2)] = c(0.5, 0.0);
        m[(2, 0)] = c(0.5, 0.0);
        let h = HermitianMatrix::new(m).unwrap();
        let report = verify_postulates(&h, &l, 1e-12).unwrap();
        assert!(!report.t0.pass);
    }

    #[test]
    fn chiral_k3_passes_with_a2_not_applicable() {
        let g = Graph::complete(3).unwrap();
        let spec = HamiltonianSpec::new(
            g,
            vec![std::f64::consts::FRAC_PI_2, 0.0, 0.0],
            vec![2.0, 2.0, 2.0],
            1.0,
        )
        .unwrap();
        let h = build_hamiltonian(&spec);
        let l = correspondence_map(&h);
        let report = verify_postulates(&h, &l, 1e-12).unwrap();
        assert!(report.all_pass());
        assert!(report.a2.is_none(), "complex H cannot qualify for A2");
    }

    /// The alternative rate assignment `L_kj = -|H_jk|^n` with `n != 2`
    /// keeps the topology but breaks the probabilistic postulates on any
    /// weighted graph.
    #[test]
    fn cubic_rate_map_violates_probabilistic_postulates() {
        let g = Graph::new(2, [(0, 1, 4.0)]).unwrap();
        let h = build_hamiltonian(&HamiltonianSpec::laplacian_like(g));
        let n = h.dim();
        let mut alt = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut diag = 0.0;
            for k in 0..n {
                if j != k {
                    let w = h.matrix()[(j, k)].norm().powi(3);
                    alt[(k, j)] = -w;
                    diag += w;
                }
            }
            alt[(j, j)] = diag;
        }
        let alt = LaplacianMatrix::try_new(alt, 1e-12, 1e-12).unwrap();
        let report = verify_postulates(&h, &alt, 1e-12).unwrap();
        assert!(report.t0.pass, "topology survives any power");
        assert!(!report.p3.pass, "cubic rates violate P3");
        assert!(!report.p4.pass, "cubic rates violate P4");
    }

    #[test]
    fn sampled_family_round_trips() {
        let l = laplacian(&Graph::complete(3).unwrap());
        let samples = sample_compatible_hamiltonians(&l, 100, 7, (-1.0, 3.0)).unwrap();
        assert_eq!(samples.len(), 100);
        for spec in &samples {
            let h = build_hamiltonian(spec);
            let mapped = correspondence_map(&h);
            assert!(max_diff(mapped.matrix(), l.matrix()) < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_splittable() {
        let l = laplacian(&Graph::complete(3).unwrap());
        let a = sample_compatible_hamiltonians(&l, 5, 42, (0.0, 1.0)).unwrap();
        let b = sample_compatible_hamiltonians(&l, 5, 42, (0.0, 1.0)).unwrap();
        assert_eq!(a, b);
        // Sample i is independent of the requested count.
        let c = sample_compatible_hamiltonians(&l, 2, 42, (0.0, 1.0)).unwrap();
        assert_eq!(a[0], c[0]);
        assert_eq!(a[1], c[1]);
        let d = sample_compatible_hamiltonians(&l, 5, 43, (0.0, 1.0)).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn sampled_moduli_are_forced_by_weights() {
        let l = laplacian(&Graph::new(2, [(0, 1, 4.0)]).unwrap());
        let spec = &sample_compatible_hamiltonians(&l, 1, 0, (0.0, 1.0)).unwrap()[0];
        let h = build_hamiltonian(spec);
        assert!((h.matrix()[(1, 0)].norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn parameter_counts() {
        let p2 = Graph::path(2).unwrap();
        let c = count_parameters(&p2);
        assert_eq!((c.total_free, c.effective), (2, 1));

        let k3 = Graph::complete(3).unwrap();
        let c = count_parameters(&k3);
        assert_eq!((c.total_free, c.effective), (5, 3));

        // 3x3 open grid: 9 vertices, 12 edges.
        let mut pairs = Vec::new();
        for m in 0..3 {
            for n in 0..3 {
                let j = n + 3 * m;
                if n + 1 < 3 {
                    pairs.push((j, j + 1));
                }
                if m + 1 < 3 {
                    pairs.push((j, j + 3));
                }
            }
        }
        let grid = Graph::unweighted(9, pairs).unwrap();
        let c = count_parameters(&grid);
        assert_eq!((c.n_vertices, c.n_edges), (9, 12));
        assert_eq!((c.total_free, c.effective), (20, 12));
    }

    #[test]
    fn gauge_fix_makes_trees_real() {
        for g in [Graph::path(4).unwrap(), Graph::star(5).unwrap()] {
            let l = laplacian(&g);
            let spec = &sample_compatible_hamiltonians(&l, 1, 11, (0.0, 2.0)).unwrap()[0];
            let h = build_hamiltonian(spec);
            let fixed = gauge_fix(&h, &g).unwrap();
            assert!(fixed.connected);
            let worst_im = fixed
                .hamiltonian
                .matrix()
                .iter()
                .map(|z| z.im.abs())
                .fold(0.0, f64::max);
            assert!(worst_im < 1e-14, "trees have no residual phases");
        }
    }

    #[test]
    fn gauge_fix_concentrates_k3_holonomy() {
        let g = Graph::complete(3).unwrap();
        let phases = vec![0.7, 1.9, 2.4]; // edges (0,1), (0,2), (1,2)
        let spec =
            HamiltonianSpec::new(g.clone(), phases.clone(), vec![2.0; 3], 1.0).unwrap();
        let h = build_hamiltonian(&spec);
        let fixed = gauge_fix(&h, &g).unwrap();
        // BFS tree from 0 has edges (0,1), (0,2); the off-tree edge (1,2)
        // carries the cycle holonomy. Directed around 0 -> 1 -> 2 -> 0:
        // phi_01 + phi_12 - phi_02.
        let expect = (phases[0] + phases[2] - phases[1]).rem_euclid(TAU);
        assert!(hop_phase(&fixed.hamiltonian, 0, 1).abs() < 1e-14);
        assert!(hop_phase(&fixed.hamiltonian, 0, 2).abs() < 1e-14);
        let residual = hop_phase(&fixed.hamiltonian, 1, 2).rem_euclid(TAU);
        assert!((residual - expect).abs() < 1e-12);

        let holonomies = cycle_holonomies(&h, &g).unwrap();
        assert_eq!(holonomies.len(), 1);
        assert!((holonomies[0].holonomy - expect).abs() < 1e-12);
    }

    #[test]
    fn gauge_fix_leaves_real_hamiltonians_unchanged() {
        let g = Graph::complete(3).unwrap();
        let h = build_hamiltonian(&HamiltonianSpec::laplacian_like(g.clone()));
        let fixed = gauge_fix(&h, &g).unwrap();
        assert_eq!(fixed.vertex_phases, vec![0.0; 3]);
        assert_eq!(fixed.hamiltonian.matrix(), h.matrix());
    }

    #[test]
    fn gauge_fix_is_idempotent() {
        let g = Graph::complete(4).unwrap();
        let l = laplacian(&g);
        let spec = &sample_compatible_hamiltonians(&l, 1, 3, (0.0, 1.0)).unwrap()[0];
        let h = build_hamiltonian(spec);
        let once = gauge_fix(&h, &g).unwrap();
        let twice = gauge_fix(&once.hamiltonian, &g).unwrap();
        let worst = (once.hamiltonian.matrix() - twice.hamiltonian.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-14);
    }

    #[test]
    fn gauge_fix_preserves_probabilities_and_map() {
        let g = Graph::complete(3).unwrap();
        let l = laplacian(&g);
        let spec = &sample_compatible_hamiltonians(&l, 1, 9, (0.0, 2.0)).unwrap()[0];
        let h = build_hamiltonian(spec);
        let fixed = gauge_fix(&h, &g).unwrap();
        let a = transition_probabilities(&h, 1.3).unwrap();
        let b = transition_probabilities(&fixed.hamiltonian, 1.3).unwrap();
        assert!(max_diff(a.matrix(), b.matrix()) < 1e-10);
        assert!(
            max_diff(
                correspondence_map(&h).matrix(),
                correspondence_map(&fixed.hamiltonian).matrix()
            ) < 1e-14
        );
    }

    #[test]
    fn gauge_fix_handles_disconnected_graphs_per_component() {
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let spec = HamiltonianSpec::new(
            g.clone(),
            vec![0.8, 1.4],
            vec![1.0, 1.0, 1.0, 1.0],
            1.0,
        )
        .unwrap();
        let h = build_hamiltonian(&spec);
        let fixed = gauge_fix(&h, &g).unwrap();
        assert!(!fixed.connected, "disconnected input is flagged");
        let worst_im = fixed
            .hamiltonian
            .matrix()
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
        assert!(worst_im < 1e-14, "both components fully fixed");
    }

    #[test]
    fn gauge_fix_rejects_mismatched_topology() {
        let g = Graph::complete(3).unwrap();
        let h = build_hamiltonian(&HamiltonianSpec::laplacian_like(Graph::path(3).unwrap()));
        assert!(gauge_fix(&h, &g).is_err());
    }
}
