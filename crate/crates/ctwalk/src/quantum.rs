//! Generalized (chiral) continuous-time quantum walks: Hamiltonians
//! built from per-edge phases and on-site energies, Born-rule transition
//! probabilities, gauge transformations, and the demonstration that
//! Born probabilities never form a semigroup.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{eigh, HermitianMatrix, SpectralDecomposition};

/// A point in the family of quantum walks compatible with a graph:
/// one phase per canonical edge (`u < v`), one real energy per vertex,
/// and a global hop rate.
///
/// The built matrix has `H[v][u] = -hop_scale * sqrt(w_uv) * e^{i phi}`
/// for each canonical edge, its conjugate mirrored, and the on-site
/// energies on the diagonal. With all phases zero and default on-site
/// energies this reproduces the graph Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    graph: Graph,
    phases: Vec<f64>,
    onsite: Vec<f64>,
    hop_scale: f64,
}

#[derive(Serialize, Deserialize)]
struct PhaseEntry {
    u: usize,
    v: usize,
    phi: f64,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianSpecFile {
    graph: serde_json::Value,
    #[serde(default)]
    phases: Vec<PhaseEntry>,
    #[serde(default)]
    onsite: Option<Vec<f64>>,
    #[serde(default)]
    hop_scale: Option<f64>,
}

impl HamiltonianSpec {
    /// `phases` and `onsite` are aligned with the graph's canonical edge
    /// and vertex order. Phases are normalized into `[0, 2pi)`.
    pub fn new(graph: Graph, phases: Vec<f64>, onsite: Vec<f64>, hop_scale: f64) -> Result<Self> {
        if phases.len() != graph.edge_count() {
            return Err(Error::Spec(format!(
                "expected {} edge phases, got {}",
                graph.edge_count(),
                phases.len()
            )));
        }
        if onsite.len() != graph.n() {
            return Err(Error::Spec(format!(
                "expected {} on-site energies, got {}",
                graph.n(),
                onsite.len()
            )));
        }
        if hop_scale <= 0.0 || !hop_scale.is_finite() {
            return Err(Error::Spec(format!(
                "hop scale must be a positive finite real, got {hop_scale}"
            )));
        }
        if phases.iter().chain(onsite.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Spec("phases and energies must be finite".into()));
        }
        let phases = phases.into_iter().map(|p| p.rem_euclid(TAU)).collect();
        Ok(HamiltonianSpec {
            graph,
            phases,
            onsite,
            hop_scale,
        })
    }

    /// Default on-site energies `d_j = sum_{s != j} |H_js|^2`, the
    /// Laplacian diagonal scaled by `hop_scale^2`.
    pub fn with_default_onsite(graph: Graph, phases: Vec<f64>, hop_scale: f64) -> Result<Self> {
        let onsite = (0..graph.n())
            .map(|j| hop_scale * hop_scale * graph.weighted_degree(j))
            .collect();
        Self::new(graph, phases, onsite, hop_scale)
    }

    /// The zero point of the family: all phases zero, default on-site
    /// energies, unit hop rate. Builds exactly the graph Laplacian.
    pub fn laplacian_like(graph: Graph) -> Self {
        let phases = vec![0.0; graph.edge_count()];
        Self::with_default_onsite(graph, phases, 1.0).expect("zero phases always valid")
    }

    /// Shifts the on-site energies by a multiple of the identity so that
    /// all diagonal entries are nonnegative. Transition probabilities
    /// are unaffected.
    pub fn with_nonnegative_onsite(&self) -> Self {
        let min = self.onsite.iter().copied().fold(f64::INFINITY, f64::min);
        if min >= 0.0 {
            return self.clone();
        }
        let onsite = self.onsite.iter().map(|d| d - min).collect();
        HamiltonianSpec {
            graph: self.graph.clone(),
            phases: self.phases.clone(),
            onsite,
            hop_scale: self.hop_scale,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn onsite(&self) -> &[f64] {
        &self.onsite
    }

    pub fn hop_scale(&self) -> f64 {
        self.hop_scale
    }

    pub fn to_json_string(&self) -> String {
        let file = HamiltonianSpecFile {
            graph: serde_json::from_str(&self.graph.to_json_string()).expect("valid graph json"),
            phases: self
                .graph
                .edges()
                .iter()
                .zip(&self.phases)
                .map(|(e, &phi)| PhaseEntry { u: e.u, v: e.v, phi })
                .collect(),
            onsite: Some(self.onsite.clone()),
            hop_scale: Some(self.hop_scale),
        };
        serde_json::to_string_pretty(&file).expect("spec serialization cannot fail")
    }

    /// Parses the spec file format. Phases may be listed in any order
    /// (and in either edge orientation: a reversed edge conjugates the
    /// phase); omitted phases default to zero, omitted on-site energies
    /// to the Laplacian diagonal, omitted hop scale to 1.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: HamiltonianSpecFile = serde_json::from_str(s)?;
        let graph = Graph::from_json_str(&file.graph.to_string())?;
        let mut phases = vec![0.0; graph.edge_count()];
        for entry in &file.phases {
            let (u, v, phi) = if entry.u < entry.v {
                (entry.u, entry.v, entry.phi)
            } else {
                (entry.v, entry.u, -entry.phi)
            };
            let idx = graph
                .edges()
                .iter()
                .position(|e| e.u == u && e.v == v)
                .ok_or_else(|| {
                    Error::Spec(format!("phase given for nonexistent edge ({u},{v})"))
                })?;
            phases[idx] = phi;
        }
        let hop_scale = file.hop_scale.unwrap_or(1.0);
        match file.onsite {
            Some(onsite) => Self::new(graph, phases, onsite, hop_scale),
            None => Self::with_default_onsite(graph, phases, hop_scale),
        }
    }
}

/// Builds the Hermitian matrix of the specified walk.
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> HermitianMatrix {
    let n = spec.graph.n();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (e, &phi) in spec.graph.edges().iter().zip(&spec.phases) {
        let amp = -spec.hop_scale * e.w.sqrt();
        let entry = Complex64::from_polar(1.0, phi) * amp;
        m[(e.v, e.u)] = entry;
        m[(e.u, e.v)] = entry.conj();
    }
    for (j, &d) in spec.onsite.iter().enumerate() {
        m[(j, j)] = Complex64::new(d, 0.0);
    }
    HermitianMatrix::new(m).expect("construction is Hermitian by symmetry")
}

/// Born-rule site-to-site transfer probabilities at a fixed time.
/// Columns sum to 1 (unitarity).
#[derive(Clone, Debug)]
pub struct TransitionProbabilities {
    matrix: DMatrix<f64>,
    t: f64,
}

impl TransitionProbabilities {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn time(&self) -> f64 {
        self.t
    }
}

/// `pi_kj(t) = |[e^{-iHt}]_kj|^2`.
pub fn transition_probabilities(h: &HermitianMatrix, t: f64) -> Result<TransitionProbabilities> {
    transition_probabilities_from(&eigh(h)?, t)
}

/// Same as [`transition_probabilities`] but reusing a decomposition,
/// for evaluation over time grids.
pub fn transition_probabilities_from(
    decomposition: &SpectralDecomposition,
    t: f64,
) -> Result<TransitionProbabilities> {
    let u = decomposition.propagator(t);
    let mut matrix = u.map(|z| z.norm_sqr());
    let n = matrix.nrows();
    for j in 0..n {
        let sum: f64 = (0..n).map(|k| matrix[(k, j)]).sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::Internal(format!(
                "transition probability column {j} sums to {sum}"
            )));
        }
    }
    for x in matrix.iter_mut() {
        *x = x.min(1.0);
    }
    Ok(TransitionProbabilities { matrix, t })
}

/// Conjugates `H` by the diagonal unitary `U_g = diag(e^{i alpha_j})`:
/// entries map as `H_jk -> e^{i(alpha_k - alpha_j)} H_jk`. The diagonal
/// and all off-diagonal moduli are unchanged, so every site-to-site
/// probability is too.
pub fn gauge_transform(h: &HermitianMatrix, alpha: &[f64]) -> Result<HermitianMatrix> {
    let n = h.dim();
    if alpha.len() != n {
        return Err(Error::Spec(format!(
            "expected {n} vertex phases, got {}",
            alpha.len()
        )));
    }
    let mut m = h.matrix().clone();
    for j in 0..n {
        for k in 0..n {
            if j != k {
                m[(j, k)] *= Complex64::from_polar(1.0, alpha[k] - alpha[j]);
            }
        }
    }
    HermitianMatrix::new(m)
}

/// `max_{k != j} |pi_kj(t) - pi_jk(t)|`: by the Hermitian identity
/// `pi_kj(-t) = pi_jk(t)` this equals the probability asymmetry under
/// time reversal. Zero for real Hamiltonians.
pub fn time_reversal_asymmetry(h: &HermitianMatrix, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeTime {
            t,
            reason: "asymmetry is measured at nonnegative times",
        });
    }
    let pi = transition_probabilities(h, t)?;
    let m = pi.matrix();
    let mut worst = 0.0f64;
    for j in 0..m.nrows() {
        for k in j + 1..m.ncols() {
            worst = worst.max((m[(k, j)] - m[(j, k)]).abs());
        }
    }
    Ok(worst)
}

/// Report of the first-order no-go argument: Born probabilities cannot
/// satisfy the classical semigroup law for any nonzero Hamiltonian.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationReport {
    pub t1: f64,
    pub t2: f64,
    /// `‖Pi(t1+t2) - Pi(t1) Pi(t2)‖_max`.
    pub semigroup_violation: f64,
    /// Largest `|dPi_kj/dt|` at `t = 0` by central differences; vanishes
    /// because the Hermitian diagonal cancels the linear term.
    pub max_first_order_derivative: f64,
    /// The full measured derivative matrix, row-major.
    pub first_order_derivative: Vec<Vec<f64>>,
    /// Finite-difference step used for the derivative.
    pub derivative_step: f64,
}

/// Measures how far Born probabilities are from a semigroup, plus the
/// vanishing first-order derivative at `t = 0`.
pub fn born_semigroup_violation(h: &HermitianMatrix, t1: f64, t2: f64) -> Result<ViolationReport> {
    if t1 <= 0.0 || t2 <= 0.0 {
        return Err(Error::Spec(format!(
            "semigroup violation requires positive times, got t1={t1}, t2={t2}"
        )));
    }
    let decomposition = eigh(h)?;
    let pi1 = transition_probabilities_from(&decomposition, t1)?;
    let pi2 = transition_probabilities_from(&decomposition, t2)?;
    let pi12 = transition_probabilities_from(&decomposition, t1 + t2)?;
    let semigroup_violation = (pi12.matrix() - pi1.matrix() * pi2.matrix())
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max);

    let dt = 1e-5;
    let plus = transition_probabilities_from(&decomposition, dt)?;
    let minus = transition_probabilities_from(&decomposition, -dt)?;
    let derivative = (plus.matrix() - minus.matrix()).map(|x| x / (2.0 * dt));
    let max_first_order_derivative = derivative.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let n = derivative.nrows();
    let first_order_derivative = (0..n)
        .map(|k| (0..n).map(|j| derivative[(k, j)]).collect())
        .collect();

    Ok(ViolationReport {
        t1,
        t2,
        semigroup_violation,
        max_first_order_derivative,
        first_order_derivative,
        derivative_step: dt,
    })
}
