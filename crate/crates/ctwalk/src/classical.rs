//! Continuous-time classical random walk: probability evolution and
//! semigroup/bi-stochasticity verification.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::linalg::{kernel_from_decomposition, SymmetricDecomposition, STOCHASTIC_CLIP};

/// Nonnegative vector summing to 1 within 1e-12.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    entries: DVector<f64>,
}

impl ProbabilityVector {
    pub fn new(entries: DVector<f64>) -> Result<Self> {
        for (j, &x) in entries.iter().enumerate() {
            if x < 0.0 {
                return Err(Error::Spec(format!(
                    "probability vector entry {j} is negative: {x:.3e}"
                )));
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Spec(format!(
                "probability vector sums to {sum}, expected 1"
            )));
        }
        Ok(ProbabilityVector { entries })
    }

    /// Wraps an evolved vector, clipping roundoff negatives.
    fn from_evolution(mut entries: DVector<f64>) -> Result<Self> {
        for x in entries.iter_mut() {
            if *x < 0.0 && *x > -STOCHASTIC_CLIP {
                *x = 0.0;
            }
        }
        Self::new(entries)
    }

    /// Unit mass on site `j`.
    pub fn delta(n: usize, j: usize) -> Self {
        let mut entries = DVector::zeros(n);
        entries[j] = 1.0;
        ProbabilityVector { entries }
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector {
            entries: DVector::from_element(n, 1.0 / n as f64),
        }
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.len() == 0
    }
}

/// Bi-stochastic propagator `P(t) = e^{-tL}` at a fixed time.
#[derive(Clone, Debug)]
pub struct StochasticPropagator {
    matrix: DMatrix<f64>,
    t: f64,
}

impl StochasticPropagator {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn time(&self) -> f64 {
        self.t
    }
}

/// Semigroup check result: `‖P(t1)P(t2) - P(t1+t2)‖_max` against a
/// tolerance.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SemigroupReport {
    pub t1: f64,
    pub t2: f64,
    pub deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Classical walk with the eigendecomposition computed once, so that
/// evaluations at many times share it.
pub struct ClassicalWalk {
    decomposition: SymmetricDecomposition,
    n: usize,
}

impl ClassicalWalk {
    pub fn new(l: &LaplacianMatrix) -> Result<Self> {
        Ok(ClassicalWalk {
            decomposition: SymmetricDecomposition::new(l.matrix())?,
            n: l.dim(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn propagator(&self, t: f64) -> Result<StochasticPropagator> {
        if t < 0.0 {
            return Err(Error::NegativeTime {
                t,
                reason: "e^{-tL} is a stochastic matrix only for t >= 0",
            });
        }
        let mut matrix = kernel_from_decomposition(&self.decomposition, t)?;
        // Bi-stochasticity was verified by the kernel; cap roundoff
        // overshoots above 1 so entries lie in [0, 1].
        for x in matrix.iter_mut() {
            if *x > 1.0 {
                if *x <= 1.0 + STOCHASTIC_CLIP {
                    *x = 1.0;
                } else {
                    return Err(Error::Internal(format!(
                        "stochastic propagator entry {x} exceeds 1"
                    )));
                }
            }
        }
        Ok(StochasticPropagator { matrix, t })
    }

    pub fn evolve(&self, p0: &ProbabilityVector, t: f64) -> Result<ProbabilityVector> {
        if p0.len() != self.n {
            return Err(Error::Dimension(format!(
                "probability vector has length {}, generator dimension is {}",
                p0.len(),
                self.n
            )));
        }
        let p = self.propagator(t)?;
        ProbabilityVector::from_evolution(p.matrix() * p0.vector())
    }
}

/// `P(t) = e^{-tL}` with invariants verified.
pub fn propagate(l: &LaplacianMatrix, t: f64) -> Result<StochasticPropagator> {
    ClassicalWalk::new(l)?.propagator(t)
}

/// `p(t) = P(t) p0`.
pub fn evolve_probability(
    l: &LaplacianMatrix,
    p0: &ProbabilityVector,
    t: f64,
) -> Result<ProbabilityVector> {
    ClassicalWalk::new(l)?.evolve(p0, t)
}

/// Verifies `P(t1)P(t2) = P(t1+t2)` to within `tol` in max norm.
pub fn check_semigroup(l: &LaplacianMatrix, t1: f64, t2: f64, tol: f64) -> Result<SemigroupReport> {
    let walk = ClassicalWalk::new(l)?;
    let p1 = walk.propagator(t1)?;
    let p2 = walk.propagator(t2)?;
    let p12 = walk.propagator(t1 + t2)?;
    let deviation = (p1.matrix() * p2.matrix() - p12.matrix())
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    Ok(SemigroupReport {
        t1,
        t2,
        deviation,
        tol,
        pass: deviation <= tol,
    })
}

/// Logarithmic time grid, the default sampling for reports.
pub fn log_time_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    assert!(t_min > 0.0 && t_max > t_min && points >= 2);
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{laplacian, Graph};

    #[test]
    fn p2_off_diagonal_at_ln2_over_2() {
        let l = laplacian(&Graph::path(2).unwrap());
        let p = propagate(&l, 0.5 * 2.0f64.ln()).unwrap();
        assert!((p.matrix()[(1, 0)] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let l = laplacian(&Graph::petersen());
        let p = propagate(&l, 0.0).unwrap();
        assert_eq!(p.matrix(), &DMatrix::identity(10, 10));
    }

    #[test]
    fn k3_matches_spectral_closed_form() {
        // K3 spectrum {0, 3, 3}: diagonal (1 + 2e^{-3t})/3, off (1 - e^{-3t})/3.
        let l = laplacian(&Graph::complete(3).unwrap());
        for &t in &[0.1, 0.5, 2.0] {
            let p = propagate(&l, t).unwrap();
            let diag = (1.0 + 2.0 * (-3.0 * t).exp()) / 3.0;
            let off = (1.0 - (-3.0 * t).exp()) / 3.0;
            for j in 0..3 {
                for k in 0..3 {
                    let expect = if j == k { diag } else { off };
                    assert!((p.matrix()[(j, k)] - expect).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn delta_relaxes_to_uniform() {
        let l = laplacian(&Graph::path(2).unwrap());
        let p = evolve_probability(&l, &ProbabilityVector::delta(2, 0), 60.0).unwrap();
        assert!((p.vector()[0] - 0.5).abs() < 1e-12);
        assert!((p.vector()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uniform_is_stationary() {
        let l = laplacian(&Graph::petersen());
        let u = ProbabilityVector::uniform(10);
        for &t in &[0.0, 0.3, 5.0] {
            let p = evolve_probability(&l, &u, t).unwrap();
            for &x in p.vector().iter() {
                assert!((x - 0.1).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn k3_delta_evolution_from_closed_form() {
        let l = laplacian(&Graph::complete(3).unwrap());
        let t = 0.7;
        let p = evolve_probability(&l, &ProbabilityVector::delta(3, 1), t).unwrap();
        let diag = (1.0 + 2.0 * (-3.0 * t).exp()) / 3.0;
        let off = (1.0 - (-3.0 * t).exp()) / 3.0;
        assert!((p.vector()[0] - off).abs() < 1e-13);
        assert!((p.vector()[1] - diag).abs() < 1e-13);
        assert!((p.vector()[2] - off).abs() < 1e-13);
    }

    #[test]
    fn semigroup_holds() {
        let p2 = laplacian(&Graph::path(2).unwrap());
        let k3 = laplacian(&Graph::complete(3).unwrap());
        for (l, t1, t2) in [(&p2, 0.3, 0.7), (&k3, 1.0, 2.0), (&p2, 0.0, 5.0)] {
            let report = check_semigroup(l, t1, t2, 1e-10).unwrap();
            assert!(report.pass, "deviation {:.3e}", report.deviation);
            assert!(report.deviation < 1e-12);
        }
    }

    #[test]
    fn mass_conserved_on_log_grid() {
        let l = laplacian(&Graph::petersen());
        let walk = ClassicalWalk::new(&l).unwrap();
        let p0 = ProbabilityVector::delta(10, 3);
        for t in log_time_grid(1e-3, 1e2, 50) {
            let p = walk.evolve(&p0, t).unwrap();
            let sum: f64 = p.vector().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_is_monotone_toward_uniform() {
        for g in [Graph::path(4).unwrap(), Graph::cycle(5).unwrap(), Graph::petersen()] {
            let n = g.n();
            let l = laplacian(&g);
            let walk = ClassicalWalk::new(&l).unwrap();
            let p0 = ProbabilityVector::delta(n, 0);
            let uniform = ProbabilityVector::uniform(n);
            let mut last = f64::INFINITY;
            for t in log_time_grid(1e-3, 1e2, 50) {
                let p = walk.evolve(&p0, t).unwrap();
                let dist = (p.vector() - uniform.vector()).norm();
                assert!(dist <= last + 1e-12, "mixing distance increased at t={t}");
                last = dist;
            }
        }
    }

    #[test]
    fn symmetric_generator_gives_symmetric_propagator() {
        let l = laplacian(&Graph::cycle(5).unwrap());
        let p = propagate(&l, 0.9).unwrap();
        let asym = (p.matrix() - p.matrix().transpose())
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max);
        assert!(asym < 1e-10);
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(DVector::from_vec(vec![0.5, 0.5])).is_ok());
        assert!(ProbabilityVector::new(DVector::from_vec(vec![0.6, 0.5])).is_err());
        assert!(ProbabilityVector::new(DVector::from_vec(vec![-0.1, 1.1])).is_err());
    }
}
