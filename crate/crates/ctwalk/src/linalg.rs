//! Dense Hermitian/symmetric spectral decompositions and the matrix
//! exponentials built on them.
//!
//! Every propagator in the crate goes through an eigendecomposition:
//! the generators are Hermitian (quantum) or real symmetric (classical),
//! so `e^{-iHt}` and `e^{-tL}` are exact up to eigensolver accuracy and
//! the dephasing channel gets a closed form in the eigenbasis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;

pub const DEFAULT_TOL_HERM: f64 = 1e-10;
pub const DEFAULT_TOL_UNITARY: f64 = 1e-10;
pub const DEFAULT_TOL_RECON: f64 = 1e-9;
/// Entries of stochastic propagators inside `(-CLIP, 0)` are treated as
/// roundoff and clipped to zero; anything below is a genuine violation.
pub const STOCHASTIC_CLIP: f64 = 1e-12;

/// Square complex matrix equal to its conjugate transpose within a
/// tolerance. Stored in exactly Hermitian form `(M + M†)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(entries, DEFAULT_TOL_HERM)
    }

    pub fn with_tolerance(entries: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let defect = hermitian_defect(&entries);
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        // Hermitize so downstream solvers see an exactly conjugate-symmetric
        // matrix; a no-op (bitwise) for inputs that are already Hermitian.
        let herm = (&entries + entries.adjoint()).scale(0.5);
        Ok(HermitianMatrix { entries: herm })
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest absolute entry.
    pub fn max_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Max-norm of `M - M†`.
pub fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.nrows() {
        for k in j..m.ncols() {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in
/// ascending order, orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SpectralFile {
    eigenvalues: Vec<f64>,
    /// Row-major matrix of `[re, im]` pairs; columns are eigenvectors.
    eigenvectors: Vec<Vec<[f64; 2]>>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest eigenvalue magnitude (the operator norm of the input).
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// `V diag(f(λ)) V†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> DMatrix<Complex64> {
        let n = self.dim();
        let diag = DVector::from_iterator(n, self.eigenvalues.iter().map(|&x| f(x)));
        let mut scaled = self.eigenvectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= diag[k];
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// The unitary `e^{-iHt}`.
    pub fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        if t == 0.0 {
            return DMatrix::identity(self.dim(), self.dim());
        }
        self.apply_function(|x| Complex64::from_polar(1.0, -x * t))
    }

    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        self.apply_function(|x| Complex64::new(x, 0.0))
    }

    fn verify(&self, original: &DMatrix<Complex64>) -> Result<()> {
        let n = self.dim();
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let unitary_defect = (gram - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if unitary_defect > DEFAULT_TOL_UNITARY {
            return Err(Error::Internal(format!(
                "eigenvector unitarity defect {unitary_defect:.3e}"
            )));
        }
        let scale = original.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let recon_defect = (self.reconstruct() - original)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if recon_defect > DEFAULT_TOL_RECON * scale {
            return Err(Error::Internal(format!(
                "eigendecomposition reconstruction defect {recon_defect:.3e}"
            )));
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        let n = self.dim();
        let file = SpectralFile {
            eigenvalues: self.eigenvalues.iter().copied().collect(),
            eigenvectors: (0..n)
                .map(|r| (0..n).map(|c| [self.eigenvectors[(r, c)].re, self.eigenvectors[(r, c)].im]).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("spectral serialization cannot fail")
    }
}

/// Rotates each column so its largest-modulus component (first such, on
/// ties) is real and nonnegative, then orders equal eigenvalues by the
/// lexicographic key of the normalized columns. Output is reproducible
/// across runs.
fn canonicalize(eigenvalues: &mut DVector<f64>, eigenvectors: &mut DMatrix<Complex64>) {
    let n = eigenvalues.len();
    for mut col in eigenvectors.column_iter_mut() {
        let mut pivot = 0;
        let mut best = -1.0f64;
        for (i, z) in col.iter().enumerate() {
            let m = z.norm();
            if m > best + 1e-14 {
                best = m;
                pivot = i;
            }
        }
        let z = col[pivot];
        if z.norm() > 0.0 {
            let phase = z / z.norm();
            for entry in col.iter_mut() {
                *entry /= phase;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigenvalues[a]
            .total_cmp(&eigenvalues[b])
            .then_with(|| lex_cmp(&eigenvectors.column(a).into_owned(), &eigenvectors.column(b).into_owned()))
    });
    let vals = DVector::from_iterator(n, order.iter().map(|&i| eigenvalues[i]));
    let vecs = DMatrix::from_columns(&order.iter().map(|&i| eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    *eigenvalues = vals;
    *eigenvectors = vecs;
}

fn lex_cmp(a: &DVector<Complex64>, b: &DVector<Complex64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let c = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    std::cmp::Ordering::Equal
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come out ascending; the decomposition is checked for
/// unitarity and reconstruction before being returned.
pub fn eigh(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let se = h.matrix().clone().symmetric_eigen();
    let mut eigenvalues = se.eigenvalues;
    let mut eigenvectors = se.eigenvectors;
    canonicalize(&mut eigenvalues, &mut eigenvectors);
    let decomposition = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    };
    decomposition.verify(h.matrix())?;
    Ok(decomposition)
}

/// Eigenvalues only, sorted ascending. Cheaper than [`eigh`] when the
/// eigenvectors are not needed (spectrum sweeps).
pub fn eigenvalues_only(h: &HermitianMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = h.matrix().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigendecomposition of a real symmetric matrix (the classical path).
#[derive(Clone, Debug)]
pub struct SymmetricDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SymmetricDecomposition {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let se = m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let eigenvalues = DVector::from_iterator(order.len(), order.iter().map(|&i| se.eigenvalues[i]));
        let eigenvectors = DMatrix::from_columns(
            &order.iter().map(|&i| se.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
        );
        Ok(SymmetricDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `V diag(e^{-tλ}) Vᵀ`.
    pub fn heat_kernel(&self, t: f64) -> DMatrix<f64> {
        let n = self.eigenvalues.len();
        if t == 0.0 {
            return DMatrix::identity(n, n);
        }
        let mut scaled = self.eigenvectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= (-t * self.eigenvalues[k]).exp();
        }
        scaled * self.eigenvectors.transpose()
    }
}

/// The CTQW propagator `e^{-iHt}`, computed spectrally.
///
/// `t` may be negative (time reversal). At `t = 0` the identity is
/// returned exactly.
pub fn unitary_propagator(h: &HermitianMatrix, t: f64) -> Result<DMatrix<Complex64>> {
    if t == 0.0 {
        return Ok(DMatrix::identity(h.dim(), h.dim()));
    }
    let u = eigh(h)?.propagator(t);
    let defect = unitarity_defect(&u);
    if defect > DEFAULT_TOL_UNITARY {
        return Err(Error::Internal(format!(
            "propagator unitarity defect {defect:.3e}"
        )));
    }
    Ok(u)
}

/// Max-norm of `U†U - I`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// The classical propagator `e^{-tL}` for `t >= 0`.
///
/// Entries in `(-1e-12, 0)` are clipped to zero as roundoff; anything
/// below that signals an invalid generator and is an error. Row and
/// column sums are verified to be 1 within 1e-10.
pub fn stochastic_propagator_kernel(l: &LaplacianMatrix, t: f64) -> Result<DMatrix<f64>> {
    if t < 0.0 {
        return Err(Error::NegativeTime {
            t,
            reason: "e^{-tL} is a stochastic matrix only for t >= 0",
        });
    }
    let decomposition = SymmetricDecomposition::new(l.matrix())?;
    kernel_from_decomposition(&decomposition, t)
}

pub(crate) fn kernel_from_decomposition(
    decomposition: &SymmetricDecomposition,
    t: f64,
) -> Result<DMatrix<f64>> {
    let mut k = decomposition.heat_kernel(t);
    for j in 0..k.nrows() {
        for i in 0..k.ncols() {
            let x = k[(i, j)];
            if x < 0.0 {
                if x > -STOCHASTIC_CLIP {
                    k[(i, j)] = 0.0;
                } else {
                    return Err(Error::Positivity {
                        value: x,
                        row: i,
                        col: j,
                    });
                }
            }
        }
    }
    let n = k.nrows();
    for j in 0..n {
        let col: f64 = (0..n).map(|i| k[(i, j)]).sum();
        let row: f64 = (0..n).map(|i| k[(j, i)]).sum();
        if (col - 1.0).abs() > 1e-10 || (row - 1.0).abs() > 1e-10 {
            return Err(Error::Internal(format!(
                "propagator is not bi-stochastic: row/column sums deviate by {:.3e}",
                (col - 1.0).abs().max((row - 1.0).abs())
            )));
        }
    }
    Ok(k)
}

/// Hermitian, unit-trace, positive matrix: the state of decoherent
/// evolution.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace (1e-12) and numerical
    /// positivity (eigenvalues >= -1e-10).
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let h = HermitianMatrix::new(entries)?;
        let trace_defect = (h.matrix().trace() - Complex64::new(1.0, 0.0)).norm();
        if trace_defect > 1e-12 {
            return Err(Error::Spec(format!(
                "density matrix trace deviates from 1 by {trace_defect:.3e}"
            )));
        }
        let min_eig = eigenvalues_only(&h).first().copied().unwrap_or(0.0);
        if min_eig < -1e-10 {
            return Err(Error::Spec(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(DensityMatrix {
            entries: h.matrix().clone(),
        })
    }

    /// `|j><j|` on `n` sites.
    pub fn pure_site(n: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(j, j)] = Complex64::new(1.0, 0.0);
        DensityMatrix { entries: m }
    }

    /// Projector onto a normalized pure state.
    pub fn from_pure(state: &DVector<Complex64>) -> Result<Self> {
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Spec(format!(
                "pure state norm deviates from 1 by {:.3e}",
                (norm - 1.0).abs()
            )));
        }
        Ok(DensityMatrix {
            entries: state * state.adjoint(),
        })
    }

    /// Wraps evolution output: cheap Hermiticity/trace checks only
    /// (positivity is analytically preserved by the dephasing channel).
    pub(crate) fn from_evolution(entries: DMatrix<Complex64>) -> Result<Self> {
        let defect = hermitian_defect(&entries);
        let trace_defect = (entries.trace() - Complex64::new(1.0, 0.0)).norm();
        if defect > 1e-12 || trace_defect > 1e-12 {
            return Err(Error::Internal(format!(
                "evolved state violated Hermiticity ({defect:.3e}) or trace ({trace_defect:.3e})"
            )));
        }
        Ok(DensityMatrix { entries })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Real diagonal: the site populations.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.entries[(j, j)].re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{laplacian, Graph};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Taylor-series matrix exponential with scaling and squaring; the
    /// independent oracle for the spectral propagators.
    fn expm_taylor(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = m.nrows();
        let norm = m.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
        let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
        let scaled = m.scale(1.0 / f64::powi(2.0, squarings as i32));
        let mut term = DMatrix::<Complex64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..30 {
            term = (&term * &scaled).scale(1.0 / k as f64);
            sum += &term;
        }
        let mut result = sum;
        for _ in 0..squarings {
            result = &result * &result;
        }
        result
    }

    fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn eigh_p2_laplacian() {
        // By-hand characteristic polynomial: λ² - 2λ = 0.
        let h = HermitianMatrix::from_real(&DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]))
            .unwrap();
        let d = eigh(&h).unwrap();
        assert!((d.eigenvalues()[0] - 0.0).abs() < 1e-14);
        assert!((d.eigenvalues()[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_identity_is_degenerate() {
        let h = HermitianMatrix::from_real(&DMatrix::identity(3, 3)).unwrap();
        let d = eigh(&h).unwrap();
        for v in d.eigenvalues().iter() {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigh_pauli_y_like() {
        // [[0, i], [-i, 0]]: characteristic polynomial λ² - 1 = 0.
        let h = HermitianMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let d = eigh(&h).unwrap();
        assert!((d.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigh_reports_defect_magnitude() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.5, 0.0), c(0.0, 0.0)]);
        match HermitianMatrix::new(m) {
            Err(Error::NotHermitian { defect, .. }) => assert!((defect - 0.5).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn eigh_is_deterministic_on_degenerate_spectra() {
        let h = HermitianMatrix::from_real(&laplacian(&Graph::complete(3).unwrap()).matrix().clone())
            .unwrap();
        let a = eigh(&h).unwrap();
        let b = eigh(&h).unwrap();
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors(), b.eigenvectors());
    }

    #[test]
    fn propagator_at_zero_is_identity_exactly() {
        let h = HermitianMatrix::from_real(&DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]))
            .unwrap();
        let u = unitary_propagator(&h, 0.0).unwrap();
        assert_eq!(u, DMatrix::identity(2, 2));
    }

    #[test]
    fn propagator_matches_closed_form_p2() {
        // e^{-iHt} = e^{-it}(cos t · I + i sin t · σx) for H = [[1,-1],[-1,1]].
        let h = HermitianMatrix::from_real(&DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]))
            .unwrap();
        let t = std::f64::consts::FRAC_PI_2;
        let u = unitary_propagator(&h, t).unwrap();
        let phase = Complex64::from_polar(1.0, -t);
        let expect = DMatrix::from_row_slice(
            2,
            2,
            &[
                phase * t.cos(),
                phase * c(0.0, 1.0) * t.sin(),
                phase * c(0.0, 1.0) * t.sin(),
                phase * t.cos(),
            ],
        );
        assert!(max_abs_diff(&u, &expect) < 1e-13);
        for entry in u.iter() {
            assert!((entry.norm() - if entry.norm() > 0.5 { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_group_law() {
        let h = HermitianMatrix::from_real(&laplacian(&Graph::complete(3).unwrap()).matrix().clone())
            .unwrap();
        let u1 = unitary_propagator(&h, 0.3).unwrap();
        let u2 = unitary_propagator(&h, 0.7).unwrap();
        let u12 = unitary_propagator(&h, 1.0).unwrap();
        assert!(max_abs_diff(&(u1 * u2), &u12) < 1e-12);
    }

    #[test]
    fn propagator_matches_taylor_oracle() {
        // Random-ish chiral Hermitian matrix, fixed entries.
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.7, 0.0),
                c(-0.3, 0.4),
                c(0.1, -0.2),
                c(-0.3, -0.4),
                c(-0.2, 0.0),
                c(0.5, 0.1),
                c(0.1, 0.2),
                c(0.5, -0.1),
                c(1.1, 0.0),
            ],
        );
        let h = HermitianMatrix::new(m.clone()).unwrap();
        let t = 1.37;
        let u = unitary_propagator(&h, t).unwrap();
        let oracle = expm_taylor(&m.map(|z| z * c(0.0, -t)));
        assert!(max_abs_diff(&u, &oracle) < 1e-12);
    }

    #[test]
    fn kernel_matches_closed_form_p2() {
        // Spectral oracle: eigenvalues {0, 2}, so off-diagonal is (1 - e^{-2t})/2.
        let l = laplacian(&Graph::path(2).unwrap());
        let t = 0.5 * 2.0f64.ln();
        let k = stochastic_propagator_kernel(&l, t).unwrap();
        assert!((k[(0, 1)] - 0.25).abs() < 1e-14);
        assert!((k[(0, 0)] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn kernel_at_zero_is_identity() {
        let l = laplacian(&Graph::complete(3).unwrap());
        assert_eq!(stochastic_propagator_kernel(&l, 0.0).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn kernel_long_time_limit_is_uniform() {
        let l = laplacian(&Graph::path(2).unwrap());
        let k = stochastic_propagator_kernel(&l, 50.0).unwrap();
        for entry in k.iter() {
            assert!((entry - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_rejects_negative_time() {
        let l = laplacian(&Graph::path(2).unwrap());
        assert!(matches!(
            stochastic_propagator_kernel(&l, -0.1),
            Err(Error::NegativeTime { .. })
        ));
    }

    #[test]
    fn kernel_matches_taylor_oracle() {
        let l = laplacian(&Graph::petersen());
        let t = 0.8;
        let k = stochastic_propagator_kernel(&l, t).unwrap();
        let oracle = expm_taylor(&l.matrix().map(|x| c(-t * x, 0.0)));
        let worst = (0..10)
            .flat_map(|i| (0..10).map(move |j| (i, j)))
            .map(|(i, j)| (k[(i, j)] - oracle[(i, j)].re).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-12, "kernel vs Taylor oracle: {worst:.3e}");
    }

    #[test]
    fn eigenvalue_sum_equals_trace() {
        let l = laplacian(&Graph::petersen());
        let h = HermitianMatrix::from_real(l.matrix()).unwrap();
        let d = eigh(&h).unwrap();
        let sum: f64 = d.eigenvalues().iter().sum();
        assert!((sum - l.matrix().trace()).abs() < 1e-10);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.5, 0.0)]
        ))
        .is_ok());
        // trace != 1
        assert!(DensityMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.9, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]
        ))
        .is_err());
        // not positive
        assert!(DensityMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, 0.0), c(0.9, 0.0), c(0.9, 0.0), c(0.5, 0.0)]
        ))
        .is_err());
    }

    #[test]
    fn pure_site_populations() {
        let rho = DensityMatrix::pure_site(3, 1);
        assert_eq!(rho.populations(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn spectral_decomposition_json_shape() {
        let h = HermitianMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let d = eigh(&h).unwrap();
        let value: serde_json::Value = serde_json::from_str(&d.to_json_string()).unwrap();
        let eigenvalues = value["eigenvalues"].as_array().unwrap();
        assert_eq!(eigenvalues.len(), 2);
        assert!((eigenvalues[0].as_f64().unwrap() + 1.0).abs() < 1e-14);
        // Row-major matrix of [re, im] pairs.
        let vectors = value["eigenvectors"].as_array().unwrap();
        assert_eq!(vectors.len(), 2);
        assert_eq!(vectors[0].as_array().unwrap().len(), 2);
        assert_eq!(vectors[0][0].as_array().unwrap().len(), 2);
    }
}
