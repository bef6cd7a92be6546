//! Intrinsic decoherence: the master equation
//! `drho/dt = -i[H, rho] - (gamma/2)[H, [H, rho]]`
//! and extraction of the classical generator from short-time population
//! dynamics.
//!
//! The equation is exactly solvable for time-independent `H`: in the
//! energy eigenbasis each coherence evolves as
//! `rho_ab(t) = rho_ab(0) exp(-i(E_a - E_b)t - (gamma/2)(E_a - E_b)^2 t)`,
//! so evolution here is closed-form rather than stepped, which keeps
//! integrator error out of the generator-extraction test.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, DensityMatrix, HermitianMatrix, SpectralDecomposition};

/// Decoherence rate `gamma >= 0` (units of time).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DecoherenceParams {
    gamma: f64,
}

impl DecoherenceParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma < 0.0 || !gamma.is_finite() {
            return Err(Error::Spec(format!(
                "decoherence rate must be a nonnegative finite real, got {gamma}"
            )));
        }
        Ok(DecoherenceParams { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Dephasing evolution with the eigendecomposition computed once.
pub struct DephasingEvolution {
    decomposition: SpectralDecomposition,
    gamma: f64,
}

impl DephasingEvolution {
    pub fn new(h: &HermitianMatrix, params: DecoherenceParams) -> Result<Self> {
        Ok(DephasingEvolution {
            decomposition: eigh(h)?,
            gamma: params.gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// Closed-form state at time `t >= 0`.
    pub fn evolve(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        if t < 0.0 {
            return Err(Error::NegativeTime {
                t,
                reason: "the dissipator is forward-directed",
            });
        }
        if rho0.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "state is {}-dimensional, Hamiltonian is {}-dimensional",
                rho0.dim(),
                self.dim()
            )));
        }
        let v = self.decomposition.eigenvectors();
        let e = self.decomposition.eigenvalues();
        let mut tilde = v.adjoint() * rho0.matrix() * v;
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                let gap = e[a] - e[b];
                let factor =
                    Complex64::from_polar((-0.5 * self.gamma * gap * gap * t).exp(), -gap * t);
                tilde[(a, b)] *= factor;
            }
        }
        DensityMatrix::from_evolution(v * tilde * v.adjoint())
    }

    /// Site populations at time `t` starting from `|source><source|`.
    pub fn site_populations(&self, source: usize, t: f64) -> Result<Vec<f64>> {
        let rho0 = DensityMatrix::pure_site(self.dim(), source);
        Ok(self.evolve(&rho0, t)?.populations())
    }
}

/// Solves the master equation in closed form. `t < 0` is a domain error.
pub fn evolve_density(
    h: &HermitianMatrix,
    rho0: &DensityMatrix,
    params: DecoherenceParams,
    t: f64,
) -> Result<DensityMatrix> {
    DephasingEvolution::new(h, params)?.evolve(rho0, t)
}

/// Default finite-difference step for [`extract_generator`]:
/// `1e-3 / max|eigenvalue|` of `H`.
pub fn default_extraction_step(h: &HermitianMatrix) -> Result<f64> {
    let radius = eigh(h)?.spectral_radius();
    if radius == 0.0 {
        // H = 0 has no time scale; any small step works.
        return Ok(1e-3);
    }
    Ok(1e-3 / radius)
}

/// Recovers the classical generator from short-time populations: for
/// each source `j` the populations obey
/// `p_k(t) = delta_jk - gamma t L_kj + O(t^2)`, so
/// `L_kj = -(1/gamma) dp_k/dt` at `t = 0`.
///
/// The derivative is a Richardson extrapolation of forward differences
/// at steps `dt/2` and `dt/4` (evaluations at `0`, `dt/4`, `dt/2`),
/// which stays inside the `t >= 0` domain of the dissipator and leaves
/// a leading truncation error of order `dt^2`.
pub fn extract_generator(
    h: &HermitianMatrix,
    params: DecoherenceParams,
    dt: f64,
) -> Result<DMatrix<f64>> {
    if params.gamma == 0.0 {
        return Err(Error::DegenerateExtraction);
    }
    let evolution = DephasingEvolution::new(h, params)?;
    let radius = evolution.decomposition.spectral_radius();
    if dt <= 0.0 || dt.is_nan() || (radius > 0.0 && dt > 0.1 / radius) {
        return Err(Error::Spec(format!(
            "extraction step must lie in (0, {:.3e}], got {dt:.3e}",
            0.1 / radius
        )));
    }
    let n = evolution.dim();
    let mut generator = DMatrix::zeros(n, n);
    for j in 0..n {
        let quarter = evolution.site_populations(j, dt / 4.0)?;
        let half = evolution.site_populations(j, dt / 2.0)?;
        for k in 0..n {
            let p0 = if k == j { 1.0 } else { 0.0 };
            // Second-order one-sided stencil on {0, dt/4, dt/2}.
            let derivative = (-3.0 * p0 + 4.0 * quarter[k] - half[k]) * 2.0 / dt;
            generator[(k, j)] = -derivative / params.gamma;
        }
    }
    Ok(generator)
}
