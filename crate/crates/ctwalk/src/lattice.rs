//! Finite chains and 2D square lattices with link phases: the most
//! general nearest-neighbor walk Hamiltonian, Peierls phases from a
//! vector potential, the discretized magnetic field, Hofstadter
//! spectra, and continuum-limit convergence checks.
//!
//! Sites are indexed row-major, `j = n + Lx * m`. The Hamiltonian has
//! diagonal `hop_rate * (2 dim + d(n,m))` and hops
//! `H[(n+1,m)][(n,m)] = -hop_rate * e^{i fx(n,m)}` (likewise `fy` in y),
//! so with all fields zero it is `hop_rate` times the lattice Laplacian
//! plus a constant shift.

use std::collections::HashMap;
use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::eigenvalues_only;
use crate::quantum::HamiltonianSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Rectangular table of per-link or per-site reals, indexed `(n, m)`
/// with `n` along x.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTable {
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl FieldTable {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        FieldTable {
            nx,
            ny,
            values: vec![0.0; nx * ny],
        }
    }

    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(nx * ny);
        for m in 0..ny {
            for n in 0..nx {
                values.push(f(n, m));
            }
        }
        FieldTable { nx, ny, values }
    }

    /// Builds from nested rows `rows[m][n]`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ny = rows.len();
        let nx = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != nx) {
            return Err(Error::Spec("ragged field table".into()));
        }
        Ok(FieldTable {
            nx,
            ny,
            values: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.values[n + self.nx * m]
    }

    pub fn set(&mut self, n: usize, m: usize, value: f64) {
        self.values[n + self.nx * m] = value;
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.ny)
            .map(|m| (0..self.nx).map(|n| self.get(n, m)).collect())
            .collect()
    }

    fn max_abs(&self) -> f64 {
        self.values.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Finite `Lx x Ly` square lattice (`Ly = 1` is a chain) with spacing,
/// boundary condition, hop rate, per-link phase tables and per-site
/// on-site terms.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec {
    lx: usize,
    ly: usize,
    spacing: f64,
    boundary: Boundary,
    hop_rate: f64,
    fx: FieldTable,
    fy: FieldTable,
    d: FieldTable,
}

impl LatticeSpec {
    /// Expected table shapes for the given geometry:
    /// `((fx_nx, fx_ny), (fy_nx, fy_ny))`.
    pub fn link_shapes(lx: usize, ly: usize, boundary: Boundary) -> ((usize, usize), (usize, usize)) {
        let fx = match boundary {
            Boundary::Open => (lx - 1, ly),
            Boundary::Periodic => (lx, ly),
        };
        let fy = if ly == 1 {
            (0, 0)
        } else {
            match boundary {
                Boundary::Open => (lx, ly - 1),
                Boundary::Periodic => (lx, ly),
            }
        };
        (fx, fy)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lx: usize,
        ly: usize,
        spacing: f64,
        boundary: Boundary,
        hop_rate: f64,
        fx: FieldTable,
        fy: FieldTable,
        d: FieldTable,
    ) -> Result<Self> {
        if lx < 2 {
            return Err(Error::Spec("lattice needs Lx >= 2".into()));
        }
        if boundary == Boundary::Periodic && (lx < 3 || (ly != 1 && ly < 3)) {
            return Err(Error::Spec(
                "periodic boundary needs Lx >= 3 (and Ly >= 3 for 2D) to stay a simple graph"
                    .into(),
            ));
        }
        if spacing <= 0.0 || hop_rate <= 0.0 || spacing.is_nan() || hop_rate.is_nan() {
            return Err(Error::Spec(format!(
                "spacing and hop rate must be positive, got {spacing} and {hop_rate}"
            )));
        }
        let (fx_shape, fy_shape) = Self::link_shapes(lx, ly, boundary);
        if fx.shape() != fx_shape {
            return Err(Error::Spec(format!(
                "fx table has shape {:?}, expected {:?}",
                fx.shape(),
                fx_shape
            )));
        }
        if fy.shape() != fy_shape {
            return Err(Error::Spec(format!(
                "fy table has shape {:?}, expected {:?}",
                fy.shape(),
                fy_shape
            )));
        }
        if d.shape() != (lx, ly) {
            return Err(Error::Spec(format!(
                "d table has shape {:?}, expected ({lx}, {ly})",
                d.shape()
            )));
        }
        for table in [&fx, &fy, &d] {
            if table.values.iter().any(|x| !x.is_finite()) {
                return Err(Error::Spec("field tables must be finite".into()));
            }
        }
        Ok(LatticeSpec {
            lx,
            ly,
            spacing,
            boundary,
            hop_rate,
            fx,
            fy,
            d,
        })
    }

    pub fn zero_fields(
        lx: usize,
        ly: usize,
        spacing: f64,
        boundary: Boundary,
        hop_rate: f64,
    ) -> Result<Self> {
        let (fx, fy) = Self::link_shapes(lx, ly, boundary);
        Self::new(
            lx,
            ly,
            spacing,
            boundary,
            hop_rate,
            FieldTable::zeros(fx.0, fx.1),
            FieldTable::zeros(fy.0, fy.1),
            FieldTable::zeros(lx, ly),
        )
    }

    /// Landau-gauge field: `fy(n, m) = b_plaquette * n`, `fx = 0`, where
    /// `b_plaquette` is the flux per plaquette (dimensionless phase).
    pub fn with_landau_flux(
        lx: usize,
        ly: usize,
        spacing: f64,
        boundary: Boundary,
        hop_rate: f64,
        b_plaquette: f64,
    ) -> Result<Self> {
        let (fx_shape, fy_shape) = Self::link_shapes(lx, ly, boundary);
        let fy = FieldTable::from_fn(fy_shape.0, fy_shape.1, |n, _| b_plaquette * n as f64);
        Self::new(
            lx,
            ly,
            spacing,
            boundary,
            hop_rate,
            FieldTable::zeros(fx_shape.0, fx_shape.1),
            fy,
            FieldTable::zeros(lx, ly),
        )
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.lx, self.ly)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn hop_rate(&self) -> f64 {
        self.hop_rate
    }

    pub fn fx(&self) -> &FieldTable {
        &self.fx
    }

    pub fn fy(&self) -> &FieldTable {
        &self.fy
    }

    pub fn d_table(&self) -> &FieldTable {
        &self.d
    }

    pub fn n_sites(&self) -> usize {
        self.lx * self.ly
    }

    pub fn site_index(&self, n: usize, m: usize) -> usize {
        n + self.lx * m
    }

    /// Directed phase sum around the unit plaquette at `(n, m)`
    /// (counterclockwise), the gauge-invariant flux through it.
    /// Indices wrap under periodic boundary.
    pub fn plaquette_holonomy(&self, n: usize, m: usize) -> Result<f64> {
        if self.ly == 1 {
            return Err(Error::Spec("chains have no plaquettes".into()));
        }
        let (max_n, max_m) = match self.boundary {
            Boundary::Open => (self.lx - 1, self.ly - 1),
            Boundary::Periodic => (self.lx, self.ly),
        };
        if n >= max_n || m >= max_m {
            return Err(Error::Spec(format!(
                "plaquette ({n},{m}) out of range for this boundary"
            )));
        }
        let n1 = (n + 1) % self.lx;
        let m1 = (m + 1) % self.ly;
        Ok(self.fx.get(n, m) + self.fy.get(n1, m) - self.fx.get(n, m1) - self.fy.get(n, m))
    }

    fn connectivity(&self) -> f64 {
        if self.ly == 1 {
            2.0
        } else {
            4.0
        }
    }

    /// Continuum-equivalent parameters of this lattice at its spacing:
    /// `K = a^2 hop_rate`, `U = hop_rate d`, `F = f / a`. Physical
    /// constants are folded in (`K = hbar^2/2m`, `F = qA`, `U = qV` in
    /// natural units), so these are the coefficients of
    /// `-K (grad - iF)^2 + U` directly.
    pub fn continuum_params(&self) -> ContinuumParams {
        let a = self.spacing;
        ContinuumParams {
            kinetic: a * a * self.hop_rate,
            potential: FieldTable::from_fn(self.lx, self.ly, |n, m| {
                self.hop_rate * self.d.get(n, m)
            }),
            field_x: FieldTable::from_fn(self.fx.nx, self.fx.ny, |n, m| self.fx.get(n, m) / a),
            field_y: FieldTable::from_fn(self.fy.nx, self.fy.ny, |n, m| self.fy.get(n, m) / a),
        }
    }
}

/// Coefficients of the continuum Hamiltonian `-K (grad - iF)^2 + U`
/// that a lattice family approaches under the surviving scaling
/// (`hop_rate ~ a^{-2}`, `f ~ a`, `d ~ a^2`).
#[derive(Clone, Debug)]
pub struct ContinuumParams {
    /// Kinetic coefficient `K = a^2 hop_rate`.
    pub kinetic: f64,
    /// Scalar potential samples `U = hop_rate d`.
    pub potential: FieldTable,
    /// Gauge field samples `F_x = fx / a` on the x links.
    pub field_x: FieldTable,
    /// Gauge field samples `F_y = fy / a` on the y links.
    pub field_y: FieldTable,
}

/// Directed links of the lattice with their phases: `(from, to, phase)`
/// means `H[to][from] = -hop_rate * e^{i phase}`.
fn directed_links(spec: &LatticeSpec) -> Vec<(usize, usize, f64)> {
    let mut links = Vec::new();
    let (lx, ly) = (spec.lx, spec.ly);
    for m in 0..ly {
        for n in 0..lx {
            let from = spec.site_index(n, m);
            let x_links = match spec.boundary {
                Boundary::Open => n + 1 < lx,
                Boundary::Periodic => true,
            };
            if x_links {
                let to = spec.site_index((n + 1) % lx, m);
                links.push((from, to, spec.fx.get(n, m)));
            }
            if ly > 1 {
                let y_links = match spec.boundary {
                    Boundary::Open => m + 1 < ly,
                    Boundary::Periodic => true,
                };
                if y_links {
                    let to = spec.site_index(n, (m + 1) % ly);
                    links.push((from, to, spec.fy.get(n, m)));
                }
            }
        }
    }
    links
}

/// Assembles the walk Hamiltonian of the lattice together with its
/// graph. The diagonal is `hop_rate * (2 dim + d(n,m))` independent of
/// the boundary truncation.
pub fn build_lattice_hamiltonian(spec: &LatticeSpec) -> Result<(HamiltonianSpec, Graph)> {
    let n_sites = spec.n_sites();
    let mut phase_by_edge: HashMap<(usize, usize), f64> = HashMap::new();
    let mut pairs = Vec::new();
    for (from, to, phase) in directed_links(spec) {
        // Canonical edges run u < v; traversing a wrap link against the
        // canonical orientation conjugates its phase.
        let (u, v, phi) = if from < to {
            (from, to, phase)
        } else {
            (to, from, -phase)
        };
        phase_by_edge.insert((u, v), phi);
        pairs.push((u, v));
    }
    let graph = Graph::unweighted(n_sites, pairs)?;
    let phases = graph
        .edges()
        .iter()
        .map(|e| phase_by_edge[&(e.u, e.v)])
        .collect();
    let mut onsite = vec![0.0; n_sites];
    for m in 0..spec.ly {
        for n in 0..spec.lx {
            onsite[spec.site_index(n, m)] =
                spec.hop_rate * (spec.connectivity() + spec.d.get(n, m));
        }
    }
    let hamiltonian_spec = HamiltonianSpec::new(graph.clone(), phases, onsite, spec.hop_rate)?;
    Ok((hamiltonian_spec, graph))
}

/// Gauge transformation that cancels every non-wrap x-link phase by
/// accumulating vertex phases along each row. Under open boundary `fx`
/// becomes identically zero; under periodic boundary the x-wrap column
/// keeps the row holonomy (it is gauge-invariant). Site transfer
/// probabilities are unchanged.
pub fn zero_fx_gauge(spec: &LatticeSpec) -> Result<(LatticeSpec, FieldTable)> {
    let (lx, ly) = (spec.lx, spec.ly);
    let mut alpha = FieldTable::zeros(lx, ly);
    for m in 0..ly {
        for n in 0..lx - 1 {
            let next = alpha.get(n, m) + spec.fx.get(n, m);
            alpha.set(n + 1, m, next);
        }
    }
    let (fx_shape, _) = LatticeSpec::link_shapes(lx, ly, spec.boundary);
    let fx = FieldTable::from_fn(fx_shape.0, fx_shape.1, |n, m| {
        spec.fx.get(n, m) + alpha.get(n, m) - alpha.get((n + 1) % lx, m)
    });
    let fy = FieldTable::from_fn(spec.fy.nx, spec.fy.ny, |n, m| {
        spec.fy.get(n, m) + alpha.get(n, m) - alpha.get(n, (m + 1) % ly)
    });
    let fixed = LatticeSpec::new(
        lx,
        ly,
        spec.spacing,
        spec.boundary,
        spec.hop_rate,
        fx,
        fy,
        spec.d.clone(),
    )?;
    Ok((fixed, alpha))
}

/// Discretized out-of-plane magnetic field from the y-link phases in
/// the `fx = 0` gauge: symmetric differences along x in the interior,
/// one-sided at open boundaries. Output has the shape of `fy`.
pub fn discrete_magnetic_field(fy: &FieldTable, spec: &LatticeSpec) -> Result<FieldTable> {
    if spec.ly == 1 {
        return Err(Error::Spec("chains carry no magnetic field".into()));
    }
    if spec.fx.max_abs() > 1e-12 {
        return Err(Error::Gauge(
            "discrete magnetic field requires fx = 0; apply zero_fx_gauge first".into(),
        ));
    }
    if fy.shape() != spec.fy.shape() {
        return Err(Error::Spec(format!(
            "fy table has shape {:?}, expected {:?}",
            fy.shape(),
            spec.fy.shape()
        )));
    }
    let (nx, ny) = fy.shape();
    let a = spec.spacing;
    let mut field = FieldTable::zeros(nx, ny);
    for m in 0..ny {
        for n in 0..nx {
            let value = match spec.boundary {
                Boundary::Periodic => {
                    (fy.get((n + 1) % nx, m) - fy.get((n + nx - 1) % nx, m)) / (2.0 * a)
                }
                Boundary::Open => {
                    if n == 0 {
                        (fy.get(1, m) - fy.get(0, m)) / a
                    } else if n == nx - 1 {
                        (fy.get(nx - 1, m) - fy.get(nx - 2, m)) / a
                    } else {
                        (fy.get(n + 1, m) - fy.get(n - 1, m)) / (2.0 * a)
                    }
                }
            };
            field.set(n, m, value);
        }
    }
    Ok(field)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return Err(Error::NonFinite(format!(
            "vector potential at path parameter {lm} or {rm}"
        )));
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?,
    )
}

fn line_integral(f: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
    let (fa, fm, fb) = (f(0.0), f(0.5), f(1.0));
    if !fa.is_finite() || !fm.is_finite() || !fb.is_finite() {
        return Err(Error::NonFinite("vector potential on link path".into()));
    }
    let whole = (fa + 4.0 * fm + fb) / 6.0;
    adaptive_simpson(&f, 0.0, 1.0, fa, fm, fb, whole, tol, 40)
}

/// Peierls substitution: each link phase is `charge` times the line
/// integral of the vector potential along the straight link path,
/// computed by adaptive quadrature at tolerance 1e-10.
pub fn peierls_phases(
    vector_potential: impl Fn(f64, f64) -> (f64, f64),
    charge: f64,
    spec: &LatticeSpec,
) -> Result<(FieldTable, FieldTable)> {
    let a = spec.spacing;
    let tol = 1e-10;
    let (fx_shape, fy_shape) = LatticeSpec::link_shapes(spec.lx, spec.ly, spec.boundary);
    let mut fx = FieldTable::zeros(fx_shape.0, fx_shape.1);
    for m in 0..fx_shape.1 {
        for n in 0..fx_shape.0 {
            let (x0, y0) = (n as f64 * a, m as f64 * a);
            let integral =
                line_integral(|s| vector_potential(x0 + s * a, y0).0, tol)?;
            fx.set(n, m, charge * a * integral);
        }
    }
    let mut fy = FieldTable::zeros(fy_shape.0, fy_shape.1);
    for m in 0..fy_shape.1 {
        for n in 0..fy_shape.0 {
            let (x0, y0) = (n as f64 * a, m as f64 * a);
            let integral =
                line_integral(|s| vector_potential(x0, y0 + s * a).1, tol)?;
            fy.set(n, m, charge * a * integral);
        }
    }
    Ok((fx, fy))
}

/// Reduced flux fraction `p/q`: the flux per plaquette is `2 pi p / q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flux {
    p: u64,
    q: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Flux {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Spec("flux denominator must be positive".into()));
        }
        let g = gcd(p, q).max(1);
        Ok(Flux { p: p / g, q: q / g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Flux angle `2 pi p / q`.
    pub fn angle(&self) -> f64 {
        TAU * self.p as f64 / self.q as f64
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Spectrum of the lattice Hamiltonian at one flux value.
#[derive(Clone, Debug, Serialize)]
pub struct FluxSpectrum {
    pub flux: Flux,
    /// Flux angle `B = 2 pi p / q`.
    pub angle: f64,
    /// Full eigenvalue list, ascending.
    pub eigenvalues: Vec<f64>,
}

fn check_commensurate(flux: Flux, size: usize) -> Result<()> {
    if !(size as u64).is_multiple_of(flux.q) {
        // Smallest multiple of q at or above the requested size.
        let smallest = flux.q as usize * size.div_ceil(flux.q as usize).max(1);
        return Err(Error::IncommensurateFlux {
            p: flux.p,
            q: flux.q,
            size,
            smallest,
        });
    }
    Ok(())
}

/// All reduced fractions `p/q` in `[0, 1)` with `q <= q_max` that are
/// commensurate with the lattice (`q` divides `size`), in increasing
/// order. With `q_max >= size` these are exactly the `size` distinct
/// flux values `k/size`.
pub fn commensurate_fluxes(size: usize, q_max: u64) -> Vec<Flux> {
    let mut fluxes = Vec::new();
    for q in 1..=q_max.min(size as u64) {
        if !(size as u64).is_multiple_of(q) {
            continue;
        }
        for p in 0..q {
            // gcd(0, 1) = 1 keeps B = 0 as the single fraction 0/1.
            if gcd(p, q) == 1 {
                fluxes.push(Flux { p, q });
            }
        }
    }
    fluxes.sort_by(|a, b| a.value().total_cmp(&b.value()));
    fluxes
}

/// Full spectra of the `size x size` periodic lattice in the Landau
/// gauge `fy(n,m) = B n`, `fx = 0`, `d = 0`, for each requested flux.
/// Diagonalizations run in parallel; results keep the input order.
pub fn hofstadter_spectrum(
    size: usize,
    fluxes: &[Flux],
    hop_rate: f64,
) -> Result<Vec<FluxSpectrum>> {
    for &flux in fluxes {
        check_commensurate(flux, size)?;
    }
    fluxes
        .par_iter()
        .map(|&flux| {
            let spec = LatticeSpec::with_landau_flux(
                size,
                size,
                1.0,
                Boundary::Periodic,
                hop_rate,
                flux.angle(),
            )?;
            let (hamiltonian_spec, _) = build_lattice_hamiltonian(&spec)?;
            let h = crate::quantum::build_hamiltonian(&hamiltonian_spec);
            Ok(FluxSpectrum {
                flux,
                angle: flux.angle(),
                eigenvalues: eigenvalues_only(&h),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceCase {
    FreeParticle,
    UniformField,
}

/// One lattice size in a convergence study.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SizeResult {
    pub size: usize,
    pub spacing: f64,
    /// Tracked eigenvalue: lowest nonzero (free particle) or lowest
    /// (uniform field).
    pub eigenvalue: f64,
}

/// Continuum-limit study on the unit box (`a = 1/n`), with
/// `hop_rate = K n^2` so the kinetic coefficient is held fixed.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub case: ConvergenceCase,
    pub k_target: f64,
    pub results: Vec<SizeResult>,
    /// Continuum reference: `4 pi^2 K` (free particle) or `2 pi c K`
    /// with `c` flux quanta through the box (uniform field).
    pub continuum_value: f64,
    /// `|eigenvalue - continuum_value|` per size.
    pub errors: Vec<f64>,
    /// Log-log slope fitted over the three largest sizes.
    pub fitted_order: f64,
    /// Flux quanta through the unit box (uniform field only).
    pub flux_quanta: Option<u64>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn fit_order(sizes: &[usize], errors: &[f64]) -> f64 {
    // Least-squares slope of ln(error) against ln(1/n) over the last
    // three sizes.
    let take = 3.min(sizes.len());
    let xs: Vec<f64> = sizes[sizes.len() - take..]
        .iter()
        .map(|&n| (n as f64).ln())
        .collect();
    let ys: Vec<f64> = errors[errors.len() - take..]
        .iter()
        .map(|&e| e.max(f64::MIN_POSITIVE).ln())
        .collect();
    let mean_x = xs.iter().sum::<f64>() / xs.len() as f64;
    let mean_y = ys.iter().sum::<f64>() / ys.len() as f64;
    let cov: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let var: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    -(cov / var)
}

/// Checks the surviving continuum scaling (`hop_rate ~ a^{-2}`,
/// `f ~ a`, `d ~ a^2`) by tracking an eigenvalue across lattice sizes.
///
/// Free particle: the lowest nonzero eigenvalue of the periodic ring of
/// `n` sites, `2 K n^2 (1 - cos(2 pi / n))`, against the continuum
/// `4 pi^2 K`. Uniform field: the ground state of the `n x n` periodic
/// lattice threaded by `lcm(sizes)` flux quanta, against the lowest
/// Landau level.
pub fn continuum_convergence(
    case: ConvergenceCase,
    sizes: &[usize],
    k_target: f64,
) -> Result<ConvergenceReport> {
    if sizes.len() < 3 {
        return Err(Error::InsufficientSizes {
            needed: 3,
            got: sizes.len(),
        });
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Spec("sizes must be strictly ascending".into()));
    }
    if sizes[0] < 3 {
        return Err(Error::Spec("periodic lattices need size >= 3".into()));
    }
    if k_target <= 0.0 || k_target.is_nan() {
        return Err(Error::Spec(format!(
            "kinetic coefficient must be positive, got {k_target}"
        )));
    }

    let flux_quanta = match case {
        ConvergenceCase::FreeParticle => None,
        ConvergenceCase::UniformField => {
            Some(sizes.iter().fold(1u64, |acc, &n| lcm(acc, n as u64)))
        }
    };
    let continuum_value = match case {
        ConvergenceCase::FreeParticle => k_target * TAU * TAU,
        ConvergenceCase::UniformField => k_target * TAU * flux_quanta.unwrap() as f64,
    };

    let results: Vec<SizeResult> = sizes
        .par_iter()
        .map(|&n| {
            let spacing = 1.0 / n as f64;
            let hop_rate = k_target * (n * n) as f64;
            let spec = match case {
                ConvergenceCase::FreeParticle => {
                    LatticeSpec::zero_fields(n, 1, spacing, Boundary::Periodic, hop_rate)?
                }
                ConvergenceCase::UniformField => {
                    let c = flux_quanta.unwrap();
                    // Flux per plaquette 2 pi c / n^2; commensurate since
                    // n divides c.
                    let b = TAU * c as f64 / (n * n) as f64;
                    LatticeSpec::with_landau_flux(
                        n,
                        n,
                        spacing,
                        Boundary::Periodic,
                        hop_rate,
                        b,
                    )?
                }
            };
            let (hamiltonian_spec, _) = build_lattice_hamiltonian(&spec)?;
            let h = crate::quantum::build_hamiltonian(&hamiltonian_spec);
            let eigenvalues = eigenvalues_only(&h);
            let eigenvalue = match case {
                ConvergenceCase::FreeParticle => {
                    // The uniform zero mode sits at the bottom; track the
                    // first nonzero eigenvalue.
                    eigenvalues[1]
                }
                ConvergenceCase::UniformField => eigenvalues[0],
            };
            Ok(SizeResult {
                size: n,
                spacing,
                eigenvalue,
            })
        })
        .collect::<Result<_>>()?;

    let errors: Vec<f64> = results
        .iter()
        .map(|r| (r.eigenvalue - continuum_value).abs())
        .collect();
    let fitted_order = fit_order(sizes, &errors);

    Ok(ConvergenceReport {
        case,
        k_target,
        results,
        continuum_value,
        errors,
        fitted_order,
        flux_quanta,
    })
}
