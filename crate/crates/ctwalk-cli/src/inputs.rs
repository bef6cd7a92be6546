//! Input-file loading: graphs, Laplacians, Hamiltonians, lattice specs.

use std::path::Path;

use serde::Deserialize;

use ctwalk::graph::{Graph, LaplacianMatrix};
use ctwalk::io::{read_complex_matrix_csv, read_real_matrix_csv};
use ctwalk::lattice::{peierls_phases, Boundary, FieldTable, LatticeSpec};
use ctwalk::linalg::HermitianMatrix;
use ctwalk::quantum::{build_hamiltonian, HamiltonianSpec};
use ctwalk::{Error, Result};

use crate::context::Context;

pub fn load_graph(ctx: &Context, path: &Path) -> Result<Graph> {
    Graph::from_json_str(&ctx.read_input(path)?)
}

pub fn load_laplacian(ctx: &Context, path: &Path) -> Result<LaplacianMatrix> {
    let matrix = read_real_matrix_csv(&ctx.read_input(path)?)?;
    LaplacianMatrix::try_new(matrix, ctx.config.tol_sym, ctx.config.tol_sum)
}

/// A Hamiltonian given either as a spec file (`.json`) or as a raw
/// complex matrix (`.csv`).
pub struct LoadedHamiltonian {
    pub matrix: HermitianMatrix,
    pub spec: Option<HamiltonianSpec>,
}

pub fn load_hamiltonian(ctx: &Context, path: &Path) -> Result<LoadedHamiltonian> {
    let text = ctx.read_input(path)?;
    let is_json = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or_else(|| text.trim_start().starts_with('{'));
    if is_json {
        let spec = HamiltonianSpec::from_json_str(&text)?;
        Ok(LoadedHamiltonian {
            matrix: build_hamiltonian(&spec),
            spec: Some(spec),
        })
    } else {
        let matrix = read_complex_matrix_csv(&text)?;
        Ok(LoadedHamiltonian {
            matrix: HermitianMatrix::with_tolerance(matrix, ctx.config.tol_herm)?,
            spec: None,
        })
    }
}

#[derive(Deserialize, Clone, Copy, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Potential {
    /// Landau gauge `A = (0, B x)`.
    Landau {
        #[serde(alias = "B")]
        b: f64,
    },
    /// Constant vector potential.
    Constant { ax: f64, ay: f64 },
}

impl Potential {
    pub fn vector_potential(&self) -> impl Fn(f64, f64) -> (f64, f64) + '_ {
        move |x, _y| match *self {
            Potential::Landau { b } => (0.0, b * x),
            Potential::Constant { ax, ay } => (ax, ay),
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FieldTables {
    fx: Option<Vec<Vec<f64>>>,
    fy: Option<Vec<Vec<f64>>>,
    d: Option<Vec<Vec<f64>>>,
}

fn default_spacing() -> f64 {
    1.0
}

fn default_hop() -> f64 {
    1.0
}

fn default_charge() -> f64 {
    1.0
}

fn default_boundary() -> Boundary {
    Boundary::Open
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    dims: [usize; 2],
    #[serde(default = "default_spacing")]
    spacing: f64,
    #[serde(default = "default_boundary")]
    boundary: Boundary,
    #[serde(default = "default_hop")]
    hop_rate: f64,
    #[serde(default)]
    fields: Option<FieldTables>,
    /// Named preset used to derive the link phases when inline tables
    /// are not given.
    #[serde(default)]
    potential: Option<Potential>,
    #[serde(default = "default_charge")]
    charge: f64,
}

pub struct LoadedLattice {
    pub spec: LatticeSpec,
    pub potential: Option<Potential>,
    pub charge: f64,
}

pub fn load_lattice(ctx: &Context, path: &Path) -> Result<LoadedLattice> {
    let file: LatticeFile = serde_json::from_str(&ctx.read_input(path)?)?;
    let [lx, ly] = file.dims;
    let (fx_shape, fy_shape) = LatticeSpec::link_shapes(lx.max(2), ly.max(1), file.boundary);

    let tables = file.fields.unwrap_or_default();
    let has_inline_phases = tables.fx.is_some() || tables.fy.is_some();
    if has_inline_phases && file.potential.is_some() {
        return Err(Error::Spec(
            "give either inline fx/fy tables or a potential preset, not both".into(),
        ));
    }

    let d = match tables.d {
        Some(rows) => FieldTable::from_rows(&rows)?,
        None => FieldTable::zeros(lx, ly),
    };

    let (fx, fy) = if let Some(potential) = file.potential {
        // Shapes are validated by LatticeSpec::new below; build a
        // zero-field spec first to run the quadrature on.
        let base = LatticeSpec::new(
            lx,
            ly,
            file.spacing,
            file.boundary,
            file.hop_rate,
            FieldTable::zeros(fx_shape.0, fx_shape.1),
            FieldTable::zeros(fy_shape.0, fy_shape.1),
            d.clone(),
        )?;
        peierls_phases(potential.vector_potential(), file.charge, &base)?
    } else {
        let fx = match tables.fx {
            Some(rows) => FieldTable::from_rows(&rows)?,
            None => FieldTable::zeros(fx_shape.0, fx_shape.1),
        };
        let fy = match tables.fy {
            Some(rows) => FieldTable::from_rows(&rows)?,
            None => FieldTable::zeros(fy_shape.0, fy_shape.1),
        };
        (fx, fy)
    };

    let spec = LatticeSpec::new(
        lx,
        ly,
        file.spacing,
        file.boundary,
        file.hop_rate,
        fx,
        fy,
        d,
    )?;
    Ok(LoadedLattice {
        spec,
        potential: file.potential,
        charge: file.charge,
    })
}
