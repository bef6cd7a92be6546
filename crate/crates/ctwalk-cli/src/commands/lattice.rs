use std::path::PathBuf;

use clap::Subcommand;
use nalgebra::DMatrix;

use ctwalk::io::format_float;
use ctwalk::lattice::{
    build_lattice_hamiltonian, commensurate_fluxes, continuum_convergence,
    discrete_magnetic_field, hofstadter_spectrum, peierls_phases, ConvergenceCase, FieldTable,
    Flux,
};
use ctwalk::quantum::build_hamiltonian;
use ctwalk::{Error, Result};

use crate::artifacts::{emit_complex_matrix, emit_real_matrix};
use crate::context::{Context, OutputFormat};
use crate::inputs::load_lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CasePick {
    FreeParticle,
    UniformField,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Assemble the lattice Hamiltonian and its graph.
    Build {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Link phases from the spec's vector-potential preset.
    Peierls {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Discretized magnetic field from the y-link phases (fx = 0 gauge).
    Bfield {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Spectrum sweep over commensurate fluxes on a periodic lattice.
    Butterfly {
        #[arg(long, default_value_t = 24)]
        size: usize,
        /// Largest flux denominator; defaults to the lattice size.
        /// Only q dividing the size are commensurate.
        #[arg(long)]
        qmax: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        hop_rate: f64,
        /// Explicit flux p/q; repeatable. Overrides the sweep.
        #[arg(long, value_parser = parse_flux)]
        flux: Vec<Flux>,
    },
    /// Continuum-limit convergence study on the unit box.
    Converge {
        #[arg(long, value_enum)]
        case: CasePick,
        /// Ascending lattice sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Kinetic coefficient K.
        #[arg(long, default_value_t = 1.0)]
        k: f64,
    },
}

fn parse_flux(text: &str) -> std::result::Result<Flux, String> {
    let (p, q) = text
        .split_once('/')
        .ok_or_else(|| format!("flux must look like p/q, got {text:?}"))?;
    let p = p.trim().parse::<u64>().map_err(|e| e.to_string())?;
    let q = q.trim().parse::<u64>().map_err(|e| e.to_string())?;
    Flux::new(p, q).map_err(|e| e.to_string())
}

fn table_matrix(table: &FieldTable) -> DMatrix<f64> {
    let (nx, ny) = table.shape();
    DMatrix::from_fn(ny, nx, |m, n| table.get(n, m))
}

pub fn run(ctx: &Context, cmd: &LatticeCmd) -> Result<()> {
    match cmd {
        LatticeCmd::Build { spec } => {
            let lattice = load_lattice(ctx, spec)?;
            let (hamiltonian_spec, graph) = build_lattice_hamiltonian(&lattice.spec)?;
            let h = build_hamiltonian(&hamiltonian_spec);
            emit_complex_matrix(ctx, "lattice_hamiltonian", h.matrix())?;
            ctx.write_artifact("lattice_graph.json", graph.to_json_string().as_bytes())?;
            ctx.write_artifact(
                "hamiltonian_spec.json",
                hamiltonian_spec.to_json_string().as_bytes(),
            )?;
        }
        LatticeCmd::Peierls { spec } => {
            let lattice = load_lattice(ctx, spec)?;
            let potential = lattice.potential.ok_or_else(|| {
                Error::Spec("peierls needs a potential preset in the lattice file".into())
            })?;
            let (fx, fy) =
                peierls_phases(potential.vector_potential(), lattice.charge, &lattice.spec)?;
            emit_real_matrix(ctx, "fx", &table_matrix(&fx))?;
            emit_real_matrix(ctx, "fy", &table_matrix(&fy))?;
        }
        LatticeCmd::Bfield { spec } => {
            let lattice = load_lattice(ctx, spec)?;
            let field = discrete_magnetic_field(lattice.spec.fy(), &lattice.spec)?;
            emit_real_matrix(ctx, "bfield", &table_matrix(&field))?;
        }
        LatticeCmd::Butterfly {
            size,
            qmax,
            hop_rate,
            flux,
        } => {
            let fluxes = if flux.is_empty() {
                commensurate_fluxes(*size, qmax.unwrap_or(*size as u64))
            } else {
                flux.clone()
            };
            if fluxes.is_empty() {
                return Err(Error::Spec("no commensurate fluxes to sweep".into()));
            }
            let spectra = hofstadter_spectrum(*size, &fluxes, *hop_rate)?;
            let n = spectra[0].eigenvalues.len();
            match ctx.format {
                OutputFormat::Csv => {
                    let mut text = String::from("B");
                    for k in 1..=n {
                        text.push_str(&format!(",lambda_{k}"));
                    }
                    text.push('\n');
                    for s in &spectra {
                        text.push_str(&format_float(s.angle));
                        for e in &s.eigenvalues {
                            text.push(',');
                            text.push_str(&format_float(*e));
                        }
                        text.push('\n');
                    }
                    ctx.write_artifact("butterfly.csv", text.as_bytes())?;
                }
                OutputFormat::Json => {
                    ctx.write_json("butterfly.json", &spectra)?;
                }
            }
            println!("swept {} fluxes on a {size}x{size} lattice", spectra.len());
        }
        LatticeCmd::Converge { case, sizes, k } => {
            let case = match case {
                CasePick::FreeParticle => ConvergenceCase::FreeParticle,
                CasePick::UniformField => ConvergenceCase::UniformField,
            };
            let default_sizes: Vec<usize> = match case {
                ConvergenceCase::FreeParticle => vec![16, 32, 64],
                ConvergenceCase::UniformField => vec![12, 24, 48],
            };
            let sizes = if sizes.is_empty() { &default_sizes } else { sizes };
            let report = continuum_convergence(case, sizes, *k)?;
            ctx.write_json("convergence.json", &report)?;
            if ctx.format == OutputFormat::Csv {
                let mut text = String::from("n,spacing,eigenvalue,error\n");
                for (r, &e) in report.results.iter().zip(&report.errors) {
                    text.push_str(&format!(
                        "{},{},{},{}\n",
                        r.size,
                        format_float(r.spacing),
                        format_float(r.eigenvalue),
                        format_float(e)
                    ));
                }
                ctx.write_artifact("convergence.csv", text.as_bytes())?;
            }
            println!(
                "fitted order {:.3} toward {:.6}",
                report.fitted_order, report.continuum_value
            );
        }
    }
    Ok(())
}
