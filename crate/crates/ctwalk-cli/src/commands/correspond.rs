use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;
use sha2::{Digest, Sha256};

use ctwalk::correspondence::{
    correspondence_map, count_parameters, cycle_holonomies, gauge_fix,
    sample_compatible_hamiltonians, verify_postulates,
};
use ctwalk::io::write_real_matrix_csv;
use ctwalk::{Error, Result};

use crate::artifacts::{emit_complex_matrix, emit_real_matrix};
use crate::commands::classical::GeneratorInput;
use crate::context::Context;
use crate::inputs::{load_graph, load_hamiltonian};

#[derive(Subcommand, Debug)]
pub enum CorrespondCmd {
    /// Map a Hamiltonian to its classical generator.
    Map {
        #[arg(long)]
        hamiltonian: PathBuf,
    },
    /// Verify the correspondence postulates for an (H, L) pair.
    Verify {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        laplacian: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Draw Hamiltonians compatible with a classical generator.
    Sample {
        #[command(flatten)]
        generator: GeneratorInput,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0.0)]
        onsite_min: f64,
        #[arg(long, default_value_t = 1.0)]
        onsite_max: f64,
    },
    /// Free-parameter counts of the compatible family.
    Count {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Zero the spanning-tree phases, exposing the cycle holonomies.
    Gaugefix {
        /// Hamiltonian spec (JSON; carries its graph) or complex matrix
        /// (CSV, requires --graph).
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

pub fn run(ctx: &Context, cmd: &CorrespondCmd, seed: u64) -> Result<()> {
    match cmd {
        CorrespondCmd::Map { hamiltonian } => {
            let h = load_hamiltonian(ctx, hamiltonian)?;
            let l = correspondence_map(&h.matrix);
            emit_real_matrix(ctx, "laplacian", l.matrix())?;
        }
        CorrespondCmd::Verify {
            hamiltonian,
            laplacian,
            tol,
        } => {
            let h = load_hamiltonian(ctx, hamiltonian)?;
            let l = crate::inputs::load_laplacian(ctx, laplacian)?;
            let report = verify_postulates(&h.matrix, &l, *tol)?;
            ctx.write_json("postulates.json", &report)?;
            println!(
                "postulates: {}",
                if report.all_pass() { "pass" } else { "FAIL" }
            );
        }
        CorrespondCmd::Sample {
            generator,
            count,
            onsite_min,
            onsite_max,
        } => {
            let l = generator.load(ctx)?;
            let samples =
                sample_compatible_hamiltonians(&l, *count, seed, (*onsite_min, *onsite_max))?;
            let mut files = Vec::with_capacity(samples.len());
            for (i, spec) in samples.iter().enumerate() {
                let name = format!("sample_{i:03}.json");
                ctx.write_artifact(&name, spec.to_json_string().as_bytes())?;
                files.push(name);
            }
            let mut canonical = Vec::new();
            write_real_matrix_csv(&mut canonical, l.matrix())?;
            let digest = Sha256::digest(&canonical);
            let hash: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            ctx.write_json(
                "samples.json",
                &json!({
                    "seed": seed,
                    "count": count,
                    "onsite_range": [onsite_min, onsite_max],
                    "laplacian_sha256": hash,
                    "files": files,
                }),
            )?;
        }
        CorrespondCmd::Count { graph } => {
            let g = load_graph(ctx, graph)?;
            ctx.write_json("parameters.json", &count_parameters(&g))?;
        }
        CorrespondCmd::Gaugefix { hamiltonian, graph } => {
            let h = load_hamiltonian(ctx, hamiltonian)?;
            let g = match (&h.spec, graph) {
                (_, Some(path)) => load_graph(ctx, path)?,
                (Some(spec), None) => spec.graph().clone(),
                (None, None) => {
                    return Err(Error::Spec(
                        "matrix input carries no topology; give --graph".into(),
                    ))
                }
            };
            let fixed = gauge_fix(&h.matrix, &g)?;
            if !fixed.connected {
                eprintln!("warning: graph is disconnected; fixed each component separately");
            }
            emit_complex_matrix(ctx, "gauge_fixed", fixed.hamiltonian.matrix())?;
            ctx.write_json(
                "gauge_phases.json",
                &json!({
                    "vertex_phases": fixed.vertex_phases,
                    "connected": fixed.connected,
                }),
            )?;
            let holonomies = cycle_holonomies(&h.matrix, &g)?;
            ctx.write_json("holonomies.json", &holonomies)?;
        }
    }
    Ok(())
}
