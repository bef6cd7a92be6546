use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;

use ctwalk::decoherence::{
    default_extraction_step, extract_generator, DecoherenceParams, DephasingEvolution,
};
use ctwalk::{Error, Result};

use crate::artifacts::{emit_real_matrix, emit_series};
use crate::context::Context;
use crate::grid::GridArgs;
use crate::inputs::load_hamiltonian;

#[derive(Subcommand, Debug)]
pub enum DecohereCmd {
    /// Site populations under intrinsic decoherence over a time grid.
    Evolve {
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Decoherence rate.
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        start_site: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Recover the classical generator from short-time populations.
    Extract {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        gamma: f64,
        /// Finite-difference step; defaults to 1e-3 over the spectral
        /// radius of H.
        #[arg(long)]
        dt: Option<f64>,
    },
}

pub fn run(ctx: &Context, cmd: &DecohereCmd, seed: u64) -> Result<()> {
    match cmd {
        DecohereCmd::Evolve {
            hamiltonian,
            gamma,
            start_site,
            grid,
        } => {
            let h = load_hamiltonian(ctx, hamiltonian)?;
            let n = h.matrix.dim();
            if *start_site >= n {
                return Err(Error::Spec(format!(
                    "start site {start_site} out of range for {n} sites"
                )));
            }
            let params = DecoherenceParams::new(*gamma)?;
            let evolution = DephasingEvolution::new(&h.matrix, params)?;
            let times = grid.build(&ctx.config)?;
            let mut rows = Vec::with_capacity(times.len());
            for &t in &times {
                rows.push((t, evolution.site_populations(*start_site, t)?));
            }
            let names: Vec<String> = (0..n).map(|j| format!("p_{j}")).collect();
            emit_series(ctx, "populations", &names, &rows)?;
            ctx.write_json(
                "params.json",
                &json!({ "gamma": gamma, "start_site": start_site, "seed": seed }),
            )?;
        }
        DecohereCmd::Extract {
            hamiltonian,
            gamma,
            dt,
        } => {
            let h = load_hamiltonian(ctx, hamiltonian)?;
            let params = DecoherenceParams::new(*gamma)?;
            let step = match dt {
                Some(value) => *value,
                None => default_extraction_step(&h.matrix)?,
            };
            let generator = extract_generator(&h.matrix, params, step)?;
            emit_real_matrix(ctx, "generator", &generator)?;
            ctx.write_json(
                "params.json",
                &json!({ "gamma": gamma, "dt": step, "seed": seed }),
            )?;
        }
    }
    Ok(())
}
