use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;

use ctwalk::linalg::eigh;
use ctwalk::quantum::{
    born_semigroup_violation, time_reversal_asymmetry, transition_probabilities_from,
};
use ctwalk::Result;

use crate::artifacts::emit_series;
use crate::context::Context;
use crate::grid::GridArgs;
use crate::inputs::load_hamiltonian;

#[derive(Subcommand, Debug)]
pub enum QuantumCmd {
    /// Born-rule transition probabilities over a time grid.
    Evolve {
        /// Hamiltonian spec (JSON) or complex matrix (CSV).
        #[arg(long)]
        hamiltonian: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Time-reversal asymmetry of the site transfer probabilities.
    Asymmetry {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        t: f64,
    },
    /// Semigroup violation of the Born probabilities plus the vanishing
    /// first-order derivative at t = 0.
    Nogo {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
    },
}

pub fn run(ctx: &Context, cmd: &QuantumCmd) -> Result<()> {
    match cmd {
        QuantumCmd::Evolve { hamiltonian, grid } => {
            let h = load_hamiltonian(ctx, hamiltonian)?;
            let n = h.matrix.dim();
            let times = grid.build(&ctx.config)?;
            let decomposition = eigh(&h.matrix)?;
            // Columns enumerate (k, j) pairs column-major: source j
            // outer, target k inner.
            let names: Vec<String> = (0..n)
                .flat_map(|j| (0..n).map(move |k| format!("pi_{k}_{j}")))
                .collect();
            let mut rows = Vec::with_capacity(times.len());
            for &t in &times {
                let pi = transition_probabilities_from(&decomposition, t)?;
                let values: Vec<f64> = (0..n)
                    .flat_map(|j| (0..n).map(|k| pi.matrix()[(k, j)]).collect::<Vec<_>>())
                    .collect();
                rows.push((t, values));
            }
            emit_series(ctx, "pi_series", &names, &rows)?;
        }
        QuantumCmd::Asymmetry { hamiltonian, t } => {
            let h = load_hamiltonian(ctx, hamiltonian)?;
            let asymmetry = time_reversal_asymmetry(&h.matrix, *t)?;
            ctx.write_json("asymmetry.json", &json!({ "t": t, "asymmetry": asymmetry }))?;
            println!("asymmetry at t={t}: {asymmetry:.6e}");
        }
        QuantumCmd::Nogo {
            hamiltonian,
            t1,
            t2,
        } => {
            let h = load_hamiltonian(ctx, hamiltonian)?;
            let report = born_semigroup_violation(&h.matrix, *t1, *t2)?;
            ctx.write_json("nogo.json", &report)?;
            println!(
                "semigroup violation {:.6e}, first-order derivative {:.3e}",
                report.semigroup_violation, report.max_first_order_derivative
            );
        }
    }
    Ok(())
}
