use std::path::PathBuf;

use clap::Subcommand;

use ctwalk::graph::{graph_from_laplacian, laplacian, validate_laplacian};
use ctwalk::io::read_real_matrix_csv;
use ctwalk::Result;

use crate::artifacts::emit_real_matrix;
use crate::context::Context;
use crate::inputs::load_graph;

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    /// Build the Laplacian of a graph file and report its validity.
    Build {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check a matrix in CSV form against the Laplacian invariants.
    Validate {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Recover the graph whose Laplacian is the given matrix.
    Convert {
        #[arg(long)]
        matrix: PathBuf,
    },
}

pub fn run(ctx: &Context, cmd: &GraphCmd) -> Result<()> {
    match cmd {
        GraphCmd::Build { graph } => {
            let g = load_graph(ctx, graph)?;
            let l = laplacian(&g);
            emit_real_matrix(ctx, "laplacian", l.matrix())?;
            let report =
                validate_laplacian(l.matrix(), ctx.config.tol_sym, ctx.config.tol_sum)?;
            ctx.write_json("validity.json", &report)?;
        }
        GraphCmd::Validate { matrix } => {
            let m = read_real_matrix_csv(&ctx.read_input(matrix)?)?;
            let report = validate_laplacian(&m, ctx.config.tol_sym, ctx.config.tol_sum)?;
            ctx.write_json("validity.json", &report)?;
            println!(
                "validation: {}",
                if report.all_pass() { "pass" } else { "FAIL" }
            );
        }
        GraphCmd::Convert { matrix } => {
            let m = read_real_matrix_csv(&ctx.read_input(matrix)?)?;
            let g = graph_from_laplacian(&m, ctx.config.tol_sym, ctx.config.tol_sum)?;
            ctx.write_artifact("graph.json", g.to_json_string().as_bytes())?;
        }
    }
    Ok(())
}
