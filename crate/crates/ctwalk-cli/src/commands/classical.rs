use std::path::PathBuf;

use clap::{Args, Subcommand};

use ctwalk::classical::{check_semigroup, ClassicalWalk, ProbabilityVector};
use ctwalk::graph::{laplacian, LaplacianMatrix};
use ctwalk::{Error, Result};

use crate::artifacts::emit_series;
use crate::context::Context;
use crate::grid::GridArgs;
use crate::inputs::{load_graph, load_laplacian};

#[derive(Args, Debug)]
pub struct GeneratorInput {
    /// Graph file (JSON); its Laplacian is the generator.
    #[arg(long, conflicts_with = "laplacian")]
    pub graph: Option<PathBuf>,
    /// Laplacian matrix (CSV).
    #[arg(long)]
    pub laplacian: Option<PathBuf>,
}

impl GeneratorInput {
    pub fn load(&self, ctx: &Context) -> Result<LaplacianMatrix> {
        match (&self.graph, &self.laplacian) {
            (Some(path), None) => Ok(laplacian(&load_graph(ctx, path)?)),
            (None, Some(path)) => load_laplacian(ctx, path),
            _ => Err(Error::Spec(
                "give exactly one of --graph or --laplacian".into(),
            )),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum ClassicalCmd {
    /// Evolve a site-localized probability vector over a time grid.
    Evolve {
        #[command(flatten)]
        generator: GeneratorInput,
        /// Initial site for the delta distribution.
        #[arg(long, default_value_t = 0)]
        start_site: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Check the semigroup law P(t1) P(t2) = P(t1 + t2).
    Semigroup {
        #[command(flatten)]
        generator: GeneratorInput,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

pub fn run(ctx: &Context, cmd: &ClassicalCmd) -> Result<()> {
    match cmd {
        ClassicalCmd::Evolve {
            generator,
            start_site,
            grid,
        } => {
            let l = generator.load(ctx)?;
            let n = l.dim();
            if *start_site >= n {
                return Err(Error::Spec(format!(
                    "start site {start_site} out of range for {n} vertices"
                )));
            }
            let times = grid.build(&ctx.config)?;
            let walk = ClassicalWalk::new(&l)?;
            let p0 = ProbabilityVector::delta(n, *start_site);
            let mut rows = Vec::with_capacity(times.len());
            for &t in &times {
                let p = walk.evolve(&p0, t)?;
                rows.push((t, p.vector().iter().copied().collect()));
            }
            let names: Vec<String> = (0..n).map(|j| format!("p_{j}")).collect();
            emit_series(ctx, "series", &names, &rows)?;
        }
        ClassicalCmd::Semigroup {
            generator,
            t1,
            t2,
            tol,
        } => {
            let l = generator.load(ctx)?;
            let report = check_semigroup(&l, *t1, *t2, *tol)?;
            ctx.write_json("semigroup.json", &report)?;
            println!(
                "semigroup deviation {:.3e} ({})",
                report.deviation,
                if report.pass { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
