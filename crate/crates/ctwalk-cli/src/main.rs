//! `ctwalk`: command-line runner for continuous-time walk experiments.
//!
//! Every invocation writes its artifacts plus a `manifest.json` (also
//! on handled errors) into the `--out` directory. Exit codes: 0 on
//! success, 2 on input/validation errors, 1 on internal failures.

mod artifacts;
mod commands;
mod config;
mod context;
mod grid;
mod inputs;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::classical::ClassicalCmd;
use commands::correspond::CorrespondCmd;
use commands::decohere::DecohereCmd;
use commands::graph::GraphCmd;
use commands::lattice::LatticeCmd;
use commands::quantum::QuantumCmd;
use context::{Context, OutputFormat};

#[derive(Parser, Debug)]
#[command(
    name = "ctwalk",
    version,
    about = "Continuous-time classical and chiral quantum walks on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for artifacts and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Seed for all randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for lattice sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// JSON defaults file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Validate inputs and write only the manifest.
    #[arg(long, global = true)]
    dry_run: bool,

    /// Representation for tabular artifacts.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Symmetry tolerance for Laplacian validation.
    #[arg(long, global = true)]
    tol_sym: Option<f64>,

    /// Column-sum tolerance for Laplacian validation.
    #[arg(long, global = true)]
    tol_sum: Option<f64>,

    /// Hermiticity tolerance for matrix inputs.
    #[arg(long, global = true)]
    tol_herm: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graphs and Laplacians: build, validate, convert.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Classical random walk: evolve, semigroup.
    #[command(subcommand)]
    Classical(ClassicalCmd),
    /// Chiral quantum walk: evolve, asymmetry, nogo.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Quantum-classical correspondence: map, verify, sample, count,
    /// gaugefix.
    #[command(subcommand)]
    Correspond(CorrespondCmd),
    /// Intrinsic decoherence: evolve, extract.
    #[command(subcommand)]
    Decohere(DecohereCmd),
    /// Lattices: build, peierls, bfield, butterfly, converge.
    #[command(subcommand)]
    Lattice(LatticeCmd),
}

fn command_name(command: &Command) -> String {
    match command {
        Command::Graph(c) => format!("graph {}", subcommand_name(format!("{c:?}"))),
        Command::Classical(c) => format!("classical {}", subcommand_name(format!("{c:?}"))),
        Command::Quantum(c) => format!("quantum {}", subcommand_name(format!("{c:?}"))),
        Command::Correspond(c) => format!("correspond {}", subcommand_name(format!("{c:?}"))),
        Command::Decohere(c) => format!("decohere {}", subcommand_name(format!("{c:?}"))),
        Command::Lattice(c) => format!("lattice {}", subcommand_name(format!("{c:?}"))),
    }
}

fn subcommand_name(debug: String) -> String {
    debug
        .split([' ', '{'])
        .next()
        .unwrap_or("?")
        .to_lowercase()
}

/// Parses and runs one invocation, returning the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(argv.iter().cloned()) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    run(cli, argv)
}

fn run(cli: Cli, argv: Vec<OsString>) -> i32 {
    let started = Instant::now();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }

    let mut ctx = Context::new(
        cli.out.clone(),
        config::Config::default(),
        cli.format,
        cli.dry_run,
    );

    let overrides = config::Overrides {
        tol_sym: cli.tol_sym,
        tol_sum: cli.tol_sum,
        tol_herm: cli.tol_herm,
        seed: cli.seed,
    };
    // The config file is read through the context so its hash lands in
    // the manifest.
    let config_result = match &cli.config {
        Some(path) => ctx
            .read_input(path)
            .and_then(|text| config::parse_config(&text)),
        None => config::load_config(None),
    };

    let (result, seed) = match config_result {
        Ok(file) => {
            ctx.config = config::resolve(file, overrides);
            let seed = ctx.config.seed;
            let result = execute(&ctx, &cli.command, seed);
            (result, seed)
        }
        Err(e) => (Err(e), cli.seed.unwrap_or(0)),
    };

    let code = match &result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    };

    let argv_strings = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    if let Err(e) = ctx.finish(
        command_name(&cli.command),
        argv_strings,
        seed,
        started.elapsed().as_secs_f64(),
        result.err().map(|e| e.to_string()),
    ) {
        eprintln!("error: could not write manifest: {e}");
        return 1;
    }
    code
}

fn execute(ctx: &Context, command: &Command, seed: u64) -> ctwalk::Result<()> {
    match command {
        Command::Graph(cmd) => commands::graph::run(ctx, cmd),
        Command::Classical(cmd) => commands::classical::run(ctx, cmd),
        Command::Quantum(cmd) => commands::quantum::run(ctx, cmd),
        Command::Correspond(cmd) => commands::correspond::run(ctx, cmd, seed),
        Command::Decohere(cmd) => commands::decohere::run(ctx, cmd, seed),
        Command::Lattice(cmd) => commands::lattice::run(ctx, cmd),
    }
}

fn main() {
    std::process::exit(dispatch(std::env::args_os()));
}
