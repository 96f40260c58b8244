//! Command-line driver for st-forge: argument handling, report formats and a
//! rayon-parallel pipeline over the `st-forge-core` construction.

pub mod commands;
pub mod config;
pub mod error;
pub mod pipeline;
pub mod report;

pub use config::{Cli, Command};
pub use error::{CliError, Result};

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("cannot start {n} worker threads: {e}")))?;
    }
    match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Energy(a) => commands::energy(a),
        Command::Project(a) => commands::project(a),
        Command::Lattice(a) => commands::lattice(a),
    }
}
