use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use halfline_nls_cli::commands::{cmd_converge, cmd_solve, cmd_verify};
use halfline_nls_cli::{CliError, RunConfig};

/// Half-line nonlinear Schrodinger solver.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured problem and write the solution files.
    Solve {
        config: PathBuf,
        /// Output directory (overrides output.directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suite on the configured grids.
    Verify {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refine both grids dyadically and tabulate errors and observed orders.
    Converge {
        config: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("HALFLINE_NLS_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("HALFLINE_NLS_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let (config, out) = match &cli.command {
        Command::Solve { config, out } | Command::Verify { config, out } | Command::Converge { config, out, .. } => {
            (config, out)
        }
    };
    let cfg = RunConfig::load(config)?;
    let out = out.clone().unwrap_or_else(|| cfg.output.directory.clone());
    match cli.command {
        Command::Solve { .. } => {
            let s = cmd_solve(&cfg, &out)?;
            println!(
                "converged to t = {} in {} iterations ({} window(s), {} halving(s)); outputs in {}",
                s.t_reached,
                s.total_iterates,
                s.report.windows.len(),
                s.halvings,
                out.display()
            );
        }
        Command::Verify { .. } => {
            cmd_verify(&cfg, &out)?;
        }
        Command::Converge { levels, .. } => {
            cmd_converge(&cfg, levels, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
