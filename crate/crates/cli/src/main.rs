//! `volconj` command-line front end.
//!
//! Exit codes: 0 success, 1 input or domain error, 2 convergence failure,
//! 3 selftest failure.

mod commands;
mod nlist;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{run, Command};
use table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "volconj",
    version,
    about = "Colored Jones asymptotics and Dehn filling invariants of the figure-eight knot"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Acceptance threshold for filling residuals and critical-point gradients.
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = parse_tol)]
    tol: f64,
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, env = "VOLCONJ_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if t > 0.0 && t <= 1e-2 {
        Ok(t)
    } else {
        Err(format!("tol must lie in (0, 1e-2], got {s}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli.command, cli.tol)) {
        Ok(out) => {
            let mut err = std::io::stderr().lock();
            for w in &out.warnings {
                let _ = writeln!(err, "# warning: {w}");
            }
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error worth reporting
            let _ = stdout.write_all(out.table.render(cli.format).as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
