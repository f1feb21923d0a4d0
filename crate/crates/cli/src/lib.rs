//! Command-line frontend for the `kloos3` library.

pub mod args;
pub mod commands;
pub mod context;
pub mod scan;
pub mod verify;

use std::io::Write;

use args::{Cli, Command};
use context::{Failure, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<bool, Failure> {
    if let Command::Moduli = cli.command {
        return commands::moduli(out);
    }
    let cfg = RunConfig::from_cli(cli)?;
    let a = cli.a.as_deref();
    match &cli.command {
        Command::Ksum => commands::ksum(&cfg, a, out).map(|_| true),
        Command::Kval => commands::kval_cmd(&cfg, a, out).map(|_| true),
        Command::Scan => scan::scan(&cfg, out).map(|_| true),
        Command::Descent => commands::descent_cmd(&cfg, a, out).map(|_| true),
        Command::Tower { all } => commands::tower_cmd(&cfg, a, cli.n, *all, out),
        Command::Verify => verify::verify(&cfg, out),
        Command::Moduli => unreachable!(),
    }
}

/// Runs one parsed invocation and returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let code = match dispatch(cli, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.to_json());
            EXIT_USAGE
        }
    };
    let _ = out.flush();
    code
}
