use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use tcs_fidelity_cli::commands::{run, Cli};
use tcs_fidelity_cli::report::SCHEMA_VERSION;
use tcs_fidelity_cli::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let result = run(&cli, &mut out, &mut err);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if matches!(e, CliError::Numerical(_)) && cli.wants_json() {
                let diag = serde_json::json!({ "schema": SCHEMA_VERSION, "error": e.to_string() });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&diag).unwrap_or_default());
            }
            let _ = writeln!(err, "error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
