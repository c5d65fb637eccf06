use std::io::Write;
use std::process::ExitCode;

use casorati_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    match run(cli, &mut out, &mut err) {
        Ok(outcome) => {
            let _ = out.flush();
            ExitCode::from(outcome.code() as u8)
        }
        Err(e) => {
            let _ = out.flush();
            let _ = writeln!(err, "error: {e:#}");
            ExitCode::from(1)
        }
    }
}
