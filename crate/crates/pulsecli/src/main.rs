use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pulsecli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(cli.json).as_bytes());
            let _ = out.flush();
            if let Some(msg) = &report.failure {
                eprintln!("{msg}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
