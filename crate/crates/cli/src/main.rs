use std::process::ExitCode;

use clap::Parser;
use isogenous_cli::report::EXIT_INVALID_CONFIG;
use isogenous_cli::{run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.command.config().and_then(run);
    let (report, text) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INVALID_CONFIG as u8);
        }
    };
    let rendered = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => format!(
            "{text}status: {:?} (exit {})\n",
            report.summary.status, report.summary.exit_code
        ),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(EXIT_INVALID_CONFIG as u8);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(report.summary.exit_code as u8)
}
