use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use multideg_cli::{run, Cli};

// A closed pipe (`| head`) is not an error worth reporting.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&report)
            } else {
                serde_json::to_string_pretty(&report.result)
            };
            emit(&out.expect("reports serialize"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                emit(&serde_json::json!({"error": e.name(), "message": e.to_string()}).to_string());
            }
            eprintln!("error: {}: {e}", e.name());
            ExitCode::FAILURE
        }
    }
}
