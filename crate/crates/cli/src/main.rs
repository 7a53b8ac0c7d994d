use std::io::Write;

use clap::Parser;
use opalg_cli::{execute, Cli, Format};

fn main() {
    let cli = Cli::parse();
    let format = cli.global.format;
    let report = execute(cli, &mut std::io::stdin().lock());
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Text => report.to_text(),
    };
    // A closed pipe downstream is not our failure.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    std::process::exit(report.status.exit_code());
}
