//! Command-line front end: parse procedure specs, run analyses, emit
//! human-readable tables and machine-readable reports.

mod commands;
mod error;
mod report;
mod spec_file;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "qrepeat",
    version,
    about = "Open quantum dynamics of a qubit: induced channels, repeatability, repeatable dilations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a procedure: channel, CP/TP/unitality, repeatability
    Analyze(commands::analyze::AnalyzeArgs),
    /// Build the repeatable dilation of an admissible coupling procedure
    Dilate(commands::dilate::DilateArgs),
    /// Apply a procedure repeatedly and trace the induced-map drift
    Repeat(commands::repeat::RepeatArgs),
    /// Survey a grid of coupling procedures (built-in verification grid by default)
    Paper(commands::paper::PaperArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is a usage
            // error (exit 1), never a panic.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let result = match &cli.command {
        Command::Analyze(args) => commands::analyze::run(args),
        Command::Dilate(args) => commands::dilate::run(args),
        Command::Repeat(args) => commands::repeat::run(args),
        Command::Paper(args) => commands::paper::run(args),
    };

    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
