//! `qrepeat analyze`: channel extraction, CP/TP/unitality, repeatability.

use crate::commands::write_file;
use crate::error::{CliError, CliResult};
use crate::report::build_report;
use crate::spec_file::load_spec;
use clap::Args;
use qrepeat_core::QubitChannel;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Procedure spec file (JSON; paper, dense, or mixture form)
    pub spec: PathBuf,

    /// Classification tolerance for all verdicts
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,

    /// Depth of the multi-application repeatability check
    #[arg(long, default_value_t = 3)]
    pub depth: usize,

    /// Seed for the random state sequences of the depth check
    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    /// Write the analysis report as JSON to this path
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn run(args: &AnalyzeArgs) -> CliResult<()> {
    if args.depth < 1 {
        return Err(CliError::Usage("--depth must be at least 1".into()));
    }
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let spec = load_spec(&args.spec)?;
    let procedure = spec.to_procedure()?;
    if procedure.dim_s() != 2 {
        return Err(CliError::Validation(format!(
            "channel analysis requires a qubit system, got dim_s = {}",
            procedure.dim_s()
        )));
    }

    let channel = QubitChannel::from_procedure(&procedure)?;
    let repeat = procedure.repeatability(args.tol)?;
    let depth_repeat = procedure.repeatability_to_depth(args.depth, args.tol, args.seed)?;

    let report = build_report(
        spec,
        &channel,
        &repeat,
        &depth_repeat,
        args.tol,
        args.depth,
        args.seed,
    );
    print!("{}", report.render_table());

    if let Some(path) = &args.json {
        let mut text = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Validation(format!("cannot serialize report: {e}")))?;
        text.push('\n');
        write_file(path, &text)?;
    }
    Ok(())
}
