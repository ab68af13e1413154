//! `qrepeat dilate`: build the repeatable dilation of an admissible coupling
//! spec and write it out as a dense-form procedure.

use crate::commands::write_file;
use crate::error::{CliError, CliResult};
use crate::spec_file::{bloch_from_array, dense_from_procedure, load_spec, SpecFile};
use clap::Args;
use qrepeat_core::channels::channel_distance;
use qrepeat_core::coupling::{build_repeatable_dilation, CouplingParams, DilationSpec};
use qrepeat_core::QubitChannel;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct DilateArgs {
    /// Coupling spec file (JSON, paper form)
    pub spec: PathBuf,

    /// Write the dilation as a dense-form spec to this path
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Classification tolerance for the repeatability verdict
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

pub fn run(args: &DilateArgs) -> CliResult<()> {
    let spec = load_spec(&args.spec)?;
    let paper = match &spec {
        SpecFile::Paper(p) => p,
        other => {
            return Err(CliError::Validation(format!(
                "dilate requires the paper spec form, got {}",
                other.form_name()
            )))
        }
    };
    let params = CouplingParams::new(paper.gamma2, paper.gamma3)?;
    let xi = bloch_from_array(paper.xi, "xi")?;

    let dilation_spec = DilationSpec::new(params, xi).map_err(|_| {
        CliError::Validation("requires xi_1 = 0 and |xi_2| + |xi_3| = 1".into())
    })?;
    let dilation = build_repeatable_dilation(&dilation_spec)?;

    let target = QubitChannel::from_procedure(&params.procedure(&xi)?)?;
    let realized = QubitChannel::from_procedure(&dilation.procedure)?;
    let distance = channel_distance(&realized, &target);
    let report = dilation.procedure.repeatability(args.tol)?;
    let invariance = dilation.environment_invariance()?;

    println!(
        "dilation: environment dim {}, sector weights [{:.6}, {:.6}, {:.6}, {:.6}]",
        dilation.procedure.dim_r(),
        dilation.weights[0],
        dilation.weights[1],
        dilation.weights[2],
        dilation.weights[3],
    );
    println!("channel distance to single-qubit procedure: {distance:.3e}");
    println!(
        "repeatable: {} (violation {:.3e}, environment change {:.3e})",
        report.repeatable, report.max_violation, invariance
    );

    if let Some(path) = &args.out {
        let dense = dense_from_procedure(&dilation.procedure);
        let mut text = serde_json::to_string_pretty(&dense)
            .map_err(|e| CliError::Validation(format!("cannot serialize spec: {e}")))?;
        text.push('\n');
        write_file(path, &text)?;
        println!("dense spec written to {}", path.display());
    }
    Ok(())
}
