//! `qrepeat repeat`: apply a procedure over and over without resetting the
//! environment, tracing how far the induced map drifts from the original.

use crate::commands::write_file;
use crate::error::{CliError, CliResult};
use crate::spec_file::{bloch_from_array, load_spec};
use clap::Args;
use qrepeat_core::procedures::induced_map_distance;
use qrepeat_core::states::random_bloch;
use qrepeat_core::DensityMatrix;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct RepeatArgs {
    /// Procedure spec file (JSON; paper, dense, or mixture form)
    pub spec: PathBuf,

    /// Number of applications
    #[arg(long)]
    pub steps: usize,

    /// JSON file with the processed states as Bloch triples `[[r1,r2,r3], ...]`
    #[arg(long, conflicts_with = "seed")]
    pub rho_seq: Option<PathBuf>,

    /// Seed for randomly drawn processed states
    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    /// Write the drift table as CSV to this path (stdout otherwise)
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn run(args: &RepeatArgs) -> CliResult<()> {
    if args.steps < 1 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let spec = load_spec(&args.spec)?;
    let original = spec.to_procedure()?;
    if original.dim_s() != 2 {
        return Err(CliError::Validation(format!(
            "repeat requires a qubit system, got dim_s = {}",
            original.dim_s()
        )));
    }

    let sequence: Vec<DensityMatrix> = match &args.rho_seq {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let triples: Vec<[f64; 3]> =
                serde_json::from_str(&text).map_err(|e| CliError::Parse {
                    path: path.clone(),
                    detail: e.to_string(),
                })?;
            if triples.len() < args.steps {
                return Err(CliError::Validation(format!(
                    "state sequence has {} entries, need {}",
                    triples.len(),
                    args.steps
                )));
            }
            triples[..args.steps]
                .iter()
                .map(|&t| Ok(bloch_from_array(t, "rho")?.to_density()))
                .collect::<CliResult<_>>()?
        }
        None => (0..args.steps)
            .map(|k| random_bloch(args.seed.wrapping_add(k as u64), false).to_density())
            .collect(),
    };

    // 17 significant digits so the CSV round-trips doubles bit-faithfully.
    let mut csv = String::from("step,drift,environment_purity\n");
    let mut current = original.clone();
    for (step, rho) in sequence.iter().enumerate() {
        current = current.advance(rho)?;
        let drift = induced_map_distance(&current, &original)?;
        let purity = current.environment().purity();
        csv.push_str(&format!("{},{:.16e},{:.16e}\n", step + 1, drift, purity));
    }

    match &args.csv {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
