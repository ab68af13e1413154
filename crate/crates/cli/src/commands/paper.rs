//! `qrepeat paper`: survey a grid of coupling procedures.
//!
//! The default grid walks the whole landscape — the repeatable `gamma2 = 0`
//! family, non-unital procedures with a first environment component, and
//! unital non-repeatable procedures whose admissible environments get the
//! explicit dilation built and checked. Each default row carries the verdict
//! it must produce; any mismatch fails the run with exit code 2.

use crate::commands::write_file;
use crate::error::{CliError, CliResult};
use crate::report::SurveyRowJson;
use crate::spec_file::{bloch_from_array, PaperSpec};
use clap::Args;
use qrepeat_core::coupling::{run_survey, CouplingParams, SurveyPoint, SurveyRow};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct PaperArgs {
    /// "default" for the built-in grid, or a path to a JSON array of
    /// {gamma2, gamma3, xi} objects
    #[arg(long, default_value = "default")]
    pub grid: String,

    /// Write the survey rows as JSON to this path
    #[arg(long)]
    pub json: Option<PathBuf>,

    /// Classification tolerance for all verdicts
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,

    /// Depth of the dilation repeatability check
    #[arg(long, default_value_t = 3)]
    pub depth: usize,

    /// Seed for the random state sequences of the depth checks
    #[arg(long, default_value_t = 2026)]
    pub seed: u64,
}

struct Expectation {
    repeatable: bool,
    unital: bool,
}

fn expect(repeatable: bool, unital: bool) -> Expectation {
    Expectation { repeatable, unital }
}

fn default_grid() -> Vec<(PaperSpec, Expectation)> {
    let row = |gamma2: f64, gamma3: f64, xi: [f64; 3]| PaperSpec { gamma2, gamma3, xi };
    vec![
        // gamma2 = 0: repeatable and unital for every environment.
        (row(0.0, 0.3, [0.3, 0.4, 0.5]), expect(true, true)),
        (row(0.0, FRAC_PI_4, [0.0, 0.0, 1.0]), expect(true, true)),
        (row(0.0, 1.0, [0.2, -0.3, 0.4]), expect(true, true)),
        (row(0.0, FRAC_PI_2, [0.0, 1.0, 0.0]), expect(true, true)),
        (row(0.0, 2.5, [-0.5, 0.1, 0.6]), expect(true, true)),
        // Both angles on, first environment component nonzero: neither
        // repeatable nor unital.
        (row(FRAC_PI_3, FRAC_PI_4, [0.3, 0.4, 0.5]), expect(false, false)),
        (row(1.0, 2.0, [0.5, 0.0, 0.5]), expect(false, false)),
        (row(2.0, -1.0, [-0.4, 0.2, 0.3]), expect(false, false)),
        // First component zero: unital but still not repeatable.
        (row(FRAC_PI_3, FRAC_PI_4, [0.0, 0.3, 0.4]), expect(false, true)),
        // Admissible environments: the dilation is built and must pass.
        (row(FRAC_PI_3, FRAC_PI_4, [0.0, 0.6, 0.4]), expect(false, true)),
        (row(1.2, 0.7, [0.0, -0.5, 0.5]), expect(false, true)),
        (row(2.0, 1.0, [0.0, 0.3, -0.7]), expect(false, true)),
        (row(0.9, 2.2, [0.0, -0.25, -0.75]), expect(false, true)),
        (row(FRAC_PI_2, FRAC_PI_2, [0.0, 1.0, 0.0]), expect(false, true)),
    ]
}

fn dilation_admissible(xi: &[f64; 3]) -> bool {
    xi[0] == 0.0 && (xi[1].abs() + xi[2].abs() - 1.0).abs() <= 1e-12
}

fn row_matches(row: &SurveyRow, expectation: &Expectation) -> bool {
    let dilation_ok = match &row.dilation {
        Some(d) => {
            d.channel_distance <= 1e-10 && d.repeatable && d.environment_invariance <= 1e-10
        }
        None => true,
    };
    row.repeatable == expectation.repeatable
        && row.unital == expectation.unital
        && row.completely_positive
        && row.trace_preserving
        && row.dilation.is_some() == dilation_admissible(&row.xi)
        && dilation_ok
}

fn render_row(row: &SurveyRow, verdict: Option<bool>) -> String {
    let dilation = match &row.dilation {
        Some(d) => format!(
            "dist {:.1e}, repeatable: {}, env change {:.1e}",
            d.channel_distance, d.repeatable, d.environment_invariance
        ),
        None => "-".to_string(),
    };
    let suffix = match verdict {
        Some(true) => "  [ok]",
        Some(false) => "  [MISMATCH]",
        None => "",
    };
    format!(
        "{:+.4}  {:+.4}  [{:+.2},{:+.2},{:+.2}]  repeatable: {:<5} ({:.1e})  unital: {:<5} ({:.1e})  dilation: {}{}",
        row.gamma2,
        row.gamma3,
        row.xi[0],
        row.xi[1],
        row.xi[2],
        row.repeatable,
        row.repeat_violation,
        row.unital,
        row.unitality_defect,
        dilation,
        suffix,
    )
}

pub fn run(args: &PaperArgs) -> CliResult<()> {
    if args.depth < 1 {
        return Err(CliError::Usage("--depth must be at least 1".into()));
    }

    let (specs, expectations): (Vec<PaperSpec>, Option<Vec<Expectation>>) =
        if args.grid == "default" {
            let (specs, expectations) = default_grid().into_iter().unzip();
            (specs, Some(expectations))
        } else {
            let path = PathBuf::from(&args.grid);
            let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let specs: Vec<PaperSpec> =
                serde_json::from_str(&text).map_err(|e| CliError::Parse {
                    path,
                    detail: e.to_string(),
                })?;
            (specs, None)
        };

    let points = specs
        .iter()
        .map(|s| {
            Ok(SurveyPoint {
                params: CouplingParams::new(s.gamma2, s.gamma3)?,
                xi: bloch_from_array(s.xi, "xi")?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let rows = run_survey(&points, args.tol, args.depth, args.seed)?;

    println!("gamma2   gamma3   xi                   verdicts");
    let mut json_rows = Vec::with_capacity(rows.len());
    let mut mismatches = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let verdict = expectations
            .as_ref()
            .map(|exp| row_matches(row, &exp[i]));
        if verdict == Some(false) {
            mismatches.push(i);
        }
        println!("{}", render_row(row, verdict));
        json_rows.push(SurveyRowJson::from_row(row, verdict));
    }

    if let Some(path) = &args.json {
        let mut text = serde_json::to_string_pretty(&json_rows)
            .map_err(|e| CliError::Validation(format!("cannot serialize rows: {e}")))?;
        text.push('\n');
        write_file(path, &text)?;
    }

    if let Some(exp) = &expectations {
        if mismatches.is_empty() {
            println!("all {} rows match their expected verdicts", exp.len());
        } else {
            return Err(CliError::Validation(format!(
                "{} of {} rows mismatch their expected verdicts (rows {:?})",
                mismatches.len(),
                exp.len(),
                mismatches
            )));
        }
    }
    Ok(())
}
