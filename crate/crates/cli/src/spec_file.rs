//! Procedure spec files: three mutually exclusive JSON forms.
//!
//! ```json
//! {"paper":   {"gamma2": 1.0472, "gamma3": 0.7854, "xi": [0.0, 0.6, 0.4]}}
//! {"dense":   {"dim_s": 2, "dim_r": 2, "unitary": [[[re, im], ...], ...],
//!              "xi": [[[re, im], ...], ...]}}
//! {"mixture": {"weights": [0.5, 0.5], "unitaries": [[[[re, im], [re, im]],
//!              [[re, im], [re, im]]], ...]}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs; matrices are nested row-major
//! arrays. Every invariant the referenced objects carry (unitarity, state
//! validity, weight normalization) is re-verified on load at `LOAD_TOL`.

use crate::error::{CliError, CliResult};
use qrepeat_core::coupling::CouplingParams;
use qrepeat_core::states::{BlochVector, DensityMatrix};
use qrepeat_core::{Complex64, ComplexMatrix, Procedure, UnitaryMixture};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Tolerance for the invariant checks re-run when a spec file is loaded.
pub const LOAD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecFile {
    Paper(PaperSpec),
    Dense(DenseSpec),
    Mixture(MixtureSpec),
}

/// Coupling angles plus the environment Bloch vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperSpec {
    pub gamma2: f64,
    pub gamma3: f64,
    pub xi: [f64; 3],
}

/// Raw joint unitary and environment density matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseSpec {
    pub dim_s: usize,
    pub dim_r: usize,
    pub unitary: Vec<Vec<[f64; 2]>>,
    pub xi: Vec<Vec<[f64; 2]>>,
}

/// Weights and 2x2 unitaries of a mixture-of-unitaries channel.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureSpec {
    pub weights: Vec<f64>,
    pub unitaries: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn load_spec(path: &Path) -> CliResult<SpecFile> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })
}

pub fn matrix_to_nested(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m[(i, j)];
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

pub fn nested_to_matrix(rows: &[Vec<[f64; 2]>], what: &str) -> CliResult<ComplexMatrix> {
    if rows.is_empty() {
        return Err(CliError::Validation(format!("{what}: empty matrix")));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Validation(format!("{what}: ragged rows")));
    }
    let entries: Vec<Complex64> = rows
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::new(rows.len(), cols, entries)
        .map_err(|e| CliError::Validation(format!("{what}: {e}")))
}

/// Validates a Bloch triple at the load tolerance, clamping small overshoot.
pub fn bloch_from_array(xi: [f64; 3], what: &str) -> CliResult<BlochVector> {
    let norm = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
    if norm > 1.0 + LOAD_TOL {
        return Err(CliError::Validation(format!(
            "{what}: Bloch norm exceeds 1 (norm {norm})"
        )));
    }
    let scale = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    BlochVector::new(xi[0] * scale, xi[1] * scale, xi[2] * scale)
        .map_err(|e| CliError::Validation(format!("{what}: {e}")))
}

impl SpecFile {
    /// Builds the procedure the file describes, re-verifying all invariants
    /// at [`LOAD_TOL`].
    pub fn to_procedure(&self) -> CliResult<Procedure> {
        match self {
            SpecFile::Paper(p) => {
                let params = CouplingParams::new(p.gamma2, p.gamma3)?;
                let xi = bloch_from_array(p.xi, "xi")?;
                Ok(params.procedure(&xi)?)
            }
            SpecFile::Dense(d) => {
                let u = nested_to_matrix(&d.unitary, "unitary")?;
                let xi_matrix = nested_to_matrix(&d.xi, "xi")?;
                let xi = DensityMatrix::with_tolerance(xi_matrix, LOAD_TOL, LOAD_TOL)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                Procedure::with_tolerance(d.dim_s, d.dim_r, u, xi, LOAD_TOL)
                    .map_err(|e| CliError::Validation(e.to_string()))
            }
            SpecFile::Mixture(m) => {
                let unitaries = m
                    .unitaries
                    .iter()
                    .map(|u| nested_to_matrix(u, "mixture unitary"))
                    .collect::<CliResult<Vec<_>>>()?;
                let mixture =
                    UnitaryMixture::with_tolerance(m.weights.clone(), unitaries, LOAD_TOL)?;
                Ok(mixture.to_procedure()?)
            }
        }
    }

    pub fn form_name(&self) -> &'static str {
        match self {
            SpecFile::Paper(_) => "paper",
            SpecFile::Dense(_) => "dense",
            SpecFile::Mixture(_) => "mixture",
        }
    }
}

/// Dense-form spec capturing an arbitrary procedure, for writing.
pub fn dense_from_procedure(p: &Procedure) -> SpecFile {
    SpecFile::Dense(DenseSpec {
        dim_s: p.dim_s(),
        dim_r: p.dim_r(),
        unitary: matrix_to_nested(p.unitary()),
        xi: matrix_to_nested(p.environment().matrix()),
    })
}
