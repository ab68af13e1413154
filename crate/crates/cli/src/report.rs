//! Machine-readable reports with fixed key sets.

use crate::spec_file::SpecFile;
use qrepeat_core::coupling::SurveyRow;
use qrepeat_core::{QubitChannel, RepeatabilityReport};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub channel: ChannelSection,
    pub flags: FlagsSection,
    pub violations: ViolationsSection,
    pub provenance: Provenance,
}

#[derive(Debug, Serialize)]
pub struct ChannelSection {
    pub m: [[f64; 3]; 3],
    pub t: [f64; 3],
    pub choi_eigenvalues: [f64; 4],
}

#[derive(Debug, Serialize)]
pub struct FlagsSection {
    pub cp: bool,
    pub tp: bool,
    pub unital: bool,
    pub repeatable: bool,
    pub repeatable_to_depth: bool,
}

#[derive(Debug, Serialize)]
pub struct ViolationsSection {
    pub cp: f64,
    pub tp: f64,
    pub unital: f64,
    pub repeatable: f64,
    pub repeatable_to_depth: f64,
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub input: SpecFile,
    pub version: &'static str,
    pub tol: f64,
    pub depth: usize,
    pub seed: u64,
}

pub fn build_report(
    input: SpecFile,
    channel: &QubitChannel,
    repeat: &RepeatabilityReport,
    depth_repeat: &RepeatabilityReport,
    tol: f64,
    depth: usize,
    seed: u64,
) -> AnalysisReport {
    let eigs = channel.choi_eigenvalues();
    let violations = ViolationsSection {
        cp: channel.cp_defect(),
        tp: channel.tp_defect(),
        unital: channel.unitality_defect(),
        repeatable: repeat.max_violation,
        repeatable_to_depth: depth_repeat.max_violation,
    };
    // Flags restate the violations against the configured tolerance.
    let flags = FlagsSection {
        cp: violations.cp <= tol,
        tp: violations.tp <= tol,
        unital: violations.unital <= tol,
        repeatable: violations.repeatable <= tol,
        repeatable_to_depth: violations.repeatable_to_depth <= tol,
    };
    AnalysisReport {
        channel: ChannelSection {
            m: *channel.bloch_matrix(),
            t: *channel.translation(),
            choi_eigenvalues: [eigs[0], eigs[1], eigs[2], eigs[3]],
        },
        flags,
        violations,
        provenance: Provenance {
            input,
            version: env!("CARGO_PKG_VERSION"),
            tol,
            depth,
            seed,
        },
    }
}

impl AnalysisReport {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let m = &self.channel.m;
        out.push_str(&format!("spec form: {}\n", self.provenance.input.form_name()));
        out.push_str("channel (Bloch affine form):\n");
        for (row, label) in m.iter().zip(["M = ", "    ", "    "]) {
            out.push_str(&format!(
                "  {label}[ {:+.12}  {:+.12}  {:+.12} ]\n",
                row[0], row[1], row[2]
            ));
        }
        let t = &self.channel.t;
        out.push_str(&format!(
            "  t =   [ {:+.12}  {:+.12}  {:+.12} ]\n",
            t[0], t[1], t[2]
        ));
        let e = &self.channel.choi_eigenvalues;
        out.push_str(&format!(
            "  choi eigenvalues: {:+.12}, {:+.12}, {:+.12}, {:+.12}\n",
            e[0], e[1], e[2], e[3]
        ));
        out.push_str(&format!(
            "flags (tol {:.1e}): cp={} tp={} unital={} repeatable={} repeatable_to_depth({})={}\n",
            self.provenance.tol,
            self.flags.cp,
            self.flags.tp,
            self.flags.unital,
            self.flags.repeatable,
            self.provenance.depth,
            self.flags.repeatable_to_depth,
        ));
        out.push_str(&format!(
            "violations: cp={:.3e} tp={:.3e} unital={:.3e} repeatable={:.3e} depth={:.3e}\n",
            self.violations.cp,
            self.violations.tp,
            self.violations.unital,
            self.violations.repeatable,
            self.violations.repeatable_to_depth,
        ));
        out
    }
}

/// JSON mirror of a survey row; keys are fixed, absent sections are null.
#[derive(Debug, Serialize)]
pub struct SurveyRowJson {
    pub gamma2: f64,
    pub gamma3: f64,
    pub xi: [f64; 3],
    pub repeatable: bool,
    pub repeat_violation: f64,
    pub unital: bool,
    pub unitality_defect: f64,
    pub cp: bool,
    pub tp: bool,
    pub m: [[f64; 3]; 3],
    pub t: [f64; 3],
    pub dilation: Option<DilationJson>,
    pub matches_expectation: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct DilationJson {
    pub channel_distance: f64,
    pub repeatable: bool,
    pub max_violation: f64,
    pub environment_invariance: f64,
}

impl SurveyRowJson {
    pub fn from_row(row: &SurveyRow, matches_expectation: Option<bool>) -> Self {
        Self {
            gamma2: row.gamma2,
            gamma3: row.gamma3,
            xi: row.xi,
            repeatable: row.repeatable,
            repeat_violation: row.repeat_violation,
            unital: row.unital,
            unitality_defect: row.unitality_defect,
            cp: row.completely_positive,
            tp: row.trace_preserving,
            m: row.bloch_matrix,
            t: row.translation,
            dilation: row.dilation.as_ref().map(|d| DilationJson {
                channel_distance: d.channel_distance,
                repeatable: d.repeatable,
                max_violation: d.max_violation,
                environment_invariance: d.environment_invariance,
            }),
            matches_expectation,
        }
    }
}
