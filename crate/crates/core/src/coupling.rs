//! A concrete two-qubit interaction family and its repeatable dilation.
//!
//! The system qubit couples to an environment qubit through the unitary
//! `U = exp(-i (gamma2 sigma2⊗sigma2 + gamma3 sigma3⊗sigma3) / 2)`. The two
//! generator terms commute, the induced Bloch updates have closed forms, and
//! the family walks the whole repeatability landscape:
//!
//! - `gamma2 = 0` (or `gamma3 = 0`): the procedure is repeatable — the only
//!   environment mean value it depends on is never changed.
//! - both angles nonzero: the procedure is not repeatable, yet whenever the
//!   environment has no first Pauli component the induced map is unital and
//!   therefore still realizable by some repeatable procedure.
//!
//! [`build_repeatable_dilation`] constructs that realization explicitly for
//! environment states with `r1 = 0` and `|r2| + |r3| = 1`: a 16-dimensional
//! environment (a 4-level label register and two qubits) evolving under a
//! projector-controlled unitary that leaves the environment state exactly
//! invariant while inducing the same map on the system.

use crate::channels::{channel_distance, QubitChannel};
use crate::error::{Error, Result};
use crate::linalg::eig::expm_hermitian_generator;
use crate::linalg::{max_abs_diff, Complex64, ComplexMatrix};
use crate::procedures::Procedure;
use crate::states::{sigma, spanning_states, BlochVector, DensityMatrix};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Label-register dimension of the dilation environment.
pub const DILATION_LABEL_DIM: usize = 4;

/// Total dilation environment dimension: label register times two qubits.
pub const DILATION_ENV_DIM: usize = 16;

/// Coupling angles, canonicalized into `(-pi, pi]` on construction (the
/// induced map is 2*pi-periodic in each angle).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    gamma2: f64,
    gamma3: f64,
}

fn canonical_angle(angle: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut a = angle % two_pi;
    if a <= -PI {
        a += two_pi;
    } else if a > PI {
        a -= two_pi;
    }
    a
}

impl CouplingParams {
    pub fn new(gamma2: f64, gamma3: f64) -> Result<Self> {
        if !gamma2.is_finite() || !gamma3.is_finite() {
            return Err(Error::InvalidArgument("coupling angles must be finite".into()));
        }
        Ok(Self {
            gamma2: canonical_angle(gamma2),
            gamma3: canonical_angle(gamma3),
        })
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma3(&self) -> f64 {
        self.gamma3
    }

    /// The 4x4 joint unitary
    /// `exp(-i (gamma2 sigma2⊗sigma2 + gamma3 sigma3⊗sigma3) / 2)`.
    pub fn unitary(&self) -> ComplexMatrix {
        let generator = &sigma(2).tensor(&sigma(2)).scale(c(self.gamma2, 0.0))
            + &sigma(3).tensor(&sigma(3)).scale(c(self.gamma3, 0.0));
        expm_hermitian_generator(&generator, 0.5).expect("generator is Hermitian")
    }

    /// Closed-form Bloch update of the system after one interaction, given
    /// system mean values `s` and environment mean values `x`:
    ///
    /// ```text
    /// r1' = s1 c2 c3 + x1 s2 s3 - s2 x3 c2 s3 + s3 x2 s2 c3
    /// r2' = s2 c3 + s1 x3 s3
    /// r3' = s3 c2 - s1 x2 s2
    /// ```
    ///
    /// with `c_k = cos(gamma_k)`, `s_k = sin(gamma_k)`.
    pub fn system_update(&self, s: &BlochVector, x: &BlochVector) -> BlochVector {
        let (sin2, cos2) = self.gamma2.sin_cos();
        let (sin3, cos3) = self.gamma3.sin_cos();
        let r1 = s.r1 * cos2 * cos3 + x.r1 * sin2 * sin3 - s.r2 * x.r3 * cos2 * sin3
            + s.r3 * x.r2 * sin2 * cos3;
        let r2 = s.r2 * cos3 + s.r1 * x.r3 * sin3;
        let r3 = s.r3 * cos2 - s.r1 * x.r2 * sin2;
        BlochVector::new(r1, r2, r3).expect("closed-form update stays in the Bloch ball")
    }

    /// Closed-form Bloch update of the environment: the same expression with
    /// the two qubits interchanged.
    pub fn environment_update(&self, s: &BlochVector, x: &BlochVector) -> BlochVector {
        self.system_update(x, s)
    }

    /// The single-qubit-environment procedure with environment state `xi`.
    pub fn procedure(&self, xi: &BlochVector) -> Result<Procedure> {
        Procedure::new(2, 2, self.unitary(), xi.to_density())
    }
}

/// Admissible input for the explicit dilation: coupling angles plus an
/// environment Bloch vector with `r1 = 0` and `|r2| + |r3| = 1`. The signs of
/// `r2` and `r3` select the joint eigensector the environment state occupies
/// (components that vanish default to `+1`; their sectors carry zero weight,
/// so the choice is unobservable).
#[derive(Debug, Clone, Copy)]
pub struct DilationSpec {
    pub params: CouplingParams,
    pub xi: BlochVector,
    pub sign2: f64,
    pub sign3: f64,
}

impl DilationSpec {
    pub fn new(params: CouplingParams, xi: BlochVector) -> Result<Self> {
        if xi.r1 != 0.0 {
            return Err(Error::DilationPrecondition(format!(
                "requires r1 = 0, got {}",
                xi.r1
            )));
        }
        if (xi.r2.abs() + xi.r3.abs() - 1.0).abs() > 1e-12 {
            return Err(Error::DilationPrecondition(format!(
                "requires |r2| + |r3| = 1, got {}",
                xi.r2.abs() + xi.r3.abs()
            )));
        }
        Ok(Self {
            params,
            xi,
            sign2: if xi.r2 < 0.0 { -1.0 } else { 1.0 },
            sign3: if xi.r3 < 0.0 { -1.0 } else { 1.0 },
        })
    }
}

/// The constructed dilation: the 16-dimensional-environment procedure, the
/// four sector projectors on the environment, and the sector weights.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub procedure: Procedure,
    pub projectors: Vec<ComplexMatrix>,
    pub weights: [f64; 4],
}

impl Dilation {
    /// Worst-case change of the environment state over one application,
    /// probed on the spanning states. Exact invariance (up to rounding) is
    /// what makes the dilation repeatable at every depth.
    pub fn environment_invariance(&self) -> Result<f64> {
        let xi = self.procedure.environment();
        let mut worst = 0.0f64;
        for v in spanning_states() {
            let after = self.procedure.environment_after(&v.to_density())?;
            worst = worst.max(max_abs_diff(after.matrix(), xi.matrix())?);
        }
        Ok(worst)
    }
}

/// Builds the repeatable procedure on the enlarged environment that induces
/// the same map as `spec.params` with environment `spec.xi`.
///
/// The environment is a 4-level label register tensored with two qubits
/// carrying Pauli operators `Y` (second component) and `P` (third component).
/// Sector `j` is the label state `|j>` joined to the eigenspace where `Y2`
/// has eigenvalue `sign2` and `P3` has eigenvalue `sign3`; within sector `j`
/// the joint unitary acts as one of the four ordered exponential products of
/// the two coupling factors, and outside all four sectors it acts as the
/// identity. The environment state is the weighted sum of the sector
/// eigenvectors, with weights `|r3|/2` on the first two sectors and `|r2|/2`
/// on the last two; it commutes with every sector projector, so one
/// application leaves it exactly unchanged.
pub fn build_repeatable_dilation(spec: &DilationSpec) -> Result<Dilation> {
    let gamma2 = spec.params.gamma2();
    let gamma3 = spec.params.gamma3();

    let id2 = ComplexMatrix::identity(2);
    let id_label = ComplexMatrix::identity(DILATION_LABEL_DIM);

    // Coupling generators on system ⊗ (label ⊗ Y ⊗ P).
    let gen_y = sigma(2).tensor(&id_label.tensor(&sigma(2)).tensor(&id2));
    let gen_p = sigma(3).tensor(&id_label.tensor(&id2).tensor(&sigma(3)));

    let exp_y_minus = expm_hermitian_generator(&gen_y, gamma2 / 2.0)?;
    let exp_y_plus = expm_hermitian_generator(&gen_y, -gamma2 / 2.0)?;
    let exp_p_minus = expm_hermitian_generator(&gen_p, gamma3 / 2.0)?;
    let exp_p_plus = expm_hermitian_generator(&gen_p, -gamma3 / 2.0)?;

    // The four ordered products, paired with sectors in listed order.
    let sector_unitaries = [
        &exp_y_minus * &exp_p_minus,
        &exp_y_plus * &exp_p_minus,
        &exp_p_minus * &exp_y_minus,
        &exp_p_plus * &exp_y_minus,
    ];

    // Sector projectors on the environment.
    let proj_y = &(id2.scale(c(0.5, 0.0))) + &sigma(2).scale(c(0.5 * spec.sign2, 0.0));
    let proj_p = &(id2.scale(c(0.5, 0.0))) + &sigma(3).scale(c(0.5 * spec.sign3, 0.0));
    let mut projectors = Vec::with_capacity(4);
    for j in 0..DILATION_LABEL_DIM {
        let mut label = ComplexMatrix::zeros(DILATION_LABEL_DIM, DILATION_LABEL_DIM);
        label[(j, j)] = c(1.0, 0.0);
        projectors.push(label.tensor(&proj_y).tensor(&proj_p));
    }

    // U = sum_j U_j (I ⊗ E_j) + identity off the four sectors.
    let joint_dim = 2 * DILATION_ENV_DIM;
    let mut u = ComplexMatrix::zeros(joint_dim, joint_dim);
    let mut covered = ComplexMatrix::zeros(joint_dim, joint_dim);
    for (sector_u, e) in sector_unitaries.iter().zip(&projectors) {
        let lifted = id2.tensor(e);
        u = &u + &(sector_u * &lifted);
        covered = &covered + &lifted;
    }
    u = &u + &(&ComplexMatrix::identity(joint_dim) - &covered);

    // Environment state: weighted sector eigenvectors. The Y eigenvector for
    // eigenvalue sign2 is (1, i*sign2)/sqrt(2); the P eigenvector for sign3
    // is a pole state.
    let weights = [
        spec.xi.r3.abs() / 2.0,
        spec.xi.r3.abs() / 2.0,
        spec.xi.r2.abs() / 2.0,
        spec.xi.r2.abs() / 2.0,
    ];
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let y_vec = [c(inv_sqrt2, 0.0), c(0.0, spec.sign2 * inv_sqrt2)];
    let p_vec = if spec.sign3 > 0.0 {
        [c(1.0, 0.0), c(0.0, 0.0)]
    } else {
        [c(0.0, 0.0), c(1.0, 0.0)]
    };
    let mut xi_matrix = ComplexMatrix::zeros(DILATION_ENV_DIM, DILATION_ENV_DIM);
    for (j, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let mut sector_vec = vec![c(0.0, 0.0); DILATION_ENV_DIM];
        for (y, &yv) in y_vec.iter().enumerate() {
            for (p, &pv) in p_vec.iter().enumerate() {
                sector_vec[j * 4 + y * 2 + p] = yv * pv;
            }
        }
        for a in 0..DILATION_ENV_DIM {
            for b in 0..DILATION_ENV_DIM {
                xi_matrix[(a, b)] += sector_vec[a] * sector_vec[b].conj() * c(w, 0.0);
            }
        }
    }
    let xi = DensityMatrix::new(xi_matrix)?;

    Ok(Dilation {
        procedure: Procedure::new(2, DILATION_ENV_DIM, u, xi)?,
        projectors,
        weights,
    })
}

/// One grid point of the survey: coupling angles plus an environment state.
#[derive(Debug, Clone, Copy)]
pub struct SurveyPoint {
    pub params: CouplingParams,
    pub xi: BlochVector,
}

/// Dilation results attached to a survey row when the preconditions hold.
#[derive(Debug, Clone)]
pub struct DilationOutcome {
    pub channel_distance: f64,
    pub repeatable: bool,
    pub max_violation: f64,
    pub environment_invariance: f64,
}

/// One analyzed grid point.
#[derive(Debug, Clone)]
pub struct SurveyRow {
    pub gamma2: f64,
    pub gamma3: f64,
    pub xi: [f64; 3],
    pub repeatable: bool,
    pub repeat_violation: f64,
    pub unital: bool,
    pub unitality_defect: f64,
    pub completely_positive: bool,
    pub trace_preserving: bool,
    pub bloch_matrix: [[f64; 3]; 3],
    pub translation: [f64; 3],
    pub dilation: Option<DilationOutcome>,
}

/// Analyzes every grid point: repeatability and unitality verdicts, the
/// channel in affine form, and — where the dilation preconditions hold — the
/// dilation's channel-equality distance, depth-checked repeatability, and
/// environment invariance. Rows are deterministic given the seed.
pub fn run_survey(
    points: &[SurveyPoint],
    tol: f64,
    dilation_depth: usize,
    seed: u64,
) -> Result<Vec<SurveyRow>> {
    let mut rows = Vec::with_capacity(points.len());
    for point in points {
        let procedure = point.params.procedure(&point.xi)?;
        let report = procedure.repeatability(tol)?;
        let channel = QubitChannel::from_procedure(&procedure)?;

        let admissible = point.xi.r1 == 0.0
            && (point.xi.r2.abs() + point.xi.r3.abs() - 1.0).abs() <= 1e-12;
        let dilation = if admissible {
            let built = build_repeatable_dilation(&DilationSpec::new(point.params, point.xi)?)?;
            let dilated_channel = QubitChannel::from_procedure(&built.procedure)?;
            let depth_report = built
                .procedure
                .repeatability_to_depth(dilation_depth, tol, seed)?;
            Some(DilationOutcome {
                channel_distance: channel_distance(&dilated_channel, &channel),
                repeatable: depth_report.repeatable,
                max_violation: depth_report.max_violation,
                environment_invariance: built.environment_invariance()?,
            })
        } else {
            None
        };

        rows.push(SurveyRow {
            gamma2: point.params.gamma2(),
            gamma3: point.params.gamma3(),
            xi: point.xi.as_array(),
            repeatable: report.repeatable,
            repeat_violation: report.max_violation,
            unital: channel.is_unital(tol),
            unitality_defect: channel.unitality_defect(),
            completely_positive: channel.is_completely_positive(tol),
            trace_preserving: channel.is_trace_preserving(tol),
            bloch_matrix: *channel.bloch_matrix(),
            translation: *channel.translation(),
            dilation,
        });
    }
    Ok(rows)
}
