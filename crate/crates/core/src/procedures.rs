//! Physical procedures, repetition without environment reset, and the
//! repeatability decision.
//!
//! A procedure is an environment of dimension `dim_r` in state `xi`, coupled
//! to a system of dimension `dim_s` by a joint unitary `u`. One application
//! sends the system state `rho` to `Tr_R[U (rho ⊗ xi) U†]` and leaves the
//! environment in `Tr_S[U (rho ⊗ xi) U†]`. A procedure is *repeatable* when
//! applying it a second time, without resetting the environment, induces the
//! same map on a fresh system no matter which state was processed first.
//!
//! For a qubit system the decision is exact: both sides of the defining
//! condition are linear in the first state and in the probe state, so checking
//! all 36 pairs drawn from the six Pauli eigenstates decides the condition for
//! every pair of states, up to floating point. For larger systems a seeded
//! sampling mode stands in.

use crate::error::{Error, Result};
use crate::linalg::{verify_unitary, ComplexMatrix};
use crate::states::{
    random_density, spanning_states, trace_distance, BlochVector, DensityMatrix,
};

/// Number of random state sequences used per depth-check beyond the
/// exhaustively covered depths.
const DEPTH_SAMPLE_SEQUENCES: usize = 200;

/// Number of random state pairs used by the sampling fallback of the
/// repeatability check.
const SAMPLED_PAIRS: usize = 200;

/// An environment, a joint unitary, and an environment state.
#[derive(Debug, Clone)]
pub struct Procedure {
    dim_s: usize,
    dim_r: usize,
    u: ComplexMatrix,
    xi: DensityMatrix,
}

/// Outcome of a repeatability check.
///
/// `depth` is the number of applications the check covered when it passed, or
/// the depth at which the worst violation occurred when it failed. The witness
/// pair (processed state, probe state) is present exactly when the check
/// failed and the system is a qubit.
#[derive(Debug, Clone)]
pub struct RepeatabilityReport {
    pub repeatable: bool,
    pub max_violation: f64,
    pub witness: Option<(BlochVector, BlochVector)>,
    pub depth: usize,
}

impl RepeatabilityReport {
    fn from_worst(worst: Violation, tol: f64) -> Self {
        let repeatable = worst.size <= tol;
        Self {
            repeatable,
            max_violation: worst.size,
            witness: if repeatable { None } else { worst.witness },
            depth: worst.depth,
        }
    }
}

#[derive(Clone)]
struct Violation {
    size: f64,
    witness: Option<(BlochVector, BlochVector)>,
    depth: usize,
}

impl Violation {
    fn none(clean_depth: usize) -> Self {
        Self {
            size: 0.0,
            witness: None,
            depth: clean_depth,
        }
    }

    fn update(
        &mut self,
        size: f64,
        witness: Option<(BlochVector, BlochVector)>,
        depth: usize,
    ) {
        if size > self.size {
            self.size = size;
            self.witness = witness;
            self.depth = depth;
        }
    }
}

impl Procedure {
    /// Validates dimensions, unitarity of `u` (at the crate default
    /// tolerance), and that `xi` lives on the environment.
    pub fn new(dim_s: usize, dim_r: usize, u: ComplexMatrix, xi: DensityMatrix) -> Result<Self> {
        Self::with_tolerance(dim_s, dim_r, u, xi, crate::STRUCTURAL_TOL)
    }

    /// Same as [`Procedure::new`] with a caller-chosen unitarity tolerance.
    pub fn with_tolerance(
        dim_s: usize,
        dim_r: usize,
        u: ComplexMatrix,
        xi: DensityMatrix,
        tol: f64,
    ) -> Result<Self> {
        if dim_s == 0 || dim_r == 0 {
            return Err(Error::Dimension("subsystem dimensions must be positive".into()));
        }
        let joint = dim_s * dim_r;
        if u.rows() != joint || u.cols() != joint {
            return Err(Error::Dimension(format!(
                "joint unitary must be {joint}x{joint}, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        if xi.dim() != dim_r {
            return Err(Error::Dimension(format!(
                "environment state has dim {}, expected {dim_r}",
                xi.dim()
            )));
        }
        if !verify_unitary(&u, tol) {
            let defect = crate::linalg::max_abs_diff(
                &(&u.dagger() * &u),
                &ComplexMatrix::identity(joint),
            )
            .unwrap();
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { dim_s, dim_r, u, xi })
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn environment(&self) -> &DensityMatrix {
        &self.xi
    }

    /// Replaces the environment state, keeping dimensions and unitary.
    pub fn with_environment(&self, xi: DensityMatrix) -> Result<Self> {
        if xi.dim() != self.dim_r {
            return Err(Error::Dimension(format!(
                "environment state has dim {}, expected {}",
                xi.dim(),
                self.dim_r
            )));
        }
        Ok(Self {
            xi,
            u: self.u.clone(),
            dim_s: self.dim_s,
            dim_r: self.dim_r,
        })
    }

    fn conjugate_joint(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let joint = m.tensor(self.xi.matrix());
        &(&self.u * &joint) * &self.u.dagger()
    }

    /// Linear extension of the induced map to arbitrary system matrices;
    /// used to assemble Choi matrices.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.dim_s || m.cols() != self.dim_s {
            return Err(Error::Dimension(format!(
                "system operator must be {0}x{0}, got {1}x{2}",
                self.dim_s,
                m.rows(),
                m.cols()
            )));
        }
        self.conjugate_joint(m)
            .partial_trace_right(self.dim_s, self.dim_r)
    }

    /// The induced map on the system: `Tr_R[U (rho ⊗ xi) U†]`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let reduced = self.apply_matrix(rho.matrix())?;
        Ok(DensityMatrix::trusted(reduced))
    }

    /// The environment state after one application: `Tr_S[U (rho ⊗ xi) U†]`.
    pub fn environment_after(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_s {
            return Err(Error::Dimension(format!(
                "system state has dim {}, expected {}",
                rho.dim(),
                self.dim_s
            )));
        }
        let reduced = self
            .conjugate_joint(rho.matrix())
            .partial_trace_left(self.dim_s, self.dim_r)?;
        Ok(DensityMatrix::trusted(reduced))
    }

    /// The procedure as it stands after processing `rho` without resetting:
    /// same environment and unitary, environment state advanced. The
    /// processed system is gone for good, so only the environment marginal
    /// matters for later applications.
    pub fn advance(&self, rho: &DensityMatrix) -> Result<Self> {
        let xi = self.environment_after(rho)?;
        Ok(Self {
            xi,
            u: self.u.clone(),
            dim_s: self.dim_s,
            dim_r: self.dim_r,
        })
    }

    /// Decides repeatability: exactly (spanning-set check) for a qubit
    /// system, by seeded sampling otherwise.
    pub fn repeatability(&self, tol: f64) -> Result<RepeatabilityReport> {
        if self.dim_s == 2 {
            self.repeatability_exact(tol)
        } else {
            self.repeatability_sampled(tol, SAMPLED_PAIRS, 0x5eed)
        }
    }

    fn repeatability_exact(&self, tol: f64) -> Result<RepeatabilityReport> {
        let span = spanning_states();
        let probes: Vec<DensityMatrix> = span.iter().map(|v| v.to_density()).collect();
        let baseline: Vec<DensityMatrix> = probes
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<_>>()?;

        let mut worst = Violation::none(1);
        for (first, first_bloch) in probes.iter().zip(span.iter()) {
            let advanced = self.advance(first)?;
            for ((probe, probe_bloch), base) in
                probes.iter().zip(span.iter()).zip(baseline.iter())
            {
                let after = advanced.apply(probe)?;
                let d = trace_distance(&after, base)?;
                worst.update(d, Some((*first_bloch, *probe_bloch)), 1);
            }
        }
        Ok(RepeatabilityReport::from_worst(worst, tol))
    }

    /// Sampling variant of the repeatability decision: `pairs` seeded random
    /// (processed, probe) state pairs.
    pub fn repeatability_sampled(
        &self,
        tol: f64,
        pairs: usize,
        seed: u64,
    ) -> Result<RepeatabilityReport> {
        let mut worst = Violation::none(1);
        for k in 0..pairs as u64 {
            let first = random_density(self.dim_s, seed.wrapping_add(2 * k));
            let probe = random_density(self.dim_s, seed.wrapping_add(2 * k + 1));
            let after = self.advance(&first)?.apply(&probe)?;
            let base = self.apply(&probe)?;
            let d = trace_distance(&after, &base)?;
            let witness = if self.dim_s == 2 {
                Some((first.bloch()?, probe.bloch()?))
            } else {
                None
            };
            worst.update(d, witness, 1);
        }
        Ok(RepeatabilityReport::from_worst(worst, tol))
    }

    /// Checks repeatability through sequences of up to `n` applications, the
    /// environment advancing each time and never being reset.
    ///
    /// Depths 1 and 2 are covered exhaustively by spanning-set sequences
    /// (qubit systems); greater depths by seeded random sequences, checked
    /// after every step beyond the exhaustive range.
    pub fn repeatability_to_depth(
        &self,
        n: usize,
        tol: f64,
        seed: u64,
    ) -> Result<RepeatabilityReport> {
        if n < 1 {
            return Err(Error::InvalidArgument(
                "depth must be at least 1".into(),
            ));
        }
        let qubit = self.dim_s == 2;
        let probes: Vec<DensityMatrix> = if qubit {
            spanning_states().iter().map(|v| v.to_density()).collect()
        } else {
            (0..6)
                .map(|k| random_density(self.dim_s, seed.wrapping_add(0x9e3779b9 + k)))
                .collect()
        };
        let baseline: Vec<DensityMatrix> = probes
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<_>>()?;

        let mut worst = Violation::none(n);

        let exhaustive_depth = if qubit { n.min(2) } else { 0 };
        if qubit {
            let span = spanning_states();
            let states: Vec<DensityMatrix> = span.iter().map(|v| v.to_density()).collect();
            let mut sequence = vec![0usize; exhaustive_depth];
            loop {
                let mut current = self.clone();
                for (step, &idx) in sequence.iter().enumerate() {
                    current = current.advance(&states[idx])?;
                    let depth = step + 1;
                    // Prefixes shorter than the full sequence repeat across
                    // sequences; only the final depth is new information.
                    if depth == exhaustive_depth {
                        self.compare_against_baseline(
                            &current,
                            &probes,
                            &baseline,
                            depth,
                            Some(span[idx]),
                            &mut worst,
                        )?;
                    }
                }
                // Odometer over 6^exhaustive_depth sequences.
                let mut pos = 0;
                loop {
                    if pos == sequence.len() {
                        break;
                    }
                    sequence[pos] += 1;
                    if sequence[pos] < states.len() {
                        break;
                    }
                    sequence[pos] = 0;
                    pos += 1;
                }
                if pos == sequence.len() {
                    break;
                }
            }
            if exhaustive_depth == 2 && n >= 1 {
                // Depth-1 results come from the 6 one-step prefixes.
                for (idx, state) in states.iter().enumerate() {
                    let advanced = self.advance(state)?;
                    self.compare_against_baseline(
                        &advanced,
                        &probes,
                        &baseline,
                        1,
                        Some(span[idx]),
                        &mut worst,
                    )?;
                }
            }
        }

        if n > exhaustive_depth {
            for t in 0..DEPTH_SAMPLE_SEQUENCES as u64 {
                let mut current = self.clone();
                for step in 1..=n {
                    let state =
                        random_density(self.dim_s, seed.wrapping_add(t * 1009 + step as u64));
                    let state_bloch = if qubit { Some(state.bloch()?) } else { None };
                    current = current.advance(&state)?;
                    if step > exhaustive_depth {
                        self.compare_against_baseline(
                            &current,
                            &probes,
                            &baseline,
                            step,
                            state_bloch,
                            &mut worst,
                        )?;
                    }
                }
            }
        }

        Ok(RepeatabilityReport::from_worst(worst, tol))
    }

    fn compare_against_baseline(
        &self,
        advanced: &Procedure,
        probes: &[DensityMatrix],
        baseline: &[DensityMatrix],
        depth: usize,
        last_state: Option<BlochVector>,
        worst: &mut Violation,
    ) -> Result<()> {
        for (probe, base) in probes.iter().zip(baseline.iter()) {
            let after = advanced.apply(probe)?;
            let d = trace_distance(&after, base)?;
            let witness = match (last_state, self.dim_s) {
                (Some(s), 2) => Some((s, probe.bloch()?)),
                _ => None,
            };
            worst.update(d, witness, depth);
        }
        Ok(())
    }

    /// Applies the given states in order (environment advancing each time)
    /// and records, after each step, how far the induced map has drifted from
    /// the original one.
    pub fn repetition_drift(&self, sequence: &[DensityMatrix]) -> Result<Vec<f64>> {
        let mut drifts = Vec::with_capacity(sequence.len());
        let mut current = self.clone();
        for rho in sequence {
            current = current.advance(rho)?;
            drifts.push(induced_map_distance(&current, self)?);
        }
        Ok(drifts)
    }
}

/// Distance between the maps two procedures induce on a qubit system: the
/// worst trace distance between their outputs over the six spanning states.
/// Zero iff the procedures induce the same map.
pub fn induced_map_distance(a: &Procedure, b: &Procedure) -> Result<f64> {
    if a.dim_s != 2 || b.dim_s != 2 {
        return Err(Error::Dimension(
            "induced-map distance is defined for qubit systems".into(),
        ));
    }
    let mut worst = 0.0f64;
    for v in spanning_states() {
        let probe = v.to_density();
        let d = trace_distance(&a.apply(&probe)?, &b.apply(&probe)?)?;
        worst = worst.max(d);
    }
    Ok(worst)
}
