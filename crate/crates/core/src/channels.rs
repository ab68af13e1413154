//! The induced map on a qubit as a mathematical object.
//!
//! A qubit channel is carried in two joined representations: the affine Bloch
//! form `v -> M v + t` (a real 3x3 matrix plus a translation) and the Choi
//! matrix (4x4, normalized to unit trace, input slot first). The two are
//! consistent by construction; the Choi matrix settles complete positivity,
//! the affine form settles unitality and distances.
//!
//! Unital channels decompose into mixtures of unitaries. The constructive
//! route: a signed SVD of `M` with special-orthogonal factors, lifted through
//! the rotation-spin covering map, reduces the channel to a Pauli channel
//! whose probabilities follow from the signed singular values by a 4x4 linear
//! system. Decompositions are non-unique; they are validated by
//! reconstruction distance, never term by term.

use crate::error::{Error, Result};
use crate::linalg::eig::hermitian_eig;
use crate::linalg::{max_abs_diff, verify_unitary, Complex64, ComplexMatrix};
use crate::procedures::Procedure;
use crate::states::{spanning_states, BlochVector, DensityMatrix, PauliBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A qubit channel: affine Bloch action plus unit-trace Choi matrix.
#[derive(Debug, Clone)]
pub struct QubitChannel {
    bloch_matrix: [[f64; 3]; 3],
    translation: [f64; 3],
    choi: ComplexMatrix,
}

impl QubitChannel {
    /// Builds the channel from any Hermiticity-preserving linear map on 2x2
    /// matrices, given as a closure. Both representations are extracted from
    /// the images of the Pauli basis.
    pub fn from_linear_map(
        mut map: impl FnMut(&ComplexMatrix) -> Result<ComplexMatrix>,
    ) -> Result<Self> {
        let basis = PauliBasis::standard();
        let mut images = Vec::with_capacity(4);
        for j in 0..4 {
            let image = map(basis.element(j))?;
            if image.rows() != 2 || image.cols() != 2 {
                return Err(Error::Dimension(format!(
                    "channel images must be 2x2, got {}x{}",
                    image.rows(),
                    image.cols()
                )));
            }
            images.push(image);
        }

        let mut translation = [0.0; 3];
        let mut bloch_matrix = [[0.0; 3]; 3];
        for j in 0..3 {
            translation[j] = 0.5 * (basis.element(j + 1) * &images[0]).trace().re;
            for k in 0..3 {
                bloch_matrix[j][k] = 0.5 * (basis.element(j + 1) * &images[k + 1]).trace().re;
            }
        }

        // Images of the matrix units from the Pauli images.
        let half = c(0.5, 0.0);
        let e00 = (&images[0] + &images[3]).scale(half);
        let e11 = (&images[0] - &images[3]).scale(half);
        let e01 = (&images[1] + &images[2].scale(c(0.0, 1.0))).scale(half);
        let e10 = (&images[1] - &images[2].scale(c(0.0, 1.0))).scale(half);

        // choi = (1/2) sum_ij |i><j| ⊗ map(|i><j|), input slot first.
        let mut choi = ComplexMatrix::zeros(4, 4);
        for (i, j, block) in [(0, 0, &e00), (0, 1, &e01), (1, 0, &e10), (1, 1, &e11)] {
            for a in 0..2 {
                for b in 0..2 {
                    choi[(2 * i + a, 2 * j + b)] = half * block[(a, b)];
                }
            }
        }
        let hermiticity = max_abs_diff(&choi, &choi.dagger()).unwrap();
        if hermiticity > 1e-10 {
            return Err(Error::NotHermitian(hermiticity));
        }

        Ok(Self {
            bloch_matrix,
            translation,
            choi,
        })
    }

    /// The channel induced by a procedure on a qubit system.
    pub fn from_procedure(p: &Procedure) -> Result<Self> {
        if p.dim_s() != 2 {
            return Err(Error::Dimension(format!(
                "channel extraction needs a qubit system, dim_s = {}",
                p.dim_s()
            )));
        }
        Self::from_linear_map(|m| p.apply_matrix(m))
    }

    pub fn identity() -> Self {
        Self::from_linear_map(|m| Ok(m.clone())).expect("identity map is well formed")
    }

    pub fn bloch_matrix(&self) -> &[[f64; 3]; 3] {
        &self.bloch_matrix
    }

    pub fn translation(&self) -> &[f64; 3] {
        &self.translation
    }

    /// Unit-trace Choi matrix, input slot first.
    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// Affine action on a raw Bloch triple, no norm validation.
    pub fn affine_image(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.bloch_matrix;
        let t = &self.translation;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2] + t[0],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2] + t[1],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2] + t[2],
        ]
    }

    /// The channel applied to a qubit state in Bloch form.
    pub fn apply(&self, v: &BlochVector) -> Result<BlochVector> {
        let [r1, r2, r3] = self.affine_image(v.as_array());
        BlochVector::new(r1, r2, r3)
    }

    /// The channel applied through the Choi matrix:
    /// `2 Tr_in[choi (m^T ⊗ I)]`. Used to cross-check the affine form.
    pub fn apply_via_choi(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::Dimension("input must be 2x2".into()));
        }
        let contracted = &self.choi * &m.transpose().tensor(&ComplexMatrix::identity(2));
        Ok(contracted
            .partial_trace_left(2, 2)?
            .scale(c(2.0, 0.0)))
    }

    /// Choi spectrum, ascending.
    pub fn choi_eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.choi, 1e-8)
            .expect("Choi matrix is Hermitian by construction")
            .values
    }

    /// How far below zero the Choi spectrum dips (0 when PSD).
    pub fn cp_defect(&self) -> f64 {
        (-self.choi_eigenvalues()[0]).max(0.0)
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        self.choi_eigenvalues()[0] >= -tol
    }

    /// Max-norm deviation of the Choi input marginal from I/2, which encodes
    /// trace preservation.
    pub fn tp_defect(&self) -> f64 {
        let marginal = self
            .choi
            .partial_trace_right(2, 2)
            .expect("choi is 4x4")
            .scale(c(2.0, 0.0));
        max_abs_diff(&marginal, &ComplexMatrix::identity(2)).unwrap()
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.tp_defect() <= tol
    }

    /// Euclidean norm of the Bloch translation; zero iff unital.
    pub fn unitality_defect(&self) -> f64 {
        let t = &self.translation;
        (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt()
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.unitality_defect() <= tol
    }

    /// Checks that the affine form and the Choi matrix describe the same map
    /// on the spanning states.
    pub fn validate_consistency(&self, tol: f64) -> Result<()> {
        for v in spanning_states() {
            let affine = self.affine_image(v.as_array());
            let via_choi = self.apply_via_choi(v.to_density().matrix())?;
            let rho = DensityMatrix::trusted(via_choi);
            let w = rho.bloch()?;
            let dist = ((affine[0] - w.r1).powi(2)
                + (affine[1] - w.r2).powi(2)
                + (affine[2] - w.r3).powi(2))
            .sqrt();
            if dist > tol {
                return Err(Error::InvalidArgument(format!(
                    "affine and Choi actions disagree by {dist:.3e}"
                )));
            }
        }
        Ok(())
    }
}

/// Distance between two qubit channels: the worst trace distance between
/// their outputs over the six spanning states. Zero iff the affine maps
/// agree; symmetric; satisfies the triangle inequality.
pub fn channel_distance(a: &QubitChannel, b: &QubitChannel) -> f64 {
    let mut worst = 0.0f64;
    for v in spanning_states() {
        let x = a.affine_image(v.as_array());
        let y = b.affine_image(v.as_array());
        let d = 0.5
            * ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
        worst = worst.max(d);
    }
    worst
}

/// Convex mixture of 2x2 unitaries: weights `p_k > 0` summing to 1.
#[derive(Debug, Clone)]
pub struct UnitaryMixture {
    weights: Vec<f64>,
    unitaries: Vec<ComplexMatrix>,
}

impl UnitaryMixture {
    pub fn new(weights: Vec<f64>, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(weights, unitaries, crate::STRUCTURAL_TOL)
    }

    /// Validates with a caller-chosen tolerance for the weight normalization
    /// and unitarity checks; weights are renormalized to an exact unit sum.
    pub fn with_tolerance(
        weights: Vec<f64>,
        unitaries: Vec<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self> {
        if weights.is_empty() || weights.len() != unitaries.len() {
            return Err(Error::InvalidMixture(format!(
                "{} weights for {} unitaries",
                weights.len(),
                unitaries.len()
            )));
        }
        if weights.iter().any(|&p| p.is_nan() || p <= 0.0) {
            return Err(Error::InvalidMixture("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol.max(1e-12) {
            return Err(Error::InvalidMixture(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let weights = weights.iter().map(|&p| p / total).collect();
        for u in &unitaries {
            if u.rows() != 2 || u.cols() != 2 || !verify_unitary(u, tol) {
                return Err(Error::InvalidMixture("each term must be a 2x2 unitary".into()));
            }
        }
        Ok(Self { weights, unitaries })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Seeded random mixture: Haar-random SU(2) terms with normalized uniform
    /// weights. Handy for sampling unital channels.
    pub fn random(terms: usize, seed: u64) -> Self {
        assert!(terms >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        let unitaries = (0..terms)
            .map(|_| {
                // A unit quaternion drawn from the 3-sphere is Haar on SU(2).
                let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                su2_from_quaternion(q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm)
            })
            .collect();
        Self { weights, unitaries }
    }

    /// The channel `rho -> sum_k p_k U_k rho U_k†`; always unital.
    pub fn to_channel(&self) -> QubitChannel {
        QubitChannel::from_linear_map(|m| {
            let mut acc = ComplexMatrix::zeros(2, 2);
            for (p, u) in self.weights.iter().zip(&self.unitaries) {
                let term = &(u * m) * &u.dagger();
                acc = &acc + &term.scale(c(*p, 0.0));
            }
            Ok(acc)
        })
        .expect("mixture terms are 2x2 unitaries")
    }

    /// The canonical repeatable procedure realizing the mixture: a register
    /// environment of dimension `k`, the controlled unitary
    /// `U = sum_k U_k ⊗ |k><k|`, and the environment state `diag(p)`. The
    /// environment state commutes with every register projector, so one
    /// application leaves it exactly unchanged.
    pub fn to_procedure(&self) -> Result<Procedure> {
        let k = self.len();
        let mut u = ComplexMatrix::zeros(2 * k, 2 * k);
        for (idx, term) in self.unitaries.iter().enumerate() {
            let mut marker = ComplexMatrix::zeros(k, k);
            marker[(idx, idx)] = c(1.0, 0.0);
            u = &u + &term.tensor(&marker);
        }
        let xi = ComplexMatrix::diagonal(
            &self
                .weights
                .iter()
                .map(|&p| c(p, 0.0))
                .collect::<Vec<_>>(),
        );
        Procedure::new(2, k, u, DensityMatrix::new(xi)?)
    }
}

/// Decomposes a unital completely positive qubit channel into a mixture of
/// at most four unitaries whose channel reproduces the input.
///
/// Zero-weight terms are dropped; weights in `[-tol, 0)` are treated as
/// rounding at the CP boundary, clamped and renormalized. A weight below
/// `-tol` means the channel was not completely positive after all.
pub fn decompose_unital(channel: &QubitChannel, tol: f64) -> Result<UnitaryMixture> {
    if !channel.is_unital(tol) {
        return Err(Error::NotUnital(channel.unitality_defect()));
    }
    if !channel.is_completely_positive(tol) {
        return Err(Error::NotCompletelyPositive(format!(
            "Choi eigenvalue {:.3e}",
            channel.choi_eigenvalues()[0]
        )));
    }

    let (o1, lambda, o2) = signed_svd3(channel.bloch_matrix());
    let w1 = su2_from_rotation(&o1);
    let w2 = su2_from_rotation(&transpose3(&o2));

    // Pauli-channel probabilities from the signed singular values.
    let raw = [
        (1.0 + lambda[0] + lambda[1] + lambda[2]) / 4.0,
        (1.0 + lambda[0] - lambda[1] - lambda[2]) / 4.0,
        (1.0 - lambda[0] + lambda[1] - lambda[2]) / 4.0,
        (1.0 - lambda[0] - lambda[1] + lambda[2]) / 4.0,
    ];
    for &p in &raw {
        if p < -tol {
            return Err(Error::NotCompletelyPositive(format!(
                "Pauli probability {p:.3e}"
            )));
        }
    }
    let clamped: Vec<f64> = raw.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();

    let basis = PauliBasis::standard();
    let mut weights = Vec::new();
    let mut unitaries = Vec::new();
    for (k, &p) in clamped.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        weights.push(p / total);
        unitaries.push(&(&w1 * basis.element(k)) * &w2);
    }
    UnitaryMixture::new(weights, unitaries)
}

/// The rotation a 2x2 unitary induces on Bloch vectors:
/// `R_jk = (1/2) Tr(sigma_j U sigma_k U†)`.
#[allow(clippy::needless_range_loop)]
pub fn bloch_rotation(u: &ComplexMatrix) -> [[f64; 3]; 3] {
    let basis = PauliBasis::standard();
    let mut r = [[0.0; 3]; 3];
    for k in 0..3 {
        let conj = &(u * basis.element(k + 1)) * &u.dagger();
        for j in 0..3 {
            r[j][k] = 0.5 * (basis.element(j + 1) * &conj).trace().re;
        }
    }
    r
}

fn transpose3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn mul3v(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// SVD of a real 3x3 matrix with both orthogonal factors forced into SO(3);
/// sign flips are absorbed into the (then signed) singular values, ordered by
/// decreasing magnitude. Any consistent decomposition is acceptable — callers
/// validate by reconstruction.
#[allow(clippy::needless_range_loop)]
fn signed_svd3(m: &[[f64; 3]; 3]) -> ([[f64; 3]; 3], [f64; 3], [[f64; 3]; 3]) {
    // Eigendecompose M^T M (symmetric PSD).
    let mt = transpose3(m);
    let mut gram = ComplexMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0.0;
            for k in 0..3 {
                acc += mt[i][k] * m[k][j];
            }
            gram[(i, j)] = c(acc, 0.0);
        }
    }
    let sys = hermitian_eig(&gram, 1e-9).expect("Gram matrix is symmetric");

    // Descending singular values with their right singular vectors.
    let mut sv = [0.0; 3];
    let mut right = [[0.0; 3]; 3]; // columns
    for (slot, idx) in [2usize, 1, 0].into_iter().enumerate() {
        sv[slot] = sys.values[idx].max(0.0).sqrt();
        for row in 0..3 {
            right[row][slot] = sys.vectors[(row, idx)].re;
        }
    }

    // Left singular vectors: u_i = M v_i / s_i where meaningful, completed
    // orthonormally where the singular value vanishes.
    let tiny = 1e-12 * sv[0].max(1.0);
    let mut left_cols: Vec<[f64; 3]> = Vec::with_capacity(3);
    for i in 0..3 {
        let v = [right[0][i], right[1][i], right[2][i]];
        if sv[i] > tiny {
            let mut u = mul3v(m, v);
            // Re-orthogonalize against earlier columns for safety near
            // degeneracies.
            for prev in &left_cols {
                let dot = u[0] * prev[0] + u[1] * prev[1] + u[2] * prev[2];
                for k in 0..3 {
                    u[k] -= dot * prev[k];
                }
            }
            left_cols.push(normalize3(u));
        } else if left_cols.len() == 2 {
            left_cols.push(cross(left_cols[0], left_cols[1]));
        } else if left_cols.len() == 1 {
            let u0 = left_cols[0];
            // Axis least aligned with u0.
            let axis = if u0[0].abs() <= u0[1].abs() && u0[0].abs() <= u0[2].abs() {
                [1.0, 0.0, 0.0]
            } else if u0[1].abs() <= u0[2].abs() {
                [0.0, 1.0, 0.0]
            } else {
                [0.0, 0.0, 1.0]
            };
            let dot = axis[0] * u0[0] + axis[1] * u0[1] + axis[2] * u0[2];
            let u = [axis[0] - dot * u0[0], axis[1] - dot * u0[1], axis[2] - dot * u0[2]];
            left_cols.push(normalize3(u));
        } else {
            left_cols.push([
                if i == 0 { 1.0 } else { 0.0 },
                if i == 1 { 1.0 } else { 0.0 },
                if i == 2 { 1.0 } else { 0.0 },
            ]);
        }
    }
    let mut left = [[0.0; 3]; 3];
    for (i, col) in left_cols.iter().enumerate() {
        for row in 0..3 {
            left[row][i] = col[row];
        }
    }

    // Force both factors into SO(3), absorbing signs into the last singular
    // value.
    let mut lambda = sv;
    if det3(&left) < 0.0 {
        for row in 0..3 {
            left[row][2] = -left[row][2];
        }
        lambda[2] = -lambda[2];
    }
    if det3(&right) < 0.0 {
        for row in 0..3 {
            right[row][2] = -right[row][2];
        }
        lambda[2] = -lambda[2];
    }

    (left, lambda, right)
}

fn su2_from_quaternion(w: f64, x: f64, y: f64, z: f64) -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![c(w, -z), c(-y, -x), c(y, -x), c(w, z)],
    )
    .expect("finite entries")
}

/// Lifts a rotation to SU(2) through the covering map; the representative
/// with nonnegative leading quaternion component is returned (either sheet
/// gives the same conjugation).
fn su2_from_rotation(o: &[[f64; 3]; 3]) -> ComplexMatrix {
    let trace = o[0][0] + o[1][1] + o[2][2];
    let (mut w, mut x, mut y, mut z);
    if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        w = 0.25 * s;
        x = (o[2][1] - o[1][2]) / s;
        y = (o[0][2] - o[2][0]) / s;
        z = (o[1][0] - o[0][1]) / s;
    } else if o[0][0] >= o[1][1] && o[0][0] >= o[2][2] {
        let s = (1.0 + o[0][0] - o[1][1] - o[2][2]).sqrt() * 2.0;
        w = (o[2][1] - o[1][2]) / s;
        x = 0.25 * s;
        y = (o[0][1] + o[1][0]) / s;
        z = (o[0][2] + o[2][0]) / s;
    } else if o[1][1] >= o[2][2] {
        let s = (1.0 + o[1][1] - o[0][0] - o[2][2]).sqrt() * 2.0;
        w = (o[0][2] - o[2][0]) / s;
        x = (o[0][1] + o[1][0]) / s;
        y = 0.25 * s;
        z = (o[1][2] + o[2][1]) / s;
    } else {
        let s = (1.0 + o[2][2] - o[0][0] - o[1][1]).sqrt() * 2.0;
        w = (o[1][0] - o[0][1]) / s;
        x = (o[0][2] + o[2][0]) / s;
        y = (o[1][2] + o[2][1]) / s;
        z = 0.25 * s;
    }
    let norm = (w * w + x * x + y * y + z * z).sqrt();
    w /= norm;
    x /= norm;
    y /= norm;
    z /= norm;
    // Fix the global sign deterministically.
    for lead in [w, x, y, z] {
        if lead.abs() > 1e-12 {
            if lead < 0.0 {
                w = -w;
                x = -x;
                y = -y;
                z = -z;
            }
            break;
        }
    }
    su2_from_quaternion(w, x, y, z)
}
