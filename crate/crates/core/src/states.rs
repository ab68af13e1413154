//! Quantum state types: density matrices, qubit Bloch vectors, and the
//! conversions between them.
//!
//! A qubit state is equivalently a density matrix `rho = (I + r·sigma)/2` or
//! the Bloch vector `r` of Pauli mean values. The Pauli convention is frozen
//! here once for the whole crate: `sigma1` has real off-diagonal entries,
//! `sigma2` has `-i`/`+i` off-diagonals, and `sigma3 = diag(1, -1)`. The sign
//! pattern of every closed-form update downstream depends on this choice.

use crate::error::{Error, Result};
use crate::linalg::eig::{hermitian_eig, trace_norm_hermitian};
use crate::linalg::{max_abs_diff, verify_hermitian, ComplexMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The Pauli matrix `sigma_j` for `j` in 1..=3.
pub fn sigma(j: usize) -> ComplexMatrix {
    match j {
        1 => ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        2 => ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        3 => ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        _ => panic!("Pauli index must be 1, 2, or 3, got {j}"),
    }
    .expect("fixed 2x2 entries")
}

/// The three Pauli matrices plus the identity.
#[derive(Debug, Clone)]
pub struct PauliBasis {
    pub sigma1: ComplexMatrix,
    pub sigma2: ComplexMatrix,
    pub sigma3: ComplexMatrix,
    pub identity: ComplexMatrix,
}

impl PauliBasis {
    pub fn standard() -> Self {
        Self {
            sigma1: sigma(1),
            sigma2: sigma(2),
            sigma3: sigma(3),
            identity: ComplexMatrix::identity(2),
        }
    }

    /// `sigma_j` with `sigma_0 = I`.
    pub fn element(&self, j: usize) -> &ComplexMatrix {
        match j {
            0 => &self.identity,
            1 => &self.sigma1,
            2 => &self.sigma2,
            3 => &self.sigma3,
            _ => panic!("Pauli index must be 0..=3, got {j}"),
        }
    }
}

/// Qubit state as the triple of Pauli mean values; norm at most 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    /// Norm overshoot tolerated (and clamped away) before rejecting.
    pub const NORM_SLACK: f64 = 1e-12;

    /// Validates the norm constraint. Norms in `(1, 1 + 1e-12]` are clamped
    /// back to 1 so that rounding from repeated channel application cannot
    /// poison a pipeline; anything larger is rejected.
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite() && r3.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = (r1 * r1 + r2 * r2 + r3 * r3).sqrt();
        if norm > 1.0 + Self::NORM_SLACK {
            return Err(Error::BlochNormExceedsOne(norm));
        }
        if norm > 1.0 {
            let s = 1.0 / norm;
            return Ok(Self {
                r1: r1 * s,
                r2: r2 * s,
                r3: r3 * s,
            });
        }
        Ok(Self { r1, r2, r3 })
    }

    pub fn zero() -> Self {
        Self { r1: 0.0, r2: 0.0, r3: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    /// `rho = (I + r1 sigma1 + r2 sigma2 + r3 sigma3) / 2`.
    pub fn to_density(&self) -> DensityMatrix {
        let matrix = ComplexMatrix::new(
            2,
            2,
            vec![
                c((1.0 + self.r3) / 2.0, 0.0),
                c(self.r1 / 2.0, -self.r2 / 2.0),
                c(self.r1 / 2.0, self.r2 / 2.0),
                c((1.0 - self.r3) / 2.0, 0.0),
            ],
        )
        .expect("finite entries");
        DensityMatrix::trusted(matrix)
    }
}

impl std::fmt::Display for BlochVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:+.6}, {:+.6}, {:+.6})", self.r1, self.r2, self.r3)
    }
}

/// Hermitian, positive-semidefinite, trace-one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace, and positivity at the crate's
    /// default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, crate::STRUCTURAL_TOL, crate::PSD_TOL)
    }

    /// Validates with caller-supplied tolerances: `structural_tol` bounds the
    /// hermiticity and trace defects, `psd_floor` the allowed negative
    /// eigenvalue excursion.
    pub fn with_tolerance(matrix: ComplexMatrix, structural_tol: f64, psd_floor: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensity(format!(
                "must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !verify_hermitian(&matrix, structural_tol) {
            let dev = max_abs_diff(&matrix, &matrix.dagger()).unwrap();
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - c(1.0, 0.0)).norm() > structural_tol {
            return Err(Error::InvalidDensity(format!(
                "trace must be 1, got {}+{}i",
                trace.re, trace.im
            )));
        }
        let eigs = hermitian_eig(&matrix, structural_tol)?;
        if let Some(&lo) = eigs.values.first() {
            if lo < -psd_floor {
                return Err(Error::InvalidDensity(format!(
                    "negative eigenvalue {lo:.3e}"
                )));
            }
        }
        Ok(Self {
            dim: matrix.rows(),
            matrix,
        })
    }

    /// Wraps a matrix that is a density matrix by construction (outputs of
    /// unitary conjugation and partial traces of valid states). Full
    /// validation on these hot paths would force an eigendecomposition per
    /// step; debug builds still check.
    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(
            verify_hermitian(&matrix, 1e-9) && (matrix.trace() - c(1.0, 0.0)).norm() < 1e-9,
            "trusted density matrix failed validation"
        );
        Self {
            dim: matrix.rows(),
            matrix,
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let p = c(1.0 / dim as f64, 0.0);
        Self::trusted(ComplexMatrix::identity(dim).scale(p))
    }

    /// `|psi><psi|` for a (normalized) state vector.
    pub fn pure_state(psi: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < 1e-15 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let n = psi.len();
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / norm_sq);
        Ok(Self::trusted(matrix))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Tr(rho^2)`; 1 iff pure.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Pauli mean values `r_j = Tr(rho sigma_j)`; qubit only.
    pub fn bloch(&self) -> Result<BlochVector> {
        if self.dim != 2 {
            return Err(Error::Dimension(format!(
                "Bloch vector is defined for qubits, dim = {}",
                self.dim
            )));
        }
        let m = &self.matrix;
        let r1 = (m[(0, 1)] + m[(1, 0)]).re;
        let r2 = (m[(1, 0)] - m[(0, 1)]).im;
        let r3 = (m[(0, 0)] - m[(1, 1)]).re;
        BlochVector::new(r1, r2, r3)
    }

    /// Re-runs the full invariant checks at the given tolerances.
    pub fn validate(&self, structural_tol: f64, psd_floor: f64) -> Result<()> {
        Self::with_tolerance(self.matrix.clone(), structural_tol, psd_floor).map(|_| ())
    }
}

/// Joint state `rho ⊗ xi`; mean values factorize in the product.
pub fn product_state(rho: &DensityMatrix, xi: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::trusted(rho.matrix().tensor(xi.matrix()))
}

/// Trace distance `(1/2) ||a - b||_1`; the operational distinguishability of
/// two states, in [0, 1].
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "trace distance needs equal dims, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let diff = a.matrix() - b.matrix();
    Ok(trace_norm_hermitian(&diff, 1e-8)? / 2.0)
}

/// The six eigenstates `(I ± sigma_k)/2` as Bloch vectors. They span the
/// Hermitian 2x2 matrices, so agreement of two linear maps on this set is
/// agreement everywhere.
pub fn spanning_states() -> [BlochVector; 6] {
    [
        BlochVector { r1: 1.0, r2: 0.0, r3: 0.0 },
        BlochVector { r1: -1.0, r2: 0.0, r3: 0.0 },
        BlochVector { r1: 0.0, r2: 1.0, r3: 0.0 },
        BlochVector { r1: 0.0, r2: -1.0, r3: 0.0 },
        BlochVector { r1: 0.0, r2: 0.0, r3: 1.0 },
        BlochVector { r1: 0.0, r2: 0.0, r3: -1.0 },
    ]
}

fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Random full-rank density matrix: `G G† / Tr(G G†)` for a seeded complex
/// Gaussian `G`. Deterministic per seed.
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = seeded_rng(seed);
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian_complex(&mut rng));
    let gram = &g * &g.dagger();
    let trace = gram.trace().re;
    DensityMatrix::trusted(gram.scale(c(1.0 / trace, 0.0)))
}

/// Random Bloch vector; on the sphere surface when `pure`, uniform in the
/// ball otherwise. Deterministic per seed.
pub fn random_bloch(seed: u64, pure: bool) -> BlochVector {
    let mut rng = seeded_rng(seed);
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let norm = (x * x + y * y + z * z).sqrt();
        if norm < 1e-9 {
            continue;
        }
        let radius = if pure {
            1.0
        } else {
            rng.random::<f64>().cbrt()
        };
        let s = radius / norm;
        return BlochVector {
            r1: x * s,
            r2: y * s,
            r3: z * s,
        };
    }
}

/// Haar-random unitary via Gram-Schmidt on a complex Gaussian matrix.
/// Deterministic per seed.
#[allow(clippy::needless_range_loop)]
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian_complex(&mut rng));
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let correction = proj * cols[k][i];
                cols[j][i] -= correction;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}
