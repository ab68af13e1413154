//! Dense complex linear algebra at small fixed dimensions.
//!
//! Everything operates on [`ComplexMatrix`], a row-major dense matrix of
//! [`Complex64`] entries. Dimensions stay small (a few dozen at most), so the
//! implementations favor clarity and numerical robustness over asymptotics:
//! products are plain triple loops and the Hermitian eigensolver is a cyclic
//! Jacobi iteration (see [`eig`]).
//!
//! Bipartite matrices use a fixed ordering convention throughout the crate:
//! the joint index of a system of dimension `d1` tensored with a system of
//! dimension `d2` is `i1 * d2 + i2` (left factor major). Partial traces rely
//! on this convention; mixing conventions silently transposes subsystems.

pub mod eig;

use crate::error::{Error, Result};
pub use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Dense complex matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows of `[re, im]` pairs; handy in tests.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entry modulus; the max-norm used by the structural checks.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Kronecker product; block (i, j) equals `self[i, j] * other`.
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = ComplexMatrix::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// Traces out the right factor of a `(d1*d2) x (d1*d2)` matrix, returning
    /// the `d1 x d1` reduction with entries `sum_k m[(i,k),(j,k)]`.
    pub fn partial_trace_right(&self, d1: usize, d2: usize) -> Result<ComplexMatrix> {
        self.check_bipartition(d1, d2)?;
        let mut out = ComplexMatrix::zeros(d1, d1);
        for i in 0..d1 {
            for j in 0..d1 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d2 {
                    acc += self[(i * d2 + k, j * d2 + k)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Traces out the left factor, returning the `d2 x d2` reduction with
    /// entries `sum_k m[(k,i),(k,j)]`.
    pub fn partial_trace_left(&self, d1: usize, d2: usize) -> Result<ComplexMatrix> {
        self.check_bipartition(d1, d2)?;
        let mut out = ComplexMatrix::zeros(d2, d2);
        for i in 0..d2 {
            for j in 0..d2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d1 {
                    acc += self[(k * d2 + i, k * d2 + j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    fn check_bipartition(&self, d1: usize, d2: usize) -> Result<()> {
        let expected = d1 * d2;
        if !self.is_square() || self.rows != expected || d1 == 0 || d2 == 0 {
            return Err(Error::BadBipartition {
                rows: self.rows,
                cols: self.cols,
                expected,
            });
        }
        Ok(())
    }

    fn assert_same_shape(&self, other: &ComplexMatrix, op: &str) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch in {op}: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_shape(other, "add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_shape(other, "sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert!(
            self.cols == other.rows,
            "shape mismatch in mul: {}x{} * {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = k * other.cols;
                let out_row = i * other.cols;
                for j in 0..other.cols {
                    out.entries[out_row + j] += a * other.entries[row + j];
                }
            }
        }
        out
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{}{:+.6}{:+.6}i", if j == 0 { "" } else { "  " }, z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Entrywise maximum modulus of the difference of two equally shaped matrices.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::Dimension(format!(
            "shape mismatch: {}x{} vs {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// True iff `m† m = I` within `tol` in the max-norm.
pub fn verify_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let product = &m.dagger() * m;
    max_abs_diff(&product, &ComplexMatrix::identity(m.rows())).unwrap() <= tol
}

/// True iff `m` is Hermitian within `tol` in the max-norm.
pub fn verify_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.dagger()).unwrap() <= tol
}

/// True iff `m` is Hermitian and its smallest eigenvalue is at least `-tol`.
pub fn verify_psd(m: &ComplexMatrix, tol: f64) -> bool {
    if !verify_hermitian(m, tol) {
        return false;
    }
    match eig::hermitian_eig(m, tol) {
        Ok(system) => system.values.first().is_none_or(|&lo| lo >= -tol),
        Err(_) => false,
    }
}

/// True iff `m` is Hermitian and idempotent within `tol`.
pub fn verify_projector(m: &ComplexMatrix, tol: f64) -> bool {
    if !verify_hermitian(m, tol) {
        return false;
    }
    let squared = m * m;
    max_abs_diff(&squared, m).unwrap() <= tol
}

/// Structural classes a matrix can be tagged with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    General,
    Hermitian,
    Unitary,
    Projector,
    Psd,
}

/// A claimed structural class together with the tolerance it must hold at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeTag {
    pub kind: ShapeKind,
    pub tolerance: f64,
}

impl ShapeTag {
    pub fn new(kind: ShapeKind, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
        }
        Ok(Self { kind, tolerance })
    }

    /// Runs the verification matching the tag.
    pub fn check(&self, m: &ComplexMatrix) -> bool {
        match self.kind {
            ShapeKind::General => true,
            ShapeKind::Hermitian => verify_hermitian(m, self.tolerance),
            ShapeKind::Unitary => verify_unitary(m, self.tolerance),
            ShapeKind::Projector => verify_projector(m, self.tolerance),
            ShapeKind::Psd => verify_psd(m, self.tolerance),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{sigma, PauliBasis};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let id2 = ComplexMatrix::identity(2);
        assert_eq!(id2.tensor(&id2), ComplexMatrix::identity(4));
    }

    #[test]
    fn tensor_sigma1_sigma1_is_antidiagonal() {
        let s1 = sigma(1);
        let t = s1.tensor(&s1);
        // Direct 4x4 expansion of the Kronecker product.
        let mut expected = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            expected[(i, 3 - i)] = c(1.0, 0.0);
        }
        assert_eq!(t, expected);
    }

    #[test]
    fn tensor_of_projectors() {
        let p = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let t = p.tensor(&p);
        let expected =
            ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(t, expected);
    }

    #[test]
    fn partial_trace_of_bell_projector_is_maximally_mixed() {
        // |Φ+><Φ+| with |Φ+> = (|00> + |11>)/sqrt(2); expanding the 4x4
        // projector and summing diagonal blocks gives I/2.
        let half = c(0.5, 0.0);
        let mut bell = ComplexMatrix::zeros(4, 4);
        bell[(0, 0)] = half;
        bell[(0, 3)] = half;
        bell[(3, 0)] = half;
        bell[(3, 3)] = half;
        let reduced = bell.partial_trace_right(2, 2).unwrap();
        let expected = ComplexMatrix::identity(2).scale(half);
        assert!(max_abs_diff(&reduced, &expected).unwrap() < 1e-15);
        let reduced_left = bell.partial_trace_left(2, 2).unwrap();
        assert!(max_abs_diff(&reduced_left, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_bipartition() {
        let m = ComplexMatrix::identity(6);
        assert!(m.partial_trace_right(2, 2).is_err());
        assert!(m.partial_trace_right(2, 3).is_ok());
    }

    #[test]
    fn max_abs_diff_basics() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(max_abs_diff(&id, &id).unwrap(), 0.0);
        let proj = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(max_abs_diff(&id, &proj).unwrap(), 1.0);
        // |1 - (-i)| = sqrt(2) at the off-diagonal entries.
        let d = max_abs_diff(&sigma(1), &sigma(2)).unwrap();
        assert!((d - 2.0f64.sqrt()).abs() < 1e-15);
        assert!(max_abs_diff(&id, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn verify_checks() {
        assert!(verify_unitary(&ComplexMatrix::identity(3), 1e-12));
        assert!(!verify_unitary(
            &ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.5, 0.0)]),
            1e-10
        ));
        let p = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(verify_projector(&p, 1e-12));
        assert!(!verify_projector(&p.scale(c(0.5, 0.0)), 1e-10));
        assert!(!verify_psd(
            &ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1e-6, 0.0)]),
            1e-9
        ));
        assert!(verify_psd(
            &ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1e-10, 0.0)]),
            1e-9
        ));
    }

    #[test]
    fn shape_tags_dispatch() {
        let tag = ShapeTag::new(ShapeKind::Unitary, 1e-10).unwrap();
        assert!(tag.check(&sigma(2)));
        let tag = ShapeTag::new(ShapeKind::Projector, 1e-10).unwrap();
        assert!(!tag.check(&sigma(1)));
        assert!(ShapeTag::new(ShapeKind::General, -1.0).is_err());
    }

    #[test]
    fn pauli_products_cycle() {
        let basis = PauliBasis::standard();
        let s12 = &basis.sigma1 * &basis.sigma2;
        let expected = basis.sigma3.scale(c(0.0, 1.0));
        assert!(max_abs_diff(&s12, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn coupling_generator_terms_commute_exactly() {
        // The two terms sigma2 ⊗ sigma2 and sigma3 ⊗ sigma3 commute entrywise.
        let a = sigma(2).tensor(&sigma(2));
        let b = sigma(3).tensor(&sigma(3));
        let comm = &(&a * &b) - &(&b * &a);
        assert_eq!(comm.max_abs(), 0.0);
    }

    #[test]
    fn non_finite_entries_rejected() {
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        ));
    }

    proptest! {
        #[test]
        fn tensor_trace_factorizes(seed in 0u64..500) {
            let a = crate::states::random_density(2, seed).matrix().clone();
            let b = crate::states::random_density(3, seed + 1000).matrix().clone();
            let t = a.tensor(&b);
            let lhs = t.trace();
            let rhs = a.trace() * b.trace();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn tensor_is_associative(seed in 0u64..200) {
            let a = crate::states::random_density(2, seed).matrix().clone();
            let b = crate::states::random_density(2, seed + 1).matrix().clone();
            let d = crate::states::random_density(2, seed + 2).matrix().clone();
            let left = a.tensor(&b).tensor(&d);
            let right = a.tensor(&b.tensor(&d));
            // Equal up to reassociation of scalar products (last ulp).
            prop_assert!(max_abs_diff(&left, &right).unwrap() < 1e-15);
        }

        #[test]
        fn partial_trace_of_product_recovers_left_factor(
            seed in 0u64..200, d1 in 2usize..=4, d2 in 2usize..=4
        ) {
            let a = crate::states::random_density(d1, seed).matrix().clone();
            let b = crate::states::random_density(d2, seed + 7).matrix().clone();
            let joint = a.tensor(&b);
            let reduced = joint.partial_trace_right(d1, d2).unwrap();
            // Tr(b) = 1, so the reduction is the left factor itself.
            prop_assert!(max_abs_diff(&reduced, &a).unwrap() < 1e-14);
        }

        #[test]
        fn partial_trace_preserves_trace(seed in 0u64..200) {
            let m = crate::states::random_density(6, seed).matrix().clone();
            let reduced = m.partial_trace_right(2, 3).unwrap();
            prop_assert!((reduced.trace() - m.trace()).norm() < 1e-13);
            let reduced = m.partial_trace_left(2, 3).unwrap();
            prop_assert!((reduced.trace() - m.trace()).norm() < 1e-13);
        }
    }
}
