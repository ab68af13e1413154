//! Open quantum dynamics of a qubit interacting with an environment.
//!
//! A physical *procedure* is a triple (environment, joint unitary, environment
//! state). Applying the joint unitary to a product state and tracing out the
//! environment induces a trace-preserving completely positive map on the
//! system. This crate models procedures and the maps they induce, decides
//! whether a procedure is *repeatable* (whether it induces the same map when
//! applied again without resetting the environment), and constructs repeatable
//! realizations of maps whose original procedure is not repeatable:
//!
//! - [`linalg`]: dense complex matrices, tensor products, partial traces,
//!   Hermitian eigendecomposition, matrix exponentials.
//! - [`states`]: density matrices, qubit Bloch vectors, and conversions.
//! - [`procedures`]: procedures, repetition without environment reset, and the
//!   repeatability decision.
//! - [`channels`]: the induced map as an object — Choi matrix, affine Bloch
//!   form, CP/unital predicates, mixture-of-unitaries decomposition.
//! - [`coupling`]: a concrete two-qubit interaction family with closed-form
//!   Bloch updates, and its explicit repeatable dilation on a 16-dimensional
//!   environment.

pub mod channels;
pub mod coupling;
pub mod error;
pub mod linalg;
pub mod procedures;
pub mod states;

pub use channels::{channel_distance, decompose_unital, QubitChannel, UnitaryMixture};
pub use coupling::{build_repeatable_dilation, CouplingParams, Dilation, DilationSpec};
pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix};
pub use procedures::{Procedure, RepeatabilityReport};
pub use states::{BlochVector, DensityMatrix};

/// Default tolerance for structural checks (unitarity, projectors, hermiticity).
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Default eigenvalue floor for positive-semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-9;

/// Default tolerance for classification decisions (repeatable, unital, CP).
pub const CLASSIFY_TOL: f64 = 1e-9;

#[cfg(test)]
mod tests {
    // Everything is an immutable value; callers parallelize freely.
    #[test]
    fn values_are_share_and_send() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<crate::ComplexMatrix>();
        assert_send_sync::<crate::DensityMatrix>();
        assert_send_sync::<crate::BlochVector>();
        assert_send_sync::<crate::Procedure>();
        assert_send_sync::<crate::RepeatabilityReport>();
        assert_send_sync::<crate::QubitChannel>();
        assert_send_sync::<crate::UnitaryMixture>();
        assert_send_sync::<crate::Dilation>();
    }
}
