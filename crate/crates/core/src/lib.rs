//! Spans of Hadamard products of vectors.
//!
//! For complex `n x n` matrices `B_1, ..., B_k`, the span of all vectors
//! `(B_1 x_1) ∘ ... ∘ (B_k x_k)` is the range of
//! `(B_1 B_1^*) ∘ ... ∘ (B_k B_k^*)`. This crate computes that range
//! ([`span::theorem_span`]), computes the span directly through an exhaustive
//! basis-product oracle and a seeded Monte Carlo sampler, handles the positive
//! semidefinite special cases, and certifies each step of the tensor-product
//! argument numerically ([`verify`]).

pub mod eigen;
pub mod error;
pub mod family;
pub mod instance;
pub mod matrix;
pub mod rng;
pub mod span;
pub mod subspace;
pub mod verify;

pub use eigen::{hermitian_eig, HermitianEigen};
pub use error::{HspanError, Result};
pub use family::{AnyFamily, MatrixFamily, PsdFamily};
pub use instance::{generate, FamilyKind, GenSpec, InstanceFile};
pub use matrix::{hadamard_all, ComplexMatrix, ComplexScalar, ComplexVector};
pub use span::{
    basis_product_oracle, corollary4_sample_span, corollary5_span, gram_hadamard, psd_sqrt,
    random_sample_span, theorem_span,
};
pub use subspace::{range_basis, subspace_distance, Subspace, ToleranceConfig};
pub use verify::{verify_all, CheckStatus, VerificationReport, VerifyOptions, VerifyTolerances};
