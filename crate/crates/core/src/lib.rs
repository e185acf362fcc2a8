//! Relation systems of group presentations and their spectral analysis.
//!
//! Given a finite group presentation, this crate builds the polynomial
//! relation system F in the 2m self-adjoint generators
//! X_j = g_j + g_j^{-1}, X_{m+j} = i(g_j − g_j^{-1}), together with the
//! matrix ∂F of free difference quotients. Evaluating ∂F at a
//! finite-dimensional unitary representation gives a large complex matrix
//! whose singular spectrum yields a normalized rank estimate, a spectral
//! measure, a log-determinant, and first-L²-Betti-number / free-entropy
//! dimension bounds.
//!
//! Modules:
//! - [`ncalg`]: exact noncommutative polynomial algebra with difference
//!   quotient derivations, involution, and the `#` contraction;
//! - [`grouprel`]: presentation parsing and the relation system / Jacobian;
//! - [`repkit`]: finite-dimensional unitary representations (exact finite
//!   quotients and random-permutation proxies) and evaluation;
//! - [`spectral`]: assembly of the evaluated Jacobian, singular spectra,
//!   rank curves, spectral measures, log-determinants, tail diagnostics,
//!   Betti estimates, and the perturbation probe.

pub mod error;
pub mod grouprel;
pub mod ncalg;
pub mod repkit;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use grouprel::{
    parse_presentation, GroupOrder, GroupWord, Jacobian, Presentation, RelationKind,
    RelationSystem,
};
pub use ncalg::{Limits, Monomial, NcPoly, TensorPoly};
pub use repkit::Representation;
pub use scalar::GaussianRational;
pub use spectral::{BettiEstimate, SpectralOptions, SpectralReport, ThresholdPolicy};
