//! Spectral analysis of the evaluated Jacobian.
//!
//! Jobs are independent (one per representation) and deterministic for
//! fixed inputs; aggregation order is the caller's concern.

mod analysis;
mod assemble;
mod options;
mod probe;
mod report;

pub use analysis::{
    analyze_spectrum, FkLogDet, MuHistogram, Plateau, RankPoint, SpectralAnalysis, TailRow,
};
pub use assemble::{
    assemble, assemble_with_flattening, q_spectrum, singular_values, EvaluatedJacobian,
    SpectralPath,
};
pub use options::{PathChoice, SpectralOptions, ThresholdPolicy, Tolerances};
pub use probe::{gaussian_selfadjoint_tuple, perturbation_probe, ProbeRow, ProbeTable};
pub use report::{analyze, validate_pair, BettiEstimate, SpectralReport};
