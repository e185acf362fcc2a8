//! Finite-dimensional unitary representations of the generators.
//!
//! Exact finite-quotient families (cyclic shifts, torus shifts, regular
//! cyclic) have zero relator defect by construction; random permutation
//! tuples are sofic proxies whose defects are reported, never enforced.
//! All families are deterministic functions of their parameters and seed.

mod eval;
mod fileio;
mod representation;

pub use eval::{
    evaluate_poly, evaluate_tensor, generator_images, hs_norm, max_abs, operator_norm,
    EvalContext, Flattening, TensorOperator,
};
pub use fileio::{
    format_representation, load_representation, parse_representation, UNITARY_TOLERANCE,
};
pub use representation::{
    cyclic_shift, random_permutations, regular_cyclic, torus, Family, GeneratorMatrix,
    Representation,
};
