//! Exact noncommutative polynomial algebra.
//!
//! Polynomials in noncommuting self-adjoint variables t_1, …, t_n over ℚ(i),
//! with the free difference quotient derivations ∂_j valued in the tensor
//! square, the `*` involution, and the `#` contraction. All arithmetic is
//! exact; evaluation at matrices lives in [`crate::repkit`].
//!
//! Everything here is immutable after construction and safe to share across
//! threads.

mod monomial;
mod poly;
mod tensor;

pub use monomial::Monomial;
pub use poly::NcPoly;
pub use tensor::TensorPoly;

/// Guards against pathological expansion (relator substitution grows as
/// 2^length). Exceeding a cap produces a resource error instead of an
/// unbounded computation.
#[derive(Debug, Clone)]
pub struct Limits {
    pub max_degree: usize,
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 64,
            max_terms: 1_000_000,
        }
    }
}
