//! Group presentations and their polynomial relation systems.
//!
//! [`parse_presentation`] reads the line-oriented presentation grammar;
//! [`RelationSystem::build`] turns a presentation into the tuple
//! F = (F', F'', F''') in 2m self-adjoint variables, and [`Jacobian::build`]
//! takes its matrix of difference quotients. Construction is pure; all
//! outputs are immutable.

mod presentation;
mod relations;

pub use presentation::{parse_presentation, GroupOrder, GroupWord, Letter, Presentation};
pub use relations::{
    build_generators, GeneratorSubstitution, Jacobian, RelationKind, RelationSystem,
};
