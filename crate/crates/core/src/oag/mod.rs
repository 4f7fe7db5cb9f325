//! Ordered abelian groups given as finite lexicographic products of
//! archimedean components, together with their convex subgroups and the
//! mod-p invariants used by the decision procedure.

mod element;
mod group;
pub mod parse;
pub mod sample;

pub use element::{Coord, GroupElement};
pub use group::{
    ComponentKind, ConvexChain, ConvexSubgroup, GroupDescriptor, Index, QuotientDescriptor, SpClass,
    DEFAULT_CHAIN_DEPTH,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OagError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("Zomega must be the last component")]
    OmegaNotLast,
    #[error("Quad({0}) needs a non-square radicand at least 2")]
    SquareQuad(u64),
    #[error("Zloc({0}) needs m >= 2")]
    BadLocalization(u64),
    #[error("a group needs at least one component")]
    Empty,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("tail index {k} out of range for a {n}-component group")]
    BadTail { k: usize, n: usize },
    #[error("index overflow")]
    Overflow,
}
