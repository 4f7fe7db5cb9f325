//! Exact arithmetic for ordered abelian groups, Hahn series fields and the
//! valuation-theoretic constructions built on top of them.

pub mod expr;
pub mod hahn;
pub mod hensel;
pub mod lexer;
pub mod logic;
pub mod num;
pub mod oag;
pub mod ordcut;
pub mod perfectness;
pub mod valstruct;

pub use num::{Int, QuadNum, Rat};
pub use oag::{ComponentKind, ConvexSubgroup, GroupDescriptor, GroupElement, OagError};
