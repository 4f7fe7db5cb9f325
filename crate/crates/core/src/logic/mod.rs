//! First-order formulas over a concrete lexicographic group: parsing,
//! evaluation, quantifier elimination and derived normal forms.

mod formula;
pub mod normal_form;
pub mod parse;
pub mod qe;
pub mod quotient;
mod simplify;
mod term;

pub use formula::{Atom, Formula};
pub use normal_form::{normal_form_one_var, normal_form_one_var_with, Bound, NfLeaf, NfTree, OneVarNormalForm};
pub use parse::{parse_formula, parse_term};
pub use qe::{decide, decide_with, qe, qe_with, QeOptions, DEFAULT_DNF_CAP};
pub use quotient::{rewrite_quotient_atom, QRel, QuotientAtom};
pub use simplify::simplify;
pub use term::{Assignment, Term};

use crate::num::Int;
use crate::oag::OagError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("subgroup index {k} out of range for a {n}-component group")]
    UnknownSubgroup { k: usize, n: usize },
    #[error("non-integer coefficient at {0}")]
    NonIntegerCoefficient(String),
    #[error("modulus must be positive, got {0}")]
    BadModulus(Int),
    #[error("variable {0} is bound more than once")]
    Rebound(String),
    #[error("variable {0} has no value")]
    Unassigned(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("sentence has free variables: {0:?}")]
    FreeVariables(Vec<String>),
    #[error("quantifier elimination is not available for groups with a Zomega component")]
    OmegaGroup,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource limit: more than {cap} DNF cells")]
    DnfCap { cap: usize },
    #[error(transparent)]
    Oag(#[from] OagError),
}
