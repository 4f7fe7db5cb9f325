//! One-variable definable sets as boolean combinations of convex pieces and
//! congruence conditions.
//!
//! After quantifier elimination every atom in a single variable `x` has the
//! form `a·x + c ⋄ 0`. Inequalities and equalities cut out intervals, `in_H`
//! atoms cut out cosets of a convex subgroup (again convex, as `x ↦ a·x + c`
//! is monotone), and `cong` atoms depend only on the class of `x` modulo `nΓ`.

use std::fmt;

use num_traits::{Signed, Zero};

use super::formula::{Atom, Formula};
use super::qe::{qe_with, QeOptions};
use super::term::Term;
use super::LogicError;
use crate::num::Int;
use crate::oag::{GroupDescriptor, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `a·x ≥ e`
    AtLeast,
    /// `a·x > e`
    Above,
    /// `a·x ≤ e`
    AtMost,
    /// `a·x < e`
    Below,
    /// `a·x = e`
    Exactly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NfLeaf {
    /// Convex: `coef·x` against `bound`, `coef > 0`.
    Linear { coef: Int, rel: Bound, bound: GroupElement },
    /// Convex: `coef·x + offset ∈ Δ_tail`.
    Coset { coef: Int, offset: GroupElement, tail: usize },
    /// Parameter-free: `coef·x ≡ rep (mod modulus·Γ)`.
    Cong { coef: Int, modulus: Int, rep: GroupElement },
}

impl NfLeaf {
    pub fn is_convex(&self) -> bool {
        !matches!(self, NfLeaf::Cong { .. })
    }

    pub fn contains(&self, x: &GroupElement, g: &GroupDescriptor) -> bool {
        match self {
            NfLeaf::Linear { coef, rel, bound } => {
                let o = x.scale(coef).cmp(bound);
                match rel {
                    Bound::AtLeast => o.is_ge(),
                    Bound::Above => o.is_gt(),
                    Bound::AtMost => o.is_le(),
                    Bound::Below => o.is_lt(),
                    Bound::Exactly => o.is_eq(),
                }
            }
            NfLeaf::Coset { coef, offset, tail } => x.scale(coef).add(offset).in_tail(*tail),
            NfLeaf::Cong { coef, modulus, rep } => g.in_multiple(&x.scale(coef).sub(rep), modulus),
        }
    }

    fn to_formula(&self, x: &str, g: &GroupDescriptor) -> Formula {
        let ax = |k: &Int| Term::linear(x, k.clone(), g);
        match self {
            NfLeaf::Linear { coef, rel, bound } => {
                let l = ax(coef);
                let r = Term::constant(bound.clone());
                Formula::Atom(match rel {
                    Bound::AtLeast => Atom::Le(r, l),
                    Bound::Above => Atom::Lt(r, l),
                    Bound::AtMost => Atom::Le(l, r),
                    Bound::Below => Atom::Lt(l, r),
                    Bound::Exactly => Atom::Eq(l, r),
                })
            }
            NfLeaf::Coset { coef, offset, tail } => {
                Formula::Atom(Atom::InH { t: ax(coef).add_const(offset), k: *tail })
            }
            NfLeaf::Cong { coef, modulus, rep } => {
                Formula::Atom(Atom::Cong { t: ax(coef), n: modulus.clone(), rep: rep.clone() })
            }
        }
    }
}

impl fmt::Display for NfLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = |k: &Int| if k == &Int::from(1) { "x".to_string() } else { format!("{k}*x") };
        match self {
            NfLeaf::Linear { coef, rel, bound } => {
                let a = lhs(coef);
                match rel {
                    Bound::AtLeast => write!(f, "{a} in [{bound},+inf)"),
                    Bound::Above => write!(f, "{a} in ({bound},+inf)"),
                    Bound::AtMost => write!(f, "{a} in (-inf,{bound}]"),
                    Bound::Below => write!(f, "{a} in (-inf,{bound})"),
                    Bound::Exactly => write!(f, "{a} in [{bound},{bound}]"),
                }
            }
            NfLeaf::Coset { coef, offset, tail } => {
                write!(f, "{} in {} + Delta_{tail}", lhs(coef), offset.neg())
            }
            NfLeaf::Cong { coef, modulus, rep } => write!(f, "{} = {rep} mod {modulus}", lhs(coef)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NfTree {
    True,
    False,
    Leaf(NfLeaf),
    Not(Box<NfTree>),
    And(Vec<NfTree>),
    Or(Vec<NfTree>),
}

impl NfTree {
    pub fn eval(&self, x: &GroupElement, g: &GroupDescriptor) -> bool {
        match self {
            NfTree::True => true,
            NfTree::False => false,
            NfTree::Leaf(l) => l.contains(x, g),
            NfTree::Not(t) => !t.eval(x, g),
            NfTree::And(v) => v.iter().all(|t| t.eval(x, g)),
            NfTree::Or(v) => v.iter().any(|t| t.eval(x, g)),
        }
    }

    pub fn leaves(&self) -> Vec<&NfLeaf> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a NfLeaf>) {
        match self {
            NfTree::Leaf(l) => out.push(l),
            NfTree::Not(t) => t.collect(out),
            NfTree::And(v) | NfTree::Or(v) => v.iter().for_each(|t| t.collect(out)),
            _ => {}
        }
    }

    fn to_formula(&self, x: &str, g: &GroupDescriptor) -> Formula {
        match self {
            NfTree::True => Formula::True,
            NfTree::False => Formula::False,
            NfTree::Leaf(l) => l.to_formula(x, g),
            NfTree::Not(t) => Formula::not(t.to_formula(x, g)),
            NfTree::And(v) => Formula::and(v.iter().map(|t| t.to_formula(x, g)).collect()),
            NfTree::Or(v) => Formula::or(v.iter().map(|t| t.to_formula(x, g)).collect()),
        }
    }
}

impl fmt::Display for NfTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[NfTree], op: &str| {
            let parts: Vec<String> = v
                .iter()
                .map(|t| match t {
                    NfTree::And(_) | NfTree::Or(_) => format!("({t})"),
                    _ => t.to_string(),
                })
                .collect();
            write!(f, "{}", parts.join(op))
        };
        match self {
            NfTree::True => write!(f, "true"),
            NfTree::False => write!(f, "false"),
            NfTree::Leaf(l) => write!(f, "{l}"),
            NfTree::Not(t) => write!(f, "~({t})"),
            NfTree::And(v) => join(f, v, " /\\ "),
            NfTree::Or(v) => join(f, v, " \\/ "),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneVarNormalForm {
    pub var: String,
    pub tree: NfTree,
}

impl OneVarNormalForm {
    pub fn contains(&self, x: &GroupElement, g: &GroupDescriptor) -> bool {
        self.tree.eval(x, g)
    }

    pub fn convex_pieces(&self) -> Vec<&NfLeaf> {
        self.tree.leaves().into_iter().filter(|l| l.is_convex()).collect()
    }

    pub fn congruences(&self) -> Vec<&NfLeaf> {
        self.tree.leaves().into_iter().filter(|l| !l.is_convex()).collect()
    }

    pub fn to_formula(&self, g: &GroupDescriptor) -> Formula {
        self.tree.to_formula(&self.var, g)
    }
}

impl fmt::Display for OneVarNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tree)
    }
}

/// Normal form of a formula whose only free variable is `x`.
pub fn normal_form_one_var(f: &Formula, x: &str, g: &GroupDescriptor) -> Result<OneVarNormalForm, LogicError> {
    normal_form_one_var_with(f, x, g, &QeOptions::default())
}

pub fn normal_form_one_var_with(
    f: &Formula,
    x: &str,
    g: &GroupDescriptor,
    opts: &QeOptions,
) -> Result<OneVarNormalForm, LogicError> {
    let extra: Vec<String> = f.free_vars().into_iter().filter(|v| v != x).collect();
    if !extra.is_empty() {
        return Err(LogicError::FreeVariables(extra));
    }
    let q = qe_with(f, g, opts)?;
    Ok(OneVarNormalForm { var: x.to_string(), tree: tree(&q, x)? })
}

fn tree(f: &Formula, x: &str) -> Result<NfTree, LogicError> {
    Ok(match f {
        Formula::True => NfTree::True,
        Formula::False => NfTree::False,
        Formula::Atom(a) => leaf(a, x),
        Formula::Not(t) => NfTree::Not(Box::new(tree(t, x)?)),
        Formula::And(v) => NfTree::And(v.iter().map(|t| tree(t, x)).collect::<Result<_, _>>()?),
        Formula::Or(v) => NfTree::Or(v.iter().map(|t| tree(t, x)).collect::<Result<_, _>>()?),
        Formula::Exists(..) | Formula::Forall(..) => return Err(LogicError::NotQuantifierFree),
    })
}

/// `a·x + c` split into `(a, c)`.
fn linear(t: &Term, x: &str) -> (Int, GroupElement) {
    (t.coeff(x), t.constant_part().clone())
}

fn leaf(a: &Atom, x: &str) -> NfTree {
    let ground = |b: bool| if b { NfTree::True } else { NfTree::False };
    match a {
        Atom::Le(l, r) | Atom::Lt(l, r) | Atom::Eq(l, r) => {
            // r - l = a·x + c compared with 0
            let (k, c) = linear(&r.sub(l), x);
            let strict = matches!(a, Atom::Lt(..));
            if k.is_zero() {
                let s = c.sign();
                return ground(match a {
                    Atom::Eq(..) => s.is_eq(),
                    _ if strict => s.is_gt(),
                    _ => s.is_ge(),
                });
            }
            let (coef, bound, rel) = if k.is_positive() {
                let rel = match a {
                    Atom::Eq(..) => Bound::Exactly,
                    _ if strict => Bound::Above,
                    _ => Bound::AtLeast,
                };
                (k, c.neg(), rel)
            } else {
                let rel = match a {
                    Atom::Eq(..) => Bound::Exactly,
                    _ if strict => Bound::Below,
                    _ => Bound::AtMost,
                };
                (-k, c, rel)
            };
            NfTree::Leaf(NfLeaf::Linear { coef, rel, bound })
        }
        Atom::InH { t, k } => {
            let (coef, offset) = linear(t, x);
            if coef.is_zero() {
                return ground(offset.in_tail(*k));
            }
            let (coef, offset) = if coef.is_negative() { (-coef, offset.neg()) } else { (coef, offset) };
            NfTree::Leaf(NfLeaf::Coset { coef, offset, tail: *k })
        }
        Atom::Cong { t, n, rep } => {
            let (coef, c) = linear(t, x);
            NfTree::Leaf(NfLeaf::Cong { coef, modulus: n.clone(), rep: rep.sub(&c) })
        }
    }
}
