use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;

use super::term::{Assignment, Term};
use super::LogicError;
use crate::num::Int;
use crate::oag::{GroupDescriptor, GroupElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Le(Term, Term),
    Lt(Term, Term),
    Eq(Term, Term),
    /// `t ≡ rep (mod nΓ)`
    Cong {
        t: Term,
        n: Int,
        rep: GroupElement,
    },
    /// `t ∈ Δ_k`
    InH {
        t: Term,
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Le(a, b) | Atom::Lt(a, b) | Atom::Eq(a, b) => vec![a, b],
            Atom::Cong { t, .. } | Atom::InH { t, .. } => vec![t],
        }
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Atom {
        match self {
            Atom::Le(a, b) => Atom::Le(f(a), f(b)),
            Atom::Lt(a, b) => Atom::Lt(f(a), f(b)),
            Atom::Eq(a, b) => Atom::Eq(f(a), f(b)),
            Atom::Cong { t, n, rep } => Atom::Cong { t: f(t), n: n.clone(), rep: rep.clone() },
            Atom::InH { t, k } => Atom::InH { t: f(t), k: *k },
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms().into_iter().flat_map(|t| t.vars()).collect()
    }

    pub fn eval(&self, sigma: &Assignment, g: &GroupDescriptor) -> Result<bool, LogicError> {
        Ok(match self {
            Atom::Le(a, b) => a.eval(sigma)? <= b.eval(sigma)?,
            Atom::Lt(a, b) => a.eval(sigma)? < b.eval(sigma)?,
            Atom::Eq(a, b) => a.eval(sigma)? == b.eval(sigma)?,
            Atom::Cong { t, n, rep } => g.in_multiple(&t.eval(sigma)?.sub(rep), n),
            Atom::InH { t, k } => {
                if *k > g.len() {
                    return Err(LogicError::UnknownSubgroup { k: *k, n: g.len() });
                }
                t.eval(sigma)?.in_tail(*k)
            }
        })
    }
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(items: Vec<Formula>) -> Formula {
        match items.len() {
            0 => Formula::True,
            1 => items.into_iter().next().expect("one item"),
            _ => Formula::And(items),
        }
    }

    pub fn or(items: Vec<Formula>) -> Formula {
        match items.len() {
            0 => Formula::False,
            1 => items.into_iter().next().expect("one item"),
            _ => Formula::Or(items),
        }
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(v) | Formula::Or(v) => v.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::True | Formula::False => BTreeSet::new(),
            Formula::Atom(a) => a.vars(),
            Formula::Not(f) => f.free_vars(),
            Formula::And(v) | Formula::Or(v) => v.iter().flat_map(Formula::free_vars).collect(),
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                let mut s = f.free_vars();
                s.remove(x);
                s
            }
        }
    }

    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f) => f.quantifier_count(),
            Formula::And(v) | Formula::Or(v) => v.iter().map(Formula::quantifier_count).sum(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_count(),
        }
    }

    /// Every atom, in order of appearance.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.collect_atoms(out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.collect_atoms(out)),
        }
    }

    pub fn map_atoms(&self, f: &impl Fn(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a),
            Formula::Not(x) => Formula::not(x.map_atoms(f)),
            Formula::And(v) => Formula::And(v.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Exists(x, b) => Formula::exists(x, b.map_atoms(f)),
            Formula::Forall(x, b) => Formula::forall(x, b.map_atoms(f)),
        }
    }

    /// Replace free occurrences of `x` by the constant `v`.
    pub fn substitute(&self, x: &str, v: &GroupElement) -> Formula {
        match self {
            Formula::Exists(y, _) | Formula::Forall(y, _) if y == x => self.clone(),
            Formula::Exists(y, b) => Formula::exists(y, b.substitute(x, v)),
            Formula::Forall(y, b) => Formula::forall(y, b.substitute(x, v)),
            Formula::Not(b) => Formula::not(b.substitute(x, v)),
            Formula::And(items) => Formula::And(items.iter().map(|f| f.substitute(x, v)).collect()),
            Formula::Or(items) => Formula::Or(items.iter().map(|f| f.substitute(x, v)).collect()),
            Formula::Atom(a) => Formula::Atom(a.map_terms(&|t| t.substitute(x, v))),
            Formula::True | Formula::False => self.clone(),
        }
    }

    pub fn substitute_all(&self, sigma: &Assignment) -> Formula {
        sigma.iter().fold(self.clone(), |f, (x, v)| f.substitute(x, v))
    }

    /// Truth value of a quantifier-free formula under `sigma`.
    pub fn evaluate(&self, sigma: &Assignment, g: &GroupDescriptor) -> Result<bool, LogicError> {
        match self {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Atom(a) => a.eval(sigma, g),
            Formula::Not(f) => Ok(!f.evaluate(sigma, g)?),
            Formula::And(v) => {
                for f in v {
                    if !f.evaluate(sigma, g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(v) => {
                for f in v {
                    if f.evaluate(sigma, g)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Exists(..) | Formula::Forall(..) => Err(LogicError::NotQuantifierFree),
        }
    }

    /// Check the structural invariants: no variable bound twice, subgroup
    /// indices in range, positive moduli, constants of the right shape.
    pub fn validate(&self, g: &GroupDescriptor) -> Result<(), LogicError> {
        let mut bound = BTreeSet::new();
        self.validate_inner(g, &mut bound)
    }

    fn validate_inner(&self, g: &GroupDescriptor, bound: &mut BTreeSet<String>) -> Result<(), LogicError> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(a) => {
                for t in a.terms() {
                    g.check(t.constant_part())?;
                }
                match a {
                    Atom::InH { k, .. } if *k > g.len() => Err(LogicError::UnknownSubgroup { k: *k, n: g.len() }),
                    Atom::Cong { n, .. } if *n < Int::one() => Err(LogicError::BadModulus(n.clone())),
                    Atom::Cong { rep, .. } => Ok(g.check(rep)?),
                    _ => Ok(()),
                }
            }
            Formula::Not(f) => f.validate_inner(g, bound),
            Formula::And(v) | Formula::Or(v) => v.iter().try_for_each(|f| f.validate_inner(g, bound)),
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                if !bound.insert(x.clone()) {
                    return Err(LogicError::Rebound(x.clone()));
                }
                f.validate_inner(g, bound)
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Le(a, b) => write!(f, "{a} <= {b}"),
            Atom::Lt(a, b) => write!(f, "{a} < {b}"),
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
            Atom::Cong { t, n, rep } => write!(f, "cong({t},{n},{rep})"),
            Atom::InH { t, k } => write!(f, "in_H({t},{k})"),
        }
    }
}

fn needs_parens_in_and(f: &Formula) -> bool {
    matches!(f, Formula::And(_) | Formula::Or(_) | Formula::Exists(..) | Formula::Forall(..))
}

fn needs_parens_in_or(f: &Formula) -> bool {
    matches!(f, Formula::Or(_) | Formula::Exists(..) | Formula::Forall(..))
}

fn write_joined(f: &mut fmt::Formatter<'_>, items: &[Formula], sep: &str, wrap: fn(&Formula) -> bool) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, " {sep} ")?;
        }
        if wrap(x) {
            write!(f, "({x})")?;
        } else {
            write!(f, "{x}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => match **x {
                Formula::True | Formula::False | Formula::Not(_) => write!(f, "~{x}"),
                _ => write!(f, "~({x})"),
            },
            Formula::And(v) => write_joined(f, v, "/\\", needs_parens_in_and),
            Formula::Or(v) => write_joined(f, v, "\\/", needs_parens_in_or),
            Formula::Exists(x, b) => write!(f, "exists {x}. {b}"),
            Formula::Forall(x, b) => write!(f, "forall {x}. {b}"),
        }
    }
}
