//! Coordinate literals and the decomposition of lexicographic atoms into them.
//!
//! A literal constrains one coordinate `π_i(u)` of a term `u`. The projections
//! are group homomorphisms, so a conjunction of literals splits into
//! independent problems, one per component.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::super::formula::{Atom, Formula};
use super::super::term::Term;
use super::super::LogicError;
use crate::num::{coprime_part, Int};
use crate::oag::{ComponentKind, GroupDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Rel {
    Gt,
    Ge,
    Eq,
    Div(Int),
    NDiv(Int),
}

/// `π_level(t) rel 0`; for `Div(N)` the claim is `π_level(t) ∈ N·C_level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct CLit {
    pub t: Term,
    pub level: usize,
    pub rel: Rel,
}

pub(crate) enum Simp {
    True,
    False,
    Lit(CLit),
}

fn truth(b: bool) -> Simp {
    if b {
        Simp::True
    } else {
        Simp::False
    }
}

/// Build a literal, folding ground and trivially decided cases.
pub(crate) fn mk(g: &GroupDescriptor, t: Term, level: usize, rel: Rel) -> Simp {
    let kind = g.component(level);
    match rel {
        Rel::Div(ref n) | Rel::NDiv(ref n) => {
            let positive = matches!(rel, Rel::Div(_));
            let n = match kind {
                ComponentKind::Rat => Int::one(),
                ComponentKind::IntLoc(m) => coprime_part(n, *m),
                _ => n.clone(),
            };
            if n.is_one() {
                return truth(positive);
            }
            let t = t.reduce_coeffs(&n);
            if t.is_ground() {
                return truth(t.constant_part().coord(level).in_multiple(kind, &n) == positive);
            }
            // π(k·s + c) ∈ N·C with d = gcd(k, N) needs π(c) ∈ d·C, then divide through
            let d = t.content().gcd(&n);
            if !d.is_one() {
                let c = t.constant_part().coord(level);
                if !c.in_multiple(kind, &d) {
                    return truth(!positive);
                }
                let zero = t.constant_part().scale(&Int::zero());
                let t = Term::from_parts(t.coeffs().clone(), zero.with_coord(level, c.clone())).div_exact(&d);
                let n = &n / &d;
                let rel = if positive { Rel::Div(n) } else { Rel::NDiv(n) };
                return mk(g, t, level, rel);
            }
            let t = t.sign_normalized().0;
            let rel = if positive { Rel::Div(n) } else { Rel::NDiv(n) };
            Simp::Lit(CLit { t, level, rel })
        }
        Rel::Eq => {
            if t.is_ground() {
                return truth(t.constant_part().coord(level).is_zero());
            }
            Simp::Lit(CLit { t: t.sign_normalized().0, level, rel })
        }
        Rel::Gt | Rel::Ge => {
            if t.is_ground() {
                let s = t.constant_part().coord(level).sign();
                return truth(s == Ordering::Greater || (rel == Rel::Ge && s == Ordering::Equal));
            }
            Simp::Lit(CLit { t, level, rel })
        }
    }
}

/// Propositional structure over coordinate literals.
#[derive(Clone, Debug)]
pub(crate) enum LF {
    True,
    False,
    Lit(CLit),
    /// An `x`-free subformula, carried through the DNF by index.
    Opaque(usize),
    And(Vec<LF>),
    Or(Vec<LF>),
}

impl From<Simp> for LF {
    fn from(s: Simp) -> LF {
        match s {
            Simp::True => LF::True,
            Simp::False => LF::False,
            Simp::Lit(l) => LF::Lit(l),
        }
    }
}

fn and(items: Vec<LF>) -> LF {
    let mut out = Vec::new();
    for i in items {
        match i {
            LF::True => {}
            LF::False => return LF::False,
            LF::And(v) => out.extend(v),
            x => out.push(x),
        }
    }
    match out.len() {
        0 => LF::True,
        1 => out.pop().expect("one"),
        _ => LF::And(out),
    }
}

fn or(items: Vec<LF>) -> LF {
    let mut out = Vec::new();
    for i in items {
        match i {
            LF::False => {}
            LF::True => return LF::True,
            LF::Or(v) => out.extend(v),
            x => out.push(x),
        }
    }
    match out.len() {
        0 => LF::False,
        1 => out.pop().expect("one"),
        _ => LF::Or(out),
    }
}

struct Dec<'a> {
    g: &'a GroupDescriptor,
    x: &'a str,
    opaque: Vec<Formula>,
}

impl Dec<'_> {
    fn lit(&self, t: &Term, i: usize, rel: Rel) -> LF {
        mk(self.g, t.clone(), i, rel).into()
    }

    fn zero_below(&self, u: &Term, i: usize) -> Vec<LF> {
        (0..i).map(|j| self.lit(u, j, Rel::Eq)).collect()
    }

    /// `u > 0`, or `u ≥ 0` when `weak`.
    fn positive(&self, u: &Term, weak: bool) -> LF {
        let n = self.g.len();
        or((0..n)
            .map(|i| {
                let rel = if weak && i + 1 == n { Rel::Ge } else { Rel::Gt };
                let mut v = self.zero_below(u, i);
                v.push(self.lit(u, i, rel));
                and(v)
            })
            .collect())
    }

    fn zero(&self, u: &Term, k: usize) -> LF {
        and(self.zero_below(u, k))
    }

    /// Some coordinate below `k` is nonzero; split on the first one.
    fn nonzero(&self, u: &Term, k: usize) -> LF {
        let neg = u.neg();
        or((0..k)
            .map(|i| {
                let mut v = self.zero_below(u, i);
                v.push(or(vec![self.lit(u, i, Rel::Gt), self.lit(&neg, i, Rel::Gt)]));
                and(v)
            })
            .collect())
    }

    fn atom(&self, a: &Atom, positive: bool) -> LF {
        let n = self.g.len();
        match (a, positive) {
            (Atom::Lt(l, r), true) => self.positive(&r.sub(l), false),
            (Atom::Le(l, r), true) => self.positive(&r.sub(l), true),
            (Atom::Lt(l, r), false) => self.positive(&l.sub(r), true),
            (Atom::Le(l, r), false) => self.positive(&l.sub(r), false),
            (Atom::Eq(l, r), true) => self.zero(&r.sub(l), n),
            (Atom::Eq(l, r), false) => self.nonzero(&r.sub(l), n),
            (Atom::InH { t, k }, true) => self.zero(t, *k),
            (Atom::InH { t, k }, false) => self.nonzero(t, *k),
            (Atom::Cong { t, n: m, rep }, true) => {
                let u = t.add_const(&rep.neg());
                and((0..n).map(|i| self.lit(&u, i, Rel::Div(m.clone()))).collect())
            }
            (Atom::Cong { t, n: m, rep }, false) => {
                let u = t.add_const(&rep.neg());
                or((0..n).map(|i| self.lit(&u, i, Rel::NDiv(m.clone()))).collect())
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<LF, LogicError> {
        if !f.free_vars().contains(self.x) && !matches!(f, Formula::True | Formula::False) {
            if !f.is_quantifier_free() {
                return Err(LogicError::NotQuantifierFree);
            }
            self.opaque.push(f.clone());
            return Ok(LF::Opaque(self.opaque.len() - 1));
        }
        Ok(match f {
            Formula::True => LF::True,
            Formula::False => LF::False,
            Formula::Atom(a) => self.atom(a, true),
            Formula::Not(x) => match &**x {
                Formula::Atom(a) => self.atom(a, false),
                other => return Err(LogicError::Unsupported(format!("negation not in normal form: {other}"))),
            },
            Formula::And(v) => and(v.iter().map(|x| self.formula(x)).collect::<Result<_, _>>()?),
            Formula::Or(v) => or(v.iter().map(|x| self.formula(x)).collect::<Result<_, _>>()?),
            Formula::Exists(..) | Formula::Forall(..) => return Err(LogicError::NotQuantifierFree),
        })
    }
}

/// Decompose a quantifier-free formula in negation normal form. Subformulas
/// not mentioning `x` are returned separately and referenced by index.
pub(crate) fn decompose(f: &Formula, x: &str, g: &GroupDescriptor) -> Result<(LF, Vec<Formula>), LogicError> {
    let mut d = Dec { g, x, opaque: Vec::new() };
    let lf = d.formula(f)?;
    Ok((lf, d.opaque))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Cell {
    pub lits: BTreeSet<CLit>,
    pub opaque: BTreeSet<usize>,
}

fn contradicts(a: &CLit, b: &CLit) -> bool {
    if a.level != b.level {
        return false;
    }
    let neg_b = b.t.neg();
    let same = a.t == b.t;
    let opposite = a.t == neg_b;
    match (&a.rel, &b.rel) {
        (Rel::Eq, Rel::Gt) | (Rel::Gt, Rel::Eq) => same || opposite,
        (Rel::Gt, Rel::Gt) => opposite,
        (Rel::Gt, Rel::Ge) | (Rel::Ge, Rel::Gt) => opposite,
        (Rel::Div(n), Rel::NDiv(m)) | (Rel::NDiv(m), Rel::Div(n)) => same && n == m,
        _ => false,
    }
}

fn insert(cell: &mut Cell, l: CLit) -> bool {
    if cell.lits.iter().any(|m| contradicts(m, &l)) {
        return false;
    }
    cell.lits.insert(l);
    true
}

/// Disjunctive normal form with contradiction pruning; errors beyond `cap` cells.
pub(crate) fn dnf(f: &LF, cap: usize) -> Result<Vec<Cell>, LogicError> {
    let cells = match f {
        LF::True => vec![Cell::default()],
        LF::False => vec![],
        LF::Lit(l) => vec![Cell { lits: BTreeSet::from([l.clone()]), opaque: BTreeSet::new() }],
        LF::Opaque(i) => vec![Cell { lits: BTreeSet::new(), opaque: BTreeSet::from([*i]) }],
        LF::Or(v) => {
            let mut out: BTreeSet<Cell> = BTreeSet::new();
            for x in v {
                out.extend(dnf(x, cap)?);
                if out.len() > cap {
                    return Err(LogicError::DnfCap { cap });
                }
            }
            out.into_iter().collect()
        }
        LF::And(v) => {
            let mut acc = vec![Cell::default()];
            for x in v {
                let part = dnf(x, cap)?;
                let mut next: BTreeSet<Cell> = BTreeSet::new();
                for a in &acc {
                    'cells: for b in &part {
                        let mut c = a.clone();
                        for l in &b.lits {
                            if !insert(&mut c, l.clone()) {
                                continue 'cells;
                            }
                        }
                        c.opaque.extend(b.opaque.iter().copied());
                        next.insert(c);
                        if next.len() > cap {
                            return Err(LogicError::DnfCap { cap });
                        }
                    }
                }
                acc = next.into_iter().collect();
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    };
    Ok(cells)
}
