use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::formula::{Atom, Formula};
use super::term::{Assignment, Term};
use crate::num::Int;
use crate::oag::{GroupDescriptor, GroupElement};

/// Cheap equivalence-preserving cleanup: constant folding, flattening,
/// deduplication and removal of subsumed `in_H` conjuncts.
pub fn simplify(f: &Formula, g: &GroupDescriptor) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => simplify_atom(a, g),
        Formula::Not(x) => match simplify(x, g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(y) => *y,
            y => Formula::not(y),
        },
        Formula::And(items) => simplify_and(items.iter().map(|x| simplify(x, g)).collect()),
        Formula::Or(items) => simplify_or(items.iter().map(|x| simplify(x, g)).collect(), g),
        Formula::Exists(x, b) => match simplify(b, g) {
            b @ (Formula::True | Formula::False) => b,
            b => Formula::exists(x, b),
        },
        Formula::Forall(x, b) => match simplify(b, g) {
            b @ (Formula::True | Formula::False) => b,
            b => Formula::forall(x, b),
        },
    }
}

fn truth(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

pub(crate) fn simplify_atom(a: &Atom, g: &GroupDescriptor) -> Formula {
    if let Atom::Cong { t, n, rep } = a {
        if n.to_u64().and_then(|m| g.class_count(m).ok()) == Some(1) {
            return Formula::True;
        }
        let t = t.reduce_coeffs(n).add_const(&rep.neg());
        if t.is_ground() {
            return truth(g.in_multiple(t.constant_part(), n));
        }
        let d = t.content().gcd(n);
        if !g.in_multiple(t.constant_part(), &d) {
            return Formula::False;
        }
        let (t, n) = (t.div_exact(&d), n / &d);
        let rep = g.class_rep(&t.constant_part().neg(), &n);
        let t = t.linear_part();
        return Formula::Atom(Atom::Cong { t, n, rep });
    }
    if a.vars().is_empty() {
        if let Ok(v) = a.eval(&Assignment::new(), g) {
            return truth(v);
        }
    }
    match a {
        Atom::InH { k: 0, .. } => Formula::True,
        Atom::InH { t, k } => Formula::Atom(Atom::InH { t: t.sign_normalized().0, k: *k }),
        Atom::Eq(l, r) if l == r => Formula::True,
        Atom::Le(l, r) if l == r => Formula::True,
        Atom::Lt(l, r) if l == r => Formula::False,
        _ => Formula::Atom(a.clone()),
    }
}

fn is_negation_of(a: &Formula, b: &Formula) -> bool {
    matches!(b, Formula::Not(x) if **x == *a) || matches!(a, Formula::Not(x) if **x == *b)
}

fn simplify_and(items: Vec<Formula>) -> Formula {
    let mut flat = Vec::new();
    for f in items {
        match f {
            Formula::True => {}
            Formula::False => return Formula::False,
            Formula::And(v) => flat.extend(v),
            other => flat.push(other),
        }
    }
    // keep only the strongest in_H for each term
    let mut strongest: BTreeMap<Term, usize> = BTreeMap::new();
    for f in &flat {
        if let Formula::Atom(Atom::InH { t, k }) = f {
            let e = strongest.entry(t.clone()).or_insert(*k);
            *e = (*e).max(*k);
        }
    }
    // a positive congruence fixes the class of its term
    let mut class: BTreeMap<(Term, Int), GroupElement> = BTreeMap::new();
    for f in &flat {
        if let Formula::Atom(Atom::Cong { t, n, rep }) = f {
            let key = (t.clone(), n.clone());
            if let Some(r) = class.get(&key) {
                if r != rep {
                    return Formula::False;
                }
            }
            class.insert(key, rep.clone());
        }
    }
    let mut seen = HashSet::new();
    let mut out: Vec<Formula> = Vec::new();
    for f in flat {
        if let Formula::Atom(Atom::InH { t, k }) = &f {
            if strongest.get(t) != Some(k) {
                continue;
            }
        }
        if let Formula::Not(b) = &f {
            if let Formula::Atom(Atom::Cong { t, n, rep }) = &**b {
                if class.get(&(t.clone(), n.clone())).is_some_and(|r| r != rep) {
                    continue;
                }
            }
        }
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if is_negation_of(&out[i], &out[j]) {
                return Formula::False;
            }
        }
    }
    Formula::and(out)
}

fn simplify_or(items: Vec<Formula>, g: &GroupDescriptor) -> Formula {
    let mut flat = Vec::new();
    for f in items {
        match f {
            Formula::False => {}
            Formula::True => return Formula::True,
            Formula::Or(v) => flat.extend(v),
            other => flat.push(other),
        }
    }
    let mut seen = HashSet::new();
    let mut out: Vec<Formula> = Vec::new();
    for f in flat {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if is_negation_of(&out[i], &out[j]) {
                return Formula::True;
            }
        }
    }
    // congruences on one term covering every class
    let mut classes: BTreeMap<(Term, Int), usize> = BTreeMap::new();
    for f in &out {
        if let Formula::Atom(Atom::Cong { t, n, .. }) = f {
            *classes.entry((t.clone(), n.clone())).or_default() += 1;
        }
    }
    for ((_, n), count) in classes {
        if n.to_u64().and_then(|m| g.class_count(m).ok()) == Some(count as u64) {
            return Formula::True;
        }
    }
    Formula::or(out)
}

/// Negation normal form: `Not` only directly above `Eq`, `Cong` and `InH` atoms.
pub(crate) fn nnf(f: &Formula) -> Formula {
    match f {
        Formula::Not(x) => negate(x),
        Formula::And(v) => Formula::And(v.iter().map(nnf).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(nnf).collect()),
        Formula::Exists(x, b) => Formula::exists(x, nnf(b)),
        Formula::Forall(x, b) => Formula::forall(x, nnf(b)),
        _ => f.clone(),
    }
}

fn negate(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(x) => nnf(x),
        Formula::And(v) => Formula::Or(v.iter().map(negate).collect()),
        Formula::Or(v) => Formula::And(v.iter().map(negate).collect()),
        Formula::Atom(Atom::Lt(a, b)) => Formula::Atom(Atom::Le(b.clone(), a.clone())),
        Formula::Atom(Atom::Le(a, b)) => Formula::Atom(Atom::Lt(b.clone(), a.clone())),
        Formula::Atom(_) => Formula::not(f.clone()),
        Formula::Exists(x, b) => Formula::forall(x, negate(b)),
        Formula::Forall(x, b) => Formula::exists(x, negate(b)),
    }
}
