//! Turning coordinate literals back into formulas of the surface language.
//!
//! Order literals produced by elimination keep the property that every lower
//! coordinate of their term is forced to zero by the rest of the cell, so
//! `π_i(u) > 0` can be written as `u ∈ Δ_i ∧ 0 < u ∧ u ∉ Δ_{i+1}`.
//! Divisibility literals need no such context: they are regrouped by linear
//! part and re-expressed through the finitely many classes of `Γ/NΓ`.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::super::formula::{Atom, Formula};
use super::super::term::Term;
use super::super::LogicError;
use super::lit::{CLit, Rel};
use crate::num::Int;
use crate::oag::{GroupDescriptor, GroupElement};

/// Largest `|Γ/NΓ|` enumerated when rebuilding congruences.
pub const CLASS_BUDGET: u64 = 100_000;

fn lt_zero(u: &Term) -> Formula {
    let (p, n) = u.split_signs();
    Formula::Atom(Atom::Lt(n, p))
}

fn le_zero(u: &Term) -> Formula {
    let (p, n) = u.split_signs();
    Formula::Atom(Atom::Le(n, p))
}

pub(crate) fn in_h(u: &Term, k: usize, g: &GroupDescriptor) -> Formula {
    if k == 0 {
        return Formula::True;
    }
    if k == g.len() {
        let (p, n) = u.sign_normalized().0.split_signs();
        return Formula::Atom(Atom::Eq(p, n));
    }
    Formula::Atom(Atom::InH { t: u.sign_normalized().0, k })
}

fn order_literal(l: &CLit, g: &GroupDescriptor) -> Formula {
    let n = g.len();
    let i = l.level;
    let u = &l.t;
    let guard = in_h(u, i, g);
    let last = i + 1 == n;
    match l.rel {
        Rel::Gt => {
            let mut v = vec![guard, lt_zero(u)];
            if !last {
                v.push(Formula::not(in_h(u, i + 1, g)));
            }
            Formula::and(v)
        }
        Rel::Ge => {
            if last {
                Formula::and(vec![guard, le_zero(u)])
            } else {
                Formula::and(vec![guard, Formula::or(vec![le_zero(u), in_h(u, i + 1, g)])])
            }
        }
        Rel::Eq => in_h(u, i + 1, g),
        Rel::Div(_) | Rel::NDiv(_) => unreachable!("handled by congruence regrouping"),
    }
}

struct DivGroupEntry {
    flipped: bool,
    constant: GroupElement,
    level: usize,
    positive: bool,
}

pub(crate) fn translate_conj(lits: &[CLit], g: &GroupDescriptor) -> Result<Formula, LogicError> {
    let mut parts = Vec::new();
    let mut groups: BTreeMap<(Term, Int), Vec<DivGroupEntry>> = BTreeMap::new();
    for l in lits {
        match &l.rel {
            Rel::Div(n) | Rel::NDiv(n) => {
                let (lin, flipped) = l.t.linear_part().sign_normalized();
                groups.entry((lin, n.clone())).or_default().push(DivGroupEntry {
                    flipped,
                    constant: l.t.constant_part().clone(),
                    level: l.level,
                    positive: matches!(l.rel, Rel::Div(_)),
                });
            }
            _ => parts.push(order_literal(l, g)),
        }
    }
    for ((w, n), entries) in groups {
        let nu = n.to_u64().ok_or_else(|| LogicError::Unsupported(format!("modulus {n} too large")))?;
        let count = g.class_count(nu)?;
        if count > CLASS_BUDGET {
            return Err(LogicError::Unsupported(format!("{count} residue classes modulo {n}")));
        }
        let classes = g.residue_classes(nu)?;
        let ok = |rho: &GroupElement| {
            entries.iter().all(|e| {
                let base = if e.flipped { rho.neg() } else { rho.clone() };
                let v = base.add(&e.constant);
                v.coord(e.level).in_multiple(g.component(e.level), &n) == e.positive
            })
        };
        let (allowed, banned): (Vec<GroupElement>, Vec<GroupElement>) = classes.into_iter().partition(ok);
        let cong = |rho: GroupElement| Formula::Atom(Atom::Cong { t: w.clone(), n: n.clone(), rep: rho });
        if allowed.is_empty() {
            return Ok(Formula::False);
        }
        if banned.is_empty() {
            continue;
        }
        if allowed.len() <= banned.len() {
            parts.push(Formula::or(allowed.into_iter().map(cong).collect()));
        } else {
            parts.push(Formula::not(Formula::or(banned.into_iter().map(cong).collect())));
        }
    }
    Ok(Formula::and(parts))
}
