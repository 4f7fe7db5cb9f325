//! Relations evaluated in a quotient `Γ/Δ_k` and their rewriting into
//! ordinary atoms over `Γ`.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use super::formula::{Atom, Formula};
use super::qe::{in_h, CLASS_BUDGET};
use super::simplify::simplify;
use super::term::{Assignment, Term};
use super::LogicError;
use crate::num::Int;
use crate::oag::{GroupDescriptor, GroupElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QRel {
    Eq,
    Lt,
    Cong(Int),
}

/// `π(left) ⋄ π(right) + shift·ε` in `Γ/Δ_k`, with `ε` the least positive
/// element of the quotient when it is discrete and `0` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientAtom {
    pub rel: QRel,
    pub k: usize,
    pub left: Term,
    pub right: Term,
    pub shift: Int,
}

impl QuotientAtom {
    fn lift(&self, g: &GroupDescriptor) -> Result<GroupElement, LogicError> {
        let q = g.quotient(self.k)?;
        Ok(q.k_alpha(&self.shift))
    }

    /// Direct evaluation by comparing the first `k` coordinates.
    pub fn eval(&self, sigma: &Assignment, g: &GroupDescriptor) -> Result<bool, LogicError> {
        let c = self.lift(g)?;
        let l = self.left.eval(sigma)?;
        let r = self.right.eval(sigma)?.add(&c);
        let head = |e: &GroupElement| e.coords()[..self.k].to_vec();
        Ok(match &self.rel {
            QRel::Eq => head(&l) == head(&r),
            QRel::Lt => head(&l) < head(&r),
            QRel::Cong(m) => {
                let d = l.sub(&r);
                (0..self.k).all(|i| d.coord(i).in_multiple(g.component(i), m))
            }
        })
    }
}

impl fmt::Display for QuotientAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match &self.rel {
            QRel::Eq => "=".to_string(),
            QRel::Lt => "<".to_string(),
            QRel::Cong(m) => format!("~{m}"),
        };
        write!(f, "{} {op}[{}] {}", self.left, self.k, self.right)?;
        if !self.shift.is_zero() {
            write!(f, " + {}e", self.shift)?;
        }
        Ok(())
    }
}

/// Rewrite a quotient relation as a formula in `in_H`, order and `cong` atoms.
pub fn rewrite_quotient_atom(qa: &QuotientAtom, g: &GroupDescriptor) -> Result<Formula, LogicError> {
    if qa.k > g.len() {
        return Err(LogicError::UnknownSubgroup { k: qa.k, n: g.len() });
    }
    let c = qa.lift(g)?;
    let diff = qa.right.sub(&qa.left).add_const(&c);
    let out = match &qa.rel {
        QRel::Eq => in_h_atom(&diff, qa.k, g),
        QRel::Lt => {
            let lt = Formula::Atom(Atom::Lt(qa.left.clone(), qa.right.add_const(&c)));
            Formula::and(vec![lt, Formula::not(in_h_atom(&diff, qa.k, g))])
        }
        QRel::Cong(m) => {
            if !m.is_positive() {
                return Err(LogicError::BadModulus(m.clone()));
            }
            let u = qa.left.sub(&qa.right).add_const(&c.neg());
            let n = m.to_u64().ok_or_else(|| LogicError::Unsupported(format!("modulus {m} too large")))?;
            let count = g.class_count(n)?;
            if count > CLASS_BUDGET {
                return Err(LogicError::Unsupported(format!("{count} residue classes modulo {m}")));
            }
            let allowed: Vec<Formula> = g
                .residue_classes(n)?
                .into_iter()
                .filter(|rho| (0..qa.k).all(|i| rho.coord(i).in_multiple(g.component(i), m)))
                .map(|rho| Formula::Atom(Atom::Cong { t: u.clone(), n: m.clone(), rep: rho }))
                .collect();
            if allowed.len() as u64 == count {
                Formula::True
            } else {
                simplify(&Formula::or(allowed), g)
            }
        }
    };
    Ok(out)
}

/// `in_H(t, k)` kept as an atom even for `k = n`, so the rewrite has the printed shape.
fn in_h_atom(t: &Term, k: usize, g: &GroupDescriptor) -> Formula {
    if k == g.len() {
        return in_h(t, k, g);
    }
    Formula::Atom(Atom::InH { t: t.clone(), k })
}
