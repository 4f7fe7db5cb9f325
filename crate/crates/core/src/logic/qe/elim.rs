//! Elimination of one variable from a conjunction of literals on a single component.

use num_traits::{One, Signed, ToPrimitive};

use super::super::term::Term;
use super::super::LogicError;
use super::lit::{mk, CLit, Rel, Simp};
use crate::num::{lcm, Int};
use crate::oag::{ComponentKind, Coord, GroupDescriptor, GroupElement};

/// Largest class count `C/DC` enumerated for a quadratic component.
pub const QUAD_CLASS_BUDGET: u64 = 4096;

/// Conjunction builder that drops true literals and reports a false one.
struct Conj<'a> {
    g: &'a GroupDescriptor,
    level: usize,
    lits: Vec<CLit>,
    dead: bool,
}

impl<'a> Conj<'a> {
    fn new(g: &'a GroupDescriptor, level: usize, base: &[CLit]) -> Self {
        Conj { g, level, lits: base.to_vec(), dead: false }
    }

    fn push(&mut self, t: Term, rel: Rel) {
        if self.dead {
            return;
        }
        match mk(self.g, t, self.level, rel) {
            Simp::True => {}
            Simp::False => self.dead = true,
            Simp::Lit(l) => {
                if !self.lits.contains(&l) {
                    self.lits.push(l)
                }
            }
        }
    }

    fn finish(self, out: &mut Vec<Vec<CLit>>) {
        if !self.dead {
            out.push(self.lits);
        }
    }
}

fn scaled_rel(rel: &Rel, k: &Int) -> Rel {
    match rel {
        Rel::Div(n) => Rel::Div(n * k),
        Rel::NDiv(n) => Rel::NDiv(n * k),
        r => r.clone(),
    }
}

/// `∃x` of the conjunction `lits` (all at `level`), as a disjunction of conjunctions.
pub(crate) fn eliminate_level(
    g: &GroupDescriptor,
    x: &str,
    level: usize,
    lits: &[CLit],
    cap: usize,
) -> Result<Vec<Vec<CLit>>, LogicError> {
    let (with_x, without): (Vec<CLit>, Vec<CLit>) = lits.iter().cloned().partition(|l| l.t.has_var(x));
    if with_x.is_empty() {
        return Ok(vec![without]);
    }
    let mut out = Vec::new();
    if let Some(pos) = pivot_index(x, &with_x) {
        let mut c = Conj::new(g, level, &without);
        let e = &with_x[pos];
        let k = e.t.coeff(x);
        let (se, a) = if k.is_positive() { (e.t.clone(), k) } else { (e.t.neg(), -k) };
        for (i, l) in with_x.iter().enumerate() {
            if i == pos {
                continue;
            }
            let c_l = l.t.coeff(x);
            c.push(l.t.scale(&a).sub(&se.scale(&c_l)), scaled_rel(&l.rel, &a));
        }
        c.push(se.without(x), Rel::Div(a));
        c.finish(&mut out);
        return Ok(out);
    }
    match g.component(level) {
        ComponentKind::Int => cooper(g, x, level, with_x, &without, cap, &mut out)?,
        ComponentKind::Rat | ComponentKind::IntLoc(_) | ComponentKind::Quad(_) => {
            dense(g, x, level, with_x, &without, cap, &mut out)?
        }
        ComponentKind::OmegaInt => return Err(LogicError::OmegaGroup),
    }
    Ok(out)
}

fn pivot_index(x: &str, lits: &[CLit]) -> Option<usize> {
    lits.iter().enumerate().filter(|(_, l)| l.rel == Rel::Eq).min_by_key(|(_, l)| l.t.coeff(x).abs()).map(|(i, _)| i)
}

fn check_cap(count: &Int, cap: usize) -> Result<(), LogicError> {
    if *count > Int::from(cap) {
        Err(LogicError::DnfCap { cap })
    } else {
        Ok(())
    }
}

/// Integer component, least-witness variant: the smallest solution sits just above
/// some lower bound, within one period of the divisibility constraints.
fn cooper(
    g: &GroupDescriptor,
    x: &str,
    level: usize,
    with_x: Vec<CLit>,
    without: &[CLit],
    cap: usize,
    out: &mut Vec<Vec<CLit>>,
) -> Result<(), LogicError> {
    let e = g.unit(level);
    let lits: Vec<CLit> = with_x
        .into_iter()
        .map(|l| match l.rel {
            Rel::Ge => CLit { t: l.t.add_const(&e), level, rel: Rel::Gt },
            _ => l,
        })
        .collect();
    let big_l = lits.iter().fold(Int::one(), |acc, l| lcm(&acc, &l.t.coeff(x)));
    let mut scaled: Vec<CLit> = lits
        .iter()
        .map(|l| {
            let m = &big_l / l.t.coeff(x).abs();
            CLit { t: l.t.scale(&m), level, rel: scaled_rel(&l.rel, &m) }
        })
        .collect();
    if !big_l.is_one() {
        scaled.push(CLit { t: Term::linear(x, big_l.clone(), g), level, rel: Rel::Div(big_l.clone()) });
    }
    let delta = scaled.iter().fold(Int::one(), |acc, l| match &l.rel {
        Rel::Div(n) | Rel::NDiv(n) => lcm(&acc, n),
        _ => acc,
    });
    let is_div = |l: &CLit| matches!(l.rel, Rel::Div(_) | Rel::NDiv(_));
    let has_divs = scaled.iter().any(is_div);
    let lowers: Vec<&CLit> = scaled.iter().filter(|l| l.rel == Rel::Gt && l.t.coeff(x).is_positive()).collect();
    let has_uppers = scaled.iter().any(|l| l.rel == Rel::Gt && l.t.coeff(x).is_negative());
    if !has_divs && (lowers.is_empty() || !has_uppers) {
        out.push(without.to_vec());
        return Ok(());
    }
    let sigma = |l: &CLit| if l.t.coeff(x).is_positive() { Int::one() } else { -Int::one() };
    check_cap(&(&delta * Int::from(lowers.len().max(1))), cap)?;
    let d = delta.to_u64().ok_or(LogicError::DnfCap { cap })?;
    if lowers.is_empty() {
        for j in 1..=d {
            let shift = e.scale(&Int::from(j));
            let mut c = Conj::new(g, level, without);
            for l in scaled.iter().filter(|l| is_div(l)) {
                c.push(l.t.without(x).add_const(&shift.scale(&sigma(l))), l.rel.clone());
            }
            c.finish(out);
        }
        return Ok(());
    }
    for b in &lowers {
        for j in 1..=d {
            let shift = e.scale(&Int::from(j));
            let mut c = Conj::new(g, level, without);
            for l in &scaled {
                if std::ptr::eq(l, *b) {
                    continue;
                }
                let s = sigma(l);
                c.push(l.t.sub(&b.t.scale(&s)).add_const(&shift.scale(&s)), l.rel.clone());
            }
            c.finish(out);
        }
    }
    Ok(())
}

/// Representatives of `C/DC` placed at coordinate `level`.
fn dense_classes(g: &GroupDescriptor, level: usize, d: &Int) -> Result<Vec<GroupElement>, LogicError> {
    let zero = g.zero();
    let at = |c: Coord| zero.with_coord(level, c);
    let n = d.to_u64().ok_or_else(|| LogicError::Unsupported(format!("modulus {d} too large")))?;
    Ok(match g.component(level) {
        ComponentKind::Rat => vec![zero.clone()],
        ComponentKind::IntLoc(_) | ComponentKind::Int => {
            (0..n).map(|j| at(Coord::Num(crate::num::Rat::from_integer(Int::from(j))))).collect()
        }
        ComponentKind::Quad(q) => {
            if n.saturating_mul(n) > QUAD_CLASS_BUDGET {
                return Err(LogicError::Unsupported(format!(
                    "quadratic component needs {n}^2 residue classes, budget is {QUAD_CLASS_BUDGET}"
                )));
            }
            let mut v = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    v.push(at(Coord::Quad { a: Int::from(a), b: Int::from(b), d: *q }));
                }
            }
            v
        }
        ComponentKind::OmegaInt => return Err(LogicError::OmegaGroup),
    })
}

/// Dense components: split `x` by its class modulo `D`, then either the open
/// interval between the bounds is nonempty or `x` sits on a closed lower bound.
fn dense(
    g: &GroupDescriptor,
    x: &str,
    level: usize,
    with_x: Vec<CLit>,
    without: &[CLit],
    cap: usize,
    out: &mut Vec<Vec<CLit>>,
) -> Result<(), LogicError> {
    let (divs, bounds): (Vec<CLit>, Vec<CLit>) =
        with_x.into_iter().partition(|l| matches!(l.rel, Rel::Div(_) | Rel::NDiv(_)));
    let d = divs.iter().fold(Int::one(), |acc, l| match &l.rel {
        Rel::Div(n) | Rel::NDiv(n) => lcm(&acc, n),
        _ => acc,
    });
    let lowers: Vec<&CLit> = bounds.iter().filter(|l| l.t.coeff(x).is_positive()).collect();
    let uppers: Vec<&CLit> = bounds.iter().filter(|l| l.t.coeff(x).is_negative()).collect();
    if divs.is_empty() && (lowers.is_empty() || uppers.is_empty()) {
        out.push(without.to_vec());
        return Ok(());
    }
    let classes = dense_classes(g, level, &d)?;
    let closed = lowers.iter().filter(|l| l.rel == Rel::Ge).count();
    check_cap(&Int::from(classes.len() * (closed + 1)), cap)?;
    for j in &classes {
        let mut base = Conj::new(g, level, without);
        for l in &divs {
            base.push(l.t.substitute(x, j), l.rel.clone());
        }
        if base.dead {
            continue;
        }
        if lowers.is_empty() || uppers.is_empty() {
            base.finish(out);
            continue;
        }
        let base_lits = base.lits.clone();
        let mut interior = Conj::new(g, level, &base_lits);
        for k in &lowers {
            for l in &uppers {
                let a_k = k.t.coeff(x);
                let b_l = -l.t.coeff(x);
                interior.push(k.t.scale(&b_l).add(&l.t.scale(&a_k)), Rel::Gt);
            }
        }
        interior.finish(out);
        for k in lowers.iter().filter(|l| l.rel == Rel::Ge) {
            let a_k = k.t.coeff(x);
            let mut c = Conj::new(g, level, &base_lits);
            c.push(k.t.without(x).add_const(&j.scale(&a_k)), Rel::Div(&a_k * &d));
            for s in &bounds {
                if std::ptr::eq(s, *k) {
                    continue;
                }
                let c_s = s.t.coeff(x);
                c.push(s.t.scale(&a_k).sub(&k.t.scale(&c_s)), s.rel.clone());
            }
            c.finish(out);
        }
    }
    Ok(())
}
