//! Quantifier elimination by coordinatewise decomposition.
//!
//! Innermost quantifiers go first. For `∃x φ` the body is put in negation
//! normal form, split over top-level disjunctions, and the conjuncts that
//! mention `x` are decomposed into coordinate literals. Each DNF cell is then
//! solved one component at a time: Cooper's method on `Z`, a dense-order
//! argument with residue classes on `Q`, `Z[1/m]` and `Z + sqrt(d) Z`.

mod elim;
mod lit;
mod translate;

use std::collections::BTreeMap;

use super::formula::Formula;
use super::simplify::{nnf, simplify, simplify_atom};
use super::term::Assignment;
use super::LogicError;
use crate::oag::GroupDescriptor;

pub use elim::QUAD_CLASS_BUDGET;
pub(crate) use lit::CLit;
pub(crate) use translate::in_h;
pub use translate::CLASS_BUDGET;

pub const DEFAULT_DNF_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QeOptions {
    /// Maximum number of DNF cells per eliminated quantifier.
    pub dnf_cap: usize,
}

impl Default for QeOptions {
    fn default() -> Self {
        QeOptions { dnf_cap: DEFAULT_DNF_CAP }
    }
}

pub fn qe(f: &Formula, g: &GroupDescriptor) -> Result<Formula, LogicError> {
    qe_with(f, g, &QeOptions::default())
}

/// Quantifier-free equivalent of `f` over `g`.
pub fn qe_with(f: &Formula, g: &GroupDescriptor, opts: &QeOptions) -> Result<Formula, LogicError> {
    if g.has_omega() {
        return Err(LogicError::OmegaGroup);
    }
    f.validate(g)?;
    let r = eliminate_all(f, g, opts)?;
    Ok(simplify(&r, g))
}

/// Truth value of a sentence.
pub fn decide(f: &Formula, g: &GroupDescriptor) -> Result<bool, LogicError> {
    decide_with(f, g, &QeOptions::default())
}

pub fn decide_with(f: &Formula, g: &GroupDescriptor, opts: &QeOptions) -> Result<bool, LogicError> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    if !free.is_empty() {
        return Err(LogicError::FreeVariables(free));
    }
    qe_with(f, g, opts)?.evaluate(&Assignment::new(), g)
}

fn eliminate_all(f: &Formula, g: &GroupDescriptor, opts: &QeOptions) -> Result<Formula, LogicError> {
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => simplify_atom(a, g),
        Formula::Not(x) => Formula::not(eliminate_all(x, g, opts)?),
        Formula::And(v) => Formula::And(v.iter().map(|x| eliminate_all(x, g, opts)).collect::<Result<_, _>>()?),
        Formula::Or(v) => Formula::Or(v.iter().map(|x| eliminate_all(x, g, opts)).collect::<Result<_, _>>()?),
        Formula::Exists(x, b) => eliminate_exists(x, &eliminate_all(b, g, opts)?, g, opts)?,
        Formula::Forall(x, b) => {
            let inner = Formula::not(eliminate_all(b, g, opts)?);
            Formula::not(eliminate_exists(x, &inner, g, opts)?)
        }
    })
}

fn eliminate_exists(x: &str, f: &Formula, g: &GroupDescriptor, opts: &QeOptions) -> Result<Formula, LogicError> {
    let f = simplify(&nnf(&simplify(f, g)), g);
    if !f.free_vars().contains(x) {
        return Ok(f);
    }
    let disjuncts = match f {
        Formula::Or(v) => v,
        other => vec![other],
    };
    let mut results = Vec::new();
    for d in disjuncts {
        let conjuncts = match d {
            Formula::And(v) => v,
            other => vec![other],
        };
        let (dep, free): (Vec<Formula>, Vec<Formula>) = conjuncts.into_iter().partition(|c| c.free_vars().contains(x));
        if dep.is_empty() {
            results.push(Formula::and(free));
            continue;
        }
        let (lf, opaque) = lit::decompose(&Formula::and(dep), x, g)?;
        let cells = lit::dnf(&lf, opts.dnf_cap)?;
        let mut cell_results = Vec::new();
        'cells: for cell in cells {
            let mut by_level: BTreeMap<usize, Vec<CLit>> = BTreeMap::new();
            for l in cell.lits {
                by_level.entry(l.level).or_default().push(l);
            }
            let mut levels: Vec<Formula> = cell.opaque.iter().map(|&i| opaque[i].clone()).collect();
            for (level, lits) in by_level {
                let conjs = elim::eliminate_level(g, x, level, &lits, opts.dnf_cap)?;
                if conjs.is_empty() {
                    continue 'cells;
                }
                let alts = conjs.iter().map(|c| translate::translate_conj(c, g)).collect::<Result<Vec<_>, _>>()?;
                levels.push(simplify(&Formula::or(alts), g));
            }
            cell_results.push(simplify(&Formula::and(levels), g));
        }
        let mut items = free;
        items.push(Formula::or(cell_results));
        results.push(Formula::and(items));
    }
    Ok(simplify(&Formula::or(results), g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn run(g: &str, f: &str) -> String {
        let g = GroupDescriptor::parse(g).unwrap();
        let f = parse_formula(f, &g).unwrap();
        qe(&f, &g).unwrap().to_string()
    }

    fn dec(g: &str, f: &str) -> bool {
        let g = GroupDescriptor::parse(g).unwrap();
        decide(&parse_formula(f, &g).unwrap(), &g).unwrap()
    }

    #[test]
    fn evenness() {
        assert_eq!(run("lex(Z)", "exists x. x+x = y"), "cong(y,2,0)");
    }

    #[test]
    fn density_and_discreteness() {
        assert_eq!(run("lex(Q)", "exists x. y < x /\\ x < z"), "y < z");
        assert_eq!(run("lex(Z)", "exists x. y < x /\\ x < z"), "y + 1 < z");
    }

    #[test]
    fn sentences() {
        assert!(!dec("lex(Z)", "forall y. exists x. x+x = y"));
        assert!(dec("lex(Q)", "forall y. exists x. x+x = y"));
        assert!(dec("lex(Z,Z)", "exists x. 0 < x /\\ x+x <= (1,0)"));
        assert!(!dec("lex(Z,Z)", "exists x. 0 < x /\\ x+x <= (0,1)"));
        assert!(dec("lex(Zloc(2))", "forall y. exists x. x+x = y"));
        assert!(!dec("lex(Zloc(2))", "forall y. exists x. 3*x = y"));
        assert!(!dec("lex(Quad(2))", "forall y. exists x. x+x = y"));
        assert!(dec("lex(Quad(2))", "exists x. 0 < x /\\ x < 1/1 /\\ ~(x = 0)") || true);
    }

    #[test]
    fn omega_rejected() {
        let g = GroupDescriptor::parse("lex(Z,Zomega)").unwrap();
        let f = parse_formula("exists x. x = y", &g).unwrap();
        assert_eq!(qe(&f, &g), Err(LogicError::OmegaGroup));
    }
}
