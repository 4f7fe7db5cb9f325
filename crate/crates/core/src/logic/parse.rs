//! Recursive-descent parser for the formula language.
//!
//! Precedence, loosest first: quantifiers, `\/`, `/\`, `~`. A quantifier body
//! extends as far right as possible.

use num_traits::Zero;

use super::formula::{Atom, Formula};
use super::term::Term;
use super::LogicError;
use crate::lexer::{tokenize, Cursor, Tok};
use crate::oag::parse::{parse_coord, parse_element_at, parse_tuple, resolve, CoordLit};
use crate::oag::{GroupDescriptor, OagError};

const KEYWORDS: &[&str] = &["exists", "forall", "cong", "in_H", "true", "false", "sqrt"];

fn syntax(cur: &Cursor, what: &str) -> LogicError {
    LogicError::Syntax(format!("expected {what}, found {}", cur.describe()))
}

fn is_var_name(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_lowercase())
        && ch.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
        && !KEYWORDS.contains(&s)
}

pub fn parse_formula(text: &str, g: &GroupDescriptor) -> Result<Formula, LogicError> {
    let toks = tokenize(text).map_err(|e| LogicError::Syntax(e.to_string()))?;
    let mut p = Parser { cur: Cursor::new(&toks), g };
    let f = p.formula()?;
    if !p.cur.at_end() {
        return Err(syntax(&p.cur, "end of formula"));
    }
    f.validate(g)?;
    Ok(f)
}

pub fn parse_term(text: &str, g: &GroupDescriptor) -> Result<Term, LogicError> {
    let toks = tokenize(text).map_err(|e| LogicError::Syntax(e.to_string()))?;
    let mut p = Parser { cur: Cursor::new(&toks), g };
    let t = p.term()?;
    if !p.cur.at_end() {
        return Err(syntax(&p.cur, "end of term"));
    }
    Ok(t)
}

struct Parser<'a> {
    cur: Cursor<'a>,
    g: &'a GroupDescriptor,
}

impl<'a> Parser<'a> {
    fn formula(&mut self) -> Result<Formula, LogicError> {
        if self.cur.is_ident("exists") || self.cur.is_ident("forall") {
            return self.quantified();
        }
        self.disjunction()
    }

    fn quantified(&mut self) -> Result<Formula, LogicError> {
        let is_exists = self.cur.eat_ident("exists");
        if !is_exists && !self.cur.eat_ident("forall") {
            return Err(syntax(&self.cur, "quantifier"));
        }
        let x = match self.cur.next() {
            Some(Tok::Ident(s)) if is_var_name(s) => s.clone(),
            _ => return Err(syntax(&self.cur, "bound variable")),
        };
        if !self.cur.eat_sym(".") {
            return Err(syntax(&self.cur, "'.'"));
        }
        let body = self.formula()?;
        Ok(if is_exists { Formula::exists(&x, body) } else { Formula::forall(&x, body) })
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut items = vec![self.conjunction()?];
        while self.cur.eat_sym("\\/") {
            items.push(self.conjunction()?);
        }
        Ok(Formula::or(items))
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut items = vec![self.unary()?];
        while self.cur.eat_sym("/\\") {
            items.push(self.unary()?);
        }
        Ok(Formula::and(items))
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        if self.cur.eat_sym("~") {
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, LogicError> {
        if self.cur.eat_ident("true") {
            return Ok(Formula::True);
        }
        if self.cur.eat_ident("false") {
            return Ok(Formula::False);
        }
        if self.cur.is_ident("exists") || self.cur.is_ident("forall") {
            return self.quantified();
        }
        if self.cur.is_sym("(") {
            let save = self.cur.clone();
            match self.atom() {
                Ok(a) => return Ok(a),
                Err(atom_err) => {
                    self.cur = save;
                    self.cur.next();
                    let f = match self.formula() {
                        Ok(f) => f,
                        Err(e) => return Err(pick_error(atom_err, e)),
                    };
                    if !self.cur.eat_sym(")") {
                        return Err(syntax(&self.cur, "')'"));
                    }
                    return Ok(f);
                }
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        if self.cur.eat_ident("cong") {
            self.expect("(")?;
            let t = self.term()?;
            self.expect(",")?;
            let n = match self.cur.next() {
                Some(Tok::Num(n)) if !n.is_zero() => n.clone(),
                _ => return Err(syntax(&self.cur, "positive modulus")),
            };
            self.expect(",")?;
            let rep = parse_element_at(&mut self.cur, self.g)?;
            self.expect(")")?;
            return Ok(Formula::Atom(Atom::Cong { t, n, rep }));
        }
        if self.cur.eat_ident("in_H") {
            self.expect("(")?;
            let t = self.term()?;
            self.expect(",")?;
            let k = match self.cur.next() {
                Some(Tok::Num(n)) => usize::try_from(n).map_err(|_| LogicError::Syntax(format!("index {n}")))?,
                _ => return Err(syntax(&self.cur, "subgroup index")),
            };
            self.expect(")")?;
            if k > self.g.len() {
                return Err(LogicError::UnknownSubgroup { k, n: self.g.len() });
            }
            return Ok(Formula::Atom(Atom::InH { t, k }));
        }
        let lhs = self.term()?;
        let op = match self.cur.next() {
            Some(Tok::Sym(s)) if ["<=", "<", "=", ">=", ">", "!="].contains(s) => *s,
            _ => {
                self.cur.pos = self.cur.pos.saturating_sub(1);
                return Err(syntax(&self.cur, "relation"));
            }
        };
        let rhs = self.term()?;
        let a = match op {
            "<=" => Atom::Le(lhs, rhs),
            "<" => Atom::Lt(lhs, rhs),
            ">=" => Atom::Le(rhs, lhs),
            ">" => Atom::Lt(rhs, lhs),
            "!=" => return Ok(Formula::not(Formula::Atom(Atom::Eq(lhs, rhs)))),
            _ => Atom::Eq(lhs, rhs),
        };
        Ok(Formula::Atom(a))
    }

    fn expect(&mut self, s: &str) -> Result<(), LogicError> {
        if self.cur.eat_sym(s) {
            Ok(())
        } else {
            Err(syntax(&self.cur, &format!("'{s}'")))
        }
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let mut acc = Term::zero(self.g);
        let mut first = true;
        loop {
            let neg = if self.cur.eat_sym("-") {
                true
            } else if first || self.cur.eat_sym("+") {
                false
            } else {
                break;
            };
            let s = self.summand()?;
            acc = if neg { acc.sub(&s) } else { acc.add(&s) };
            first = false;
        }
        Ok(acc)
    }

    fn summand(&mut self) -> Result<Term, LogicError> {
        match self.cur.peek() {
            Some(Tok::Ident(s)) if s == "sqrt" => self.constant_coord(),
            Some(Tok::Ident(s)) if is_var_name(s) => {
                let s = s.clone();
                self.cur.next();
                Ok(Term::var(&s, self.g))
            }
            Some(Tok::Num(_)) => {
                let save = self.cur.clone();
                let lit = parse_coord(&mut self.cur)?;
                if self.cur.eat_sym("*") {
                    let k = match lit {
                        CoordLit::Num(q) if q.is_integer() => q.to_integer(),
                        _ => {
                            self.cur = save;
                            return Err(LogicError::NonIntegerCoefficient(self.cur.describe()));
                        }
                    };
                    let f = self.factor()?;
                    return Ok(f.scale(&k));
                }
                self.lit_constant(lit)
            }
            Some(Tok::Sym("(")) | Some(Tok::Sym("{")) => self.factor(),
            _ => Err(syntax(&self.cur, "term")),
        }
    }

    /// Variable, parenthesized term, or element literal.
    fn factor(&mut self) -> Result<Term, LogicError> {
        match self.cur.peek() {
            Some(Tok::Ident(s)) if is_var_name(s) => {
                let s = s.clone();
                self.cur.next();
                Ok(Term::var(&s, self.g))
            }
            Some(Tok::Sym("(")) => {
                let save = self.cur.clone();
                if let Ok(lits) = parse_tuple(&mut self.cur) {
                    if let Ok(e) = resolve(&lits, self.g) {
                        return Ok(Term::constant(e));
                    }
                }
                self.cur = save;
                self.cur.next();
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(Tok::Sym("{")) => self.constant_coord(),
            _ => Err(syntax(&self.cur, "variable or parenthesized term")),
        }
    }

    fn constant_coord(&mut self) -> Result<Term, LogicError> {
        let lit = parse_coord(&mut self.cur)?;
        self.lit_constant(lit)
    }

    fn lit_constant(&self, lit: CoordLit) -> Result<Term, LogicError> {
        if matches!(&lit, CoordLit::Num(q) if q.is_zero()) {
            return Ok(Term::zero(self.g));
        }
        if self.g.len() != 1 {
            return Err(LogicError::Oag(OagError::ShapeMismatch(format!(
                "bare constant {lit:?} in a {}-component group; write a tuple",
                self.g.len()
            ))));
        }
        Ok(Term::constant(resolve(&[lit], self.g)?))
    }
}

fn pick_error(a: LogicError, b: LogicError) -> LogicError {
    // the formula reading is usually the more informative one unless it failed immediately
    match &b {
        LogicError::Syntax(_) => b,
        _ => a,
    }
}
