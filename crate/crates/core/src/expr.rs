//! Arithmetic expressions shared by the series, polynomial and rational-function
//! literals.
//!
//! `t^e` for the series variable takes a group-element exponent (`t^(1,1)`,
//! `t^(1/2)`, `t^-1`); every other power is an integer. Juxtaposition
//! multiplies, so `3t^2` and `2 X0 X1` are accepted.

use std::fmt;

use num_traits::{One, ToPrimitive};

use crate::lexer::{tokenize, Cursor, Tok};
use crate::num::Int;
use crate::oag::parse::{parse_element_lit, CoordLit, ElementLit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ExprError(pub String);

impl ExprError {
    pub fn new(msg: impl Into<String>) -> Self {
        ExprError(msg.into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Int),
    Var(String),
    /// Power of the series variable.
    Mono(ElementLit),
    Sqrt(Int),
    /// `n mod p`
    Mod(Int, Int),
    /// `O(t^e)`
    BigO(ElementLit),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Target of expression evaluation. Unsupported leaves report an error.
pub trait Algebra {
    type V: Clone;

    fn int(&self, n: &Int) -> Result<Self::V, ExprError>;
    fn var(&self, name: &str) -> Result<Self::V, ExprError>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError>;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError>;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError>;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError>;

    fn neg(&self, a: &Self::V) -> Result<Self::V, ExprError> {
        self.sub(&self.int(&Int::from(0))?, a)
    }

    fn mono(&self, _e: &ElementLit) -> Result<Self::V, ExprError> {
        Err(ExprError::new("no series variable in this context"))
    }

    fn sqrt(&self, d: &Int) -> Result<Self::V, ExprError> {
        Err(ExprError::new(format!("sqrt({d}) is not in this coefficient field")))
    }

    fn modp(&self, _n: &Int, p: &Int) -> Result<Self::V, ExprError> {
        Err(ExprError::new(format!("residues mod {p} are not in this coefficient field")))
    }

    fn big_o(&self, _e: &ElementLit) -> Result<Self::V, ExprError> {
        Err(ExprError::new("O(...) terms are not allowed here"))
    }

    fn pow(&self, a: &Self::V, n: i64) -> Result<Self::V, ExprError> {
        let mut acc = self.int(&Int::one())?;
        let mut base = a.clone();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        if n < 0 {
            acc = self.div(&self.int(&Int::one())?, &acc)?;
        }
        Ok(acc)
    }
}

pub fn eval<A: Algebra>(e: &Expr, a: &A) -> Result<A::V, ExprError> {
    Ok(match e {
        Expr::Num(n) => a.int(n)?,
        Expr::Var(v) => a.var(v)?,
        Expr::Mono(l) => a.mono(l)?,
        Expr::Sqrt(d) => a.sqrt(d)?,
        Expr::Mod(n, p) => a.modp(n, p)?,
        Expr::BigO(l) => a.big_o(l)?,
        Expr::Neg(x) => a.neg(&eval(x, a)?)?,
        Expr::Add(x, y) => a.add(&eval(x, a)?, &eval(y, a)?)?,
        Expr::Sub(x, y) => a.sub(&eval(x, a)?, &eval(y, a)?)?,
        Expr::Mul(x, y) => a.mul(&eval(x, a)?, &eval(y, a)?)?,
        Expr::Div(x, y) => a.div(&eval(x, a)?, &eval(y, a)?)?,
        Expr::Pow(x, n) => a.pow(&eval(x, a)?, *n)?,
    })
}

/// Parse a whole string. `series_var` names the variable whose exponents are group elements.
pub fn parse_expr(text: &str, series_var: Option<&str>) -> Result<Expr, ExprError> {
    let toks = tokenize(text).map_err(|e| ExprError::new(e.to_string()))?;
    let mut p = Parser { cur: Cursor::new(&toks), series_var };
    let e = p.sum()?;
    if !p.cur.at_end() {
        return Err(p.expected("end of expression"));
    }
    Ok(e)
}

struct Parser<'a> {
    cur: Cursor<'a>,
    series_var: Option<&'a str>,
}

impl Parser<'_> {
    fn expected(&self, what: &str) -> ExprError {
        ExprError::new(format!("syntax error: expected {what}, found {}", self.cur.describe()))
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut e = if self.cur.eat_sym("-") {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.cur.eat_sym("+");
            self.product()?
        };
        loop {
            if self.cur.eat_sym("+") {
                e = Expr::Add(Box::new(e), Box::new(self.product()?));
            } else if self.cur.eat_sym("-") {
                e = Expr::Sub(Box::new(e), Box::new(self.product()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        match self.cur.peek() {
            Some(Tok::Num(_)) => true,
            Some(Tok::Ident(s)) => s != "mod",
            Some(Tok::Sym("(")) => true,
            _ => false,
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut e = self.power()?;
        loop {
            if self.cur.eat_sym("*") {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else if self.cur.eat_sym("/") {
                e = Expr::Div(Box::new(e), Box::new(self.power()?));
            } else if self.starts_atom() {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        if self.cur.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.power()?)));
        }
        if let Some(Tok::Ident(v)) = self.cur.peek() {
            if Some(v.as_str()) == self.series_var {
                self.cur.next();
                let lit = if self.cur.eat_sym("^") { self.exponent_lit()? } else { unit_lit() };
                return Ok(Expr::Mono(lit));
            }
        }
        let base = self.atom()?;
        if self.cur.eat_sym("^") {
            let n = self.int_exponent()?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    /// Bare exponents are integers (`t^-2`); anything else goes in parentheses.
    fn exponent_lit(&mut self) -> Result<ElementLit, ExprError> {
        if self.cur.is_sym("(") {
            return parse_element_lit(&mut self.cur).map_err(|e| ExprError::new(e.to_string()));
        }
        let neg = self.cur.eat_sym("-");
        let n = self.int()?;
        Ok(ElementLit { neg, tuple: false, coords: vec![CoordLit::Num(crate::num::Rat::from_integer(n))] })
    }

    fn int_exponent(&mut self) -> Result<i64, ExprError> {
        let paren = self.cur.eat_sym("(");
        let neg = self.cur.eat_sym("-");
        let n = match self.cur.peek() {
            Some(Tok::Num(n)) => {
                self.cur.next();
                n.to_i64().ok_or_else(|| ExprError::new("exponent too large"))?
            }
            _ => return Err(self.expected("integer exponent")),
        };
        if paren && !self.cur.eat_sym(")") {
            return Err(self.expected("')'"));
        }
        Ok(if neg { -n } else { n })
    }

    fn paren_int(&mut self) -> Result<Int, ExprError> {
        if !self.cur.eat_sym("(") {
            return Err(self.expected("'('"));
        }
        let n = self.int()?;
        if !self.cur.eat_sym(")") {
            return Err(self.expected("')'"));
        }
        Ok(n)
    }

    fn int(&mut self) -> Result<Int, ExprError> {
        match self.cur.peek() {
            Some(Tok::Num(n)) => {
                self.cur.next();
                Ok(n.clone())
            }
            _ => Err(self.expected("integer")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.cur.peek() {
            Some(Tok::Num(n)) => {
                self.cur.next();
                if self.cur.eat_ident("mod") {
                    let p = self.int()?;
                    return Ok(Expr::Mod(n.clone(), p));
                }
                Ok(Expr::Num(n.clone()))
            }
            Some(Tok::Ident(s)) if s == "sqrt" => {
                self.cur.next();
                Ok(Expr::Sqrt(self.paren_int()?))
            }
            Some(Tok::Ident(s)) if s == "O" && matches!(self.cur.peek_at(1), Some(Tok::Sym("("))) => {
                self.cur.next();
                self.cur.next();
                let lit = match self.cur.peek() {
                    Some(Tok::Num(n)) if n.is_one() => {
                        self.cur.next();
                        zero_lit()
                    }
                    Some(Tok::Ident(v)) if Some(v.as_str()) == self.series_var => {
                        self.cur.next();
                        if self.cur.eat_sym("^") {
                            self.exponent_lit()?
                        } else {
                            unit_lit()
                        }
                    }
                    _ => return Err(self.expected("'t^e' or '1' inside O(...)")),
                };
                if !self.cur.eat_sym(")") {
                    return Err(self.expected("')'"));
                }
                Ok(Expr::BigO(lit))
            }
            Some(Tok::Ident(s)) => {
                self.cur.next();
                Ok(Expr::Var(s.clone()))
            }
            Some(Tok::Sym("(")) => {
                self.cur.next();
                let e = self.sum()?;
                if !self.cur.eat_sym(")") {
                    return Err(self.expected("')'"));
                }
                Ok(e)
            }
            _ => Err(self.expected("number, variable or '('")),
        }
    }
}

fn unit_lit() -> ElementLit {
    ElementLit { neg: false, tuple: false, coords: vec![CoordLit::Num(crate::num::Rat::one())] }
}

fn zero_lit() -> ElementLit {
    ElementLit { neg: false, tuple: false, coords: vec![CoordLit::Num(crate::num::Rat::from_integer(Int::from(0)))] }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Mono(_) => write!(f, "t^e"),
            Expr::Sqrt(d) => write!(f, "sqrt({d})"),
            Expr::Mod(n, p) => write!(f, "({n} mod {p})"),
            Expr::BigO(_) => write!(f, "O(t^e)"),
            Expr::Neg(x) => write!(f, "-({x})"),
            Expr::Add(x, y) => write!(f, "({x} + {y})"),
            Expr::Sub(x, y) => write!(f, "({x} - {y})"),
            Expr::Mul(x, y) => write!(f, "({x} * {y})"),
            Expr::Div(x, y) => write!(f, "({x} / {y})"),
            Expr::Pow(x, n) => write!(f, "({x})^{n}"),
        }
    }
}
