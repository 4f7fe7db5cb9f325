use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use super::element::{Coord, GroupElement};
use super::group::{ComponentKind, GroupDescriptor};
use super::OagError;
use crate::lexer::{tokenize, Cursor, Tok};
use crate::num::{Int, Rat};

/// A coordinate as written, before it is checked against a component kind.
#[derive(Clone, Debug, PartialEq)]
pub enum CoordLit {
    Num(Rat),
    Quad { a: Rat, b: Int, d: u64 },
    Omega(BTreeMap<u64, Int>),
}

fn syntax(cur: &Cursor, what: &str) -> OagError {
    OagError::Syntax(format!("expected {what}, found {}", cur.describe()))
}

fn lex(text: &str) -> Result<Vec<Tok>, OagError> {
    tokenize(text).map_err(|e| OagError::Syntax(e.to_string()))
}

pub fn parse_group(text: &str) -> Result<GroupDescriptor, OagError> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks);
    let g = parse_group_at(&mut cur)?;
    if !cur.at_end() {
        return Err(syntax(&cur, "end of group descriptor"));
    }
    Ok(g)
}

pub fn parse_group_at(cur: &mut Cursor) -> Result<GroupDescriptor, OagError> {
    if !cur.eat_ident("lex") {
        return Err(syntax(cur, "'lex'"));
    }
    if !cur.eat_sym("(") {
        return Err(syntax(cur, "'('"));
    }
    let mut comps = Vec::new();
    if !cur.is_sym(")") {
        loop {
            comps.push(parse_kind(cur)?);
            if !cur.eat_sym(",") {
                break;
            }
        }
    }
    if !cur.eat_sym(")") {
        return Err(syntax(cur, "',' or ')'"));
    }
    GroupDescriptor::new(comps)
}

fn parse_kind(cur: &mut Cursor) -> Result<ComponentKind, OagError> {
    let name = match cur.next() {
        Some(Tok::Ident(s)) => s.as_str(),
        _ => {
            cur.pos = cur.pos.saturating_sub(1);
            return Err(syntax(cur, "component kind"));
        }
    };
    let arg = |cur: &mut Cursor| -> Result<u64, OagError> {
        if !cur.eat_sym("(") {
            return Err(syntax(cur, "'('"));
        }
        let v = match cur.next() {
            Some(Tok::Num(n)) => n.to_u64().ok_or_else(|| OagError::Syntax(format!("parameter {n} too large")))?,
            _ => return Err(syntax(cur, "integer parameter")),
        };
        if !cur.eat_sym(")") {
            return Err(syntax(cur, "')'"));
        }
        Ok(v)
    };
    match name {
        "Z" => Ok(ComponentKind::Int),
        "Q" => Ok(ComponentKind::Rat),
        "Zomega" => Ok(ComponentKind::OmegaInt),
        "Zloc" => Ok(ComponentKind::IntLoc(arg(cur)?)),
        "Quad" => Ok(ComponentKind::Quad(arg(cur)?)),
        other => Err(OagError::Syntax(format!("unknown component kind '{other}'"))),
    }
}

pub fn parse_element(text: &str, g: &GroupDescriptor) -> Result<GroupElement, OagError> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks);
    let e = parse_element_at(&mut cur, g)?;
    if !cur.at_end() {
        return Err(syntax(&cur, "end of element literal"));
    }
    Ok(e)
}

/// An element literal as written, resolved against a group later.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementLit {
    pub neg: bool,
    pub tuple: bool,
    pub coords: Vec<CoordLit>,
}

impl ElementLit {
    pub fn resolve(&self, g: &GroupDescriptor) -> Result<GroupElement, OagError> {
        let e = match self.coords.as_slice() {
            [CoordLit::Num(q)] if !self.tuple && q.is_zero() => g.zero(),
            lits => resolve(lits, g)?,
        };
        Ok(if self.neg { e.neg() } else { e })
    }
}

/// Element literal: `(c1,...,cn)`, or a single bare coordinate for one-component
/// groups. A bare `0` is the zero element of any group.
pub fn parse_element_lit(cur: &mut Cursor) -> Result<ElementLit, OagError> {
    let neg = cur.eat_sym("-");
    if cur.is_sym("(") {
        Ok(ElementLit { neg, tuple: true, coords: parse_tuple(cur)? })
    } else {
        Ok(ElementLit { neg, tuple: false, coords: vec![parse_coord(cur)?] })
    }
}

pub fn parse_element_at(cur: &mut Cursor, g: &GroupDescriptor) -> Result<GroupElement, OagError> {
    parse_element_lit(cur)?.resolve(g)
}

pub fn parse_tuple(cur: &mut Cursor) -> Result<Vec<CoordLit>, OagError> {
    if !cur.eat_sym("(") {
        return Err(syntax(cur, "'('"));
    }
    let mut lits = vec![parse_coord(cur)?];
    while cur.eat_sym(",") {
        lits.push(parse_coord(cur)?);
    }
    if !cur.eat_sym(")") {
        return Err(syntax(cur, "',' or ')'"));
    }
    Ok(lits)
}

fn parse_uint(cur: &mut Cursor) -> Result<Int, OagError> {
    match cur.peek() {
        Some(Tok::Num(n)) => {
            cur.next();
            Ok(n.clone())
        }
        _ => Err(syntax(cur, "integer")),
    }
}

fn parse_sqrt(cur: &mut Cursor) -> Result<u64, OagError> {
    if !cur.eat_ident("sqrt") || !cur.eat_sym("(") {
        return Err(syntax(cur, "'sqrt('"));
    }
    let d = parse_uint(cur)?.to_u64().ok_or_else(|| OagError::Syntax("radicand too large".into()))?;
    if !cur.eat_sym(")") {
        return Err(syntax(cur, "')'"));
    }
    Ok(d)
}

/// `[int '*'] sqrt(d)` if one starts here.
fn try_surd(cur: &mut Cursor) -> Result<Option<(Int, u64)>, OagError> {
    if cur.is_ident("sqrt") {
        return Ok(Some((Int::from(1), parse_sqrt(cur)?)));
    }
    if matches!(cur.peek(), Some(Tok::Num(_)))
        && matches!(cur.peek_at(1), Some(Tok::Sym("*")))
        && matches!(cur.peek_at(2), Some(Tok::Ident(s)) if s == "sqrt")
    {
        let b = parse_uint(cur)?;
        cur.next();
        return Ok(Some((b, parse_sqrt(cur)?)));
    }
    Ok(None)
}

pub fn parse_coord(cur: &mut Cursor) -> Result<CoordLit, OagError> {
    if cur.eat_sym("{") {
        let mut m = BTreeMap::new();
        if !cur.is_sym("}") {
            loop {
                let i = parse_uint(cur)?.to_u64().ok_or_else(|| OagError::Syntax("omega index too large".into()))?;
                if !cur.eat_sym(":") {
                    return Err(syntax(cur, "':'"));
                }
                let neg = cur.eat_sym("-");
                let v = parse_uint(cur)?;
                let v = if neg { -v } else { v };
                if !v.is_zero() && m.insert(i, v).is_some() {
                    return Err(OagError::Syntax(format!("omega index {i} repeated")));
                }
                if !cur.eat_sym(",") {
                    break;
                }
            }
        }
        if !cur.eat_sym("}") {
            return Err(syntax(cur, "'}'"));
        }
        return Ok(CoordLit::Omega(m));
    }
    let neg = if cur.eat_sym("-") {
        true
    } else {
        cur.eat_sym("+");
        false
    };
    let sgn = |x: Int| if neg { -x } else { x };
    if let Some((b, d)) = try_surd(cur)? {
        return Ok(CoordLit::Quad { a: Rat::zero(), b: sgn(b), d });
    }
    let n = parse_uint(cur)?;
    let mut a = Rat::from_integer(sgn(n));
    if cur.is_sym("/") && matches!(cur.peek_at(1), Some(Tok::Num(_))) {
        cur.next();
        let den = parse_uint(cur)?;
        if den.is_zero() {
            return Err(OagError::Syntax("zero denominator".into()));
        }
        a /= Rat::from_integer(den);
    }
    if cur.is_sym("+") || cur.is_sym("-") {
        let save = cur.clone();
        let minus = cur.is_sym("-");
        cur.next();
        if let Some((b, d)) = try_surd(cur)? {
            return Ok(CoordLit::Quad { a, b: if minus { -b } else { b }, d });
        }
        *cur = save;
    }
    Ok(CoordLit::Num(a))
}

fn integral(q: &Rat, what: &ComponentKind) -> Result<Int, OagError> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(OagError::ShapeMismatch(format!("non-integral coordinate {q} for {what}")))
    }
}

fn resolve_one(lit: &CoordLit, kind: &ComponentKind) -> Result<Coord, OagError> {
    let c = match (kind, lit) {
        (ComponentKind::Int | ComponentKind::IntLoc(_) | ComponentKind::Rat, CoordLit::Num(q)) => Coord::Num(q.clone()),
        (ComponentKind::Quad(d), CoordLit::Num(q)) => Coord::Quad { a: integral(q, kind)?, b: Int::zero(), d: *d },
        (ComponentKind::Quad(d), CoordLit::Quad { a, b, d: d2 }) if d == d2 => {
            Coord::Quad { a: integral(a, kind)?, b: b.clone(), d: *d }
        }
        (ComponentKind::OmegaInt, CoordLit::Omega(m)) => Coord::Omega(m.clone()),
        (ComponentKind::OmegaInt, CoordLit::Num(q)) if q.is_zero() => Coord::Omega(BTreeMap::new()),
        _ => return Err(OagError::ShapeMismatch(format!("coordinate {lit:?} does not fit {kind}"))),
    };
    if !c.fits(kind) {
        return Err(OagError::ShapeMismatch(format!("coordinate {c} does not belong to {kind}")));
    }
    Ok(c)
}

/// Match literal coordinates to components. A quadratic coordinate may also be
/// written as two plain integers `a, b` when that makes the count come out right.
pub fn resolve(lits: &[CoordLit], g: &GroupDescriptor) -> Result<GroupElement, OagError> {
    let n = g.len();
    let quads = g.components().iter().filter(|k| matches!(k, ComponentKind::Quad(_))).count();
    if lits.len() == n {
        let coords = lits.iter().zip(g.components()).map(|(l, k)| resolve_one(l, k)).collect::<Result<_, _>>()?;
        return Ok(GroupElement::from_coords(coords));
    }
    if quads > 0 && lits.len() == n + quads && lits.iter().all(|l| matches!(l, CoordLit::Num(_))) {
        let mut it = lits.iter();
        let mut coords = Vec::with_capacity(n);
        for k in g.components() {
            let l = it.next().expect("counted");
            if let ComponentKind::Quad(d) = k {
                let (CoordLit::Num(a), Some(CoordLit::Num(b))) = (l, it.next()) else { unreachable!() };
                coords.push(Coord::Quad { a: integral(a, k)?, b: integral(b, k)?, d: *d });
            } else {
                coords.push(resolve_one(l, k)?);
            }
        }
        return Ok(GroupElement::from_coords(coords));
    }
    Err(OagError::ShapeMismatch(format!("{} coordinates given for {g}", lits.len())))
}
