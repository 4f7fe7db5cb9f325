use std::fmt;

use super::{HenselError, LiftScalar};
use crate::expr::{eval, parse_expr, Algebra, ExprError};
use crate::hahn::Val;
use crate::num::Int;
use crate::oag::parse::ElementLit;

/// Univariate polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug)]
pub struct UniPoly<S> {
    coeffs: Vec<S>,
    zero: S,
    var: String,
}

fn is_exact_zero<S: LiftScalar>(s: &S) -> bool {
    s.valuation() == Val::Infinite
}

impl<S: LiftScalar> UniPoly<S> {
    pub fn new(mut coeffs: Vec<S>, zero: S, var: &str) -> Self {
        while coeffs.last().is_some_and(is_exact_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs, zero, var: var.to_string() }
    }

    pub fn constant(c: S, var: &str) -> Self {
        let zero = c.zero_like();
        Self::new(vec![c], zero, var)
    }

    pub fn x(zero: S, var: &str) -> Self {
        let one = zero.from_int_like(1);
        Self::new(vec![zero.clone(), one], zero, var)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn zero_scalar(&self) -> &S {
        &self.zero
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn add(&self, o: &Self) -> Result<Self, HenselError> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect::<Result<_, _>>()?;
        Ok(Self::new(c, self.zero.clone(), &self.var))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, HenselError> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect::<Result<_, _>>()?;
        Ok(Self::new(c, self.zero.clone(), &self.var))
    }

    pub fn mul(&self, o: &Self) -> Result<Self, HenselError> {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Ok(Self::new(Vec::new(), self.zero.clone(), &self.var));
        }
        let mut c = vec![self.zero.clone(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(Self::new(c, self.zero.clone(), &self.var))
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> Result<S, HenselError>) -> Result<Self, HenselError> {
        let c = self.coeffs.iter().map(f).collect::<Result<_, _>>()?;
        Ok(Self::new(c, self.zero.clone(), &self.var))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> Result<S, HenselError> {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Result<Self, HenselError> {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.mul(&self.zero.from_int_like(i as i64)))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(c, self.zero.clone(), &self.var))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Parse `X^2 - (1+t)` with coefficients read by `scalars`.
    pub fn parse<A>(text: &str, var: &str, series_var: Option<&str>, scalars: &A) -> Result<Self, HenselError>
    where
        A: Algebra<V = S>,
    {
        let e = parse_expr(text, series_var).map_err(|e| HenselError::Syntax(e.0))?;
        let zero = scalars.int(&Int::from(0)).map_err(|e| HenselError::Syntax(e.0))?;
        let alg = PolyAlgebra { scalars, var, zero };
        eval(&e, &alg).map_err(|e| HenselError::Syntax(e.0))
    }
}

impl<S: LiftScalar> fmt::Display for UniPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if is_exact_zero(c) {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{i}", self.var),
            };
            parts.push(match (i, c.is_one()) {
                (0, _) => format!("({c})"),
                (_, true) => mono,
                _ => format!("({c})*{mono}"),
            });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomials in one variable over a scalar algebra; the variable may only be divided out by constants.
pub struct PolyAlgebra<'a, A: Algebra> {
    pub scalars: &'a A,
    pub var: &'a str,
    pub zero: A::V,
}

impl<A> PolyAlgebra<'_, A>
where
    A: Algebra,
    A::V: LiftScalar,
{
    fn lift(&self, r: Result<A::V, ExprError>) -> Result<UniPoly<A::V>, ExprError> {
        Ok(UniPoly::new(vec![r?], self.zero.clone(), self.var))
    }
}

fn herr(e: HenselError) -> ExprError {
    ExprError::new(e.to_string())
}

impl<A> Algebra for PolyAlgebra<'_, A>
where
    A: Algebra,
    A::V: LiftScalar,
{
    type V = UniPoly<A::V>;

    fn int(&self, n: &Int) -> Result<Self::V, ExprError> {
        self.lift(self.scalars.int(n))
    }

    fn var(&self, name: &str) -> Result<Self::V, ExprError> {
        if name == self.var {
            return Ok(UniPoly::x(self.zero.clone(), self.var));
        }
        self.lift(self.scalars.var(name))
    }

    fn mono(&self, e: &ElementLit) -> Result<Self::V, ExprError> {
        self.lift(self.scalars.mono(e))
    }

    fn sqrt(&self, d: &Int) -> Result<Self::V, ExprError> {
        self.lift(self.scalars.sqrt(d))
    }

    fn modp(&self, n: &Int, p: &Int) -> Result<Self::V, ExprError> {
        self.lift(self.scalars.modp(n, p))
    }

    fn big_o(&self, e: &ElementLit) -> Result<Self::V, ExprError> {
        self.lift(self.scalars.big_o(e))
    }

    fn add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError> {
        a.add(b).map_err(herr)
    }

    fn sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError> {
        a.sub(b).map_err(herr)
    }

    fn mul(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError> {
        a.mul(b).map_err(herr)
    }

    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, ExprError> {
        match b.degree() {
            Some(0) => {
                let d = b.coeff(0);
                let c = a.coeffs.iter().map(|x| self.scalars.div(x, &d)).collect::<Result<_, _>>()?;
                Ok(UniPoly::new(c, self.zero.clone(), self.var))
            }
            _ => Err(ExprError::new(format!("cannot divide by the polynomial {b}"))),
        }
    }
}

/// `f = X^n + a X^(n-1) + Σ_{i<=n-2} c_i X^i` with `v(a) = 0` and every `v(c_i) > 0`.
pub fn hensel_form_check<S: LiftScalar>(f: &UniPoly<S>) -> Result<bool, HenselError> {
    if !f.is_monic() {
        return Err(HenselError::NonMonic);
    }
    let n = f.degree().expect("monic");
    if n == 0 {
        return Ok(false);
    }
    let zero = f.coeff(0).value_group().zero();
    let a_ok = f.coeff(n - 1).valuation() == Val::Exact(zero.clone());
    let c_ok = (0..n.saturating_sub(1)).all(|i| match f.coeff(i).valuation() {
        Val::Infinite => true,
        Val::Exact(v) | Val::AtLeast(v) => v > zero,
    });
    Ok(a_ok && c_ok)
}

/// The simple residue root `-res(a)` of a polynomial in Hensel form, as a starting point.
pub fn hensel_start<S: LiftScalar>(f: &UniPoly<S>) -> Result<S, HenselError> {
    if !hensel_form_check(f)? {
        return Err(HenselError::Hypothesis("polynomial is not in Hensel form".into()));
    }
    let n = f.degree().expect("monic");
    let r = f.coeff(n - 1).residue_lift().expect("unit coefficient");
    f.zero_scalar().sub(&r)
}
