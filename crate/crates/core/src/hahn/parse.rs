use num_traits::{One, ToPrimitive, Zero};

use super::field::{CoefficientField, Scalar, SeriesField};
use super::series::HahnSeries;
use super::HahnError;
use crate::expr::{eval, parse_expr, Algebra, ExprError};
use crate::num::{Int, QuadNum, Rat};
use crate::oag::parse::ElementLit;

/// Evaluates series literals in a fixed field.
pub struct SeriesAlgebra<'a> {
    pub field: &'a SeriesField,
}

fn err(e: HahnError) -> ExprError {
    ExprError::new(e.to_string())
}

impl SeriesAlgebra<'_> {
    pub fn element(&self, lit: &ElementLit) -> Result<crate::oag::GroupElement, ExprError> {
        lit.resolve(&self.field.group).map_err(|e| ExprError::new(e.to_string()))
    }
}

impl Algebra for SeriesAlgebra<'_> {
    type V = HahnSeries;

    fn int(&self, n: &Int) -> Result<HahnSeries, ExprError> {
        Ok(HahnSeries::constant(self.field, self.field.coeff.from_int(n)))
    }

    fn var(&self, name: &str) -> Result<HahnSeries, ExprError> {
        Err(ExprError::new(format!("unknown symbol '{name}' in a series literal")))
    }

    fn mono(&self, e: &ElementLit) -> Result<HahnSeries, ExprError> {
        Ok(HahnSeries::t_pow(self.field, self.element(e)?))
    }

    fn sqrt(&self, d: &Int) -> Result<HahnSeries, ExprError> {
        match self.field.coeff {
            CoefficientField::RealQuad(k) if Int::from(k) == *d => {
                let s = Scalar::Quad(QuadNum::new(Rat::zero(), Rat::one(), k));
                Ok(HahnSeries::constant(self.field, s))
            }
            _ => Err(ExprError::new(format!("sqrt({d}) is not in {}", self.field.coeff))),
        }
    }

    fn modp(&self, n: &Int, p: &Int) -> Result<HahnSeries, ExprError> {
        match self.field.coeff {
            CoefficientField::PrimeField(q) if p.to_u64() == Some(q) => {
                Ok(HahnSeries::constant(self.field, Scalar::fp(n, q)))
            }
            _ => Err(ExprError::new(format!("residues mod {p} are not in {}", self.field.coeff))),
        }
    }

    fn big_o(&self, e: &ElementLit) -> Result<HahnSeries, ExprError> {
        Ok(HahnSeries::big_o(self.field, self.element(e)?))
    }

    fn add(&self, a: &HahnSeries, b: &HahnSeries) -> Result<HahnSeries, ExprError> {
        a.add(b).map_err(err)
    }

    fn sub(&self, a: &HahnSeries, b: &HahnSeries) -> Result<HahnSeries, ExprError> {
        a.sub(b).map_err(err)
    }

    fn neg(&self, a: &HahnSeries) -> Result<HahnSeries, ExprError> {
        Ok(a.neg())
    }

    fn mul(&self, a: &HahnSeries, b: &HahnSeries) -> Result<HahnSeries, ExprError> {
        a.mul(b).map_err(err)
    }

    /// Only exact monomials may be divided by; anything else needs `invert` with a precision.
    fn div(&self, a: &HahnSeries, b: &HahnSeries) -> Result<HahnSeries, ExprError> {
        if !b.is_exact() || b.terms().len() != 1 {
            return Err(ExprError::new(format!("cannot divide by '{b}' in a literal; only monomials are allowed")));
        }
        let inv = b.invert(&self.field.group.zero()).map_err(err)?;
        a.mul(&inv).map_err(err)
    }
}

impl HahnSeries {
    /// Parse a series literal such as `1 + 1/2*t - 1/8*t^2 + O(t^3)`.
    pub fn parse(text: &str, field: &SeriesField) -> Result<Self, HahnError> {
        let e = parse_expr(text, Some("t")).map_err(|e| HahnError::Syntax(e.0))?;
        eval(&e, &SeriesAlgebra { field }).map_err(|e| HahnError::Syntax(e.0))
    }
}
