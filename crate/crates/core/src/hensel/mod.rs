//! Polynomials over valued fields, Newton lifting with residual certificates,
//! and the conjugate-product polynomials `g = ∏ (Y - Σ α_i^j X_j)`.

mod conjugate;
mod multipoly;
mod newton;
mod unipoly;

pub use conjugate::{
    conjugate_form, find_nonvanishing_point, jacobian_polynomial, no_root_check, quadratic_expansion, spiral_points,
    univariate_coeffs, ConjugateForm,
};
pub use multipoly::{determinant, jacobian_matrix, rational_roots, resultant, MultiAlgebra, MultiPoly, QuadPoly, Var};
pub use newton::{newton_lift, LiftCertificate, LiftStep, MAX_NEWTON_STEPS};
pub use unipoly::{hensel_form_check, hensel_start, PolyAlgebra, UniPoly};

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::expr::{Algebra, ExprError};
use crate::hahn::{HahnError, HahnSeries, Val};
use crate::num::{padic_val, Int, Rat};
use crate::oag::{GroupDescriptor, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HenselError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("Hensel hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("derivative vanishes at the iterate")]
    ZeroDerivative,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("Newton invariant violated: {0}")]
    Invariant(String),
    #[error("no convergence within {0} Newton steps")]
    TooManySteps(usize),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("degree {0}: irreducibility is only checked automatically up to degree 3; pass --assert-irreducible")]
    UnverifiedIrreducible(usize),
    #[error("bad degree: {0}")]
    Degree(String),
    #[error("resultant of two constants")]
    ConstantResultant,
    #[error("Jacobian determinant is identically zero")]
    JacobianZero,
    #[error("no point with nonzero Jacobian found within radius {0}")]
    NoPoint(i64),
    #[error(transparent)]
    Hahn(#[from] HahnError),
}

/// Coefficients Newton iteration can run over: Hahn series, or rationals with a p-adic valuation.
pub trait LiftScalar: Clone + fmt::Display + fmt::Debug {
    fn zero_like(&self) -> Self;
    #[allow(clippy::wrong_self_convention)]
    fn from_int_like(&self, n: i64) -> Self;
    fn add(&self, o: &Self) -> Result<Self, HenselError>;
    fn sub(&self, o: &Self) -> Result<Self, HenselError>;
    fn mul(&self, o: &Self) -> Result<Self, HenselError>;
    /// `self / o`, known to relative precision `rel` beyond its valuation.
    fn div(&self, o: &Self, rel: &GroupElement) -> Result<Self, HenselError>;
    fn valuation(&self) -> Val;
    /// The exact element formed by the known terms of valuation below `p`.
    fn truncate(&self, p: &GroupElement) -> Self;
    /// Mark as known only modulo valuation `p`. Exact carriers return `self`.
    fn with_precision(&self, p: &GroupElement) -> Self;
    fn is_one(&self) -> bool;
    /// No `O(t^p)` tail.
    fn is_exact(&self) -> bool;
    /// A lift of the residue class, `None` outside the valuation ring.
    fn residue_lift(&self) -> Option<Self>;
    fn value_group(&self) -> GroupDescriptor;
}

impl LiftScalar for HahnSeries {
    fn zero_like(&self) -> Self {
        HahnSeries::zero(self.field())
    }

    fn from_int_like(&self, n: i64) -> Self {
        HahnSeries::from_int(self.field(), n)
    }

    fn add(&self, o: &Self) -> Result<Self, HenselError> {
        Ok(HahnSeries::add(self, o)?)
    }

    fn sub(&self, o: &Self) -> Result<Self, HenselError> {
        Ok(HahnSeries::sub(self, o)?)
    }

    fn mul(&self, o: &Self) -> Result<Self, HenselError> {
        Ok(HahnSeries::mul(self, o)?)
    }

    fn div(&self, o: &Self, rel: &GroupElement) -> Result<Self, HenselError> {
        Ok(HahnSeries::div(self, o, rel)?)
    }

    fn valuation(&self) -> Val {
        self.val()
    }

    fn truncate(&self, p: &GroupElement) -> Self {
        HahnSeries::truncate(self, p)
    }

    fn with_precision(&self, p: &GroupElement) -> Self {
        HahnSeries::with_precision(self, p)
    }

    fn is_one(&self) -> bool {
        self.is_exact() && matches!(self.terms(), [(e, c)] if e.is_zero() && c.is_one())
    }

    fn is_exact(&self) -> bool {
        HahnSeries::is_exact(self)
    }

    fn residue_lift(&self) -> Option<Self> {
        let d = self.val_data().ok()?;
        Some(HahnSeries::constant(self.field(), d.residue?))
    }

    fn value_group(&self) -> GroupDescriptor {
        self.group().clone()
    }
}

/// A rational number with the `p`-adic valuation. Arithmetic is exact; nothing is completed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicRat {
    pub q: Rat,
    pub p: u64,
}

impl PadicRat {
    pub fn new(q: Rat, p: u64) -> Self {
        PadicRat { q, p }
    }

    pub fn int(n: i64, p: u64) -> Self {
        PadicRat { q: Rat::from_integer(Int::from(n)), p }
    }

    fn check(&self, o: &Self) -> Result<(), HenselError> {
        if self.p != o.p {
            return Err(HenselError::Hahn(HahnError::Carrier(format!("{}-adic vs {}-adic", self.p, o.p))));
        }
        Ok(())
    }

    pub fn padic_valuation(&self) -> Option<i64> {
        padic_val(&self.q, self.p)
    }
}

impl fmt::Display for PadicRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::num::fmt_rat(&self.q))
    }
}

fn z_group() -> GroupDescriptor {
    GroupDescriptor::new(vec![crate::oag::ComponentKind::Int]).expect("lex(Z)")
}

impl LiftScalar for PadicRat {
    fn zero_like(&self) -> Self {
        PadicRat::int(0, self.p)
    }

    fn from_int_like(&self, n: i64) -> Self {
        PadicRat::int(n, self.p)
    }

    fn add(&self, o: &Self) -> Result<Self, HenselError> {
        self.check(o)?;
        Ok(PadicRat::new(&self.q + &o.q, self.p))
    }

    fn sub(&self, o: &Self) -> Result<Self, HenselError> {
        self.check(o)?;
        Ok(PadicRat::new(&self.q - &o.q, self.p))
    }

    fn mul(&self, o: &Self) -> Result<Self, HenselError> {
        self.check(o)?;
        Ok(PadicRat::new(&self.q * &o.q, self.p))
    }

    fn div(&self, o: &Self, _rel: &GroupElement) -> Result<Self, HenselError> {
        self.check(o)?;
        if o.q.is_zero() {
            return Err(HenselError::Hahn(HahnError::DivisionByZero));
        }
        Ok(PadicRat::new(&self.q / &o.q, self.p))
    }

    fn valuation(&self) -> Val {
        match self.padic_valuation() {
            Some(v) => Val::Exact(GroupElement::from_ints(&[v])),
            None => Val::Infinite,
        }
    }

    fn truncate(&self, _p: &GroupElement) -> Self {
        self.clone()
    }

    fn with_precision(&self, _p: &GroupElement) -> Self {
        self.clone()
    }

    fn is_one(&self) -> bool {
        self.q.is_one()
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn residue_lift(&self) -> Option<Self> {
        if self.padic_valuation().is_some_and(|v| v < 0) {
            return None;
        }
        let p = Int::from(self.p);
        let inv = self.q.denom().extended_gcd(&p).x;
        let r = (self.q.numer() * inv).mod_floor(&p);
        Some(PadicRat::new(Rat::from_integer(r), self.p))
    }

    fn value_group(&self) -> GroupDescriptor {
        z_group()
    }
}

/// Parses rational literals as p-adic numbers.
pub struct PadicAlgebra {
    pub p: u64,
}

impl Algebra for PadicAlgebra {
    type V = PadicRat;

    fn int(&self, n: &Int) -> Result<PadicRat, ExprError> {
        Ok(PadicRat::new(Rat::from_integer(n.clone()), self.p))
    }

    fn var(&self, name: &str) -> Result<PadicRat, ExprError> {
        Err(ExprError::new(format!("unknown symbol '{name}' in a rational literal")))
    }

    fn add(&self, a: &PadicRat, b: &PadicRat) -> Result<PadicRat, ExprError> {
        Ok(PadicRat::new(&a.q + &b.q, self.p))
    }

    fn sub(&self, a: &PadicRat, b: &PadicRat) -> Result<PadicRat, ExprError> {
        Ok(PadicRat::new(&a.q - &b.q, self.p))
    }

    fn mul(&self, a: &PadicRat, b: &PadicRat) -> Result<PadicRat, ExprError> {
        Ok(PadicRat::new(&a.q * &b.q, self.p))
    }

    fn div(&self, a: &PadicRat, b: &PadicRat) -> Result<PadicRat, ExprError> {
        if b.q.is_zero() {
            return Err(ExprError::new("division by zero"));
        }
        Ok(PadicRat::new(&a.q / &b.q, self.p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hahn::{SeriesAlgebra, SeriesField};
    use crate::num::rat;
    use std::collections::BTreeMap;

    fn qz() -> SeriesField {
        SeriesField::parse("Q((t^lex(Z)))").unwrap()
    }

    fn hpoly(text: &str, f: &SeriesField) -> UniPoly<HahnSeries> {
        UniPoly::parse(text, "X", Some("t"), &SeriesAlgebra { field: f }).unwrap()
    }

    fn e(n: i64) -> GroupElement {
        GroupElement::from_ints(&[n])
    }

    fn mp(text: &str) -> MultiPoly {
        MultiPoly::parse(text).unwrap()
    }

    #[test]
    fn univariate_basics() {
        let f = qz();
        let p = hpoly("X^2 - (1+t)", &f);
        assert_eq!(p.derivative().unwrap().to_string(), "(2)*X");
        assert_eq!(p.degree(), Some(2));
        let v = p.eval(&HahnSeries::parse("1+t", &f).unwrap()).unwrap();
        assert_eq!(v.to_string(), "t + t^2");
    }

    #[test]
    fn hensel_form_examples() {
        let f = qz();
        assert!(hensel_form_check(&hpoly("X^2 + (1+t)*X + t", &f)).unwrap());
        assert!(!hensel_form_check(&hpoly("X^2 + t*X + t", &f)).unwrap());
        assert!(hensel_form_check(&hpoly("X^3 + 2*X^2 + t^2*X + t", &f)).unwrap());
        assert_eq!(hensel_form_check(&hpoly("2*X^2 + X", &f)), Err(HenselError::NonMonic));
    }

    #[test]
    fn lift_square_root_of_one_plus_t() {
        let f = qz();
        let p = hpoly("X^2 - (1+t)", &f);
        let (a, cert) = newton_lift(&p, &HahnSeries::one(&f), &e(3)).unwrap();
        assert_eq!(a.to_string(), "1 + 1/2*t - 1/8*t^2 + O(t^3)");
        assert_eq!(cert.iterates, 2);
        // squaring back agrees with 1+t to precision 3
        let sq = a.mul(&a).unwrap().sub(&HahnSeries::parse("1+t", &f).unwrap()).unwrap();
        assert!(sq.val().certainly_ge(&e(3)), "{sq}");
    }

    #[test]
    fn linear_lift_is_exact() {
        let f = qz();
        let p = hpoly("X - (t + t^2)", &f);
        let (a, cert) = newton_lift(&p, &HahnSeries::zero(&f), &e(5)).unwrap();
        assert_eq!(a, HahnSeries::parse("t + t^2", &f).unwrap());
        assert_eq!((cert.iterates, cert.final_residual_val), (1, Val::Infinite));
    }

    #[test]
    fn lift_five_adic() {
        let p = UniPoly::parse("X^2 - 6", "X", None, &PadicAlgebra { p: 5 }).unwrap();
        let (a, cert) = newton_lift(&p, &PadicRat::int(1, 5), &e(4)).unwrap();
        // two plain Newton steps over Q: 1 -> 7/2 -> 73/28
        let mut x = rat(1, 1);
        for _ in 0..2 {
            x = &x - (&x * &x - rat(6, 1)) / (rat(2, 1) * &x);
        }
        assert_eq!(a.q, x);
        assert_eq!(a.q, rat(73, 28));
        let r = &a.q * &a.q - rat(6, 1);
        assert_eq!(r, rat(625, 784));
        assert_eq!(padic_val(&r, 5), Some(4));
        assert_eq!((cert.iterates, cert.final_residual.as_str()), (2, "4"));
    }

    #[test]
    fn hypothesis_and_precision_errors() {
        let f = qz();
        let p = hpoly("X^2 - (1+t)", &f);
        assert!(matches!(newton_lift(&p, &HahnSeries::from_int(&f, 2), &e(3)), Err(HenselError::Hypothesis(_))));
        let q = hpoly("X^2 - (1 + t + O(t^2))", &f);
        assert!(matches!(newton_lift(&q, &HahnSeries::one(&f), &e(4)), Err(HenselError::InsufficientPrecision(_))));
        let z = hpoly("X^2", &f);
        assert_eq!(newton_lift(&z, &HahnSeries::zero(&f), &e(1)).unwrap_err(), HenselError::ZeroDerivative);
    }

    #[test]
    fn hensel_start_lifts() {
        let f5 = SeriesField::parse("Fp(5)((t^lex(Z)))").unwrap();
        let p = hpoly("X^3 + 2*X^2 + t^2*X + t", &f5);
        let a0 = hensel_start(&p).unwrap();
        assert_eq!(a0.to_string(), "3");
        let (a, _) = newton_lift(&p, &a0, &e(8)).unwrap();
        assert!(p.eval(&a).unwrap().val().certainly_ge(&e(8)));
    }

    #[test]
    fn multipoly_ops() {
        let g = vec![mp("X0^2 - 2*X1^2"), mp("-2*X0")];
        let j = jacobian_polynomial(&g);
        assert_eq!(j.to_string(), "-8*X1");
        let m = jacobian_matrix(&g, &["X0".into(), "X1".into()]);
        let pt: BTreeMap<String, Rat> = [("X0".to_string(), rat(0, 1)), ("X1".to_string(), rat(1, 1))].into();
        let vals: Vec<Vec<Rat>> = m.iter().map(|r| r.iter().map(|p| p.eval(&pt).unwrap()).collect()).collect();
        assert_eq!(vals, vec![vec![rat(0, 1), rat(-4, 1)], vec![rat(-2, 1), rat(0, 1)]]);
        assert_eq!(j.eval(&pt).unwrap(), rat(-8, 1));
        let r = resultant(&mp("Z^2 - 2"), &mp("Y - (X0 + Z*X1)"), "Z").unwrap();
        assert_eq!(r, mp("(Y - X0)^2 - 2*X1^2"));
        assert_eq!(resultant(&mp("3"), &mp("X"), "Z"), Err(HenselError::ConstantResultant));
        assert_eq!(rational_roots(&[rat(-2, 1), rat(1, 1), rat(1, 1)]), vec![rat(-2, 1), rat(1, 1)]);
        assert_eq!(rational_roots(&[rat(1, 1), rat(0, 1), rat(-4, 1)]), vec![rat(-1, 2), rat(1, 2)]);
        assert!(rational_roots(&[rat(-2, 1), rat(0, 1), rat(1, 1)]).is_empty());
    }

    #[test]
    fn sqrt_two_form() {
        let form = conjugate_form(&mp("Z^2 - 2"), false).unwrap();
        assert_eq!(form.g.to_string(), "Y^2 - 2*X0*Y + X0^2 - 2*X1^2");
        assert_eq!(form.gs, vec![mp("X0^2 - 2*X1^2"), mp("-2*X0")]);
        assert_eq!(quadratic_expansion(&form.minpoly).unwrap(), form.g);
        assert!(form.vanishes_at_root());
        assert_eq!(find_nonvanishing_point(&form.gs, 3).unwrap(), (vec![0, 1], rat(-8, 1)));
        let c = |a, b| [rat(a, 1), rat(b, 1)];
        assert!(no_root_check(&form.g, &c(0, 1)));
        assert!(!no_root_check(&form.g, &c(1, 0)));
        assert!(no_root_check(&form.g, &c(3, 2)));
    }

    #[test]
    fn gaussian_form() {
        let form = conjugate_form(&mp("Z^2 + 1"), false).unwrap();
        assert_eq!(form.g, mp("Y^2 - 2*X0*Y + X0^2 + X1^2"));
        assert_eq!(quadratic_expansion(&form.minpoly).unwrap(), form.g);
        assert_eq!(jacobian_polynomial(&form.gs), mp("4*X1"));
        assert_eq!(find_nonvanishing_point(&form.gs, 3).unwrap().0, vec![0, 1]);
    }

    #[test]
    fn cube_root_form() {
        let form = conjugate_form(&mp("Z^3 - 2"), false).unwrap();
        assert_eq!(form.gs.len(), 3);
        assert!(form.vanishes_at_root());
        let pt: BTreeMap<String, Rat> =
            [("X0".to_string(), rat(1, 1)), ("X1".to_string(), rat(0, 1)), ("X2".to_string(), rat(0, 1))].into();
        assert_eq!(form.g.eval_partial(&pt), mp("(Y - 1)^3"));
        let (d, _) = find_nonvanishing_point(&form.gs, 3).unwrap();
        assert!(d.iter().all(|v| v.abs() <= 3));
    }

    #[test]
    fn irreducibility_guards() {
        assert!(matches!(conjugate_form(&mp("Z^2 - 4"), false), Err(HenselError::Reducible(_))));
        assert!(matches!(conjugate_form(&mp("Z - 4"), false), Err(HenselError::Degree(_))));
        assert_eq!(conjugate_form(&mp("Z^4 - 2"), false), Err(HenselError::UnverifiedIrreducible(4)));
        assert!(conjugate_form(&mp("Z^4 - 2"), true).unwrap().vanishes_at_root());
        assert_eq!(conjugate_form(&mp("2*Z^2 - 1"), false), Err(HenselError::NonMonic));
    }

    #[test]
    fn spiral_order() {
        let pts = spiral_points(2, 1);
        let want: Vec<Vec<i64>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![-1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![-1, 1],
            vec![0, -1],
            vec![1, -1],
            vec![-1, -1],
        ];
        assert_eq!(pts, want);
    }
}
