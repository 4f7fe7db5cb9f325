//! Truncated Hahn series `k((t^Γ))` over `Q`, `Q(sqrt d)` and `F_p`.
//!
//! A series is a finite list of terms plus an optional precision `O(t^p)`.
//! Every operation states the precision of its output, and questions that the
//! available terms cannot settle (the sign of `O(t)`, the valuation of
//! `0 + O(t^2)`) are errors rather than guesses.

mod field;
mod parse;
mod series;
mod uniform;

pub use field::{CoefficientField, Scalar, SeriesField};
pub use parse::SeriesAlgebra;
pub use series::{HahnSeries, Val, ValData, MAX_GEOMETRIC_TERMS};
pub use uniform::{typev_check, uniformity_check, BallFamily, TypeVReport, UniformityReport, ValSet};

use rand::Rng;

use crate::num::{Int, Rat};
use crate::oag::sample::random_element;
use crate::oag::OagError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HahnError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("bad coefficient field: {0}")]
    BadField(String),
    #[error("mismatched carriers: {0}")]
    Carrier(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series is zero to the available precision")]
    ZeroAtPrecision,
    #[error("insufficient input precision: {0}")]
    InsufficientPrecision(String),
    #[error("undecidable at the available precision: {0}")]
    Undecidable(String),
    #[error("{0} is not an ordered field")]
    Unordered(String),
    #[error("precision target unreachable: {0}")]
    Unreachable(String),
    #[error("empty set: {0}")]
    EmptySet(String),
    #[error(transparent)]
    Oag(#[from] OagError),
}

/// Random exact series with up to `terms` terms, exponents and numerators bounded by `bound`.
pub fn random_series<R: Rng>(field: &SeriesField, rng: &mut R, terms: usize, bound: i64) -> HahnSeries {
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..=terms.max(1)) {
        let e = random_element(&field.group, rng, bound);
        let n = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(1..=3i64);
        let c = match field.coeff {
            CoefficientField::PrimeField(p) => Scalar::fp(&Int::from(n), p),
            CoefficientField::Rational => Scalar::Rat(Rat::new(n.into(), d.into())),
            CoefficientField::RealQuad(k) => {
                let b = rng.gen_range(-2..=2i64);
                Scalar::Quad(crate::num::QuadNum::new(Rat::new(n.into(), d.into()), Rat::from_integer(b.into()), k))
            }
        };
        out.push((e, c));
    }
    HahnSeries::new(field, out, None).expect("generated within the field")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oag::GroupElement;
    use std::cmp::Ordering;

    fn qz() -> SeriesField {
        SeriesField::parse("Q((t^lex(Z)))").unwrap()
    }

    fn s(text: &str, f: &SeriesField) -> HahnSeries {
        HahnSeries::parse(text, f).unwrap()
    }

    fn e(n: i64) -> GroupElement {
        GroupElement::from_ints(&[n])
    }

    #[test]
    fn products_and_precision() {
        let f = qz();
        assert_eq!(s("1+t", &f).mul(&s("1-t", &f)).unwrap().to_string(), "1 - t^2");
        let zz = SeriesField::parse("Q((t^lex(Z,Z)))").unwrap();
        assert_eq!(s("t^(0,1)", &zz).mul(&s("t^(1,0)", &zz)).unwrap().to_string(), "t^(1,1)");
        let sum = s("1 + O(t^2)", &f).add(&s("t + O(t^3)", &f)).unwrap();
        assert_eq!(sum.to_string(), "1 + t + O(t^2)");
        let prod = s("1 + O(t^2)", &f).mul(&s("t + O(t^3)", &f)).unwrap();
        assert_eq!(prod.to_string(), "t + O(t^3)");
    }

    #[test]
    fn inversion() {
        let f = qz();
        assert_eq!(s("1-t", &f).invert(&e(4)).unwrap().to_string(), "1 + t + t^2 + t^3 + O(t^4)");
        assert_eq!(s("t", &f).invert(&e(3)).unwrap().to_string(), "t^-1");
        assert_eq!(s("2+t", &f).invert(&e(2)).unwrap().to_string(), "1/2 - 1/4*t + O(t^2)");
        assert_eq!(s("0", &f).invert(&e(2)), Err(HahnError::DivisionByZero));
        assert!(matches!(s("1 + O(t)", &f).invert(&e(2)), Err(HahnError::InsufficientPrecision(_))));
        let zz = SeriesField::parse("Q((t^lex(Z,Z)))").unwrap();
        let a = s("1 - t^(0,1)", &zz);
        assert!(matches!(a.invert(&GroupElement::from_ints(&[1, 0])), Err(HahnError::Unreachable(_))));
        let b = a.invert(&GroupElement::from_ints(&[0, 3])).unwrap();
        assert_eq!(b.to_string(), "1 + t^(0,1) + t^(0,2) + O(t^(0,3))");
    }

    #[test]
    fn valuation_data() {
        let f = qz();
        let d = s("3t^-1 - 5", &f).val_data().unwrap();
        assert_eq!((d.v.unwrap(), d.leading.unwrap().to_string(), d.residue), (e(-1), "3".into(), None));
        let d = s("2 + 3t", &f).val_data().unwrap();
        assert_eq!(d.residue.unwrap().to_string(), "2");
        assert_eq!(s("O(t^2)", &f).val_data(), Err(HahnError::ZeroAtPrecision));
    }

    #[test]
    fn order() {
        let f = qz();
        assert_eq!(s("3t^-1 - 5", &f).sign().unwrap(), Ordering::Greater);
        assert_eq!(s("t", &f).compare(&s("t^2", &f)).unwrap(), Ordering::Greater);
        assert!(matches!(s("1+O(t)", &f).compare(&s("1+O(t^2)", &f)), Err(HahnError::Undecidable(_))));
        let f5 = SeriesField::parse("Fp(5)((t^lex(Z)))").unwrap();
        assert!(matches!(s("1", &f5).sign(), Err(HahnError::Unordered(_))));
        let q2 = SeriesField::parse("Qsqrt(2)((t^lex(Z)))").unwrap();
        assert_eq!(s("1 - sqrt(2)", &q2).sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn literals_round_trip() {
        let cases = [
            ("Q((t^lex(Z)))", "1 + 1/2*t - 1/8*t^2 + O(t^3)"),
            ("Q((t^lex(Q)))", "-t^(-1/2) + 2*t^(1/3)"),
            ("Q((t^lex(Z,Z)))", "t^(-1,0) + 1 - 7*t^(0,2) + O(t^(1,0))"),
            ("Qsqrt(3)((t^lex(Z)))", "(1+2*sqrt(3))*t^-1 + sqrt(3)"),
            ("Fp(5)((t^lex(Z)))", "3 + 4*t + O(t^2)"),
            ("Q((t^lex(Quad(2))))", "t^(1+1*sqrt(2)) + O(t^(2-1*sqrt(2)))"),
        ];
        for (field, text) in cases {
            let f = SeriesField::parse(field).unwrap();
            let a = s(text, &f);
            let again = s(&a.to_string(), &f);
            assert_eq!(a, again, "{field}: {text} printed as {a}");
        }
        let f5 = SeriesField::parse("Fp(5)((t^lex(Z)))").unwrap();
        assert_eq!(s("(7 mod 5)*t + 1/2", &f5).to_string(), "3 + 2*t");
        assert!(HahnSeries::parse("sqrt(2)", &qz()).is_err());
        assert!(HahnSeries::parse("1/(1+t)", &qz()).is_err());
    }

    #[test]
    fn ball_examples() {
        let f = qz();
        let bf = BallFamily::new(f.group.clone());
        assert!(bf.contains(&e(0), &s("0", &f), &s("t", &f)).unwrap());
        assert!(!bf.contains(&e(0), &s("0", &f), &s("1", &f)).unwrap());
        let (x, y) = (s("1", &f), s("1 + t^3", &f));
        assert!(bf.contains(&e(2), &x, &y).unwrap());
        assert!(!bf.contains(&e(3), &x, &y).unwrap());
        let rep = uniformity_check(&bf, &[s("0", &f), s("t", &f), s("1", &f)], &[e(0), e(1)]);
        assert!(rep.passed(), "{:?}", rep.violations);
    }

    #[test]
    fn typev_examples() {
        let g = crate::oag::GroupDescriptor::parse("lex(Z)").unwrap();
        let r = typev_check(&ValSet::Ball(e(1)), &g, 0).unwrap();
        assert!(r.bounded && r.inverse_bounded_away && r.duality_holds());
        let r = typev_check(&ValSet::CoBall(e(0)), &g, 0).unwrap();
        assert!(!r.bounded && !r.inverse_bounded_away && r.duality_holds(), "{r:?}");
        let r = typev_check(&ValSet::Annulus(e(0), e(2)), &g, 0).unwrap();
        assert!(r.bounded && r.inverse_bounded_away && r.duality_holds());
        assert!(typev_check(&ValSet::Annulus(e(2), e(2)), &g, 0).is_err());
    }
}
