use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::HahnError;
use crate::lexer::{tokenize, Cursor, Tok};
use crate::num::{fmt_rat, is_perfect_square, is_prime, Int, QuadNum, Rat};
use crate::oag::parse::parse_group_at;
use crate::oag::GroupDescriptor;

/// The coefficient field `k` of `k((t^Γ))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientField {
    Rational,
    /// `Q(sqrt(d))` embedded in the reals
    RealQuad(i64),
    PrimeField(u64),
}

impl CoefficientField {
    pub fn real_quad(d: i64) -> Result<Self, HahnError> {
        if d < 2 || is_perfect_square(&Int::from(d)) {
            return Err(HahnError::BadField(format!("Qsqrt({d}) needs a non-square d >= 2")));
        }
        Ok(CoefficientField::RealQuad(d))
    }

    pub fn prime_field(p: u64) -> Result<Self, HahnError> {
        if !is_prime(p) {
            return Err(HahnError::BadField(format!("Fp({p}) needs a prime")));
        }
        Ok(CoefficientField::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientField::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn is_ordered(&self) -> bool {
        !matches!(self, CoefficientField::PrimeField(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(&Int::zero())
    }

    pub fn one(&self) -> Scalar {
        self.from_int(&Int::one())
    }

    pub fn from_int(&self, n: &Int) -> Scalar {
        match self {
            CoefficientField::Rational => Scalar::Rat(Rat::from_integer(n.clone())),
            CoefficientField::RealQuad(d) => Scalar::Quad(QuadNum::from_rat(Rat::from_integer(n.clone()), *d)),
            CoefficientField::PrimeField(p) => Scalar::fp(n, *p),
        }
    }

    pub fn from_rat(&self, q: &Rat) -> Result<Scalar, HahnError> {
        match self {
            CoefficientField::PrimeField(p) => {
                let den = Scalar::fp(q.denom(), *p);
                Scalar::fp(q.numer(), *p).div(&den).ok_or(HahnError::DivisionByZero)
            }
            CoefficientField::Rational => Ok(Scalar::Rat(q.clone())),
            CoefficientField::RealQuad(d) => Ok(Scalar::Quad(QuadNum::from_rat(q.clone(), *d))),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (CoefficientField::Rational, Scalar::Rat(_)) => true,
            (CoefficientField::RealQuad(d), Scalar::Quad(q)) => q.d == *d,
            (CoefficientField::PrimeField(p), Scalar::Fp { p: p2, .. }) => p == p2,
            _ => false,
        }
    }

    pub fn parse_at(cur: &mut Cursor) -> Result<Self, HahnError> {
        let name = match cur.next() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(HahnError::Syntax(format!("expected a coefficient field, found {}", cur.describe()))),
        };
        let mut arg = || -> Result<Int, HahnError> {
            let ok = cur.eat_sym("(");
            let n = match cur.next() {
                Some(Tok::Num(n)) if ok => n.clone(),
                _ => return Err(HahnError::Syntax(format!("{name} takes an integer argument"))),
            };
            if !cur.eat_sym(")") {
                return Err(HahnError::Syntax(format!("expected ')' after {name} argument")));
            }
            Ok(n)
        };
        match name.as_str() {
            "Q" => Ok(CoefficientField::Rational),
            "Qsqrt" => CoefficientField::real_quad(arg()?.to_i64().unwrap_or(0)),
            "Fp" => CoefficientField::prime_field(arg()?.to_u64().unwrap_or(0)),
            other => Err(HahnError::Syntax(format!("unknown coefficient field '{other}'"))),
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Rational => write!(f, "Q"),
            CoefficientField::RealQuad(d) => write!(f, "Qsqrt({d})"),
            CoefficientField::PrimeField(p) => write!(f, "Fp({p})"),
        }
    }
}

/// An element of a coefficient field. The field itself is carried by the series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rat),
    Quad(QuadNum),
    /// Residue `v` modulo the prime `p`, with `0 <= v < p`.
    Fp {
        v: u64,
        p: u64,
    },
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Scalar {
    pub fn fp(n: &Int, p: u64) -> Scalar {
        let v = n.mod_floor(&Int::from(p)).to_u64().expect("reduced");
        Scalar::Fp { v, p }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Quad(q) => q.a.is_one() && q.b.is_zero(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Rat(_) => Scalar::Rat(Rat::zero()),
            Scalar::Quad(q) => Scalar::Quad(QuadNum::from_rat(Rat::zero(), q.d)),
            Scalar::Fp { p, .. } => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Quad(a), Scalar::Quad(b)) => Scalar::Quad(a.add(b)),
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, p: q }) if p == q => Scalar::Fp { v: (v + w) % p, p: *p },
            _ => panic!("scalars from different fields: {self:?} and {o:?}"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Quad(a) => Scalar::Quad(a.neg()),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Quad(a), Scalar::Quad(b)) => Scalar::Quad(a.mul(b)),
            (Scalar::Fp { v, p }, Scalar::Fp { v: w, p: q }) if p == q => Scalar::Fp { v: mulmod(*v, *w, *p), p: *p },
            _ => panic!("scalars from different fields: {self:?} and {o:?}"),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Quad(a) => Scalar::Quad(a.inv()?),
            Scalar::Fp { v, p } => {
                let e = Int::from(*v).extended_gcd(&Int::from(*p));
                Scalar::fp(&e.x, *p)
            }
        })
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        Some(self.mul(&o.inv()?))
    }

    /// Sign in the real embedding; `None` over a prime field.
    pub fn sign(&self) -> Option<Ordering> {
        match self {
            Scalar::Rat(a) => Some(a.cmp(&Rat::zero())),
            Scalar::Quad(a) => a.sign(),
            Scalar::Fp { .. } => None,
        }
    }

    /// Shown with an explicit leading `-` when negative in the real embedding.
    fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(a) => a.is_negative(),
            Scalar::Quad(a) => a.b.is_zero() && a.a.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }

    /// Needs parentheses when multiplied by a monomial.
    fn is_compound(&self) -> bool {
        matches!(self, Scalar::Quad(q) if !q.b.is_zero())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{}", fmt_rat(q)),
            Scalar::Quad(q) => write!(f, "{q}"),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Writes `c*m` as a signed summand: the sign separately, then the body.
pub(crate) fn signed_term(c: &Scalar, monomial: Option<&str>) -> (bool, String) {
    let neg = c.is_negative();
    let c = if neg { c.neg() } else { c.clone() };
    let body = match monomial {
        None => c.to_string(),
        Some(m) if c.is_one() => m.to_string(),
        Some(m) if c.is_compound() => format!("({c})*{m}"),
        Some(m) => format!("{c}*{m}"),
    };
    (neg, body)
}

/// `k((t^Γ))`: a coefficient field together with an exponent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesField {
    pub coeff: CoefficientField,
    pub group: GroupDescriptor,
}

impl SeriesField {
    pub fn new(coeff: CoefficientField, group: GroupDescriptor) -> Self {
        SeriesField { coeff, group }
    }

    /// `Q((t^lex(Z)))`, `Qsqrt(2)((t^lex(Z,Q)))`, `Fp(5)((t^lex(Z)))`.
    pub fn parse(text: &str) -> Result<Self, HahnError> {
        let toks = tokenize(text).map_err(|e| HahnError::Syntax(e.to_string()))?;
        let mut cur = Cursor::new(&toks);
        let coeff = CoefficientField::parse_at(&mut cur)?;
        let expect = |cur: &mut Cursor, s: &str| {
            if cur.eat_sym(s) {
                Ok(())
            } else {
                Err(HahnError::Syntax(format!("expected '{s}' in field descriptor, found {}", cur.describe())))
            }
        };
        expect(&mut cur, "(")?;
        expect(&mut cur, "(")?;
        if !cur.eat_ident("t") {
            return Err(HahnError::Syntax("expected 't' in field descriptor".into()));
        }
        expect(&mut cur, "^")?;
        let group = parse_group_at(&mut cur)?;
        expect(&mut cur, ")")?;
        expect(&mut cur, ")")?;
        if !cur.at_end() {
            return Err(HahnError::Syntax(format!("trailing input after field descriptor: {}", cur.describe())));
        }
        Ok(SeriesField { coeff, group })
    }
}

impl fmt::Display for SeriesField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}((t^{}))", self.coeff, self.group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_descriptors_round_trip() {
        for s in ["Q((t^lex(Z)))", "Qsqrt(2)((t^lex(Z,Q)))", "Fp(5)((t^lex(Zloc(2))))"] {
            assert_eq!(SeriesField::parse(s).unwrap().to_string(), s);
        }
        assert!(SeriesField::parse("Qsqrt(4)((t^lex(Z)))").is_err());
        assert!(SeriesField::parse("Fp(6)((t^lex(Z)))").is_err());
        assert!(SeriesField::parse("Q((t^lex(Z))").is_err());
    }

    #[test]
    fn prime_field_inverses() {
        for v in 1..7u64 {
            let a = Scalar::Fp { v, p: 7 };
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        assert_eq!(CoefficientField::PrimeField(5).from_rat(&Rat::new(1.into(), 2.into())).unwrap().to_string(), "3");
        assert!(CoefficientField::PrimeField(5).from_rat(&Rat::new(1.into(), 5.into())).is_err());
    }
}
