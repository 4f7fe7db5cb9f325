use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::field::{signed_term, CoefficientField, Scalar, SeriesField};
use super::HahnError;
use crate::num::Int;
use crate::oag::{Coord, GroupDescriptor, GroupElement};

/// Largest number of geometric-series terms `invert` is willing to sum.
pub const MAX_GEOMETRIC_TERMS: u64 = 1 << 20;

/// Valuation as far as the available precision can tell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Val {
    Exact(GroupElement),
    /// Every known term vanishes; the value is at least this.
    AtLeast(GroupElement),
    Infinite,
}

impl Val {
    /// The certified lower bound, `None` for an exact zero.
    pub fn bound(&self) -> Option<&GroupElement> {
        match self {
            Val::Exact(g) | Val::AtLeast(g) => Some(g),
            Val::Infinite => None,
        }
    }

    /// `self >= g` is certain.
    pub fn certainly_ge(&self, g: &GroupElement) -> bool {
        self.bound().is_none_or(|b| b >= g)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Exact(g) => write!(f, "{g}"),
            Val::AtLeast(g) => write!(f, ">= {g}"),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

/// Valuation, leading coefficient and residue of a series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValData {
    /// `None` is `+inf`.
    pub v: Option<GroupElement>,
    pub leading: Option<Scalar>,
    /// `None` when the series lies outside the valuation ring.
    pub residue: Option<Scalar>,
}

/// A finite-support Hahn series, optionally known only modulo `t^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HahnSeries {
    field: SeriesField,
    terms: Vec<(GroupElement, Scalar)>,
    precision: Option<GroupElement>,
}

impl HahnSeries {
    /// Canonical series from arbitrary terms: like exponents merged, zeros and
    /// terms at or beyond the precision dropped.
    pub fn new(
        field: &SeriesField,
        terms: Vec<(GroupElement, Scalar)>,
        precision: Option<GroupElement>,
    ) -> Result<Self, HahnError> {
        if let Some(p) = &precision {
            field.group.check(p)?;
        }
        let mut acc: BTreeMap<GroupElement, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            field.group.check(&e)?;
            if !field.coeff.contains(&c) {
                return Err(HahnError::Carrier(format!("coefficient {c} is not in {}", field.coeff)));
            }
            add_term(&mut acc, e, c);
        }
        Ok(Self::from_map(field, acc, precision))
    }

    fn from_map(field: &SeriesField, acc: BTreeMap<GroupElement, Scalar>, precision: Option<GroupElement>) -> Self {
        let terms = acc.into_iter().filter(|(e, c)| !c.is_zero() && precision.as_ref().is_none_or(|p| e < p)).collect();
        HahnSeries { field: field.clone(), terms, precision }
    }

    pub fn zero(field: &SeriesField) -> Self {
        HahnSeries { field: field.clone(), terms: Vec::new(), precision: None }
    }

    /// `O(t^p)`: nothing known below `p`.
    pub fn big_o(field: &SeriesField, p: GroupElement) -> Self {
        HahnSeries { field: field.clone(), terms: Vec::new(), precision: Some(p) }
    }

    pub fn one(field: &SeriesField) -> Self {
        Self::constant(field, field.coeff.one())
    }

    pub fn from_int(field: &SeriesField, n: i64) -> Self {
        Self::constant(field, field.coeff.from_int(&Int::from(n)))
    }

    pub fn constant(field: &SeriesField, c: Scalar) -> Self {
        Self::monomial(field, c, field.group.zero())
    }

    pub fn monomial(field: &SeriesField, c: Scalar, e: GroupElement) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(e, c)] };
        HahnSeries { field: field.clone(), terms, precision: None }
    }

    /// `t^e`
    pub fn t_pow(field: &SeriesField, e: GroupElement) -> Self {
        Self::monomial(field, field.coeff.one(), e)
    }

    pub fn field(&self) -> &SeriesField {
        &self.field
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.field.group
    }

    pub fn coeff_field(&self) -> &CoefficientField {
        &self.field.coeff
    }

    pub fn terms(&self) -> &[(GroupElement, Scalar)] {
        &self.terms
    }

    pub fn precision(&self) -> Option<&GroupElement> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// Exactly zero (not merely zero to the available precision).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    pub fn coefficient(&self, e: &GroupElement) -> Option<&Scalar> {
        self.terms.iter().find(|(x, _)| x == e).map(|(_, c)| c)
    }

    pub fn leading(&self) -> Option<&(GroupElement, Scalar)> {
        self.terms.first()
    }

    pub fn val(&self) -> Val {
        match (self.terms.first(), &self.precision) {
            (Some((e, _)), _) => Val::Exact(e.clone()),
            (None, Some(p)) => Val::AtLeast(p.clone()),
            (None, None) => Val::Infinite,
        }
    }

    /// Forget everything at or beyond `p`.
    pub fn with_precision(&self, p: &GroupElement) -> Self {
        let p = match &self.precision {
            Some(q) if q < p => q.clone(),
            _ => p.clone(),
        };
        let terms = self.terms.iter().filter(|(e, _)| *e < p).cloned().collect();
        HahnSeries { field: self.field.clone(), terms, precision: Some(p) }
    }

    /// The exact series formed by the known terms below `p`.
    pub fn truncate(&self, p: &GroupElement) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e < p).cloned().collect();
        HahnSeries { field: self.field.clone(), terms, precision: None }
    }

    /// The known terms as an exact series.
    pub fn exact_part(&self) -> Self {
        HahnSeries { field: self.field.clone(), terms: self.terms.clone(), precision: None }
    }

    fn check_carrier(&self, o: &Self) -> Result<(), HahnError> {
        if self.field != o.field {
            return Err(HahnError::Carrier(format!("{} vs {}", self.field, o.field)));
        }
        Ok(())
    }

    fn min_precision(a: Option<&GroupElement>, b: Option<&GroupElement>) -> Option<GroupElement> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y).clone()),
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, HahnError> {
        self.check_carrier(o)?;
        let mut acc: BTreeMap<GroupElement, Scalar> = self.terms.iter().cloned().collect();
        for (e, c) in &o.terms {
            add_term(&mut acc, e.clone(), c.clone());
        }
        Ok(Self::from_map(&self.field, acc, Self::min_precision(self.precision(), o.precision())))
    }

    pub fn neg(&self) -> Self {
        HahnSeries {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, HahnError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() && self.is_exact() {
            return Self::zero(&self.field);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mul(k))).filter(|(_, c)| !c.is_zero()).collect();
        HahnSeries { field: self.field.clone(), terms, precision: self.precision.clone() }
    }

    /// Multiply by `t^g`.
    pub fn shift(&self, g: &GroupElement) -> Self {
        HahnSeries {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.add(g), c.clone())).collect(),
            precision: self.precision.as_ref().map(|p| p.add(g)),
        }
    }

    /// Product; an inexact factor `A + O(t^p)` contributes error `O(t^(p + v(other)))`.
    pub fn mul(&self, o: &Self) -> Result<Self, HahnError> {
        self.check_carrier(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let va = self.val();
        let vb = o.val();
        let lb_a = va.bound().expect("nonzero");
        let lb_b = vb.bound().expect("nonzero");
        let prec = match (&self.precision, &o.precision) {
            (None, None) => None,
            (Some(pa), None) => Some(pa.add(lb_b)),
            (None, Some(pb)) => Some(pb.add(lb_a)),
            (Some(pa), Some(pb)) => Some(std::cmp::min(pa.add(lb_b), pb.add(lb_a))),
        };
        Ok(Self::from_map(&self.field, product_terms(&self.terms, &o.terms, prec.as_ref()), prec))
    }

    /// `1/self` with `self * result = 1 + O(t^prec)`; the result is known modulo
    /// `t^(prec - v(self))`.
    pub fn invert(&self, prec: &GroupElement) -> Result<Self, HahnError> {
        let Some((w, c)) = self.terms.first().cloned() else {
            return Err(if self.is_exact() { HahnError::DivisionByZero } else { HahnError::ZeroAtPrecision });
        };
        let c_inv = c.inv().ok_or(HahnError::DivisionByZero)?;
        let neg_w = w.neg();
        // self = c t^w (1 + u) with v(u) > 0
        let normalized = self.shift(&neg_w).scale(&c_inv);
        let mut u = normalized.exact_part();
        u.terms.remove(0);
        if let Some(pa) = normalized.precision() {
            if pa < prec {
                return Err(HahnError::InsufficientPrecision(format!(
                    "1/a to precision {prec} needs a known modulo t^{}, have t^{}",
                    prec.add(&w),
                    pa.add(&w)
                )));
            }
        }
        if u.terms.is_empty() && self.is_exact() {
            return Ok(Self::monomial(&self.field, c_inv, neg_w));
        }
        let zero = self.field.group.zero();
        let mut sum: BTreeMap<GroupElement, Scalar> = BTreeMap::new();
        if zero < *prec {
            sum.insert(zero.clone(), self.field.coeff.one());
        }
        if let Some((vu, _)) = u.terms.first() {
            let k = geometric_terms(vu, prec)?;
            let minus_u: Vec<(GroupElement, Scalar)> = u.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect();
            let mut power: Vec<(GroupElement, Scalar)> = vec![(zero, self.field.coeff.one())];
            for _ in 1..k {
                power = product_terms(&power, &minus_u, Some(prec)).into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if power.is_empty() {
                    break;
                }
                for (e, c) in &power {
                    add_term(&mut sum, e.clone(), c.clone());
                }
            }
        }
        let b = Self::from_map(&self.field, sum, Some(prec.clone()));
        Ok(b.shift(&neg_w).scale(&c_inv))
    }

    /// `self / o`, with `o` inverted to relative precision `rel`.
    pub fn div(&self, o: &Self, rel: &GroupElement) -> Result<Self, HahnError> {
        self.check_carrier(o)?;
        self.mul(&o.invert(rel)?)
    }

    pub fn pow(&self, n: u32) -> Result<Self, HahnError> {
        let mut acc = Self::one(&self.field);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn val_data(&self) -> Result<ValData, HahnError> {
        let zero = self.field.group.zero();
        match self.terms.first() {
            None if self.is_exact() => Ok(ValData { v: None, leading: None, residue: Some(self.field.coeff.zero()) }),
            None => Err(HahnError::ZeroAtPrecision),
            Some((e, c)) => {
                let residue = match e.cmp(&zero) {
                    Ordering::Greater => Some(self.field.coeff.zero()),
                    Ordering::Equal => Some(c.clone()),
                    Ordering::Less => None,
                };
                Ok(ValData { v: Some(e.clone()), leading: Some(c.clone()), residue })
            }
        }
    }

    /// Order of an ordered Hahn field: positive iff the leading coefficient is.
    pub fn compare(&self, o: &Self) -> Result<Ordering, HahnError> {
        self.check_carrier(o)?;
        if !self.field.coeff.is_ordered() {
            return Err(HahnError::Unordered(self.field.coeff.to_string()));
        }
        let d = self.sub(o)?;
        match d.terms.first() {
            Some((_, c)) => Ok(c.sign().expect("ordered field")),
            None if d.is_exact() => Ok(Ordering::Equal),
            None => Err(HahnError::Undecidable(format!("difference is {d}"))),
        }
    }

    pub fn sign(&self) -> Result<Ordering, HahnError> {
        self.compare(&Self::zero(&self.field))
    }

    pub fn abs(&self) -> Result<Self, HahnError> {
        Ok(if self.sign()? == Ordering::Less { self.neg() } else { self.clone() })
    }
}

fn add_term(acc: &mut BTreeMap<GroupElement, Scalar>, e: GroupElement, c: Scalar) {
    match acc.get_mut(&e) {
        Some(x) => *x = x.add(&c),
        None => {
            acc.insert(e, c);
        }
    }
}

fn product_terms(
    a: &[(GroupElement, Scalar)],
    b: &[(GroupElement, Scalar)],
    below: Option<&GroupElement>,
) -> BTreeMap<GroupElement, Scalar> {
    let mut acc = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.add(eb);
            if below.is_none_or(|p| e < *p) {
                add_term(&mut acc, e, ca.mul(cb));
            }
        }
    }
    acc
}

/// Least `k` with `k * vu >= target`, for `vu > 0`.
fn geometric_terms(vu: &GroupElement, target: &GroupElement) -> Result<u64, HahnError> {
    let reaches = |k: u64| vu.scale(&Int::from(k)) >= *target;
    if reaches(1) {
        return Ok(1);
    }
    if !reaches(MAX_GEOMETRIC_TERMS) {
        return Err(HahnError::Unreachable(format!(
            "multiples of {vu} do not reach {target} within {MAX_GEOMETRIC_TERMS} terms"
        )));
    }
    let (mut lo, mut hi) = (1, MAX_GEOMETRIC_TERMS);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `t^e` as printed; `None` for the zero exponent.
pub(crate) fn monomial_text(var: &str, e: &GroupElement) -> Option<String> {
    if e.is_zero() {
        return None;
    }
    Some(match e.coords() {
        [Coord::Num(q)] if q.is_integer() && *q.numer() == Int::from(1) => var.to_string(),
        [Coord::Num(q)] if q.is_integer() => format!("{var}^{}", q.numer()),
        [c] => format!("{var}^({c})"),
        _ => format!("{var}^{e}"),
    })
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let mono = monomial_text("t", e);
            let (neg, body) = signed_term(c, mono.as_deref());
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if let Some(p) = &self.precision {
            let o = match monomial_text("t", p) {
                Some(m) => format!("O({m})"),
                None => "O(1)".to_string(),
            };
            if first {
                write!(f, "{o}")?;
            } else {
                write!(f, " + {o}")?;
            }
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
