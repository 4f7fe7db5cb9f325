//! The ball family `U_γ = {(x,y) : v(x-y) > γ}` of a Hahn field and the
//! boundedness duality of its valuation topology.
//!
//! A set described by the valuations of its nonzero elements is bounded when
//! those valuations are bounded below. Inversion negates valuations, so the
//! inverse set avoids a neighbourhood of zero exactly when the valuations are
//! bounded below as well. Both sides are computed separately here and then
//! checked pointwise on sample elements.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::series::{HahnSeries, Val};
use super::HahnError;
use crate::oag::sample::random_element;
use crate::oag::{GroupDescriptor, GroupElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallFamily {
    pub group: GroupDescriptor,
}

impl BallFamily {
    pub fn new(group: GroupDescriptor) -> Self {
        BallFamily { group }
    }

    /// `(x, y) ∈ U_γ`; an error when the precision cannot decide it.
    pub fn contains(&self, gamma: &GroupElement, x: &HahnSeries, y: &HahnSeries) -> Result<bool, HahnError> {
        member(gamma, &x.sub(y)?.val())
    }
}

fn member(gamma: &GroupElement, v: &Val) -> Result<bool, HahnError> {
    match v {
        Val::Infinite => Ok(true),
        Val::Exact(e) => Ok(e > gamma),
        Val::AtLeast(b) if b > gamma => Ok(true),
        Val::AtLeast(b) => Err(HahnError::Undecidable(format!("v(x-y) >= {b} against radius {gamma}"))),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UniformityReport {
    pub points: usize,
    pub radii: usize,
    pub memberships_checked: usize,
    pub triples_checked: usize,
    /// `(i, j, γ)`: the pair `i, j` lies outside `U_γ`.
    pub separations: Vec<(usize, usize, String)>,
    pub violations: Vec<String>,
}

impl UniformityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the basis axioms of the ball family on sample points and radii.
// index loops over the (radius, i, j) membership table read better than zipped iterators
#[allow(clippy::needless_range_loop)]
pub fn uniformity_check(bf: &BallFamily, points: &[HahnSeries], radii: &[GroupElement]) -> UniformityReport {
    let n = points.len();
    let mut rep = UniformityReport { points: n, radii: radii.len(), ..Default::default() };
    for (i, x) in points.iter().enumerate() {
        if *x.group() != bf.group {
            rep.violations.push(format!("point {i} has exponents in {}, not {}", x.group(), bf.group));
        }
    }
    let mut vals: Vec<Vec<Option<Val>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            match points[i].sub(&points[j]) {
                Ok(d) => vals[i][j] = Some(d.val()),
                Err(e) => rep.violations.push(format!("points {i},{j}: {e}")),
            }
        }
    }
    if !rep.violations.is_empty() {
        return rep;
    }
    let val = |i: usize, j: usize| vals[i][j].as_ref().expect("filled");
    // memberships[r][i][j]
    let mut mem = vec![vec![vec![false; n]; n]; radii.len()];
    for (r, g) in radii.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                rep.memberships_checked += 1;
                match member(g, val(i, j)) {
                    Ok(b) => mem[r][i][j] = b,
                    Err(e) => rep.violations.push(format!("points {i},{j}: {e}")),
                }
            }
        }
    }
    for i in 0..n {
        for (r, g) in radii.iter().enumerate() {
            if !mem[r][i][i] {
                rep.violations.push(format!("diagonal: ({i},{i}) not in U_{g}"));
            }
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            match val(i, j) {
                Val::Exact(e) => {
                    // the radius v(x-y) itself separates the pair
                    match member(e, val(i, j)) {
                        Ok(false) => rep.separations.push((i, j, e.to_string())),
                        _ => rep.violations.push(format!("separation: ({i},{j}) inside U_{e}")),
                    }
                }
                Val::Infinite => {}
                Val::AtLeast(b) => rep.violations.push(format!("separation: v(x{i}-x{j}) only known >= {b}")),
            }
            for (r, g) in radii.iter().enumerate() {
                if mem[r][i][j] != mem[r][j][i] {
                    rep.violations.push(format!("symmetry: ({i},{j}) and ({j},{i}) differ for U_{g}"));
                }
            }
        }
    }
    for (r, g) in radii.iter().enumerate() {
        for (s, h) in radii.iter().enumerate() {
            let m = if g >= h { r } else { s };
            for i in 0..n {
                for j in 0..n {
                    if mem[m][i][j] && !(mem[r][i][j] && mem[s][i][j]) {
                        rep.violations.push(format!("nesting: ({i},{j}) in U_max({g},{h}) but not in both"));
                    }
                }
            }
        }
    }
    for (r, g) in radii.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if !mem[r][i][j] {
                    continue;
                }
                for k in 0..n {
                    rep.triples_checked += 1;
                    if mem[r][j][k] && !mem[r][i][k] {
                        rep.violations.push(format!("composition: ({i},{j}),({j},{k}) in U_{g} but ({i},{k}) not"));
                    }
                }
            }
        }
    }
    rep
}

/// A set around zero given by the valuations of its nonzero elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValSet {
    /// `{v > γ}`
    Ball(GroupElement),
    /// `{v <= γ}`
    CoBall(GroupElement),
    /// `{γ1 < v <= γ2}`
    Annulus(GroupElement, GroupElement),
}

impl fmt::Display for ValSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValSet::Ball(g) => write!(f, "BALL({g})"),
            ValSet::CoBall(g) => write!(f, "CO_BALL({g})"),
            ValSet::Annulus(a, b) => write!(f, "ANNULUS({a},{b})"),
        }
    }
}

/// An interval of valuations; bounds are `(value, strict)`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Interval {
    lower: Option<(GroupElement, bool)>,
    upper: Option<(GroupElement, bool)>,
}

impl Interval {
    fn contains(&self, v: &GroupElement) -> bool {
        let lo = self.lower.as_ref().is_none_or(|(g, strict)| if *strict { v > g } else { v >= g });
        let hi = self.upper.as_ref().is_none_or(|(g, strict)| if *strict { v < g } else { v <= g });
        lo && hi
    }

    fn negated(&self) -> Interval {
        let flip = |b: &Option<(GroupElement, bool)>| b.as_ref().map(|(g, s)| (g.neg(), *s));
        Interval { lower: flip(&self.upper), upper: flip(&self.lower) }
    }
}

impl ValSet {
    fn interval(&self) -> Result<Interval, HahnError> {
        Ok(match self {
            ValSet::Ball(g) => Interval { lower: Some((g.clone(), true)), upper: None },
            ValSet::CoBall(g) => Interval { lower: None, upper: Some((g.clone(), false)) },
            ValSet::Annulus(a, b) => {
                if a >= b {
                    return Err(HahnError::EmptySet(self.to_string()));
                }
                Interval { lower: Some((a.clone(), true)), upper: Some((b.clone(), false)) }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeVReport {
    pub set: String,
    pub bounded: bool,
    pub inverse_bounded_away: bool,
    /// Every element has valuation at least this.
    pub lower_witness: Option<String>,
    /// No inverse has valuation above this.
    pub away_witness: Option<String>,
    pub samples_checked: usize,
    pub violations: Vec<String>,
}

impl TypeVReport {
    pub fn duality_holds(&self) -> bool {
        self.bounded == self.inverse_bounded_away && self.violations.is_empty()
    }
}

/// Decide boundedness of `S` and whether `(S \ {0})^{-1}` avoids a ball around zero,
/// then confirm both answers on sample monomials and binomials.
pub fn typev_check(set: &ValSet, g: &GroupDescriptor, seed: u64) -> Result<TypeVReport, HahnError> {
    let iv = set.interval()?;
    let inv = iv.negated();
    let bounded = iv.lower.is_some();
    let away = inv.upper.is_some();
    let lower = iv.lower.as_ref().map(|(b, _)| b.clone());
    let upper_inv = inv.upper.as_ref().map(|(b, _)| b.clone());
    let mut rep = TypeVReport {
        set: set.to_string(),
        bounded,
        inverse_bounded_away: away,
        lower_witness: lower.as_ref().map(|b| b.to_string()),
        away_witness: upper_inv.as_ref().map(|b| b.to_string()),
        samples_checked: 0,
        violations: Vec::new(),
    };

    let field = super::field::SeriesField::new(super::field::CoefficientField::Rational, g.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coarse = g.unit(0);
    let fine = g.unit(g.len() - 1);
    let mut vals: Vec<GroupElement> = (0..40).map(|_| random_element(g, &mut rng, 6)).collect();
    for (b, _) in iv.lower.iter().chain(iv.upper.iter()) {
        for d in [&coarse, &fine] {
            vals.push(b.add(d));
            vals.push(b.sub(d));
        }
        vals.push(b.clone());
    }
    for v in vals.into_iter().filter(|v| iv.contains(v)) {
        let mono = HahnSeries::t_pow(&field, v.clone());
        let bin = mono.add(&HahnSeries::t_pow(&field, v.add(&coarse)).scale(&field.coeff.from_int(&3.into())))?;
        for x in [mono, bin] {
            rep.samples_checked += 1;
            let vx = match x.val() {
                Val::Exact(e) => e,
                other => return Err(HahnError::Undecidable(format!("sample valuation {other}"))),
            };
            if !iv.contains(&vx) {
                rep.violations.push(format!("sample {x} has valuation outside {set}"));
            }
            if let Some(b) = &lower {
                if vx < *b {
                    rep.violations.push(format!("sample {x} below the claimed bound {b}"));
                }
            }
            let y = x.invert(&coarse)?;
            let vy = match y.val() {
                Val::Exact(e) => e,
                other => return Err(HahnError::Undecidable(format!("inverse valuation {other}"))),
            };
            if !inv.contains(&vy) {
                rep.violations.push(format!("inverse of {x} has valuation {vy} outside the negated set"));
            }
            if let Some(b) = &upper_inv {
                if vy > *b {
                    rep.violations.push(format!("inverse of {x} enters {{v > {b}}}"));
                }
            }
        }
    }

    // Unbounded sides: exhibit elements past any candidate bound.
    for k in 1..=4i64 {
        let cand = coarse.scale_i64(-k * 10);
        if !bounded {
            let top = iv.upper.as_ref().map_or(cand.clone(), |(u, _)| u.min(&cand).clone());
            let w = top.sub(&coarse);
            let x = HahnSeries::t_pow(&field, w.clone());
            rep.samples_checked += 1;
            if !(iv.contains(&w) && w < cand) {
                rep.violations.push(format!("no element of {set} below {cand}"));
            }
            let y = x.invert(&coarse)?;
            if !away && !matches!(y.val(), Val::Exact(e) if e > cand.neg()) {
                rep.violations.push(format!("inverse set stays below {}", cand.neg()));
            }
        }
    }
    Ok(rep)
}
