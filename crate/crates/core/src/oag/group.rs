use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::element::{Coord, GroupElement};
use super::OagError;
use crate::num::{coprime_part, is_perfect_square, is_prime, Int, Rat};

/// Archimedean building block of a lexicographic product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    Int,
    /// `Z[1/m]`
    IntLoc(u64),
    Rat,
    /// `Z + sqrt(d) Z` inside the reals
    Quad(u64),
    /// `⊕_{i<ω} Z`, ordered by the least index of the support
    OmegaInt,
}

impl ComponentKind {
    /// `|C/pC|`, or `None` when infinite.
    pub fn index_mod(&self, p: u64) -> Option<u64> {
        match self {
            ComponentKind::Int => Some(p),
            ComponentKind::IntLoc(m) => Some(if m % p == 0 { 1 } else { p }),
            ComponentKind::Rat => Some(1),
            ComponentKind::Quad(_) => Some(p * p),
            ComponentKind::OmegaInt => None,
        }
    }

    /// Divisible by `p` as a group.
    pub fn p_divisible(&self, p: u64) -> bool {
        self.index_mod(p) == Some(1)
    }

    pub fn divisible(&self) -> bool {
        matches!(self, ComponentKind::Rat)
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Int => write!(f, "Z"),
            ComponentKind::IntLoc(m) => write!(f, "Zloc({m})"),
            ComponentKind::Rat => write!(f, "Q"),
            ComponentKind::Quad(d) => write!(f, "Quad({d})"),
            ComponentKind::OmegaInt => write!(f, "Zomega"),
        }
    }
}

/// A finite lexicographic product `C_1 × ... × C_n`, first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    components: Vec<ComponentKind>,
}

/// `Δ_k`: elements whose first `k` coordinates vanish. When component `k`
/// is `Zomega`, `omega_start` further restricts its support to `[omega_start, ω)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConvexSubgroup {
    pub tail: usize,
    pub omega_start: u64,
}

impl ConvexSubgroup {
    pub fn tail(k: usize) -> Self {
        ConvexSubgroup { tail: k, omega_start: 0 }
    }
}

impl fmt::Display for ConvexSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.omega_start == 0 {
            write!(f, "Delta_{}", self.tail)
        } else {
            write!(f, "Delta_{}[{}..]", self.tail, self.omega_start)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexChain {
    pub members: Vec<ConvexSubgroup>,
    /// Set when an omega component was cut off at the requested depth.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDescriptor {
    pub source: GroupDescriptor,
    pub tail_index: usize,
    pub discrete: bool,
    pub min_positive: Option<GroupElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Index {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// One class of `S_p`: the value of `a ↦ H_{a,p}` and a representative `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpClass {
    pub subgroup: Option<ConvexSubgroup>,
    pub representative: GroupElement,
}

pub const DEFAULT_CHAIN_DEPTH: u64 = 8;

impl GroupDescriptor {
    pub fn new(components: Vec<ComponentKind>) -> Result<Self, OagError> {
        if components.is_empty() {
            return Err(OagError::Empty);
        }
        for (i, c) in components.iter().enumerate() {
            match c {
                ComponentKind::OmegaInt if i + 1 != components.len() => return Err(OagError::OmegaNotLast),
                ComponentKind::Quad(d) if *d < 2 || is_perfect_square(&Int::from(*d)) => {
                    return Err(OagError::SquareQuad(*d))
                }
                ComponentKind::IntLoc(m) if *m < 2 => return Err(OagError::BadLocalization(*m)),
                _ => {}
            }
        }
        Ok(GroupDescriptor { components })
    }

    pub fn parse(text: &str) -> Result<Self, OagError> {
        super::parse::parse_group(text)
    }

    pub fn components(&self) -> &[ComponentKind] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ComponentKind {
        &self.components[i]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn has_omega(&self) -> bool {
        self.components.last() == Some(&ComponentKind::OmegaInt)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::from_coords(self.components.iter().map(Coord::zero_for).collect())
    }

    /// The element with a unit in coordinate `i` and zeros elsewhere.
    pub fn unit(&self, i: usize) -> GroupElement {
        self.zero().with_coord(i, Coord::unit_for(&self.components[i]))
    }

    pub fn check(&self, e: &GroupElement) -> Result<(), OagError> {
        if e.len() != self.len() {
            return Err(OagError::ShapeMismatch(format!("{} coordinates for {} components", e.len(), self.len())));
        }
        for (c, k) in e.coords().iter().zip(&self.components) {
            if !c.fits(k) {
                return Err(OagError::ShapeMismatch(format!("coordinate {c} does not belong to {k}")));
            }
        }
        Ok(())
    }

    pub fn element(&self, text: &str) -> Result<GroupElement, OagError> {
        super::parse::parse_element(text, self)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, OagError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.add(b))
    }

    pub fn cmp(&self, a: &GroupElement, b: &GroupElement) -> Result<Ordering, OagError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.cmp(b))
    }

    /// `a ∈ nΓ`, decided coordinatewise.
    pub fn in_multiple(&self, a: &GroupElement, n: &Int) -> bool {
        a.coords().iter().zip(&self.components).all(|(c, k)| c.in_multiple(k, n))
    }

    /// `a ∈ Δ_k + nΓ`: the first `k` coordinates lie in `n C_i`.
    pub fn in_tail_plus_multiple(&self, a: &GroupElement, k: usize, n: &Int) -> bool {
        a.coords().iter().zip(&self.components).take(k).all(|(c, kind)| c.in_multiple(kind, n))
    }

    pub fn contains(&self, h: &ConvexSubgroup, a: &GroupElement) -> bool {
        if !a.in_tail(h.tail) {
            return false;
        }
        match a.coords().get(h.tail) {
            Some(Coord::Omega(m)) => m.keys().all(|i| *i >= h.omega_start),
            _ => true,
        }
    }

    pub fn convex_chain(&self, depth: u64) -> ConvexChain {
        let mut members = Vec::new();
        let mut truncated = false;
        for (i, c) in self.components.iter().enumerate() {
            if *c == ComponentKind::OmegaInt {
                members.extend((0..depth.max(1)).map(|j| ConvexSubgroup { tail: i, omega_start: j }));
                truncated = true;
            } else {
                members.push(ConvexSubgroup::tail(i));
            }
        }
        members.push(ConvexSubgroup::tail(self.len()));
        ConvexChain { members, truncated }
    }

    pub fn mod_p_index(&self, p: u64) -> Result<(Index, Index), OagError> {
        if !is_prime(p) {
            return Err(OagError::NotPrime(p));
        }
        let mut index: u64 = 1;
        let mut r = 0u64;
        for c in &self.components {
            match c.index_mod(p) {
                None => return Ok((Index::Infinite, Index::Infinite)),
                Some(k) => {
                    index = index.checked_mul(k).ok_or(OagError::Overflow)?;
                    r += match k {
                        1 => 0,
                        k if k == p => 1,
                        _ => 2,
                    };
                }
            }
        }
        Ok((Index::Finite(index), Index::Finite(r)))
    }

    /// `(nonsingular, failing prime)`. Only `Zomega` has infinite index, and it fails at every prime.
    pub fn is_nonsingular(&self) -> (bool, Option<u64>) {
        if self.has_omega() {
            (false, Some(2))
        } else {
            (true, None)
        }
    }

    /// `H_{a,p}`: the largest convex subgroup `H` with `a ∉ H + pΓ`; `None` when `a ∈ pΓ`.
    pub fn h_subgroup(&self, a: &GroupElement, p: u64) -> Result<Option<ConvexSubgroup>, OagError> {
        if !is_prime(p) {
            return Err(OagError::NotPrime(p));
        }
        self.check(a)?;
        let pi = Int::from(p);
        for (i, (c, kind)) in a.coords().iter().zip(&self.components).enumerate() {
            if let Coord::Omega(m) = c {
                if let Some((j, _)) = m.iter().find(|(_, v)| !(*v % &pi).is_zero()) {
                    return Ok(Some(ConvexSubgroup { tail: i, omega_start: j + 1 }));
                }
            } else if !c.in_multiple(kind, &pi) {
                return Ok(Some(ConvexSubgroup::tail(i + 1)));
            }
        }
        Ok(None)
    }

    /// Representatives of `Γ/nΓ`, last coordinate varying fastest.
    pub fn residue_classes(&self, n: u64) -> Result<Vec<GroupElement>, OagError> {
        let count = self.class_count(n)?;
        if count > 1_000_000 {
            return Err(OagError::Unsupported(format!("{count} residue classes modulo {n}")));
        }
        let per: Vec<Vec<Coord>> = self.components.iter().map(|c| component_classes(c, n)).collect();
        let mut out = vec![Vec::new()];
        for reps in &per {
            let mut next = Vec::with_capacity(out.len() * reps.len());
            for prefix in &out {
                for r in reps {
                    let mut v: Vec<Coord> = prefix.clone();
                    v.push(r.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        Ok(out.into_iter().map(GroupElement::from_coords).collect())
    }

    /// The representative of `a + nΓ` among those listed by `residue_classes`.
    pub fn class_rep(&self, a: &GroupElement, n: &Int) -> GroupElement {
        let coords = self
            .components
            .iter()
            .zip(a.coords())
            .map(|(kind, c)| match (kind, c) {
                (ComponentKind::Int, Coord::Num(q)) => Coord::Num(Rat::from_integer(q.to_integer().mod_floor(n))),
                (ComponentKind::IntLoc(m), Coord::Num(q)) => {
                    let k = coprime_part(n, *m);
                    if k.is_one() {
                        return Coord::Num(Rat::zero());
                    }
                    // denominators are units modulo the part of n prime to m
                    let inv = q.denom().extended_gcd(&k).x;
                    Coord::Num(Rat::from_integer((q.numer() * inv).mod_floor(&k)))
                }
                (ComponentKind::Rat, _) => Coord::Num(Rat::zero()),
                (ComponentKind::Quad(_), Coord::Quad { a, b, d }) => {
                    Coord::Quad { a: a.mod_floor(n), b: b.mod_floor(n), d: *d }
                }
                (ComponentKind::OmegaInt, Coord::Omega(m)) => {
                    Coord::Omega(m.iter().map(|(i, v)| (*i, v.mod_floor(n))).filter(|(_, v)| !v.is_zero()).collect())
                }
                _ => c.clone(),
            })
            .collect();
        GroupElement::from_coords(coords)
    }

    /// `|Γ/nΓ|` for `n ≥ 1`.
    pub fn class_count(&self, n: u64) -> Result<u64, OagError> {
        if self.has_omega() {
            return Err(OagError::Unsupported("Zomega has infinitely many residue classes".into()));
        }
        let mut total: u64 = 1;
        for c in &self.components {
            let k = component_classes_count(c, n);
            total = total.checked_mul(k).ok_or(OagError::Overflow)?;
        }
        Ok(total)
    }

    /// `S_p` over a full set of `Γ/pΓ` representatives, one representative per value.
    pub fn aux_sort_sp(&self, p: u64) -> Result<Vec<SpClass>, OagError> {
        if !is_prime(p) {
            return Err(OagError::NotPrime(p));
        }
        let mut out: Vec<SpClass> = Vec::new();
        for a in self.residue_classes(p)? {
            let h = self.h_subgroup(&a, p)?;
            if !out.iter().any(|c| c.subgroup == h) {
                out.push(SpClass { subgroup: h, representative: a });
            }
        }
        out.sort_by(|x, y| match (&x.subgroup, &y.subgroup) {
            (None, None) => Ordering::Equal,
            (None, _) => Ordering::Greater,
            (_, None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(b),
        });
        Ok(out)
    }

    pub fn quotient(&self, k: usize) -> Result<QuotientDescriptor, OagError> {
        if k > self.len() {
            return Err(OagError::BadTail { k, n: self.len() });
        }
        let discrete = k > 0 && self.components[k - 1] == ComponentKind::Int;
        Ok(QuotientDescriptor {
            source: self.clone(),
            tail_index: k,
            discrete,
            min_positive: discrete.then(|| self.unit(k - 1)),
        })
    }

    /// Lift of `m` times the least positive element of `Γ/Δ_k`, zero if the quotient is dense.
    pub fn k_alpha(&self, q: &QuotientDescriptor, m: &Int) -> GroupElement {
        match &q.min_positive {
            Some(e) => e.scale(m),
            None => self.zero(),
        }
    }
}

fn component_classes_count(c: &ComponentKind, n: u64) -> u64 {
    match c {
        ComponentKind::Int => n,
        ComponentKind::IntLoc(m) => coprime_part(&Int::from(n), *m).to_u64().unwrap_or(u64::MAX),
        ComponentKind::Rat => 1,
        ComponentKind::Quad(_) => n.saturating_mul(n),
        ComponentKind::OmegaInt => u64::MAX,
    }
}

fn component_classes(c: &ComponentKind, n: u64) -> Vec<Coord> {
    let ints = |k: u64| (0..k).map(|i| Coord::Num(Rat::from_integer(Int::from(i)))).collect::<Vec<_>>();
    match c {
        ComponentKind::Int => ints(n),
        ComponentKind::IntLoc(_) => ints(component_classes_count(c, n)),
        ComponentKind::Rat => vec![Coord::Num(Rat::zero())],
        ComponentKind::Quad(d) => {
            let mut v = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    v.push(Coord::Quad { a: Int::from(a), b: Int::from(b), d: *d });
                }
            }
            v
        }
        ComponentKind::OmegaInt => vec![Coord::Omega(Default::default())],
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "lex({})", parts.join(","))
    }
}

impl QuotientDescriptor {
    pub fn k_alpha(&self, m: &Int) -> GroupElement {
        self.source.k_alpha(self, m)
    }
}

impl fmt::Display for QuotientDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/Delta_{}", self.source, self.tail_index)?;
        if self.discrete {
            write!(f, " (discrete)")
        } else {
            write!(f, " (dense)")
        }
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GroupDescriptor::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn g(s: &str) -> GroupDescriptor {
        GroupDescriptor::parse(s).unwrap()
    }

    #[test]
    fn class_reps_are_listed_classes() {
        for gs in ["lex(Z,Z)", "lex(Zloc(2))", "lex(Zloc(6),Q)", "lex(Quad(3))"] {
            let g = GroupDescriptor::parse(gs).unwrap();
            for n in 1..=6u64 {
                let reps = g.residue_classes(n).unwrap();
                let nn = Int::from(n);
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n);
                for _ in 0..50 {
                    let a = crate::oag::sample::random_element(&g, &mut rng, 30);
                    let r = g.class_rep(&a, &nn);
                    assert!(reps.contains(&r), "{gs} {n} {a} -> {r}");
                    assert!(g.in_multiple(&a.sub(&r), &nn), "{gs} {n} {a} -> {r}");
                }
            }
        }
    }

    #[test]
    fn chain_lengths() {
        assert_eq!(g("lex(Z,Z)").convex_chain(8).members.len(), 3);
        assert_eq!(g("lex(Q)").convex_chain(8).members.len(), 2);
        assert_eq!(g("lex(Z,Quad(2),Q)").convex_chain(8).members.len(), 4);
        let c = g("lex(Z,Zomega)").convex_chain(4);
        assert!(c.truncated);
        assert_eq!(c.members.len(), 6);
    }

    #[test]
    fn indices() {
        assert_eq!(g("lex(Z)").mod_p_index(3).unwrap(), (Index::Finite(3), Index::Finite(1)));
        assert_eq!(g("lex(Zloc(2))").mod_p_index(2).unwrap(), (Index::Finite(1), Index::Finite(0)));
        assert_eq!(g("lex(Quad(2))").mod_p_index(3).unwrap(), (Index::Finite(9), Index::Finite(2)));
        assert_eq!(g("lex(Z,Zomega)").is_nonsingular(), (false, Some(2)));
        assert_eq!(g("lex(Zloc(6),Quad(3))").is_nonsingular(), (true, None));
    }

    #[test]
    fn h_subgroup_examples() {
        let gg = g("lex(Z,Z)");
        let h = |s: &str| gg.h_subgroup(&gg.element(s).unwrap(), 2).unwrap();
        assert_eq!(h("(2,1)"), Some(ConvexSubgroup::tail(2)));
        assert_eq!(h("(1,0)"), Some(ConvexSubgroup::tail(1)));
        assert_eq!(h("(2,4)"), None);
    }

    #[test]
    fn sp_examples() {
        let sp = g("lex(Z,Z)").aux_sort_sp(2).unwrap();
        let hs: Vec<_> = sp.iter().map(|c| c.subgroup).collect();
        assert_eq!(hs, vec![Some(ConvexSubgroup::tail(1)), Some(ConvexSubgroup::tail(2)), None]);
        assert_eq!(g("lex(Q)").aux_sort_sp(5).unwrap().len(), 1);
        assert_eq!(g("lex(Zloc(3))").aux_sort_sp(2).unwrap().len(), 2);
    }

    #[test]
    fn quotients() {
        let gg = g("lex(Z,Z)");
        let q = gg.quotient(1).unwrap();
        assert!(q.discrete);
        assert_eq!(q.k_alpha(&Int::from(3)), GroupElement::from_ints(&[3, 0]));
        let gq = g("lex(Z,Q)");
        let q2 = gq.quotient(2).unwrap();
        assert!(!q2.discrete);
        assert!(q2.k_alpha(&Int::from(5)).is_zero());
        assert!(!g("lex(Quad(2))").quotient(1).unwrap().discrete);
    }

    #[test]
    fn invariants_rejected() {
        assert_eq!(GroupDescriptor::parse("lex(Zomega,Z)"), Err(OagError::OmegaNotLast));
        assert_eq!(GroupDescriptor::parse("lex(Quad(4))"), Err(OagError::SquareQuad(4)));
        assert!(GroupDescriptor::parse("lex()").is_err());
    }
}
