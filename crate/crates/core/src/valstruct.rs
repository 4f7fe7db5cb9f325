//! Symbolic descriptors of `K = k((t^Γ))`: the coarsenings of the natural
//! valuation, closure properties read off a rule table, the canonical
//! (p-)henselian valuation among the coarsenings, and the shape of the
//! absolute Galois group of a real closed `k`.
//!
//! Closure properties of `k` are inputs (flags); nothing here proves them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::num::{is_prime, primes_up_to};
use crate::oag::{ComponentKind, ConvexSubgroup, GroupDescriptor, Index, OagError, DEFAULT_CHAIN_DEPTH};

/// Primes listed explicitly in reports.
pub const PRIME_BOUND: u64 = 13;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValStructError {
    #[error("bad descriptor: {0}")]
    Descriptor(String),
    #[error("positive characteristic {0}: the closure rules are for characteristic 0")]
    PositiveCharacteristic(u64),
    #[error("{0} is separably closed; the canonical henselian valuation is undefined")]
    SeparablyClosed(String),
    #[error("{field} is {p}-closed; the canonical {p}-henselian valuation is undefined")]
    PClosed { field: String, p: u64 },
    #[error("{0} is euclidean; the canonical 2-henselian valuation needs a Galois extension of degree 4")]
    Euclidean(String),
    #[error("coefficient field {0} may carry its own henselian valuations (residue_hens_free is false)")]
    ResidueNotHensFree(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Oag(#[from] OagError),
}

/// The coefficient field `k`, known only through flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffFlags {
    pub kind: String,
    pub characteristic: u64,
    pub alg_closed: bool,
    pub real_closed: bool,
    pub euclidean: bool,
    /// Primes `p` for which `k` is declared `p`-closed, beyond those implied by the other flags.
    pub p_closed: BTreeSet<u64>,
    /// `k` carries no nontrivial henselian valuation of its own.
    pub residue_hens_free: bool,
}

impl CoeffFlags {
    pub fn rational() -> Self {
        CoeffFlags {
            kind: "Q".into(),
            characteristic: 0,
            alg_closed: false,
            real_closed: false,
            euclidean: false,
            p_closed: BTreeSet::new(),
            residue_hens_free: true,
        }
    }

    pub fn named(kind: &str) -> Self {
        CoeffFlags { kind: kind.into(), ..Self::rational() }
    }

    pub fn with_flags(mut self, flags: &[&str]) -> Result<Self, ValStructError> {
        for f in flags {
            self.set_flag(f)?;
        }
        self.check()?;
        Ok(self)
    }

    fn set_flag(&mut self, f: &str) -> Result<(), ValStructError> {
        match f {
            "alg_closed" => self.alg_closed = true,
            "real_closed" => {
                self.real_closed = true;
                self.euclidean = true;
            }
            "euclidean" => self.euclidean = true,
            _ => {
                let p = f
                    .strip_prefix("p_closed(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|n| n.trim().parse::<u64>().ok())
                    .ok_or_else(|| ValStructError::Descriptor(format!("unknown flag '{f}'")))?;
                if !is_prime(p) {
                    return Err(ValStructError::NotPrime(p));
                }
                self.p_closed.insert(p);
            }
        }
        Ok(())
    }

    fn check(&self) -> Result<(), ValStructError> {
        if self.alg_closed && (self.real_closed || self.euclidean) {
            return Err(ValStructError::Descriptor("an algebraically closed field is not orderable".into()));
        }
        if self.characteristic != 0 && (self.real_closed || self.euclidean) {
            return Err(ValStructError::Descriptor("an ordered field has characteristic 0".into()));
        }
        Ok(())
    }

    fn is_euclidean(&self) -> bool {
        self.euclidean || self.real_closed
    }

    /// A real closed field has no extensions of odd degree.
    fn is_p_closed(&self, p: u64) -> bool {
        self.alg_closed || self.p_closed.contains(&p) || (self.real_closed && p != 2)
    }

    /// The flags as written in a descriptor, implied ones included.
    pub fn flag_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.alg_closed {
            out.push("alg_closed".to_string());
        }
        if self.real_closed {
            out.push("real_closed".to_string());
        }
        if self.is_euclidean() {
            out.push("euclidean".to_string());
        }
        out.extend(self.p_closed.iter().map(|p| format!("p_closed({p})")));
        out
    }
}

impl fmt::Display for CoeffFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

/// `k((t^Γ))` with its natural valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedFieldDescriptor {
    pub coeff: CoeffFlags,
    pub group: GroupDescriptor,
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    kind: String,
    #[serde(default)]
    flags: Vec<String>,
    #[serde(default)]
    residue_hens_free: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct DescriptorJson {
    coeff: CoeffJson,
    group: String,
}

impl ValuedFieldDescriptor {
    pub fn new(coeff: CoeffFlags, group: GroupDescriptor) -> Self {
        ValuedFieldDescriptor { coeff, group }
    }

    /// `{"coeff": {"kind": "R", "flags": ["real_closed"]}, "group": "lex(Z)"}`.
    ///
    /// Kinds `Q`, `Qsqrt(d)` and `Fp(p)` set the characteristic; any other name
    /// is an opaque characteristic-0 field described by its flags.
    pub fn from_json(text: &str) -> Result<Self, ValStructError> {
        let d: DescriptorJson = serde_json::from_str(text).map_err(|e| ValStructError::Descriptor(e.to_string()))?;
        Self::build(d)
    }

    /// `R((t^lex(Z)))` with the coefficient flags given separately.
    pub fn parse(text: &str, flags: &[&str]) -> Result<Self, ValStructError> {
        let bad = || ValStructError::Descriptor(format!("expected k((t^GROUP)), got '{text}'"));
        let text = text.trim();
        let (kind, rest) = text.split_once("((t^").ok_or_else(bad)?;
        let group = rest.strip_suffix("))").ok_or_else(bad)?;
        Self::build(DescriptorJson {
            coeff: CoeffJson {
                kind: kind.trim().to_string(),
                flags: flags.iter().map(|f| f.to_string()).collect(),
                residue_hens_free: None,
            },
            group: group.to_string(),
        })
    }

    fn build(d: DescriptorJson) -> Result<Self, ValStructError> {
        let mut coeff = CoeffFlags::named(&d.coeff.kind);
        if let Some(p) = d.coeff.kind.strip_prefix("Fp(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = p.parse().map_err(|_| ValStructError::Descriptor(format!("bad kind {}", d.coeff.kind)))?;
            if !is_prime(p) {
                return Err(ValStructError::NotPrime(p));
            }
            coeff.characteristic = p;
        }
        for f in &d.coeff.flags {
            coeff.set_flag(f)?;
        }
        if let Some(b) = d.coeff.residue_hens_free {
            coeff.residue_hens_free = b;
        }
        coeff.check()?;
        Ok(ValuedFieldDescriptor { coeff, group: GroupDescriptor::parse(&d.group)? })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let d = DescriptorJson {
            coeff: CoeffJson {
                kind: self.coeff.kind.clone(),
                flags: self.coeff.flag_names(),
                residue_hens_free: Some(self.coeff.residue_hens_free),
            },
            group: self.group.to_string(),
        };
        serde_json::to_value(d).expect("plain data")
    }
}

impl fmt::Display for ValuedFieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}((t^{}))", self.coeff, self.group)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureFlags {
    pub alg_closed: bool,
    pub real_closed: bool,
    pub euclidean: bool,
    /// Primes up to [`PRIME_BOUND`] for which the field is `p`-closed.
    pub p_closed: Vec<u64>,
}

/// The value-group components of a convex subgroup, possibly with a truncated `Zomega`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Components {
    kinds: Vec<ComponentKind>,
}

impl Components {
    fn divisible(&self) -> bool {
        self.kinds.iter().all(|c| c.divisible())
    }

    fn p_divisible(&self, p: u64) -> bool {
        self.kinds.iter().all(|c| c.p_divisible(p))
    }

    fn render(&self) -> String {
        if self.kinds.is_empty() {
            "0".to_string()
        } else {
            format!("lex({})", self.kinds.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

/// Closure flags of `k((t^Δ))` from those of `k` and the divisibility of `Δ`.
fn rule_table(k: &CoeffFlags, delta: &Components) -> ClosureFlags {
    ClosureFlags {
        alg_closed: k.alg_closed && delta.divisible(),
        real_closed: k.real_closed && delta.divisible(),
        euclidean: k.is_euclidean() && delta.p_divisible(2),
        p_closed: primes_up_to(PRIME_BOUND).into_iter().filter(|&p| k.is_p_closed(p) && delta.p_divisible(p)).collect(),
    }
}

fn char_zero(k: &CoeffFlags) -> Result<(), ValStructError> {
    match k.characteristic {
        0 => Ok(()),
        p => Err(ValStructError::PositiveCharacteristic(p)),
    }
}

/// Closure flags of `K` itself.
pub fn classify_field(k: &ValuedFieldDescriptor) -> Result<ClosureFlags, ValStructError> {
    char_zero(&k.coeff)?;
    Ok(rule_table(&k.coeff, &Components { kinds: k.group.components().to_vec() }))
}

fn p_closed_field(k: &CoeffFlags, delta: &Components, p: u64) -> bool {
    k.is_p_closed(p) && delta.p_divisible(p)
}

/// The coarsening of the natural valuation with value group `Γ/Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationDescriptor {
    pub tail_index: usize,
    /// For a `Zomega` component: the first index kept in `Δ`.
    pub omega_start: u64,
    pub value_group: String,
    pub value_rank: Option<usize>,
    pub residue_field: String,
    pub residue_rank: Option<usize>,
    pub residue_flags: ClosureFlags,
    pub henselian: bool,
    #[serde(skip)]
    delta: Vec<ComponentKind>,
}

impl ValuationDescriptor {
    pub fn is_trivial(&self) -> bool {
        self.tail_index == 0 && self.omega_start == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseningChain {
    /// Coarsest (trivial) first, finest (natural valuation) last.
    pub members: Vec<ValuationDescriptor>,
    /// A `Zomega` component was cut off after [`DEFAULT_CHAIN_DEPTH`] steps.
    pub truncated: bool,
}

fn member(k: &ValuedFieldDescriptor, h: &ConvexSubgroup) -> ValuationDescriptor {
    let comps = k.group.components();
    let n = comps.len();
    let omega = h.tail < n && comps[h.tail] == ComponentKind::OmegaInt;
    let mut quotient: Vec<ComponentKind> = comps[..h.tail].to_vec();
    let delta: Vec<ComponentKind> = comps[h.tail..].to_vec();
    if omega {
        quotient.extend((0..h.omega_start).map(|_| ComponentKind::Int));
    }
    let finite = !comps.contains(&ComponentKind::OmegaInt);
    let value_group = Components { kinds: quotient };
    let delta_c = Components { kinds: delta.clone() };
    let residue_field =
        if delta.is_empty() { k.coeff.to_string() } else { format!("{}((t^{}))", k.coeff, delta_c.render()) };
    ValuationDescriptor {
        tail_index: h.tail,
        omega_start: h.omega_start,
        value_rank: finite.then_some(value_group.kinds.len()),
        value_group: value_group.render(),
        residue_rank: finite.then_some(delta.len()),
        residue_field,
        residue_flags: rule_table(&k.coeff, &delta_c),
        henselian: true,
        delta,
    }
}

/// One valuation per convex subgroup `Δ`, from the trivial one to the natural one.
pub fn coarsening_chain(k: &ValuedFieldDescriptor) -> CoarseningChain {
    let chain = k.group.convex_chain(DEFAULT_CHAIN_DEPTH);
    let mut members: Vec<ConvexSubgroup> = chain.members;
    // Δ_0 is all of Γ: put it first even when component 0 is Zomega
    members.sort_by_key(|h| (h.tail, h.omega_start));
    members.dedup();
    CoarseningChain { members: members.iter().map(|h| member(k, h)).collect(), truncated: chain.truncated }
}

fn require_hens_free(k: &ValuedFieldDescriptor) -> Result<(), ValStructError> {
    if !k.coeff.residue_hens_free {
        return Err(ValStructError::ResidueNotHensFree(k.coeff.to_string()));
    }
    Ok(())
}

/// The coarsest nontrivial chain member whose residue field passes `good`, else the finest.
fn select(chain: &CoarseningChain, good: impl Fn(&ValuationDescriptor) -> bool) -> (usize, ValuationDescriptor) {
    let idx = chain.members.iter().position(|m| !m.is_trivial() && good(m)).unwrap_or(chain.members.len() - 1);
    (idx, chain.members[idx].clone())
}

/// `v_K`: the coarsest henselian valuation with separably closed residue field if one
/// exists, the finest henselian valuation otherwise. Chosen among the coarsenings.
pub fn canonical_henselian(k: &ValuedFieldDescriptor) -> Result<(usize, ValuationDescriptor), ValStructError> {
    let flags = classify_field(k)?;
    require_hens_free(k)?;
    if flags.alg_closed {
        return Err(ValStructError::SeparablyClosed(k.to_string()));
    }
    Ok(select(&coarsening_chain(k), |m| m.residue_flags.alg_closed))
}

/// `v_K^p`, with `p`-closed in place of separably closed.
pub fn canonical_p_henselian(
    k: &ValuedFieldDescriptor,
    p: u64,
) -> Result<(usize, ValuationDescriptor), ValStructError> {
    if !is_prime(p) {
        return Err(ValStructError::NotPrime(p));
    }
    let flags = classify_field(k)?;
    require_hens_free(k)?;
    let whole = Components { kinds: k.group.components().to_vec() };
    if p_closed_field(&k.coeff, &whole, p) {
        return Err(ValStructError::PClosed { field: k.to_string(), p });
    }
    if p == 2 && flags.euclidean {
        return Err(ValStructError::Euclidean(k.to_string()));
    }
    let chain = coarsening_chain(k);
    Ok(select(&chain, |m| p_closed_field(&k.coeff, &Components { kinds: m.delta.clone() }, p)))
}

/// `(∏_p Z_p^{r_p}) ⋊ Z/2Z` with `r_p = dim_{F_p} Γ/pΓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisShape {
    pub r_p: BTreeMap<u64, Index>,
    /// `r_p` for every prime not dividing a localisation index.
    pub generic: Index,
    pub prime_bound: u64,
    pub descriptor: String,
}

fn component_rank(c: &ComponentKind, p: u64) -> Index {
    match c.index_mod(p) {
        None => Index::Infinite,
        Some(1) => Index::Finite(0),
        Some(k) if k == p => Index::Finite(1),
        Some(_) => Index::Finite(2),
    }
}

fn add_index(a: Index, b: Index) -> Index {
    match (a, b) {
        (Index::Finite(x), Index::Finite(y)) => Index::Finite(x + y),
        _ => Index::Infinite,
    }
}

fn zp_power(p: Option<u64>, r: Index) -> Option<String> {
    let base = match p {
        Some(p) => format!("ℤ_{p}"),
        None => "ℤ_p".to_string(),
    };
    match r {
        Index::Finite(0) => None,
        Index::Finite(1) => Some(base),
        Index::Finite(k) => Some(format!("{base}^{k}")),
        Index::Infinite => Some(format!("{base}^∞")),
    }
}

/// Ranks `r_p` for `p <= prime_bound`, the rank at all other primes, and the rendered group.
pub fn galois_descriptor(g: &GroupDescriptor, prime_bound: u64) -> GaloisShape {
    let rank = |p: u64| g.components().iter().fold(Index::Finite(0), |acc, c| add_index(acc, component_rank(c, p)));
    let r_p: BTreeMap<u64, Index> = primes_up_to(prime_bound).into_iter().map(|p| (p, rank(p))).collect();
    // Z[1/m] is p-divisible only for p | m; every other kind has the same rank at all primes.
    let generic_rank = |c: &ComponentKind| match c {
        ComponentKind::IntLoc(_) => Index::Finite(1),
        other => component_rank(other, 2),
    };
    let generic = g.components().iter().fold(Index::Finite(0), |acc, c| add_index(acc, generic_rank(c)));
    let mut special: BTreeSet<u64> = BTreeSet::new();
    for c in g.components() {
        if let ComponentKind::IntLoc(m) = c {
            special.extend(crate::num::prime_factors(*m));
        }
    }
    let mut factors: Vec<String> = special.iter().filter_map(|&p| zp_power(Some(p), rank(p))).collect();
    if let Some(gen) = zp_power(None, generic) {
        if special.is_empty() {
            factors.push(gen.replace("ℤ_p", "∏_p ℤ_p"));
        } else {
            let except: Vec<String> = special.iter().map(|p| p.to_string()).collect();
            factors.push(gen.replace("ℤ_p", &format!("∏_{{p∉{{{}}}}} ℤ_p", except.join(","))));
        }
    }
    let descriptor =
        if factors.is_empty() { "ℤ/2ℤ".to_string() } else { format!("({}) ⋊ ℤ/2ℤ", factors.join(" × ")) };
    GaloisShape { r_p, generic, prime_bound, descriptor }
}
