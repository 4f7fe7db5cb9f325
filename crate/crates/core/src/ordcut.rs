//! The cut of an ordered Hahn field `F = k((t^Γ))` at an element `α` of a
//! larger field `k((t^Γ'))` that `F` does not approximate, and the valuation
//! ring read off from it:
//!
//! ```text
//! D = {a ∈ F : a < α}
//! A = {y ∈ F, y >= 0 : y + D ⊆ D}
//! O = {a ∈ F : |a|·A ⊆ A}
//! ```
//!
//! Write `gap` for the least exponent of `α` outside `Γ` and `trunc` for the
//! terms of `α` before it. Every `b ∈ F` has `v(α - b) <= gap`, with equality
//! exactly when `b` agrees with `trunc` below `gap`. So the distances `α - d`,
//! `d ∈ D`, are the positive elements `w + c·t^gap + ...` with `v(w) < gap` or
//! `w = 0`, and a positive `y` lies below all of them iff `v(y) > gap`. This
//! holds for either sign of the coefficient at `gap`:
//!
//! ```text
//! y ∈ A  ⟺  y = 0  or  (y > 0 and v(y) > gap)
//! ```
//!
//! With `c` the coordinate where `gap` leaves `Γ`, `|a|·A ⊆ A` holds iff
//! `v(a) >= 0` or the first `c+1` coordinates of `v(a)` vanish. `O` is the
//! natural valuation ring when `c` is the last coordinate and a proper
//! coarsening of it otherwise.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::hahn::{HahnError, HahnSeries, Scalar, SeriesField, Val};
use crate::num::Rat;
use crate::oag::sample::random_element;
use crate::oag::{ComponentKind, GroupDescriptor, GroupElement};

/// Total sample count of [`valuation_report`] by default.
pub const DEFAULT_SAMPLES: usize = 200;
/// Grid exponents run over `[-GRID_RADIUS, GRID_RADIUS]` in each coordinate.
pub const GRID_RADIUS: i64 = 3;
/// Elements of `D` tested against each `y` the rule puts in `A`.
const D_SAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CutError {
    #[error("{0} is not an ordered coefficient field")]
    Unordered(String),
    #[error("alpha must be positive, got {0}")]
    NotPositive(String),
    #[error("alpha = {0} lies in F: every exponent is in the value group")]
    InField(String),
    #[error("alpha must be exact, got {0}")]
    Inexact(String),
    #[error("{0}")]
    Embedding(String),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(String),
    #[error(transparent)]
    Hahn(#[from] HahnError),
}

/// `F = k((t^Γ))` and `α ∈ k((t^Γ'))` with `Γ ⊆ Γ'` coordinatewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientPair {
    pub base: SeriesField,
    pub ext: SeriesField,
    pub alpha: HahnSeries,
}

/// `Z` and `Z[1/m]` coordinates widen to `Q`; other kinds are kept.
pub fn extension_group(g: &GroupDescriptor) -> GroupDescriptor {
    let comps = g
        .components()
        .iter()
        .map(|c| match c {
            ComponentKind::Int | ComponentKind::IntLoc(_) => ComponentKind::Rat,
            other => other.clone(),
        })
        .collect();
    GroupDescriptor::new(comps).expect("same shape as a valid group")
}

fn widens(small: &ComponentKind, big: &ComponentKind) -> bool {
    match (small, big) {
        (a, b) if a == b => true,
        (ComponentKind::Int, ComponentKind::IntLoc(_) | ComponentKind::Rat) => true,
        (ComponentKind::IntLoc(m), ComponentKind::IntLoc(n)) => crate::num::only_primes_of(&(*m).into(), *n),
        (ComponentKind::IntLoc(_), ComponentKind::Rat) => true,
        _ => false,
    }
}

impl AmbientPair {
    pub fn new(base: SeriesField, alpha: HahnSeries) -> Result<Self, CutError> {
        let ext = alpha.field().clone();
        if !base.coeff.is_ordered() {
            return Err(CutError::Unordered(base.coeff.to_string()));
        }
        if ext.coeff != base.coeff {
            return Err(CutError::Embedding(format!("coefficients {} vs {}", ext.coeff, base.coeff)));
        }
        let (g, h) = (base.group.components(), ext.group.components());
        if g.len() != h.len() || !g.iter().zip(h).all(|(a, b)| widens(a, b)) {
            return Err(CutError::Embedding(format!("{} does not embed in {}", base.group, ext.group)));
        }
        if !alpha.is_exact() {
            return Err(CutError::Inexact(alpha.to_string()));
        }
        if alpha.sign()? != Ordering::Greater {
            return Err(CutError::NotPositive(alpha.to_string()));
        }
        if alpha.terms().iter().all(|(e, _)| base.group.check(e).is_ok()) {
            return Err(CutError::InField(alpha.to_string()));
        }
        Ok(AmbientPair { base, ext, alpha })
    }

    /// Read `α` over the widened group of `base`.
    pub fn parse(base: &str, alpha: &str) -> Result<Self, CutError> {
        let base = SeriesField::parse(base)?;
        let ext = SeriesField::new(base.coeff.clone(), extension_group(&base.group));
        let alpha = HahnSeries::parse(alpha, &ext)?;
        Self::new(base, alpha)
    }

    pub fn embed(&self, x: &HahnSeries) -> Result<HahnSeries, CutError> {
        if x.field() != &self.base {
            return Err(CutError::Embedding(format!("{x} is not over {}", self.base)));
        }
        Ok(HahnSeries::new(&self.ext, x.terms().to_vec(), x.precision().cloned())?)
    }

    /// `α - x` for `x ∈ F`.
    fn distance(&self, x: &HahnSeries) -> Result<HahnSeries, CutError> {
        Ok(self.alpha.sub(&self.embed(x)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutData {
    pub gap: GroupElement,
    /// The coordinate where `gap` leaves `Γ`.
    pub gap_coordinate: usize,
    pub trunc: HahnSeries,
    pub excess_sign: Ordering,
}

pub fn gap_value(pair: &AmbientPair) -> Result<CutData, CutError> {
    let terms = pair.alpha.terms();
    let i = terms
        .iter()
        .position(|(e, _)| pair.base.group.check(e).is_err())
        .ok_or_else(|| CutError::InField(pair.alpha.to_string()))?;
    let (gap, c) = &terms[i];
    let gap_coordinate = gap
        .coords()
        .iter()
        .zip(pair.base.group.components())
        .position(|(x, k)| !x.fits(k))
        .expect("gap lies outside the group");
    let trunc = HahnSeries::new(&pair.base, terms[..i].to_vec(), None)?;
    Ok(CutData { gap: gap.clone(), gap_coordinate, trunc, excess_sign: c.sign().expect("ordered field") })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CutKind {
    D,
    A,
    O,
}

fn exact_val(x: &HahnSeries) -> Option<GroupElement> {
    match x.val() {
        Val::Exact(e) => Some(e),
        _ => None,
    }
}

/// Membership by the derived rules; `x` must be an exact element of `F`.
pub fn cut_membership(kind: CutKind, x: &HahnSeries, pair: &AmbientPair, cut: &CutData) -> Result<bool, CutError> {
    if x.field() != &pair.base || !x.is_exact() {
        return Err(CutError::Embedding(format!("{x} is not an exact element of {}", pair.base)));
    }
    Ok(match kind {
        CutKind::D => pair.distance(x)?.sign()? == Ordering::Greater,
        CutKind::A => match exact_val(x) {
            None => true,
            Some(v) => x.sign()? == Ordering::Greater && v > cut.gap,
        },
        CutKind::O => !o_excluded(x, cut),
    })
}

fn o_excluded(x: &HahnSeries, cut: &CutData) -> bool {
    match exact_val(x) {
        Some(v) => v.sign() == Ordering::Less && !v.in_tail(cut.gap_coordinate + 1),
        None => false,
    }
}

fn scalar(pair: &AmbientPair, q: &Rat) -> Scalar {
    pair.base.coeff.from_rat(q).expect("ordered fields contain Q")
}

/// Exponents of `Γ` in `[-GRID_RADIUS, GRID_RADIUS]^n`, using the first coordinates only.
fn exponent_grid(g: &GroupDescriptor) -> Vec<GroupElement> {
    let n = g.len().min(3);
    let side = (2 * GRID_RADIUS + 1) as usize;
    let mut out = Vec::new();
    for idx in 0..side.pow(n as u32) {
        let mut k = idx;
        let mut e = g.zero();
        for i in 0..n {
            let v = (k % side) as i64 - GRID_RADIUS;
            k /= side;
            e = e.add(&g.unit(i).scale_i64(v));
        }
        out.push(e);
    }
    out.sort();
    out
}

const GRID_COEFFS: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];

/// `q·t^γ` over the grid.
pub fn monomial_grid(pair: &AmbientPair) -> Vec<HahnSeries> {
    let mut out = Vec::new();
    for e in exponent_grid(&pair.base.group) {
        for (n, d) in GRID_COEFFS {
            out.push(HahnSeries::monomial(&pair.base, scalar(pair, &Rat::new(n.into(), d.into())), e.clone()));
        }
    }
    out
}

fn random_two_term(pair: &AmbientPair, rng: &mut ChaCha8Rng) -> HahnSeries {
    let mut terms = Vec::new();
    for _ in 0..2 {
        let e = random_element(&pair.base.group, rng, GRID_RADIUS);
        let (n, d) = (rng.gen_range(-4..=4i64), rng.gen_range(1..=3i64));
        terms.push((e, scalar(pair, &Rat::new(n.into(), d.into()))));
    }
    HahnSeries::new(&pair.base, terms, None).expect("generated over the base group")
}

/// `0`, the monomial grid, then random two-term series up to `total` elements.
pub fn sample_set(pair: &AmbientPair, total: usize, seed: u64) -> Vec<HahnSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![HahnSeries::zero(&pair.base)];
    out.extend(monomial_grid(pair));
    while out.len() < total {
        out.push(random_two_term(pair, &mut rng));
    }
    out.truncate(total.max(1));
    out
}

/// Candidates `b` for witnesses: the grid, `trunc` plus the grid, and `trunc - y/2^k`.
fn candidates(pair: &AmbientPair, cut: &CutData, y: Option<&HahnSeries>) -> Result<Vec<HahnSeries>, CutError> {
    let grid = monomial_grid(pair);
    let mut out = vec![cut.trunc.clone()];
    for m in &grid {
        out.push(m.clone());
        out.push(cut.trunc.add(m)?);
    }
    if let Some(y) = y {
        for k in 1..=3 {
            out.push(cut.trunc.sub(&y.scale(&scalar(pair, &Rat::new(1.into(), (1i64 << k).into()))))?);
        }
    }
    Ok(out)
}

/// Elements of `D` close to `α`: `trunc` perturbed by grid monomials.
fn d_near_cut(pair: &AmbientPair, cut: &CutData) -> Result<Vec<HahnSeries>, CutError> {
    let mut ds = Vec::new();
    for b in candidates(pair, cut, None)? {
        if cut_membership(CutKind::D, &b, pair, cut)? {
            let dist = exact_val(&pair.distance(&b)?).expect("alpha is not in F");
            ds.push((dist, b));
        }
    }
    // closest (largest v(α - d)) first
    ds.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(ds.into_iter().take(D_SAMPLES).map(|(_, b)| b).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsVerdict {
    pub epsilon: String,
    pub gap_witness: bool,
    /// `b` with `|α - b| < ε`, when one exists.
    pub approximant: Option<String>,
    pub candidates_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    /// `GAP_WITNESS` or `DENSE_EVIDENCE`.
    pub verdict: String,
    pub witness: Option<String>,
    pub per_epsilon: Vec<EpsVerdict>,
    pub violations: Vec<String>,
}

/// For each `ε > 0`, either an approximant within `ε` or the gap argument that none exists,
/// the latter confirmed by failing every candidate.
pub fn density_check(pair: &AmbientPair, eps: &[HahnSeries]) -> Result<DensityReport, CutError> {
    let cut = gap_value(pair)?;
    let mut rep =
        DensityReport { verdict: "DENSE_EVIDENCE".into(), witness: None, per_epsilon: Vec::new(), violations: vec![] };
    for e in eps {
        if !e.is_exact() || e.sign()? != Ordering::Greater {
            return Err(CutError::NonPositiveEpsilon(e.to_string()));
        }
        let ee = pair.embed(e)?;
        let within =
            |b: &HahnSeries| -> Result<bool, CutError> { Ok(pair.distance(b)?.abs()?.compare(&ee)? == Ordering::Less) };
        let v = exact_val(e).expect("positive");
        let gap_witness = v > cut.gap;
        let mut verdict = EpsVerdict { epsilon: e.to_string(), gap_witness, approximant: None, candidates_checked: 0 };
        if gap_witness {
            for b in candidates(pair, &cut, None)? {
                verdict.candidates_checked += 1;
                if within(&b)? {
                    rep.violations.push(format!("{b} is within {e} of alpha despite v(eps) > gap"));
                }
            }
            if rep.witness.is_none() {
                rep.verdict = "GAP_WITNESS".into();
                rep.witness = Some(e.to_string());
            }
        } else {
            verdict.candidates_checked = 1;
            if within(&cut.trunc)? {
                verdict.approximant = Some(cut.trunc.to_string());
            } else {
                rep.violations.push(format!("trunc = {} is not within {e} of alpha", cut.trunc));
            }
        }
        rep.per_epsilon.push(verdict);
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub alpha: String,
    pub gap: String,
    pub trunc: String,
    pub excess_sign: String,
    #[serde(rename = "A_rule")]
    pub a_rule: String,
    #[serde(rename = "O_rule")]
    pub o_rule: String,
    pub samples: usize,
    pub pairs_checked: usize,
    pub a_definition_checks: usize,
    pub o_definition_checks: usize,
    /// The derived `O` agreed with `{v >= 0}` on every sample.
    #[serde(rename = "O_equals_natural_ring")]
    pub o_equals_natural_ring: bool,
    pub value_group: String,
    pub residue_field: String,
    pub violations: Vec<String>,
}

impl CutReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples that pairwise checks run over.
const PAIR_SAMPLES: usize = 60;

/// Check the derived rules against the definitions and the semigroup, convexity
/// and ring properties on `total` sample elements.
pub fn valuation_report(pair: &AmbientPair, total: usize, seed: u64) -> Result<CutReport, CutError> {
    let cut = gap_value(pair)?;
    let samples = sample_set(pair, total, seed);
    let n = pair.base.group.len();
    let c = cut.gap_coordinate;
    let mut rep = CutReport {
        alpha: pair.alpha.to_string(),
        gap: cut.gap.to_string(),
        trunc: cut.trunc.to_string(),
        excess_sign: if cut.excess_sign == Ordering::Greater { "+" } else { "-" }.into(),
        a_rule: "y = 0 or (y > 0 and v(y) > gap)".into(),
        o_rule: if c + 1 == n { "v(a) >= 0".into() } else { format!("v(a) >= 0 or v(a) in Delta_{}", c + 1) },
        samples: samples.len(),
        o_equals_natural_ring: true,
        value_group: quotient_name(&pair.base.group, c + 1),
        residue_field: residue_name(pair, c + 1),
        ..Default::default()
    };
    let in_a: Vec<bool> =
        samples.iter().map(|x| cut_membership(CutKind::A, x, pair, &cut)).collect::<Result<_, _>>()?;
    let in_o: Vec<bool> =
        samples.iter().map(|x| cut_membership(CutKind::O, x, pair, &cut)).collect::<Result<_, _>>()?;

    // A against its definition
    let ds = d_near_cut(pair, &cut)?;
    if ds.is_empty() {
        rep.violations.push("no element of D near the cut".into());
    }
    for (x, &a) in samples.iter().zip(&in_a) {
        let positive = x.sign()? != Ordering::Less;
        if a {
            for d in &ds {
                rep.a_definition_checks += 1;
                if !cut_membership(CutKind::D, &x.add(d)?, pair, &cut)? {
                    rep.violations.push(format!("A: {x} + {d} leaves D"));
                }
            }
        } else if positive {
            rep.a_definition_checks += 1;
            let mut found = false;
            for b in candidates(pair, &cut, Some(x))? {
                if cut_membership(CutKind::D, &b, pair, &cut)? && !cut_membership(CutKind::D, &b.add(x)?, pair, &cut)? {
                    found = true;
                    break;
                }
            }
            if !found {
                rep.violations.push(format!("A: no b in [alpha - {x}, alpha) found"));
            }
        }
    }

    // O against |a|·A ⊆ A: positive elements of A from the grid
    let grid_a: Vec<&HahnSeries> =
        samples.iter().zip(&in_a).filter(|(x, a)| **a && !x.is_zero()).map(|(x, _)| x).collect();
    for (x, &o) in samples.iter().zip(&in_o) {
        let ax = x.abs()?;
        rep.o_definition_checks += 1;
        let mut violated = None;
        for y in &grid_a {
            if !cut_membership(CutKind::A, &ax.mul(y)?, pair, &cut)? {
                violated = Some((*y).clone());
                break;
            }
        }
        match (o, violated) {
            (true, Some(y)) => rep.violations.push(format!("O: |{x}|·{y} leaves A")),
            (false, None) => rep.violations.push(format!("O: no y in A with |{x}|·y outside A")),
            _ => {}
        }
        let natural = exact_val(x).is_none_or(|v| v.sign() != Ordering::Less);
        if natural != o {
            rep.o_equals_natural_ring = false;
        }
    }
    if rep.o_equals_natural_ring != (c + 1 == n) && samples.len() >= PAIR_SAMPLES {
        rep.violations.push(format!(
            "O agreed with the natural ring: {}, expected {}",
            rep.o_equals_natural_ring,
            c + 1 == n
        ));
    }

    // pairwise structure on a prefix
    let k = samples.len().min(PAIR_SAMPLES);
    for i in 0..k {
        for j in 0..k {
            rep.pairs_checked += 1;
            let (x, y) = (&samples[i], &samples[j]);
            if in_a[i] && in_a[j] && !cut_membership(CutKind::A, &x.add(y)?, pair, &cut)? {
                rep.violations.push(format!("A not closed under +: {x}, {y}"));
            }
            // convexity: 0 <= x <= y ∈ A
            if in_a[j] && x.sign()? != Ordering::Less && x.compare(y)? != Ordering::Greater && !in_a[i] {
                rep.violations.push(format!("A not convex: 0 <= {x} <= {y}"));
            }
            if in_o[i] && in_o[j] {
                for (what, z) in [("+", x.add(y)?), ("*", x.mul(y)?)] {
                    if !cut_membership(CutKind::O, &z, pair, &cut)? {
                        rep.violations.push(format!("O not closed under {what}: {x}, {y}"));
                    }
                }
            }
            if in_o[j] && x.abs()?.compare(&y.abs()?)? != Ordering::Greater && !in_o[i] {
                rep.violations.push(format!("O not convex: |{x}| <= |{y}|"));
            }
        }
    }
    let one = HahnSeries::one(&pair.base);
    if !cut_membership(CutKind::O, &one, pair, &cut)? {
        rep.violations.push("1 is not in O".into());
    }
    if cut_membership(CutKind::A, &one, pair, &cut)? {
        rep.violations.push("A is not proper: 1 is in A".into());
    }
    if !in_a.iter().zip(&samples).any(|(a, x)| *a && !x.is_zero()) {
        rep.violations.push("A is trivial on the samples".into());
    }
    if in_o.iter().all(|o| *o) {
        rep.violations.push("O contains every sample".into());
    }
    Ok(rep)
}

fn quotient_name(g: &GroupDescriptor, k: usize) -> String {
    let comps: Vec<String> = g.components()[..k].iter().map(|c| c.to_string()).collect();
    format!("lex({})", comps.join(","))
}

fn residue_name(pair: &AmbientPair, k: usize) -> String {
    let rest = &pair.base.group.components()[k..];
    if rest.is_empty() {
        pair.base.coeff.to_string()
    } else {
        let comps: Vec<String> = rest.iter().map(|c| c.to_string()).collect();
        format!("{}((t^lex({})))", pair.base.coeff, comps.join(","))
    }
}
