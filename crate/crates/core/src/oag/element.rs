use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::group::ComponentKind;
use crate::num::{fmt_rat, only_primes_of, rat_int, sign_quadratic, Int, Rat};

/// One coordinate of a lexicographic-product element.
///
/// `Num` carries the `Z`, `Z[1/m]` and `Q` components; the denominator
/// constraints are enforced by [`GroupDescriptor::check`](super::GroupDescriptor::check).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Num(Rat),
    /// `a + b*sqrt(d)`
    Quad {
        a: Int,
        b: Int,
        d: u64,
    },
    /// Finitely supported sequence; zero values are never stored.
    Omega(BTreeMap<u64, Int>),
}

impl Coord {
    pub fn zero_for(kind: &ComponentKind) -> Coord {
        match kind {
            ComponentKind::Int | ComponentKind::IntLoc(_) | ComponentKind::Rat => Coord::Num(Rat::zero()),
            ComponentKind::Quad(d) => Coord::Quad { a: Int::zero(), b: Int::zero(), d: *d },
            ComponentKind::OmegaInt => Coord::Omega(BTreeMap::new()),
        }
    }

    pub fn unit_for(kind: &ComponentKind) -> Coord {
        match kind {
            ComponentKind::Int | ComponentKind::IntLoc(_) | ComponentKind::Rat => Coord::Num(Rat::one()),
            ComponentKind::Quad(d) => Coord::Quad { a: Int::one(), b: Int::zero(), d: *d },
            ComponentKind::OmegaInt => Coord::Omega(BTreeMap::from([(0, Int::one())])),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coord::Num(q) => q.is_zero(),
            Coord::Quad { a, b, .. } => a.is_zero() && b.is_zero(),
            Coord::Omega(m) => m.is_empty(),
        }
    }

    pub fn add(&self, other: &Coord) -> Coord {
        match (self, other) {
            (Coord::Num(x), Coord::Num(y)) => Coord::Num(x + y),
            (Coord::Quad { a, b, d }, Coord::Quad { a: a2, b: b2, d: d2 }) => {
                assert_eq!(d, d2, "quadratic components with different radicands");
                Coord::Quad { a: a + a2, b: b + b2, d: *d }
            }
            (Coord::Omega(x), Coord::Omega(y)) => {
                let mut out = x.clone();
                for (k, v) in y {
                    let e = out.entry(*k).or_insert_with(Int::zero);
                    *e += v;
                    if e.is_zero() {
                        out.remove(k);
                    }
                }
                Coord::Omega(out)
            }
            _ => panic!("coordinate shape mismatch: {self:?} vs {other:?}"),
        }
    }

    pub fn neg(&self) -> Coord {
        self.scale(&-Int::one())
    }

    pub fn sub(&self, other: &Coord) -> Coord {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Int) -> Coord {
        if k.is_zero() {
            return match self {
                Coord::Num(_) => Coord::Num(Rat::zero()),
                Coord::Quad { d, .. } => Coord::Quad { a: Int::zero(), b: Int::zero(), d: *d },
                Coord::Omega(_) => Coord::Omega(BTreeMap::new()),
            };
        }
        match self {
            Coord::Num(q) => Coord::Num(q * rat_int(k)),
            Coord::Quad { a, b, d } => Coord::Quad { a: a * k, b: b * k, d: *d },
            Coord::Omega(m) => Coord::Omega(m.iter().map(|(i, v)| (*i, v * k)).collect()),
        }
    }

    /// Sign as an element of its (ordered) component.
    pub fn sign(&self) -> Ordering {
        match self {
            Coord::Num(q) => q.cmp(&Rat::zero()),
            Coord::Quad { a, b, d } => sign_quadratic(&rat_int(a), &rat_int(b), &Int::from(*d)),
            Coord::Omega(m) => m.values().next().map(|v| v.cmp(&Int::zero())).unwrap_or(Ordering::Equal),
        }
    }

    /// Whether this coordinate lies in `n * C` for the component `C` of kind `kind`.
    pub fn in_multiple(&self, kind: &ComponentKind, n: &Int) -> bool {
        let n = n.abs();
        if n.is_zero() {
            return self.is_zero();
        }
        match (kind, self) {
            (ComponentKind::Int, Coord::Num(q)) => q.is_integer() && (q.numer() % &n).is_zero(),
            (ComponentKind::IntLoc(m), Coord::Num(q)) => {
                let r = q / rat_int(&n);
                only_primes_of(r.denom(), *m)
            }
            (ComponentKind::Rat, Coord::Num(_)) => true,
            (ComponentKind::Quad(_), Coord::Quad { a, b, .. }) => (a % &n).is_zero() && (b % &n).is_zero(),
            (ComponentKind::OmegaInt, Coord::Omega(m)) => m.values().all(|v| (v % &n).is_zero()),
            _ => false,
        }
    }

    /// `self / n`, assuming `self ∈ n·C`.
    pub fn div_exact(&self, n: &Int) -> Coord {
        match self {
            Coord::Num(q) => Coord::Num(q / rat_int(n)),
            Coord::Quad { a, b, d } => Coord::Quad { a: a / n, b: b / n, d: *d },
            Coord::Omega(m) => Coord::Omega(m.iter().map(|(k, v)| (*k, v / n)).collect()),
        }
    }

    pub fn fits(&self, kind: &ComponentKind) -> bool {
        match (kind, self) {
            (ComponentKind::Int, Coord::Num(q)) => q.is_integer(),
            (ComponentKind::IntLoc(m), Coord::Num(q)) => only_primes_of(q.denom(), *m),
            (ComponentKind::Rat, Coord::Num(_)) => true,
            (ComponentKind::Quad(d), Coord::Quad { d: d2, .. }) => d == d2,
            (ComponentKind::OmegaInt, Coord::Omega(m)) => m.values().all(|v| !v.is_zero()),
            _ => false,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Coord::Num(_) => 0,
            Coord::Quad { .. } => 1,
            Coord::Omega(_) => 2,
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Coord::Num(x), Coord::Num(y)) => x.cmp(y),
            (Coord::Quad { d, .. }, Coord::Quad { d: d2, .. }) if d == d2 => self.sub(other).sign(),
            (Coord::Omega(_), Coord::Omega(_)) => self.sub(other).sign(),
            // only reachable for mismatched shapes; keeps the order total
            (Coord::Quad { d, .. }, Coord::Quad { d: d2, .. }) => d.cmp(d2),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Num(q) => write!(f, "{}", fmt_rat(q)),
            Coord::Quad { a, b, d } => {
                if b.is_zero() {
                    write!(f, "{a}")
                } else if b.is_negative() {
                    write!(f, "{a}-{}*sqrt({d})", -b)
                } else {
                    write!(f, "{a}+{b}*sqrt({d})")
                }
            }
            Coord::Omega(m) => {
                let parts: Vec<String> = m.iter().map(|(i, v)| format!("{i}:{v}")).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// Element of a finite lexicographic product.
///
/// The element does not carry its descriptor; ordering is lexicographic on
/// coordinates, which only makes sense between elements of the same group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<Coord>,
}

impl GroupElement {
    pub fn from_coords(coords: Vec<Coord>) -> Self {
        GroupElement { coords }
    }

    /// Shorthand for groups whose components are all of `Num` shape.
    pub fn from_ints(values: &[i64]) -> Self {
        GroupElement { coords: values.iter().map(|v| Coord::Num(Rat::from_integer(Int::from(*v)))).collect() }
    }

    pub fn from_rats(values: &[Rat]) -> Self {
        GroupElement { coords: values.iter().cloned().map(Coord::Num).collect() }
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Coord {
        &self.coords[i]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Coord::is_zero)
    }

    pub fn same_shape(&self, other: &GroupElement) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| match (a, b) {
                (Coord::Num(_), Coord::Num(_)) => true,
                (Coord::Quad { d, .. }, Coord::Quad { d: d2, .. }) => d == d2,
                (Coord::Omega(_), Coord::Omega(_)) => true,
                _ => false,
            })
    }

    /// Componentwise sum. Panics on mismatched shapes; use
    /// [`GroupDescriptor::add`](super::GroupDescriptor::add) for a checked version.
    pub fn add(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.coords.len(), other.coords.len(), "group element length mismatch");
        GroupElement { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &GroupElement) -> GroupElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement { coords: self.coords.iter().map(Coord::neg).collect() }
    }

    pub fn scale(&self, k: &Int) -> GroupElement {
        GroupElement { coords: self.coords.iter().map(|c| c.scale(k)).collect() }
    }

    /// `self / n`, assuming `self ∈ nΓ`.
    pub fn div_exact(&self, n: &Int) -> GroupElement {
        GroupElement { coords: self.coords.iter().map(|c| c.div_exact(n)).collect() }
    }

    pub fn scale_i64(&self, k: i64) -> GroupElement {
        self.scale(&Int::from(k))
    }

    pub fn sign(&self) -> Ordering {
        self.coords.iter().map(Coord::sign).find(|s| *s != Ordering::Equal).unwrap_or(Ordering::Equal)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    /// First `k` coordinates vanish, i.e. membership in the tail subgroup `Δ_k`.
    pub fn in_tail(&self, k: usize) -> bool {
        self.coords.iter().take(k).all(Coord::is_zero)
    }

    /// Index of the first nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.coords.iter().position(|c| !c.is_zero())
    }

    pub fn with_coord(&self, i: usize, c: Coord) -> GroupElement {
        let mut coords = self.coords.clone();
        coords[i] = c;
        GroupElement { coords }
    }

    pub fn max<'a>(&'a self, other: &'a GroupElement) -> &'a GroupElement {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min<'a>(&'a self, other: &'a GroupElement) -> &'a GroupElement {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let [Coord::Num(q)] = self.coords.as_slice() {
            return write!(f, "{}", fmt_rat(q));
        }
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn lex_order_first_coordinate_dominates() {
        let a = GroupElement::from_ints(&[0, 7]);
        let b = GroupElement::from_ints(&[1, -100]);
        assert_eq!(a.cmp(&b), Ordering::Less);
    }

    #[test]
    fn omega_order_by_least_index() {
        let a = Coord::Omega(BTreeMap::from([(3, Int::from(-5))]));
        let b = Coord::Omega(BTreeMap::from([(1, Int::from(1))]));
        // b - a has leading index 1 with value 1 > 0
        assert_eq!(a.cmp(&b), Ordering::Less);
        assert_eq!(a.sign(), Ordering::Less);
    }

    #[test]
    fn zlocal_divisibility() {
        let k = ComponentKind::IntLoc(3);
        // 1/3 - 1 = -2/3 lies in 3 Z[1/3]
        let c = Coord::Num(rat(-2, 3));
        assert!(c.in_multiple(&k, &Int::from(3)));
        assert!(c.in_multiple(&k, &Int::from(2)));
        assert!(!c.in_multiple(&k, &Int::from(5)));
        assert!(Coord::Num(rat(1, 9)).in_multiple(&k, &Int::from(3)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GroupElement::from_ints(&[1, -3]).to_string(), "(1,-3)");
        assert_eq!(GroupElement::from_ints(&[4]).to_string(), "4");
        assert_eq!(GroupElement::from_ints(&[0, 0]).to_string(), "0");
        let q = GroupElement::from_coords(vec![Coord::Quad { a: Int::from(1), b: Int::from(-1), d: 2 }]);
        assert_eq!(q.to_string(), "(1-1*sqrt(2))");
    }
}
