//! Random elements for property checks and scans.

use std::collections::BTreeMap;

use rand::Rng;

use super::{ComponentKind, Coord, GroupDescriptor, GroupElement};
use crate::num::{Int, Rat};

/// Random element with numerators in `[-bound, bound]`. Localized and rational
/// components get small denominators of the allowed shape.
pub fn random_element<R: Rng>(g: &GroupDescriptor, rng: &mut R, bound: i64) -> GroupElement {
    let coords = g
        .components()
        .iter()
        .map(|k| {
            let n = rng.gen_range(-bound..=bound);
            match k {
                ComponentKind::Int => Coord::Num(Rat::from_integer(Int::from(n))),
                ComponentKind::IntLoc(m) => {
                    let e = rng.gen_range(0..3u32);
                    Coord::Num(Rat::new(Int::from(n), Int::from(*m).pow(e)))
                }
                ComponentKind::Rat => Coord::Num(Rat::new(Int::from(n), Int::from(rng.gen_range(1..=4i64)))),
                ComponentKind::Quad(d) => {
                    Coord::Quad { a: Int::from(n), b: Int::from(rng.gen_range(-bound..=bound)), d: *d }
                }
                ComponentKind::OmegaInt => {
                    let mut m = BTreeMap::new();
                    for i in 0..4u64 {
                        let v = rng.gen_range(-bound..=bound);
                        if v != 0 && rng.gen_bool(0.5) {
                            m.insert(i, Int::from(v));
                        }
                    }
                    Coord::Omega(m)
                }
            }
        })
        .collect();
    GroupElement::from_coords(coords)
}
