//! Random formula generation shared by the logic tests and the acceptance run.
#![allow(dead_code)]

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valkit_core::logic::{Assignment, Atom, Formula, Term};
use valkit_core::num::Int;
use valkit_core::oag::sample::random_element;
use valkit_core::{GroupDescriptor, GroupElement};

pub struct Gen<'a> {
    pub g: &'a GroupDescriptor,
    pub rng: ChaCha8Rng,
    pub bound: i64,
    pub moduli: Vec<i64>,
}

impl<'a> Gen<'a> {
    pub fn new(g: &'a GroupDescriptor, seed: u64) -> Self {
        Gen { g, rng: ChaCha8Rng::seed_from_u64(seed), bound: 3, moduli: vec![2, 3] }
    }

    pub fn element(&mut self) -> GroupElement {
        random_element(self.g, &mut self.rng, self.bound)
    }

    pub fn term(&mut self, vars: &[&str]) -> Term {
        let mut t = Term::zero(self.g);
        for v in vars {
            if self.rng.gen_bool(0.6) {
                let k = self.rng.gen_range(-3i64..=3);
                t = t.add(&Term::linear(v, Int::from(k), self.g));
            }
        }
        if self.rng.gen_bool(0.5) {
            t = t.add_const(&self.element());
        }
        t
    }

    pub fn atom(&mut self, vars: &[&str]) -> Formula {
        let a = match self.rng.gen_range(0..10) {
            0..=2 => Atom::Le(self.term(vars), self.term(vars)),
            3..=5 => Atom::Lt(self.term(vars), self.term(vars)),
            6 | 7 => Atom::Eq(self.term(vars), self.term(vars)),
            8 => {
                let n = self.moduli[self.rng.gen_range(0..self.moduli.len())];
                Atom::Cong { t: self.term(vars), n: Int::from(n), rep: self.element() }
            }
            _ => Atom::InH { t: self.term(vars), k: self.rng.gen_range(0..=self.g.len()) },
        };
        Formula::Atom(a)
    }

    pub fn qf(&mut self, vars: &[&str], depth: u32) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.atom(vars);
        }
        match self.rng.gen_range(0..5) {
            0 => Formula::not(self.qf(vars, depth - 1)),
            1 | 2 => {
                let n = self.rng.gen_range(2..=3);
                Formula::And((0..n).map(|_| self.qf(vars, depth - 1)).collect())
            }
            _ => {
                let n = self.rng.gen_range(2..=3);
                Formula::Or((0..n).map(|_| self.qf(vars, depth - 1)).collect())
            }
        }
    }

    /// Prenex formula with `quantifiers` bound variables `x0, x1, …` over `free`.
    pub fn prenex(&mut self, free: &[&str], quantifiers: usize, depth: u32) -> Formula {
        let bound: Vec<String> = (0..quantifiers).map(|i| format!("x{i}")).collect();
        let mut vars: Vec<&str> = free.to_vec();
        vars.extend(bound.iter().map(|s| s.as_str()));
        let mut f = self.qf(&vars, depth);
        for x in bound.iter().rev() {
            f = if self.rng.gen_bool(0.5) { Formula::exists(x, f) } else { Formula::forall(x, f) };
        }
        f
    }

    pub fn assignment(&mut self, vars: &[&str]) -> Assignment {
        vars.iter().map(|v| (v.to_string(), self.element())).collect()
    }
}

/// Largest absolute value among the integer coordinates of `e`.
pub fn int_norm(e: &GroupElement) -> i64 {
    e.coords()
        .iter()
        .map(|c| match c {
            valkit_core::oag::Coord::Num(r) => r.abs().ceil().to_integer().to_i64().unwrap_or(i64::MAX),
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}

pub fn int_elem(v: i64) -> GroupElement {
    GroupElement::from_ints(&[v])
}

pub struct CorpusEntry {
    pub truth: bool,
    pub boxed: bool,
    pub sentence: String,
    pub argument: String,
}

pub fn lex_zz_corpus() -> Vec<CorpusEntry> {
    include_str!("../data/lex_zz_sentences.txt")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split(" | ").collect();
            assert_eq!(parts.len(), 4, "bad corpus line {l}");
            CorpusEntry {
                truth: parts[0] == "true",
                boxed: parts[1] == "box",
                sentence: parts[2].to_string(),
                argument: parts[3].to_string(),
            }
        })
        .collect()
}

/// Truth with every quantifier restricted to `box_elems`.
pub fn box_eval(f: &Formula, sigma: &mut Assignment, g: &GroupDescriptor, box_elems: &[GroupElement]) -> bool {
    match f {
        Formula::Exists(x, b) | Formula::Forall(x, b) => {
            let want = matches!(f, Formula::Exists(..));
            let mut hit = false;
            for e in box_elems {
                sigma.insert(x.clone(), e.clone());
                if box_eval(b, sigma, g, box_elems) == want {
                    hit = true;
                    break;
                }
            }
            sigma.remove(x);
            hit == want
        }
        Formula::Not(b) => !box_eval(b, sigma, g, box_elems),
        Formula::And(v) => v.iter().all(|b| box_eval(b, sigma, g, box_elems)),
        Formula::Or(v) => v.iter().any(|b| box_eval(b, sigma, g, box_elems)),
        _ => f.evaluate(sigma, g).unwrap(),
    }
}

pub fn int_box(dims: usize, r: i64) -> Vec<GroupElement> {
    let mut out = vec![vec![]];
    for _ in 0..dims {
        out = out.into_iter().flat_map(|v: Vec<i64>| (-r..=r).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out.iter().map(|v| GroupElement::from_ints(v)).collect()
}

/// `a·x + c` pieces of every atom of a formula in `x` alone.
pub fn linear_data(f: &Formula, x: &str) -> (i64, Int) {
    let mut c_max = 0i64;
    let mut period = Int::from(1);
    for a in f.atoms() {
        match a {
            Atom::Le(l, r) | Atom::Lt(l, r) | Atom::Eq(l, r) => {
                let d = r.sub(l);
                let k = d.coeff(x);
                c_max = c_max.max(int_norm(d.constant_part()));
                period = period.lcm(&k.abs().max(Int::from(1)));
            }
            Atom::Cong { t, n, rep } => {
                c_max = c_max.max(int_norm(&t.constant_part().sub(rep)));
                period = period.lcm(n);
            }
            Atom::InH { t, .. } => c_max = c_max.max(int_norm(t.constant_part())),
        }
    }
    (c_max, period)
}
