use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LogicError;
use crate::num::Int;
use crate::oag::{GroupDescriptor, GroupElement};

/// `Σ k_i·x_i + c` with integer coefficients and a group-element constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    coeffs: BTreeMap<String, Int>,
    constant: GroupElement,
}

pub type Assignment = BTreeMap<String, GroupElement>;

impl Term {
    pub fn zero(g: &GroupDescriptor) -> Term {
        Term { coeffs: BTreeMap::new(), constant: g.zero() }
    }

    pub fn var(x: &str, g: &GroupDescriptor) -> Term {
        Term::linear(x, Int::one(), g)
    }

    pub fn linear(x: &str, k: Int, g: &GroupDescriptor) -> Term {
        let mut t = Term::zero(g);
        if !k.is_zero() {
            t.coeffs.insert(x.to_string(), k);
        }
        t
    }

    pub fn constant(c: GroupElement) -> Term {
        Term { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn from_parts(coeffs: BTreeMap<String, Int>, constant: GroupElement) -> Term {
        let coeffs = coeffs.into_iter().filter(|(_, k)| !k.is_zero()).collect();
        Term { coeffs, constant }
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Int> {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &GroupElement {
        &self.constant
    }

    pub fn coeff(&self, x: &str) -> Int {
        self.coeffs.get(x).cloned().unwrap_or_else(Int::zero)
    }

    pub fn has_var(&self, x: &str) -> bool {
        self.coeffs.contains_key(x)
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn add(&self, o: &Term) -> Term {
        let mut coeffs = self.coeffs.clone();
        for (x, k) in &o.coeffs {
            let e = coeffs.entry(x.clone()).or_insert_with(Int::zero);
            *e += k;
            if e.is_zero() {
                coeffs.remove(x);
            }
        }
        Term { coeffs, constant: self.constant.add(&o.constant) }
    }

    pub fn neg(&self) -> Term {
        Term { coeffs: self.coeffs.iter().map(|(x, k)| (x.clone(), -k)).collect(), constant: self.constant.neg() }
    }

    pub fn sub(&self, o: &Term) -> Term {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Int) -> Term {
        if k.is_zero() {
            return Term { coeffs: BTreeMap::new(), constant: self.constant.scale(k) };
        }
        Term { coeffs: self.coeffs.iter().map(|(x, c)| (x.clone(), c * k)).collect(), constant: self.constant.scale(k) }
    }

    pub fn add_const(&self, c: &GroupElement) -> Term {
        Term { coeffs: self.coeffs.clone(), constant: self.constant.add(c) }
    }

    /// The term with variable `x` dropped.
    pub fn without(&self, x: &str) -> Term {
        let mut t = self.clone();
        t.coeffs.remove(x);
        t
    }

    /// Only the variable part, constant zeroed.
    pub fn linear_part(&self) -> Term {
        Term { coeffs: self.coeffs.clone(), constant: self.constant.scale(&Int::zero()) }
    }

    pub fn substitute(&self, x: &str, v: &GroupElement) -> Term {
        match self.coeffs.get(x) {
            None => self.clone(),
            Some(k) => {
                let c = v.scale(k);
                let mut t = self.without(x);
                t.constant = t.constant.add(&c);
                t
            }
        }
    }

    /// Coefficients reduced into `[0, n)`; harmless under `mod nΓ` conditions.
    pub fn reduce_coeffs(&self, n: &Int) -> Term {
        let coeffs =
            self.coeffs.iter().map(|(x, k)| (x.clone(), k.mod_floor(n))).filter(|(_, k)| !k.is_zero()).collect();
        Term { coeffs, constant: self.constant.clone() }
    }

    /// Gcd of the coefficients, zero for a ground term.
    pub fn content(&self) -> Int {
        self.coeffs.values().fold(Int::zero(), |acc, k| acc.gcd(k))
    }

    /// Every coefficient and the constant divided by `d`, assuming exactness.
    pub fn div_exact(&self, d: &Int) -> Term {
        Term {
            coeffs: self.coeffs.iter().map(|(x, k)| (x.clone(), k / d)).collect(),
            constant: self.constant.div_exact(d),
        }
    }

    /// Sign of the first nonzero coefficient, or of the constant when ground.
    pub fn leading_sign(&self) -> std::cmp::Ordering {
        match self.coeffs.values().next() {
            Some(k) => k.cmp(&Int::zero()),
            None => self.constant.sign(),
        }
    }

    /// `self` or `-self`, whichever has a positive leading sign.
    pub fn sign_normalized(&self) -> (Term, bool) {
        if self.leading_sign() == std::cmp::Ordering::Less {
            (self.neg(), true)
        } else {
            (self.clone(), false)
        }
    }

    pub fn eval(&self, sigma: &Assignment) -> Result<GroupElement, LogicError> {
        let mut acc = self.constant.clone();
        for (x, k) in &self.coeffs {
            let v = sigma.get(x).ok_or_else(|| LogicError::Unassigned(x.clone()))?;
            if !v.same_shape(&acc) {
                return Err(LogicError::Shape(format!("value of {x} has the wrong shape")));
            }
            acc = acc.add(&v.scale(k));
        }
        Ok(acc)
    }

    /// Split into `(P, N)` with `self = P - N` and all displayed coefficients positive.
    pub fn split_signs(&self) -> (Term, Term) {
        let zero = self.constant.scale(&Int::zero());
        let mut p = Term { coeffs: BTreeMap::new(), constant: zero.clone() };
        let mut n = Term { coeffs: BTreeMap::new(), constant: zero };
        for (x, k) in &self.coeffs {
            if k.is_positive() {
                p.coeffs.insert(x.clone(), k.clone());
            } else {
                n.coeffs.insert(x.clone(), -k);
            }
        }
        if self.constant.is_positive() {
            p.constant = self.constant.clone();
        } else {
            n.constant = self.constant.neg();
        }
        (p, n)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, k) in &self.coeffs {
            let mag = k.abs();
            let body = if mag.is_one() { x.clone() } else { format!("{mag}*{x}") };
            match (first, k.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if self.constant.is_zero() {
            if first {
                write!(f, "0")?;
            }
            return Ok(());
        }
        let c = self.constant.to_string();
        if first {
            write!(f, "{c}")
        } else if let Some(rest) = c.strip_prefix('-') {
            write!(f, " - {rest}")
        } else {
            write!(f, " + {c}")
        }
    }
}
