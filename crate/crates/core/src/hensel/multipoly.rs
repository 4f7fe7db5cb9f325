use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::HenselError;
use crate::expr::{eval, parse_expr, Algebra, ExprError};
use crate::num::{divisors, fmt_rat, lcm, Int, Rat};

/// A variable name ordered as `Y`, `Z`, ... before `X0 < X1 < ... < X10`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var(pub String);

impl Var {
    fn key(&self) -> (bool, &str, u64) {
        let split = self.0.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, digits) = self.0.split_at(split);
        match digits.parse::<u64>() {
            Ok(i) => (true, head, i),
            Err(_) => (false, head, 0),
        }
    }
}

impl Ord for Var {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Exponents of the variables that occur; zero exponents are never stored.
pub type Monomial = BTreeMap<Var, u32>;

/// Sparse polynomial over `Q` in named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rat>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m = a.clone();
    for (v, e) in b {
        *m.entry(v.clone()).or_insert(0) += e;
    }
    m
}

fn mono_degree(m: &Monomial) -> u32 {
    m.values().sum()
}

/// Graded, then lexicographic with earlier variables more significant; greatest first.
fn display_order(a: &Monomial, b: &Monomial) -> Ordering {
    mono_degree(b).cmp(&mono_degree(a)).then_with(|| {
        let vars: BTreeSet<&Var> = a.keys().chain(b.keys()).collect();
        for v in vars {
            let (x, y) = (a.get(v).copied().unwrap_or(0), b.get(v).copied().unwrap_or(0));
            if x != y {
                return y.cmp(&x);
            }
        }
        Ordering::Equal
    })
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::new(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rat::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Self {
        let mut m = Monomial::new();
        m.insert(Var(name.to_string()), 1);
        let mut p = MultiPoly::zero();
        p.add_term(m, Rat::one());
        p
    }

    /// `c * ∏ v^e` for the listed pairs.
    pub fn monomial(c: Rat, vars: &[(&str, u32)]) -> Self {
        let m = vars.iter().filter(|(_, e)| *e > 0).map(|(v, e)| (Var(v.to_string()), *e)).collect();
        let mut p = MultiPoly::zero();
        p.add_term(m, c);
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.keys().map(|v| v.0.clone())).collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(mono_degree).max()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        let v = Var(var.to_string());
        self.terms.keys().map(|m| m.get(&v).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// `[c_0, c_1, ...]` with `self = Σ c_k var^k`.
    pub fn coefficients_in(&self, var: &str) -> Vec<MultiPoly> {
        let v = Var(var.to_string());
        let mut out = vec![MultiPoly::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let k = rest.remove(&v).unwrap_or(0);
            out[k as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MultiPoly::int(1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> Self {
        let v = Var(var.to_string());
        let mut p = MultiPoly::zero();
        for (m, c) in &self.terms {
            if let Some(&e) = m.get(&v) {
                let mut m2 = m.clone();
                if e == 1 {
                    m2.remove(&v);
                } else {
                    m2.insert(v.clone(), e - 1);
                }
                p.add_term(m2, c * Rat::from_integer(e.into()));
            }
        }
        p
    }

    /// Replace `var` by `value` everywhere.
    pub fn substitute(&self, var: &str, value: &MultiPoly) -> Self {
        let v = Var(var.to_string());
        let powers: Vec<MultiPoly> = {
            let d = self.degree_in(var);
            let mut out = vec![MultiPoly::int(1)];
            for k in 1..=d as usize {
                out.push(out[k - 1].mul(value));
            }
            out
        };
        let mut p = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let k = rest.remove(&v).unwrap_or(0) as usize;
            let mut t = MultiPoly::zero();
            t.add_term(rest, c.clone());
            p = p.add(&t.mul(&powers[k]));
        }
        p
    }

    /// Substitute the given values; unassigned variables stay.
    pub fn eval_partial(&self, point: &BTreeMap<String, Rat>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = Monomial::new();
            let mut k = c.clone();
            for (v, e) in m {
                match point.get(&v.0) {
                    Some(x) => k *= num_traits::pow(x.clone(), *e as usize),
                    None => {
                        rest.insert(v.clone(), *e);
                    }
                }
            }
            p.add_term(rest, k);
        }
        p
    }

    /// Value at a point assigning every variable.
    pub fn eval(&self, point: &BTreeMap<String, Rat>) -> Result<Rat, HenselError> {
        let p = self.eval_partial(point);
        p.as_constant().ok_or_else(|| {
            HenselError::Degree(format!("variables {:?} are not assigned", p.vars().into_iter().collect::<Vec<_>>()))
        })
    }

    /// Coefficients low to high when `var` is the only variable.
    pub fn univariate(&self, var: &str) -> Option<Vec<Rat>> {
        self.coefficients_in(var).into_iter().map(|c| c.as_constant()).collect()
    }

    /// Remainder on division by a monic polynomial in `var` with rational coefficients.
    pub fn rem_monic(&self, var: &str, modulus: &[Rat]) -> Self {
        let n = modulus.len() - 1;
        let mut coeffs = self.coefficients_in(var);
        while coeffs.len() > n {
            let top = coeffs.pop().expect("nonempty");
            let shift = coeffs.len() - n;
            for (i, m) in modulus.iter().take(n).enumerate() {
                coeffs[shift + i] = coeffs[shift + i].sub(&top.scale(m));
            }
        }
        let x = MultiPoly::var(var);
        let mut p = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p = p.add(&c.mul(&x.pow(k as u32)));
        }
        p
    }

    pub fn parse(text: &str) -> Result<Self, HenselError> {
        let e = parse_expr(text, None).map_err(|e| HenselError::Syntax(e.0))?;
        eval(&e, &MultiAlgebra).map_err(|e| HenselError::Syntax(e.0))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| display_order(a.0, b.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            // indexed variables first inside a monomial: X0*Y
            let mut vars: Vec<_> = m.iter().collect();
            vars.sort_by_key(|(v, _)| !v.key().0);
            let mono: Vec<String> =
                vars.into_iter().map(|(v, e)| if *e == 1 { v.0.clone() } else { format!("{}^{e}", v.0) }).collect();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => fmt_rat(&mag),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", fmt_rat(&mag), mono.join("*")),
            };
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

pub struct MultiAlgebra;

impl Algebra for MultiAlgebra {
    type V = MultiPoly;

    fn int(&self, n: &Int) -> Result<MultiPoly, ExprError> {
        Ok(MultiPoly::constant(Rat::from_integer(n.clone())))
    }

    fn var(&self, name: &str) -> Result<MultiPoly, ExprError> {
        Ok(MultiPoly::var(name))
    }

    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, ExprError> {
        Ok(a.add(b))
    }

    fn sub(&self, a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, ExprError> {
        Ok(a.sub(b))
    }

    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, ExprError> {
        Ok(a.mul(b))
    }

    fn div(&self, a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, ExprError> {
        match b.as_constant() {
            Some(c) if !c.is_zero() => Ok(a.scale(&c.recip())),
            Some(_) => Err(ExprError::new("division by zero")),
            None => Err(ExprError::new(format!("cannot divide by the polynomial {b}"))),
        }
    }
}

/// Determinant by Laplace expansion along rows, memoised on the set of used columns.
pub fn determinant(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::int(1);
    }
    assert!(n < 24, "determinant of size {n}");
    let mut dp: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    dp.insert(0, MultiPoly::int(1));
    for row in m {
        let mut next: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (mask, acc) in &dp {
            for (c, entry) in row.iter().enumerate() {
                if mask & (1 << c) != 0 || entry.is_zero() {
                    continue;
                }
                let inversions = (mask >> (c + 1)).count_ones();
                let mut t = acc.mul(entry);
                if inversions % 2 == 1 {
                    t = t.neg();
                }
                let slot = next.entry(mask | (1 << c)).or_default();
                *slot = slot.add(&t);
            }
        }
        next.retain(|_, p| !p.is_zero());
        dp = next;
    }
    dp.remove(&((1u32 << n) - 1)).unwrap_or_default()
}

/// `Res_var(f, h)`: the Sylvester determinant with the rows of `f` first.
pub fn resultant(f: &MultiPoly, h: &MultiPoly, var: &str) -> Result<MultiPoly, HenselError> {
    let (m, n) = (f.degree_in(var) as usize, h.degree_in(var) as usize);
    if m == 0 && n == 0 {
        return Err(HenselError::ConstantResultant);
    }
    let fc = f.coefficients_in(var);
    let hc = h.coefficients_in(var);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    // coefficients are written highest degree first
    for i in 0..n {
        let mut row = vec![MultiPoly::zero(); size];
        for (k, c) in fc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MultiPoly::zero(); size];
        for (k, c) in hc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    Ok(determinant(&rows))
}

/// `J[j][k] = ∂G_j/∂X_k`.
pub fn jacobian_matrix(g: &[MultiPoly], vars: &[String]) -> Vec<Vec<MultiPoly>> {
    g.iter().map(|p| vars.iter().map(|v| p.derivative(v)).collect()).collect()
}

/// `A + sqrt(d)·B` with `A`, `B` rational polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadPoly {
    pub d: i64,
    pub a: MultiPoly,
    pub b: MultiPoly,
}

impl QuadPoly {
    pub fn rational(d: i64, a: MultiPoly) -> Self {
        QuadPoly { d, a, b: MultiPoly::zero() }
    }

    pub fn sqrt_times(d: i64, b: MultiPoly) -> Self {
        QuadPoly { d, a: MultiPoly::zero(), b }
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadPoly { d: self.d, a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadPoly { d: self.d, a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        QuadPoly { d: self.d, a: self.a.scale(k), b: self.b.scale(k) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = Rat::from_integer(self.d.into());
        QuadPoly {
            d: self.d,
            a: self.a.mul(&o.a).add(&self.b.mul(&o.b).scale(&d)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.a)),
        }
    }

    /// `Some(A)` when the `sqrt(d)` part vanishes.
    pub fn as_rational(&self) -> Option<&MultiPoly> {
        self.b.is_zero().then_some(&self.a)
    }
}

/// Rational roots of `Σ c_k x^k`, ascending, without multiplicity.
pub fn rational_roots(coeffs: &[Rat]) -> Vec<Rat> {
    let mut c: Vec<Rat> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let low = c.iter().position(|x| !x.is_zero()).expect("nonzero");
    if low > 0 {
        roots.push(Rat::zero());
    }
    let c = &c[low..];
    let den = c.iter().fold(Int::one(), |acc, x| lcm(&acc, x.denom()));
    let ints: Vec<Int> = c.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    let ints: Vec<Int> = ints.iter().map(|x| x / &g).collect();
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().expect("nonempty"))) else {
        return roots;
    };
    let value = |x: &Rat| ints.iter().rev().fold(Rat::zero(), |acc, k| acc * x + Rat::from_integer(k.clone()));
    for p in &ps {
        for q in &qs {
            for s in [p.clone(), -p.clone()] {
                let x = Rat::new(s, q.clone());
                if !roots.contains(&x) && value(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    roots
}
