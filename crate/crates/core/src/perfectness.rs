//! `K = F_p(s)` and the map `τ(x, y) = x^p + z·y^p` on `K × K`.
//!
//! If `z` is not a `p`-th power, `τ` is injective: `τ(x0,y0) = τ(x1,y1)` with
//! `y0 ≠ y1` gives `z = ((x0 - x1)/(y1 - y0))^p`, and `y0 = y1` forces `x0 = x1`
//! because Frobenius is injective. When `z = g^p`, `τ(g, 0) = τ(0, 1)`.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::expr::{eval, parse_expr, Algebra, ExprError};
use crate::num::Int;

/// Characteristics the module accepts.
pub const SUPPORTED_PRIMES: [u64; 3] = [2, 3, 5];
/// Largest numerator and denominator degree drawn by [`injectivity_scan`].
pub const SCAN_DEGREE_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerfectError {
    #[error("characteristic {0} is not supported (use 2, 3 or 5)")]
    Unsupported(u64),
    #[error("characteristic mismatch: {0} vs {1}")]
    CharMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error: {0}")]
    Syntax(String),
}

/// Polynomial over `F_p`, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Poly {
    c: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // a^(p-2)
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Poly {
    fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { c }
    }

    fn constant(a: u64) -> Self {
        Poly::new(vec![a])
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    fn add(&self, o: &Self, p: u64) -> Self {
        let n = self.c.len().max(o.c.len());
        let g = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Poly::new((0..n).map(|i| (g(&self.c, i) + g(&o.c, i)) % p).collect())
    }

    fn neg(&self, p: u64) -> Self {
        Poly::new(self.c.iter().map(|a| (p - a) % p).collect())
    }

    fn scale(&self, k: u64, p: u64) -> Self {
        Poly::new(self.c.iter().map(|a| a * k % p).collect())
    }

    fn mul(&self, o: &Self, p: u64) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::new(vec![]);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % p;
            }
        }
        Poly::new(c)
    }

    fn divrem(&self, d: &Self, p: u64) -> (Self, Self) {
        let dd = d.degree().expect("nonzero divisor");
        let li = inv_mod(d.lead(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let f = r[r.len() - 1] * li % p;
            q[k] = f;
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p - f * b % p) % p;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    fn gcd(&self, o: &Self, p: u64) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b, p).1;
            a = b;
            b = r;
        }
        a.monic(p)
    }

    fn monic(&self, p: u64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), p), p)
    }

    /// `f(s)^p = f(s^p)` in characteristic `p`.
    fn frobenius(&self, p: u64) -> Self {
        let mut c = vec![0u64; self.c.len().saturating_sub(1) * p as usize + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * p as usize] = *a;
        }
        Poly::new(c)
    }

    /// `g` with `g(s^p) = self`, if every exponent is a multiple of `p`.
    fn frobenius_root(&self, p: u64) -> Option<Self> {
        let p = p as usize;
        if self.c.iter().enumerate().any(|(i, a)| *a != 0 && i % p != 0) {
            return None;
        }
        Some(Poly::new(self.c.iter().step_by(p).copied().collect()))
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if *a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, *a) {
                (0, a) => write!(f, "{a}")?,
                (1, 1) => write!(f, "s")?,
                (1, a) => write!(f, "{a}*s")?,
                (i, 1) => write!(f, "s^{i}")?,
                (i, a) => write!(f, "{a}*s^{i}")?,
            }
        }
        Ok(())
    }
}

/// Reduced fraction over `F_p` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
    p: u64,
}

fn check_prime(p: u64) -> Result<(), PerfectError> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(PerfectError::Unsupported(p))
    }
}

impl RationalFunction {
    fn from_parts(num: Poly, den: Poly, p: u64) -> Result<Self, PerfectError> {
        if den.is_zero() {
            return Err(PerfectError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::constant(1), p });
        }
        let g = num.gcd(&den, p);
        let (mut n, mut d) = (num.divrem(&g, p).0, den.divrem(&g, p).0);
        let l = inv_mod(d.lead(), p);
        n = n.scale(l, p);
        d = d.scale(l, p);
        Ok(RationalFunction { num: n, den: d, p })
    }

    /// `Σ c_i s^i`, coefficients reduced mod `p`.
    pub fn poly(coeffs: &[i64], p: u64) -> Result<Self, PerfectError> {
        check_prime(p)?;
        let c = coeffs.iter().map(|a| a.rem_euclid(p as i64) as u64).collect();
        Self::from_parts(Poly::new(c), Poly::constant(1), p)
    }

    pub fn constant(a: i64, p: u64) -> Result<Self, PerfectError> {
        Self::poly(&[a], p)
    }

    pub fn s(p: u64) -> Result<Self, PerfectError> {
        Self::poly(&[0, 1], p)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> Vec<u64> {
        self.num.c.clone()
    }

    pub fn denominator(&self) -> Vec<u64> {
        self.den.c.clone()
    }

    fn same(&self, o: &Self) -> Result<u64, PerfectError> {
        if self.p != o.p {
            return Err(PerfectError::CharMismatch(self.p, o.p));
        }
        Ok(self.p)
    }

    pub fn add(&self, o: &Self) -> Result<Self, PerfectError> {
        let p = self.same(o)?;
        let n = self.num.mul(&o.den, p).add(&o.num.mul(&self.den, p), p);
        Self::from_parts(n, self.den.mul(&o.den, p), p)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(self.p), den: self.den.clone(), p: self.p }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, PerfectError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, PerfectError> {
        let p = self.same(o)?;
        Self::from_parts(self.num.mul(&o.num, p), self.den.mul(&o.den, p), p)
    }

    pub fn div(&self, o: &Self) -> Result<Self, PerfectError> {
        let p = self.same(o)?;
        if o.is_zero() {
            return Err(PerfectError::DivisionByZero);
        }
        Self::from_parts(self.num.mul(&o.den, p), self.den.mul(&o.num, p), p)
    }

    pub fn pow(&self, n: u32) -> Self {
        let p = self.p;
        let mut num = Poly::constant(1);
        let mut den = Poly::constant(1);
        for _ in 0..n {
            num = num.mul(&self.num, p);
            den = den.mul(&self.den, p);
        }
        RationalFunction { num, den, p }
    }

    /// `self^p`, computed as `f(s^p)`.
    pub fn frobenius(&self) -> Self {
        RationalFunction { num: self.num.frobenius(self.p), den: self.den.frobenius(self.p), p: self.p }
    }

    pub fn parse(text: &str, p: u64) -> Result<Self, PerfectError> {
        check_prime(p)?;
        let e = parse_expr(text, None).map_err(|e| PerfectError::Syntax(e.0))?;
        eval(&e, &RatFnAlgebra { p }).map_err(|e| PerfectError::Syntax(e.0))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            return self.num.fmt_with(f);
        }
        write!(f, "(")?;
        self.num.fmt_with(f)?;
        write!(f, ")/(")?;
        self.den.fmt_with(f)?;
        write!(f, ")")
    }
}

struct RatFnAlgebra {
    p: u64,
}

fn perr(e: PerfectError) -> ExprError {
    ExprError::new(e.to_string())
}

impl Algebra for RatFnAlgebra {
    type V = RationalFunction;

    fn int(&self, n: &Int) -> Result<RationalFunction, ExprError> {
        let r = (n % Int::from(self.p) + Int::from(self.p)) % Int::from(self.p);
        let r: i64 = r.try_into().expect("reduced mod p");
        RationalFunction::constant(r, self.p).map_err(perr)
    }

    fn var(&self, name: &str) -> Result<RationalFunction, ExprError> {
        if name != "s" {
            return Err(ExprError::new(format!("unknown variable '{name}', expected s")));
        }
        RationalFunction::s(self.p).map_err(perr)
    }

    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction, ExprError> {
        a.add(b).map_err(perr)
    }

    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction, ExprError> {
        a.sub(b).map_err(perr)
    }

    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction, ExprError> {
        a.mul(b).map_err(perr)
    }

    fn div(&self, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction, ExprError> {
        a.div(b).map_err(perr)
    }
}

/// `Some(g)` with `g^p = f` when `f ∈ K^p`. Coefficient `p`-th roots are the identity on `F_p`.
pub fn is_pth_power(f: &RationalFunction, p: u64) -> Result<Option<RationalFunction>, PerfectError> {
    check_prime(p)?;
    if f.p != p {
        return Err(PerfectError::CharMismatch(f.p, p));
    }
    Ok(match (f.num.frobenius_root(p), f.den.frobenius_root(p)) {
        (Some(num), Some(den)) => Some(RationalFunction { num, den, p }),
        _ => None,
    })
}

/// `x^p + z·y^p`.
pub fn tau_eval(
    x: &RationalFunction,
    y: &RationalFunction,
    z: &RationalFunction,
) -> Result<RationalFunction, PerfectError> {
    x.frobenius().add(&z.mul(&y.frobenius())?)
}

/// Random element with numerator and denominator of degree at most `deg`.
pub fn random_rational_function<R: Rng>(rng: &mut R, p: u64, deg: usize) -> RationalFunction {
    let draw = |rng: &mut R, monic: bool| {
        let d = rng.gen_range(0..=deg);
        let mut c: Vec<u64> = (0..=d).map(|_| rng.gen_range(0..p)).collect();
        if monic {
            c[d] = 1;
        }
        Poly::new(c)
    };
    let num = if rng.gen_bool(0.05) { Poly::new(vec![]) } else { draw(rng, false) };
    let den = draw(rng, true);
    RationalFunction::from_parts(num, den, p).expect("monic denominator")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub first: (String, String),
    pub second: (String, String),
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub z: String,
    pub p: u64,
    pub samples: usize,
    pub distinct_inputs: usize,
    pub z_is_pth_power: bool,
    pub pth_root: Option<String>,
    /// Collisions met by the random scan.
    pub collisions: Vec<Collision>,
    /// `τ(g, 0) = τ(0, 1)` when `z = g^p`, verified by evaluation.
    pub constructed: Option<Collision>,
}

/// Evaluate `τ` on `n_samples` random pairs and report every collision between distinct inputs.
pub fn injectivity_scan(z: &RationalFunction, p: u64, n_samples: usize, seed: u64) -> Result<ScanReport, PerfectError> {
    let root = is_pth_power(z, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashMap<RationalFunction, (RationalFunction, RationalFunction)> = HashMap::new();
    let mut inputs = std::collections::HashSet::new();
    let mut collisions = Vec::new();
    let show = |x: &RationalFunction, y: &RationalFunction| (x.to_string(), y.to_string());
    for _ in 0..n_samples {
        let x = random_rational_function(&mut rng, p, SCAN_DEGREE_BOUND);
        let y = random_rational_function(&mut rng, p, SCAN_DEGREE_BOUND);
        let v = tau_eval(&x, &y, z)?;
        inputs.insert((x.clone(), y.clone()));
        match seen.get(&v) {
            Some((x0, y0)) if (x0, y0) != (&x, &y) => {
                collisions.push(Collision { first: show(x0, y0), second: show(&x, &y), value: v.to_string() })
            }
            Some(_) => {}
            None => {
                seen.insert(v, (x, y));
            }
        }
    }
    let constructed = match &root {
        Some(g) => {
            let zero = RationalFunction::constant(0, p)?;
            let one = RationalFunction::constant(1, p)?;
            let a = tau_eval(g, &zero, z)?;
            let b = tau_eval(&zero, &one, z)?;
            (a == b).then(|| Collision { first: show(g, &zero), second: show(&zero, &one), value: a.to_string() })
        }
        None => None,
    };
    Ok(ScanReport {
        z: z.to_string(),
        p,
        samples: n_samples,
        distinct_inputs: inputs.len(),
        z_is_pth_power: root.is_some(),
        pth_root: root.map(|g| g.to_string()),
        collisions,
        constructed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s, 2).unwrap()
    }

    #[test]
    fn pth_powers() {
        assert_eq!(is_pth_power(&rf("s"), 2).unwrap(), None);
        assert_eq!(is_pth_power(&rf("s^2 + s"), 2).unwrap(), None);
        assert_eq!(is_pth_power(&rf("s^2"), 2).unwrap(), Some(rf("s")));
        let w = is_pth_power(&rf("(s^2+1)/(s^4)"), 2).unwrap().unwrap();
        assert_eq!(w, rf("(s+1)/s^2"));
        assert_eq!(w.to_string(), "(s + 1)/(s^2)");
        assert_eq!(is_pth_power(&rf("s"), 3), Err(PerfectError::CharMismatch(2, 3)));
    }

    #[test]
    fn tau_examples() {
        let z = rf("s");
        assert_eq!(tau_eval(&rf("1"), &rf("1"), &z).unwrap(), rf("1 + s"));
        assert_eq!(tau_eval(&rf("s"), &rf("1"), &z).unwrap(), rf("s^2 + s"));
        assert_eq!(tau_eval(&rf("0"), &rf("1/s"), &z).unwrap(), rf("1/s"));
    }

    #[test]
    fn arithmetic() {
        let f = RationalFunction::parse("(2*s + 1)/(3*s^2)", 5).unwrap();
        assert_eq!(f.to_string(), "(4*s + 2)/(s^2)");
        assert_eq!(f.mul(&f.pow(0)).unwrap(), f);
        assert_eq!(f.frobenius(), f.pow(5));
        assert_eq!(rf("(s^2 + 1)/(s + 1)"), rf("s + 1"));
        assert!(RationalFunction::parse("1/0", 2).is_err());
        assert!(RationalFunction::parse("s", 7).is_err());
    }

    #[test]
    fn scans() {
        let r = injectivity_scan(&rf("s"), 2, 500, 0).unwrap();
        assert!(r.collisions.is_empty() && r.constructed.is_none());
        let r = injectivity_scan(&rf("s^2"), 2, 10, 0).unwrap();
        let c = r.constructed.unwrap();
        assert_eq!((c.first, c.second, c.value.as_str()), (("s".into(), "0".into()), ("0".into(), "1".into()), "s^2"));
        let c = injectivity_scan(&rf("1"), 2, 10, 0).unwrap().constructed.unwrap();
        assert_eq!((c.first, c.value.as_str()), (("1".into(), "0".into()), "1"));
    }
}
