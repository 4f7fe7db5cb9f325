//! Exact integer/rational helpers shared by every module.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `n` with every prime factor of `m` divided out.
pub fn coprime_part(n: &Int, m: u64) -> Int {
    let mut n = n.abs();
    if n.is_zero() {
        return n;
    }
    for p in prime_factors(m) {
        let p = Int::from(p);
        while (&n % &p).is_zero() {
            n /= &p;
        }
    }
    n
}

/// True when every prime dividing `n` also divides `m`.
pub fn only_primes_of(n: &Int, m: u64) -> bool {
    coprime_part(n, m).is_one()
}

pub fn padic_val_int(n: &Int, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = Int::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    Some(v)
}

/// p-adic valuation of a rational; `None` for zero.
pub fn padic_val(q: &Rat, p: u64) -> Option<i64> {
    let num = padic_val_int(q.numer(), p)?;
    let den = padic_val_int(q.denom(), p).unwrap_or(0);
    Some(num - den)
}

pub fn is_perfect_square(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return Int::zero();
    }
    a.lcm(b).abs()
}

/// Sign of `a + b*sqrt(d)` for `d > 0`, decided without floating point.
pub fn sign_quadratic(a: &Rat, b: &Rat, d: &Int) -> Ordering {
    let sa = a.cmp(&Rat::zero());
    let sb = b.cmp(&Rat::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: the larger magnitude wins
    let a2 = a * a;
    let db2 = rat_int(d) * b * b;
    if a2 > db2 {
        sa
    } else {
        sb
    }
}

pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Positive divisors of `n` (nonzero), ascending. Trial division; `None` if too large.
pub fn divisors(n: &Int) -> Option<Vec<Int>> {
    let n = n.abs().to_u128()?;
    if n == 0 {
        return None;
    }
    if n > 1u128 << 80 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u128 = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(Int::from(d));
            if d * d != n {
                large.push(Int::from(n / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Element `a + b*sqrt(d)` of a quadratic field, `d` a non-square integer (may be negative).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    pub a: Rat,
    pub b: Rat,
    pub d: i64,
}

impl QuadNum {
    pub fn new(a: Rat, b: Rat, d: i64) -> Self {
        QuadNum { a, b, d }
    }

    pub fn from_rat(a: Rat, d: i64) -> Self {
        QuadNum { a, b: Rat::zero(), d }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        QuadNum::new(&self.a + &o.a, &self.b + &o.b, self.d)
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadNum::new(&self.a - &o.a, &self.b - &o.b, self.d)
    }

    pub fn neg(&self) -> Self {
        QuadNum::new(-&self.a, -&self.b, self.d)
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        let d = rat_int(&Int::from(self.d));
        QuadNum::new(&self.a * &o.a + &self.b * &o.b * d, &self.a * &o.b + &self.b * &o.a, self.d)
    }

    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(&Int::from(self.d)) * &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadNum::new(&self.a / &n, -&self.b / &n, self.d))
    }

    /// Sign as a real number; only meaningful for `d > 0`.
    pub fn sign(&self) -> Option<Ordering> {
        (self.d > 0).then(|| sign_quadratic(&self.a, &self.b, &Int::from(self.d)))
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let b =
            if self.b.is_negative() { format!("-{}", fmt_rat(&-&self.b)) } else { format!("+{}", fmt_rat(&self.b)) };
        write!(f, "{}{}*sqrt({})", fmt_rat(&self.a), b, self.d)
    }
}
