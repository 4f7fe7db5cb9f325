//! For `α` of degree `n` over `Q` with conjugates `α_1..α_n`,
//! `g(X̄, Y) = ∏_i (Y - Σ_j α_i^j X_j) = Y^n + Σ_j G_j(X̄) Y^j`.
//!
//! `g` is computed as `Res_Z(minpoly(Z), Y - Σ_j Z^j X_j)`, which stays in `Q`
//! throughout. Quadratic cases can also be expanded directly in `Q(sqrt d)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::multipoly::{determinant, jacobian_matrix, rational_roots, resultant, MultiPoly, QuadPoly};
use super::HenselError;
use crate::num::{Int, Rat};

const Z: &str = "Z";
const Y: &str = "Y";

fn x(j: usize) -> String {
    format!("X{j}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateForm {
    /// Minimal polynomial coefficients, low to high, monic.
    pub minpoly: Vec<Rat>,
    pub g: MultiPoly,
    /// `G_0..G_{n-1}`, the coefficients of `Y^0..Y^(n-1)` in `g`.
    pub gs: Vec<MultiPoly>,
}

impl ConjugateForm {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// `Σ_j Z^j X_j`.
    fn generic_root(&self) -> MultiPoly {
        (0..self.degree())
            .fold(MultiPoly::zero(), |acc, j| acc.add(&MultiPoly::monomial(Rat::one(), &[(Z, j as u32), (&x(j), 1)])))
    }

    /// `g(X̄, Σ_j α^j X_j) = 0` in `Q(α)[X̄]`, checked by reducing modulo the minimal polynomial.
    pub fn vanishes_at_root(&self) -> bool {
        self.g.substitute(Y, &self.generic_root()).rem_monic(Z, &self.minpoly).is_zero()
    }
}

/// Read a monic univariate polynomial over `Q` and return its coefficients.
pub fn univariate_coeffs(p: &MultiPoly) -> Result<Vec<Rat>, HenselError> {
    let vars = p.vars();
    if vars.len() > 1 {
        return Err(HenselError::Degree(format!("expected one variable, found {vars:?}")));
    }
    let var = vars.into_iter().next().unwrap_or_else(|| Z.to_string());
    let c = p.univariate(&var).expect("single variable");
    if c.last().is_none_or(|l| !l.is_one()) {
        return Err(HenselError::NonMonic);
    }
    Ok(c)
}

/// `g` and `G` for the root of `minpoly`. Irreducibility is verified up to
/// degree 3; above that a rational root is still rejected but the caller must
/// vouch for the rest.
pub fn conjugate_form(minpoly: &MultiPoly, assert_irreducible: bool) -> Result<ConjugateForm, HenselError> {
    let c = univariate_coeffs(minpoly)?;
    let n = c.len() - 1;
    if n < 2 {
        return Err(HenselError::Degree(format!("minimal polynomial of degree {n}; need at least 2")));
    }
    if let Some(r) = rational_roots(&c).first() {
        return Err(HenselError::Reducible(format!("{minpoly} has the rational root {}", crate::num::fmt_rat(r))));
    }
    if n > 3 && !assert_irreducible {
        return Err(HenselError::UnverifiedIrreducible(n));
    }
    let mz = c
        .iter()
        .enumerate()
        .fold(MultiPoly::zero(), |acc, (k, ck)| acc.add(&MultiPoly::monomial(ck.clone(), &[(Z, k as u32)])));
    let mut form = ConjugateForm { minpoly: c, g: MultiPoly::zero(), gs: Vec::new() };
    let h = MultiPoly::var(Y).sub(&form.generic_root());
    form.g = resultant(&mz, &h, Z)?;
    let mut ys = form.g.coefficients_in(Y);
    if ys.len() != n + 1 || ys[n] != MultiPoly::int(1) {
        return Err(HenselError::Invariant(format!("resultant {} is not monic of degree {n} in Y", form.g)));
    }
    ys.pop();
    form.gs = ys;
    Ok(form)
}

/// `g` for a quadratic minimal polynomial, multiplied out in `Q(sqrt D)`.
pub fn quadratic_expansion(minpoly: &[Rat]) -> Result<MultiPoly, HenselError> {
    let [c, b, one] = minpoly else {
        return Err(HenselError::Degree(format!("expected degree 2, got {}", minpoly.len().saturating_sub(1))));
    };
    if !one.is_one() {
        return Err(HenselError::NonMonic);
    }
    // roots -b/2 ± sqrt(D)/2 with D = b^2 - 4c; sqrt(num/den) = sqrt(num*den)/den
    let disc = b * b - Rat::from_integer(4.into()) * c;
    let d_int: Int = disc.numer() * disc.denom();
    let d: i64 = d_int.try_into().map_err(|_| HenselError::Degree("discriminant too large".into()))?;
    let half = Rat::new(1.into(), 2.into());
    let s = &half / Rat::from_integer(disc.denom().clone());
    let x0 = MultiPoly::var("X0");
    let x1 = MultiPoly::var("X1");
    let rational = x0.add(&x1.scale(&(-b * &half)));
    let y = QuadPoly::rational(d, MultiPoly::var(Y));
    let plus = y.sub(&QuadPoly::rational(d, rational.clone())).sub(&QuadPoly::sqrt_times(d, x1.scale(&s)));
    let minus = y.sub(&QuadPoly::rational(d, rational)).add(&QuadPoly::sqrt_times(d, x1.scale(&s)));
    let prod = plus.mul(&minus);
    prod.as_rational().cloned().ok_or_else(|| HenselError::Invariant(format!("sqrt({d}) part {} survived", prod.b)))
}

/// `g(c̄, Y)` has no rational root.
pub fn no_root_check(g: &MultiPoly, c: &[Rat]) -> bool {
    let point: BTreeMap<String, Rat> = c.iter().enumerate().map(|(j, v)| (x(j), v.clone())).collect();
    match g.eval_partial(&point).univariate(Y) {
        Some(u) => rational_roots(&u).is_empty(),
        None => false,
    }
}

/// `det(∂G_j/∂X_k)` as a polynomial in `X0..X_{n-1}`.
pub fn jacobian_polynomial(gs: &[MultiPoly]) -> MultiPoly {
    let vars: Vec<String> = (0..gs.len()).map(x).collect();
    determinant(&jacobian_matrix(gs, &vars))
}

fn zigzag(v: i64) -> u64 {
    if v > 0 {
        2 * v as u64 - 1
    } else {
        2 * v.unsigned_abs()
    }
}

/// Integer points of `Z^n` by max-norm shell up to `radius`; inside a shell,
/// co-lexicographic in the key `0, 1, -1, 2, -2, ...`.
pub fn spiral_points(n: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0; n]];
    for r in 1..=radius {
        let mut shell = Vec::new();
        let side = (2 * r + 1) as usize;
        for idx in 0..side.pow(n as u32) {
            let mut k = idx;
            let p: Vec<i64> = (0..n)
                .map(|_| {
                    let v = (k % side) as i64 - r;
                    k /= side;
                    v
                })
                .collect();
            if p.iter().any(|v| v.abs() == r) {
                shell.push(p);
            }
        }
        shell.sort_by_key(|p| p.iter().rev().map(|&v| zigzag(v)).collect::<Vec<_>>());
        out.extend(shell);
    }
    out
}

/// The first spiral point with nonzero Jacobian and a nonzero coordinate beyond `X0`,
/// together with the Jacobian value there.
pub fn find_nonvanishing_point(gs: &[MultiPoly], radius: i64) -> Result<(Vec<i64>, Rat), HenselError> {
    let jac = jacobian_polynomial(gs);
    if jac.is_zero() {
        return Err(HenselError::JacobianZero);
    }
    for p in spiral_points(gs.len(), radius) {
        if p.iter().skip(1).all(|v| *v == 0) {
            continue;
        }
        let point = p.iter().enumerate().map(|(j, v)| (x(j), Rat::from_integer((*v).into()))).collect();
        let val = jac.eval(&point)?;
        if !val.is_zero() {
            return Ok((p, val));
        }
    }
    Err(HenselError::NoPoint(radius))
}
