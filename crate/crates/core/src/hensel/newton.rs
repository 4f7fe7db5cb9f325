//! Newton iteration `a ← a - f(a)/f'(a)` under the Hensel hypothesis `v(f(a0)) > 2 v(f'(a0))`.
//!
//! Write `vd = v(f'(a0))` and `δ = v(f(a0)) - 2vd`. While the hypothesis holds,
//! `v(f')` stays equal to `vd` and the gap `v(f(a)) - 2vd` at least doubles each
//! step. The quotient is only needed modulo `t^(2v(f) - 3vd)`, so each step
//! inverts `f'(a)` to relative precision equal to the current gap and drops
//! every term of the correction past that point.

use serde::Serialize;

use super::unipoly::UniPoly;
use super::{HenselError, LiftScalar};
use crate::hahn::Val;
use crate::oag::GroupElement;

pub const MAX_NEWTON_STEPS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftStep {
    pub iterate: String,
    pub residual: String,
    pub deriv: String,
    pub gap: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCertificate {
    pub iterates: usize,
    pub initial_residual: String,
    pub derivative: String,
    pub delta: String,
    pub final_residual: String,
    pub approximation: String,
    /// `steps[n]` describes `a_n`.
    pub steps: Vec<LiftStep>,
    #[serde(skip)]
    pub final_residual_val: Val,
}

fn exact_or(v: Val, what: &str) -> Result<GroupElement, HenselError> {
    match v {
        Val::Exact(e) => Ok(e),
        Val::Infinite => Err(HenselError::ZeroDerivative),
        Val::AtLeast(b) => Err(HenselError::InsufficientPrecision(format!("{what} is only known to be O(t^{b})"))),
    }
}

fn prec_err(e: HenselError) -> HenselError {
    match e {
        HenselError::Hahn(crate::hahn::HahnError::InsufficientPrecision(m)) => HenselError::InsufficientPrecision(m),
        other => other,
    }
}

/// Lift `a0` to an approximate root with `v(f(a)) >= prec`.
///
/// The result is returned modulo `t^(prec - v(f'(a0)))`, the precision at
/// which the root is determined; it is exact when the iteration hits a root.
pub fn newton_lift<S: LiftScalar>(
    f: &UniPoly<S>,
    a0: &S,
    prec: &GroupElement,
) -> Result<(S, LiftCertificate), HenselError> {
    let df = f.derivative()?;
    let mut deriv = df.eval(a0)?;
    let vd = exact_or(deriv.valuation(), "f'(a0)")?;
    let twice_vd = vd.scale_i64(2);
    let r0 = f.eval(a0)?;
    let v0 = r0.valuation();
    let delta = match &v0 {
        Val::Infinite => None,
        Val::Exact(v) if *v > twice_vd => Some(v.sub(&twice_vd)),
        Val::AtLeast(b) if *b >= *prec && *b > twice_vd => Some(b.sub(&twice_vd)),
        other => {
            return Err(HenselError::Hypothesis(format!("v(f(a0)) = {other} is not above 2v(f'(a0)) = {twice_vd}")));
        }
    };

    let mut a = a0.clone();
    let mut res = r0;
    let mut vf = v0.clone();
    let mut steps = Vec::new();
    let mut n = 0usize;
    loop {
        let gap = match &vf {
            Val::Infinite => None,
            Val::Exact(v) | Val::AtLeast(v) => Some(v.sub(&twice_vd)),
        };
        steps.push(LiftStep {
            iterate: a.to_string(),
            residual: vf.to_string(),
            deriv: vd.to_string(),
            gap: gap.as_ref().map_or("∞".to_string(), |g| g.to_string()),
        });
        // the doubling invariant
        if let (Some(g), Some(d)) = (&gap, &delta) {
            let want = d.scale_i64(1i64 << n.min(62));
            if *g < want {
                return Err(HenselError::Invariant(format!("gap {g} after {n} steps is below 2^{n}·{d}")));
            }
        }
        if vf.certainly_ge(prec) {
            break;
        }
        let (v, gap) = match (&vf, gap) {
            (Val::Exact(v), Some(g)) => (v.clone(), g),
            (Val::AtLeast(b), _) => {
                return Err(HenselError::InsufficientPrecision(format!(
                    "residual only known to be O(t^{b}), below the target {prec}"
                )))
            }
            _ => unreachable!("an exact root is at every precision"),
        };
        if n == MAX_NEWTON_STEPS {
            return Err(HenselError::TooManySteps(n));
        }
        let target = v.scale_i64(2).sub(&twice_vd);
        let cut = target.sub(&vd);
        let q = res.div(&deriv, &gap).map_err(prec_err)?;
        if let Val::AtLeast(b) = q.valuation() {
            return Err(HenselError::InsufficientPrecision(format!("Newton correction is O(t^{b})")));
        }
        // an exact quotient is used whole; otherwise only the part that is certain
        a = if q.is_exact() { a.sub(&q)? } else { a.sub(&q.truncate(&cut))? };
        res = f.eval(&a)?;
        vf = res.valuation();
        deriv = df.eval(&a)?;
        let new_vd = exact_or(deriv.valuation(), "f'(a)")?;
        if new_vd != vd {
            return Err(HenselError::Invariant(format!("v(f') moved from {vd} to {new_vd}")));
        }
        n += 1;
    }

    let approx = if vf == Val::Infinite { a.clone() } else { a.with_precision(&prec.sub(&vd)) };
    let cert = LiftCertificate {
        iterates: n,
        initial_residual: v0.to_string(),
        derivative: vd.to_string(),
        delta: delta.map_or("∞".to_string(), |d| d.to_string()),
        final_residual: vf.to_string(),
        approximation: approx.to_string(),
        steps,
        final_residual_val: vf,
    };
    Ok((approx, cert))
}
