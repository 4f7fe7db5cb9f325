//! Acceptance run: one PASS/FAIL line per criterion. Every expected value is
//! either recomputed here by an independent oracle or a hand-derived constant.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{box_eval, int_box, int_elem, lex_zz_corpus, linear_data, Gen};
use valkit_core::hahn::{
    random_series, typev_check, uniformity_check, BallFamily, HahnSeries, SeriesField, Val, ValSet,
};
use valkit_core::hensel::{
    conjugate_form, find_nonvanishing_point, hensel_form_check, hensel_start, newton_lift, no_root_check,
    quadratic_expansion, MultiPoly, PadicAlgebra, PadicRat, UniPoly,
};
use valkit_core::logic::{decide, parse_formula, qe, Assignment, Formula};
use valkit_core::num::{Int, Rat};
use valkit_core::oag::sample::random_element;
use valkit_core::oag::{ComponentKind, Coord, Index};
use valkit_core::ordcut::{density_check, valuation_report, AmbientPair};
use valkit_core::perfectness::{injectivity_scan, is_pth_power, random_rational_function, RationalFunction};
use valkit_core::valstruct::{
    canonical_henselian, canonical_p_henselian, galois_descriptor, ValStructError, ValuedFieldDescriptor,
};
use valkit_core::{ConvexSubgroup, GroupDescriptor, GroupElement};

/// Groups exercised by the group-level criteria.
const CORPUS: &[&str] = &[
    "lex(Z)",
    "lex(Q)",
    "lex(Z,Z)",
    "lex(Zloc(3))",
    "lex(Quad(2))",
    "lex(Z,Q)",
    "lex(Q,Z)",
    "lex(Zloc(6),Z)",
    "lex(Z,Zloc(2),Q)",
    "lex(Quad(3),Z)",
    "lex(Z,Zomega)",
];

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

// ---------------------------------------------------------------- 1

fn qe_soundness() -> Outcome {
    let g = GroupDescriptor::parse("lex(Z)").unwrap();
    let mut gen = Gen::new(&g, 2024);
    gen.moduli = vec![2, 3, 4, 6];
    for i in 0..200 {
        let body = gen.qf(&["x", "y", "z"], 3);
        let sigma = gen.assignment(&["y", "z"]);
        let phi = body.substitute_all(&sigma);
        // solutions of a one-variable formula over Z are periodic beyond its constants
        let (c, p) = linear_data(&phi, "x");
        let bound = c + p.to_i64().unwrap() + 1;
        let brute = (-bound..=bound).any(|v| phi.evaluate(&[("x".to_string(), int_elem(v))].into(), &g).unwrap());
        let open = qe(&Formula::exists("x", body.clone()), &g).map_err(|e| format!("#{i}: {e}"))?;
        ensure(open.is_quantifier_free(), || format!("#{i}: {open} has quantifiers"))?;
        ensure(open.evaluate(&sigma, &g).unwrap() == brute, || format!("#{i}: exists x. {body} at {sigma:?}"))?;
    }
    let gg = GroupDescriptor::parse("lex(Z,Z)").unwrap();
    let corpus = lex_zz_corpus();
    let cube = int_box(2, 4);
    let mut boxed = 0;
    for e in &corpus {
        let f = parse_formula(&e.sentence, &gg).map_err(|x| x.to_string())?;
        let got = decide(&f, &gg).map_err(|x| x.to_string())?;
        ensure(got == e.truth, || format!("corpus: {} decided {got}", e.sentence))?;
        if e.boxed {
            boxed += 1;
            ensure(box_eval(&f, &mut Assignment::new(), &gg, &cube) == e.truth, || format!("box: {}", e.sentence))?;
        }
    }
    Ok(format!(
        "200/200 lex(Z) formulas match the bounded search; {} corpus sentences ({boxed} box-checked)",
        corpus.len()
    ))
}

// ---------------------------------------------------------------- 2

/// `c ∈ p·C`, decided from the component definition.
fn in_p_multiple(kind: &ComponentKind, c: &Coord, p: u64) -> bool {
    let pi = Int::from(p);
    match (kind, c) {
        (ComponentKind::Int, Coord::Num(r)) => r.is_integer() && r.numer().is_multiple_of(&pi),
        (ComponentKind::IntLoc(m), Coord::Num(r)) => {
            let mut d = (r / Rat::from_integer(pi)).denom().clone();
            let m = Int::from(*m);
            loop {
                let g = d.gcd(&m);
                if g.is_one() {
                    break d.is_one();
                }
                d /= g;
            }
        }
        (ComponentKind::Rat, Coord::Num(_)) => true,
        (ComponentKind::Quad(_), Coord::Quad { a, b, .. }) => a.is_multiple_of(&pi) && b.is_multiple_of(&pi),
        (ComponentKind::OmegaInt, Coord::Omega(m)) => m.values().all(|v| v.is_multiple_of(&pi)),
        _ => panic!("coordinate {c:?} does not fit {kind:?}"),
    }
}

fn coord_sub(a: &Coord, b: &Coord) -> Coord {
    match (a, b) {
        (Coord::Num(x), Coord::Num(y)) => Coord::Num(x - y),
        (Coord::Quad { a, b, d }, Coord::Quad { a: c, b: e, .. }) => Coord::Quad { a: a - c, b: b - e, d: *d },
        _ => unreachable!(),
    }
}

/// `|C/pC|` by bucketing a box of elements that contains a full set of representatives.
fn brute_component_index(kind: &ComponentKind, p: u64) -> u64 {
    let pi = p as i64;
    let elems: Vec<Coord> = match kind {
        ComponentKind::Int => (-pi..=pi).map(|n| Coord::Num(rat(n, 1))).collect(),
        ComponentKind::IntLoc(m) => {
            (-pi..=pi).flat_map(|n| [Coord::Num(rat(n, 1)), Coord::Num(rat(n, *m as i64))]).collect()
        }
        ComponentKind::Rat => (-2..=2).flat_map(|n| (1..=3).map(move |d| Coord::Num(rat(n, d)))).collect(),
        ComponentKind::Quad(d) => (0..=pi)
            .flat_map(|a| (0..=pi).map(move |b| Coord::Quad { a: Int::from(a), b: Int::from(b), d: *d }))
            .collect(),
        ComponentKind::OmegaInt => unreachable!("infinite index"),
    };
    let mut reps: Vec<Coord> = Vec::new();
    for e in elems {
        if !reps.iter().any(|r| in_p_multiple(kind, &coord_sub(&e, r), p)) {
            reps.push(e);
        }
    }
    reps.len() as u64
}

/// `(|Γ/pΓ|, r_p)` by brute force; `Γ/pΓ` is the product of the component quotients.
fn brute_index(g: &GroupDescriptor, p: u64) -> (u64, u64) {
    let index: u64 = g.components().iter().map(|k| brute_component_index(k, p)).product();
    let mut r = 0;
    let mut q = index;
    while q > 1 {
        assert_eq!(q % p, 0, "index {index} is not a power of {p}");
        q /= p;
        r += 1;
    }
    (index, r)
}

fn non_singularity() -> Outcome {
    let mut checked = 0;
    for gs in CORPUS {
        let g = GroupDescriptor::parse(gs).unwrap();
        if g.has_omega() {
            continue;
        }
        ensure(g.is_nonsingular() == (true, None), || format!("{gs} reported singular"))?;
        for p in PRIMES {
            let (idx, r) = brute_index(&g, p);
            let got = g.mod_p_index(p).map_err(|e| e.to_string())?;
            ensure(got == (Index::Finite(idx), Index::Finite(r)), || format!("{gs}, p={p}: {got:?} vs {idx}, {r}"))?;
            checked += 1;
        }
    }
    let g = GroupDescriptor::parse("lex(Z,Zomega)").unwrap();
    ensure(g.is_nonsingular() == (false, Some(2)), || format!("{:?}", g.is_nonsingular()))?;
    ensure(g.mod_p_index(2).unwrap().0 == Index::Infinite, || "omega index".into())?;
    // e_0, …, e_11 in the omega component are pairwise incongruent mod 2
    let unit = |i: u64| Coord::Omega([(i, Int::one())].into());
    let k = ComponentKind::OmegaInt;
    for i in 0..12u64 {
        for j in 0..i {
            let diff = match (unit(i), unit(j)) {
                (Coord::Omega(a), Coord::Omega(b)) => {
                    let mut m = a.clone();
                    for (x, v) in b {
                        *m.entry(x).or_insert_with(Int::zero) -= v;
                    }
                    Coord::Omega(m)
                }
                _ => unreachable!(),
            };
            ensure(!in_p_multiple(&k, &diff, 2), || "omega units congruent".into())?;
        }
    }
    Ok(format!("{checked} (group, p) pairs match residue counting; lex(Z,Zomega) singular at p=2"))
}

// ---------------------------------------------------------------- 3

/// `a ∈ H + pΓ` for `H = Δ_i[j..]`.
fn in_h_plus_p(g: &GroupDescriptor, a: &GroupElement, h: ConvexSubgroup, p: u64) -> bool {
    let pi = Int::from(p);
    for (i, (c, kind)) in a.coords().iter().zip(g.components()).enumerate() {
        if i < h.tail {
            if !in_p_multiple(kind, c, p) {
                return false;
            }
        } else if i == h.tail {
            if let Coord::Omega(m) = c {
                if m.iter().any(|(k, v)| *k < h.omega_start && !v.is_multiple_of(&pi)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every convex subgroup in the relevant range, largest first.
fn candidates(g: &GroupDescriptor) -> Vec<ConvexSubgroup> {
    let mut out = Vec::new();
    for i in 0..=g.len() {
        let omega = i < g.len() && *g.component(i) == ComponentKind::OmegaInt;
        for j in 0..if omega { 8 } else { 1 } {
            out.push(ConvexSubgroup { tail: i, omega_start: j });
        }
    }
    out
}

fn h_subgroups() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut total = 0;
    for gs in CORPUS {
        let g = GroupDescriptor::parse(gs).unwrap();
        let cands = candidates(&g);
        for _ in 0..100 {
            let a = random_element(&g, &mut rng, 6);
            let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
            let got = g.h_subgroup(&a, p).map_err(|e| e.to_string())?;
            let expected = cands.iter().copied().find(|h| !in_h_plus_p(&g, &a, *h, p));
            ensure(got == expected, || format!("{gs}: H({a},{p}) = {got:?}, search gives {expected:?}"))?;
            if let Some(h) = got {
                // a ∉ H + pΓ, and a ∈ H' + pΓ for every strictly larger H'
                ensure(!in_h_plus_p(&g, &a, h, p), || format!("{gs}: {a} in {h} + {p}G"))?;
                for bigger in cands.iter().filter(|c| **c < h) {
                    ensure(in_h_plus_p(&g, &a, *bigger, p), || format!("{gs}: {bigger} is larger for {a}"))?;
                }
            } else {
                ensure(in_h_plus_p(&g, &a, ConvexSubgroup::tail(g.len()), p), || format!("{gs}: {a} not in pG"))?;
            }
            total += 1;
        }
    }
    Ok(format!("{total} random (a, p) across {} groups agree with exhaustive chain search", CORPUS.len()))
}

// ---------------------------------------------------------------- 4

fn horner(coeffs: &[HahnSeries], x: &HahnSeries) -> HahnSeries {
    let mut acc = HahnSeries::zero(x.field());
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).unwrap().add(c).unwrap();
    }
    acc
}

fn random_hensel_poly(f: &SeriesField, rng: &mut ChaCha8Rng, char_p: u64) -> Vec<HahnSeries> {
    let n = rng.gen_range(2..=3usize);
    let e = |k: i64| GroupElement::from_ints(&[k]);
    let scalar = |v: i64| f.coeff.from_rat(&rat(v, 1)).unwrap();
    let unit = loop {
        let v = rng.gen_range(-3..=3i64);
        // a unit: nonzero, and nonzero mod p in characteristic p
        if v != 0 && (char_p == 0 || v.rem_euclid(char_p as i64) != 0) {
            break v;
        }
    };
    let mut coeffs = Vec::new();
    for i in 0..n {
        let mut c = HahnSeries::zero(f);
        if i == n - 1 {
            c = HahnSeries::from_int(f, unit);
        }
        for _ in 0..rng.gen_range(0..=2) {
            let v = rng.gen_range(-4..=4i64);
            c = c.add(&HahnSeries::monomial(f, scalar(v), e(rng.gen_range(1..=3)))).unwrap();
        }
        coeffs.push(c);
    }
    coeffs.push(HahnSeries::one(f));
    coeffs
}

fn hensel_lifting() -> Outcome {
    let prec = GroupElement::from_ints(&[32]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut steps_total = 0;
    for (field, p, count) in [("Q((t^lex(Z)))", 0u64, 25), ("Fp(5)((t^lex(Z)))", 5, 25)] {
        let f = SeriesField::parse(field).unwrap();
        for k in 0..count {
            let coeffs = random_hensel_poly(&f, &mut rng, p);
            let poly = UniPoly::new(coeffs.clone(), HahnSeries::zero(&f), "X");
            ensure(hensel_form_check(&poly) == Ok(true), || format!("{field} #{k}: {poly} not in Hensel form"))?;
            let a0 = hensel_start(&poly).map_err(|e| e.to_string())?;
            let (root, cert) = newton_lift(&poly, &a0, &prec).map_err(|e| format!("{field} #{k}: {poly}: {e}"))?;
            let deriv: Vec<HahnSeries> = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&f.coeff.from_rat(&rat(i as i64, 1)).unwrap()))
                .collect();
            let mut delta: Option<GroupElement> = None;
            for (n, step) in cert.steps.iter().enumerate() {
                let a = HahnSeries::parse(&step.iterate, &f).map_err(|e| e.to_string())?;
                let (vf, vd) = match (horner(&coeffs, &a).val(), horner(&deriv, &a).val()) {
                    (Val::Infinite, _) => break,
                    (Val::Exact(x), Val::Exact(y)) => (x, y),
                    other => return Err(format!("{field} #{k}: inexact step values {other:?}")),
                };
                let gap = vf.sub(&vd.scale_i64(2));
                let d = delta.get_or_insert_with(|| gap.clone()).clone();
                ensure(d.is_positive(), || format!("{field} #{k}: delta {d} not positive"))?;
                ensure(gap >= d.scale_i64(1 << n), || format!("{field} #{k}: step {n} gap {gap} < 2^{n}*{d}"))?;
                steps_total += 1;
            }
            // the lifted value is a root to the requested precision
            let back = horner(&coeffs, &root);
            ensure(back.val().certainly_ge(&prec), || format!("{field} #{k}: f(root) = {back}"))?;
        }
    }
    // 5-adic: X^2 - 6 from 1, two plain Newton steps give 73/28
    let padic = UniPoly::parse("X^2 - 6", "X", None, &PadicAlgebra { p: 5 }).unwrap();
    let (a, cert) =
        newton_lift(&padic, &PadicRat::int(1, 5), &GroupElement::from_ints(&[4])).map_err(|e| e.to_string())?;
    ensure(a.q == rat(73, 28), || format!("5-adic root {a}"))?;
    let residual = &a.q * &a.q - rat(6, 1);
    let mut num = residual.numer().abs();
    let mut v = 0;
    while num.is_multiple_of(&Int::from(5)) {
        num /= 5;
        v += 1;
    }
    ensure(residual == rat(625, 784) && v == 4 && cert.final_residual == "4", || {
        format!("residual {residual}, v5 {v}, certificate {}", cert.final_residual)
    })?;
    Ok(format!("50 polynomials lifted to t^32 ({steps_total} steps, doubling held); 5-adic a2 = 73/28 with v5 = 4"))
}

// ---------------------------------------------------------------- 5

/// `g(X̄, Y)` recomputed as a norm: the product of `Y - Σ X_j β^j` over the conjugates β of α.
fn norm_oracle(name: &str, x: &[Rat], y: &Rat) -> Rat {
    match name {
        // (Y - X0)^2 - d X1^2 for α = sqrt(d)
        "sqrt2" | "sqrt3" | "i" => {
            let d = match name {
                "sqrt2" => rat(2, 1),
                "sqrt3" => rat(3, 1),
                _ => rat(-1, 1),
            };
            let u = y - &x[0];
            &u * &u - d * &x[1] * &x[1]
        }
        // N(u + vα + wα^2) = u^3 + 2v^3 + 4w^3 - 6uvw for α^3 = 2
        "cbrt2" => {
            let (u, v, w) = (y - &x[0], -x[1].clone(), -x[2].clone());
            &u * &u * &u + rat(2, 1) * &v * &v * &v + rat(4, 1) * &w * &w * &w - rat(6, 1) * &u * &v * &w
        }
        _ => unreachable!(),
    }
}

fn point(x: &[Rat], y: Option<&Rat>) -> BTreeMap<String, Rat> {
    let mut m: BTreeMap<String, Rat> = x.iter().enumerate().map(|(j, v)| (format!("X{j}"), v.clone())).collect();
    if let Some(y) = y {
        m.insert("Y".into(), y.clone());
    }
    m
}

fn det(m: &[Vec<Rat>]) -> Rat {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<Rat>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
                .collect();
            let s = if c % 2 == 0 { Rat::one() } else { -Rat::one() };
            s * &m[0][c] * det(&minor)
        })
        .sum()
}

fn conjugate_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases = [("sqrt2", "Z^2 - 2"), ("sqrt3", "Z^2 - 3"), ("i", "Z^2 + 1"), ("cbrt2", "Z^3 - 2")];
    for (name, minpoly) in cases {
        let cf = conjugate_form(&MultiPoly::parse(minpoly).unwrap(), false).map_err(|e| e.to_string())?;
        let n = cf.degree();
        ensure(cf.vanishes_at_root(), || format!("{name}: g does not vanish at the generic root"))?;
        if n == 2 {
            let q = quadratic_expansion(&cf.minpoly).map_err(|e| e.to_string())?;
            ensure(q == cf.g, || format!("{name}: resultant {} vs Q(sqrt d) product {q}", cf.g))?;
        }
        for _ in 0..20 {
            let x: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=3))).collect();
            let y = rat(rng.gen_range(-9..=9), rng.gen_range(1..=3));
            let got = cf.g.eval(&point(&x, Some(&y))).unwrap();
            ensure(got == norm_oracle(name, &x, &y), || format!("{name}: g{x:?},{y} = {got}"))?;
        }
        // no rational root in Y once some X_j with j >= 1 is nonzero
        let mut tested = 0;
        while tested < 100 {
            let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
            if c[1..].iter().all(|v| *v == 0) {
                continue;
            }
            let cr: Vec<Rat> = c.iter().map(|v| rat(*v, 1)).collect();
            ensure(no_root_check(&cf.g, &cr), || format!("{name}: no_root_check failed at {c:?}"))?;
            // g(c, Y) is monic with integer coefficients: rational roots are divisors of g(c, 0)
            let g0 = cf.g.eval(&point(&cr, Some(&Rat::zero()))).unwrap();
            ensure(!g0.is_zero(), || format!("{name}: Y = 0 is a root at {c:?}"))?;
            let g0 = g0.to_integer().abs().to_i64().unwrap();
            for dvs in (1..=g0).filter(|d| g0 % d == 0) {
                for y in [dvs, -dvs] {
                    let v = cf.g.eval(&point(&cr, Some(&rat(y, 1)))).unwrap();
                    ensure(!v.is_zero(), || format!("{name}: Y = {y} is a root at {c:?}"))?;
                }
            }
            tested += 1;
        }
        let (pt, val) = find_nonvanishing_point(&cf.gs, 3).map_err(|e| format!("{name}: {e}"))?;
        ensure(pt.iter().all(|v| v.abs() <= 3), || format!("{name}: point {pt:?} outside radius 3"))?;
        let pr: Vec<Rat> = pt.iter().map(|v| rat(*v, 1)).collect();
        let jac: Vec<Vec<Rat>> = cf
            .gs
            .iter()
            .map(|gi| (0..n).map(|j| gi.derivative(&format!("X{j}")).eval(&point(&pr, None)).unwrap()).collect())
            .collect();
        let j = det(&jac);
        ensure(!j.is_zero() && j == val, || format!("{name}: J{pt:?} = {j}, reported {val}"))?;
        if name == "sqrt2" {
            let gs: Vec<String> = cf.gs.iter().map(|g| g.to_string()).collect();
            ensure(gs == ["X0^2 - 2*X1^2", "-2*X0"], || format!("sqrt2: G = {gs:?}"))?;
            let j01 = det(&cf
                .gs
                .iter()
                .map(|gi| {
                    (0..2)
                        .map(|j| gi.derivative(&format!("X{j}")).eval(&point(&[rat(0, 1), rat(1, 1)], None)).unwrap())
                        .collect()
                })
                .collect::<Vec<Vec<Rat>>>());
            ensure(j01 == rat(-8, 1), || format!("sqrt2: J(0,1) = {j01}"))?;
        }
    }
    Ok("sqrt2, sqrt3, i, cbrt2: g matches the norm oracle, 100 no-root points each, Jacobian points within 3; sqrt2 G and J(0,1) = -8".into())
}

// ---------------------------------------------------------------- 6

fn cut_valuation() -> Outcome {
    let base = "Q((t^lex(Z)))";
    let f = SeriesField::parse(base).unwrap();
    // gap = sup v(α - b) over b ∈ F, by hand: only the half-integer exponents survive
    let cases = [("t^(1/2)", rat(1, 2)), ("1 + t^(3/2)", rat(3, 2)), ("2*t^(1/2) + t", rat(1, 2))];
    let eps_exps = [-1i64, 0, 1, 2, 3];
    let mut witnessed = 0;
    for (alpha, gap) in cases {
        let pair = AmbientPair::parse(base, alpha).map_err(|e| e.to_string())?;
        let rep = valuation_report(&pair, 200, 0).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("{alpha}: {:?}", rep.violations))?;
        ensure(rep.samples == 200 && rep.o_equals_natural_ring, || format!("{alpha}: {} samples", rep.samples))?;
        ensure(rep.gap == gap.to_string(), || format!("{alpha}: gap {} vs {gap}", rep.gap))?;
        let eps: Vec<HahnSeries> = eps_exps
            .iter()
            .map(|k| HahnSeries::monomial(&f, f.coeff.from_rat(&rat(3, 1)).unwrap(), GroupElement::from_ints(&[*k])))
            .collect();
        let d = density_check(&pair, &eps).map_err(|e| e.to_string())?;
        ensure(d.violations.is_empty(), || format!("{alpha}: {:?}", d.violations))?;
        for (k, v) in eps_exps.iter().zip(&d.per_epsilon) {
            let expect = rat(*k, 1) > gap;
            ensure(v.gap_witness == expect, || format!("{alpha}: eps 3*t^{k} gave gap_witness {}", v.gap_witness))?;
            witnessed += expect as usize;
        }
        ensure(d.verdict == "GAP_WITNESS", || format!("{alpha}: verdict {}", d.verdict))?;
    }
    Ok(format!(
        "3 cuts: all checks pass on 200 samples, O = {{v >= 0}}; {witnessed} gap witnesses exactly where v(eps) > gap"
    ))
}

// ---------------------------------------------------------------- 7

fn uniformity_typev() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut sets, mut groups) = (0, 0);
    for gs in CORPUS {
        let f = SeriesField::parse(&format!("Q((t^{gs}))")).unwrap();
        let pts: Vec<HahnSeries> = (0..10).map(|_| random_series(&f, &mut rng, 3, 3)).collect();
        let radii: Vec<GroupElement> = (0..4).map(|_| random_element(&f.group, &mut rng, 3)).collect();
        let rep = uniformity_check(&BallFamily::new(f.group.clone()), &pts, &radii);
        ensure(rep.passed(), || format!("{gs}: {:?}", rep.violations))?;
        groups += 1;
        let step = f.group.unit(f.group.len() - 1);
        for r in &radii {
            // balls and annuli have a lower valuation bound; co-balls do not
            for (set, bounded) in [
                (ValSet::Ball(r.clone()), true),
                (ValSet::CoBall(r.clone()), false),
                (ValSet::Annulus(r.clone(), r.add(&step)), true),
            ] {
                let t = typev_check(&set, &f.group, 11).map_err(|e| format!("{gs}: {set}: {e}"))?;
                ensure(t.duality_holds(), || format!("{gs}: {set}: {:?}", t.violations))?;
                ensure(t.bounded == bounded && t.inverse_bounded_away == bounded, || format!("{gs}: {set}: {t:?}"))?;
                sets += 1;
            }
        }
    }
    Ok(format!("ball axioms hold on {groups} groups; duality holds on {sets} balls, co-balls and annuli"))
}

// ---------------------------------------------------------------- 8

fn canonical_table() -> Outcome {
    let k = |text: &str, flags: &[&str]| ValuedFieldDescriptor::parse(text, flags).unwrap();
    // (field, prime, expected (tail index, value group, residue) or error)
    type Row = (ValuedFieldDescriptor, Option<u64>, Result<(usize, &'static str, &'static str), &'static str>);
    let rows: Vec<Row> = vec![
        // k((t^Q)) is algebraically closed, k((t^Z)) is not: coarsest such is Δ_1
        (k("C((t^lex(Z,Q)))", &["alg_closed"]), None, Ok((1, "lex(Z)", "C((t^lex(Q)))"))),
        // no residue along the chain is algebraically closed: the finest
        (k("Q((t^lex(Z,Z)))", &[]), None, Ok((2, "lex(Z,Z)", "Q"))),
        (k("C((t^lex(Q)))", &["alg_closed"]), None, Err("separably closed")),
        // Z[1/3] is 3-divisible, so Δ_1 already has a 3-closed residue
        (k("k((t^lex(Z,Zloc(3))))", &["p_closed(3)"]), Some(3), Ok((1, "lex(Z)", "k((t^lex(Zloc(3))))"))),
        (k("Q((t^lex(Z)))", &[]), Some(3), Ok((1, "lex(Z)", "Q"))),
        // R((t^Q)) is real closed, hence euclidean
        (k("R((t^lex(Q)))", &["real_closed"]), Some(2), Err("euclidean")),
    ];
    for (field, prime, expect) in &rows {
        let got = match prime {
            None => canonical_henselian(field),
            Some(p) => canonical_p_henselian(field, *p),
        };
        match (got, expect) {
            (Ok((i, v)), Ok((ei, vg, res))) => {
                ensure(i == *ei && v.tail_index == *ei && v.value_group == *vg && v.residue_field == *res, || {
                    format!("{field} p={prime:?}: got {i} {} {}", v.value_group, v.residue_field)
                })?
            }
            (Err(ValStructError::SeparablyClosed(_)), Err("separably closed")) => {}
            (Err(ValStructError::Euclidean(_)), Err("euclidean")) => {}
            (got, _) => return Err(format!("{field} p={prime:?}: {got:?}, expected {expect:?}")),
        }
    }
    Ok("6/6 table entries reproduced, both guard cases raise".into())
}

// ---------------------------------------------------------------- 9

fn galois() -> Outcome {
    let mut n = 0;
    for gs in CORPUS {
        let g = GroupDescriptor::parse(gs).unwrap();
        let shape = galois_descriptor(&g, 13);
        for p in PRIMES {
            let r = shape.r_p[&p];
            ensure(r == g.mod_p_index(p).unwrap().1, || format!("{gs}: r_{p} = {r}"))?;
            if !g.has_omega() {
                ensure(r == Index::Finite(brute_index(&g, p).1), || format!("{gs}: r_{p} = {r} vs brute force"))?;
            }
            n += 1;
        }
    }
    let render = |gs: &str| galois_descriptor(&GroupDescriptor::parse(gs).unwrap(), 13).descriptor;
    ensure(render("lex(Z)") == "(∏_p ℤ_p) ⋊ ℤ/2ℤ", || render("lex(Z)"))?;
    ensure(render("lex(Q)") == "ℤ/2ℤ", || render("lex(Q)"))?;
    Ok(format!("{n} r_p values match the index; lex(Z) renders (∏_p ℤ_p) ⋊ ℤ/2ℤ"))
}

// ---------------------------------------------------------------- 10

fn perfectness() -> Outcome {
    let s = |t: &str, p: u64| RationalFunction::parse(t, p).unwrap();
    let scan = injectivity_scan(&s("s", 2), 2, 10_000, 0).map_err(|e| e.to_string())?;
    ensure(scan.collisions.is_empty() && !scan.z_is_pth_power, || {
        format!("{} collisions for z = s", scan.collisions.len())
    })?;
    for (z, root) in [("s^2", "s"), ("1", "1")] {
        let r = injectivity_scan(&s(z, 2), 2, 200, 1).map_err(|e| e.to_string())?;
        let c = r.constructed.ok_or(format!("no constructed collision for z = {z}"))?;
        ensure(
            c.first == (root.to_string(), "0".to_string()) && c.second == ("0".to_string(), "1".to_string()),
            || format!("z = {z}: {c:?}"),
        )?;
        // recheck the collision directly: root^2 + z*0 = 0 + z*1
        let lhs = s(root, 2).mul(&s(root, 2)).unwrap();
        ensure(lhs == s(z, 2), || format!("z = {z}: {lhs}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for p in [2u64, 3, 5] {
        for _ in 0..200 {
            let f = random_rational_function(&mut rng, p, 6);
            let g = random_rational_function(&mut rng, p, 6);
            // Frobenius against p-fold multiplication
            let fp = (1..p).fold(f.clone(), |acc, _| acc.mul(&f).unwrap());
            ensure(f.frobenius() == fp, || format!("p={p}: frobenius({f})"))?;
            let sum = f.add(&g).unwrap();
            let sum_p = (1..p).fold(sum.clone(), |acc, _| acc.mul(&sum).unwrap());
            ensure(sum_p == fp.add(&g.frobenius()).unwrap(), || format!("p={p}: ({f}) + ({g})"))?;
            ensure(is_pth_power(&fp, p).unwrap() == Some(f.clone()), || format!("p={p}: root of ({f})^p"))?;
        }
    }
    Ok("10000 samples over F_2(s), z = s: no collisions; z = s^2 and z = 1 collide as constructed; Frobenius and p-th roots on 600 samples".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("QE soundness", qe_soundness),
        ("non-singularity", non_singularity),
        ("H_{a,p}", h_subgroups),
        ("Hensel lifting", hensel_lifting),
        ("conjugate forms", conjugate_suite),
        ("cut valuation", cut_valuation),
        ("uniformity and type V", uniformity_typev),
        ("canonical valuations", canonical_table),
        ("Galois descriptor", galois),
        ("perfectness", perfectness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
