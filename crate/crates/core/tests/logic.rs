mod common;

use common::{int_elem, linear_data, Gen};
use num_traits::ToPrimitive;
use valkit_core::logic::{decide, parse_formula, qe, qe_with, Assignment, Formula, LogicError, QeOptions};
use valkit_core::GroupDescriptor;

const GROUPS: &[&str] = &["lex(Z)", "lex(Q)", "lex(Z,Z)", "lex(Zloc(3))", "lex(Quad(2))", "lex(Z,Q)", "lex(Q,Z)"];

#[test]
fn printed_formulas_parse_back() {
    let mut n = 0;
    for (i, gs) in GROUPS.iter().enumerate() {
        let g = GroupDescriptor::parse(gs).unwrap();
        let mut gen = Gen::new(&g, 100 + i as u64);
        for _ in 0..72 {
            let q = gen.rng_range(0, 2);
            let f = gen.prenex(&["y", "z"], q, 3);
            let text = f.to_string();
            let back = parse_formula(&text, &g).unwrap_or_else(|e| panic!("{gs}: {text}: {e}"));
            assert_eq!(back, f, "{gs}: {text}");
            n += 1;
        }
    }
    assert!(n >= 500);
}

#[test]
fn interval_example_is_extensionally_right() {
    let g = GroupDescriptor::parse("lex(Z)").unwrap();
    let f = parse_formula("exists x. y < x /\\ x < z", &g).unwrap();
    let r = qe(&f, &g).unwrap();
    assert_eq!(r.to_string(), "y + 1 < z");
    for y in -10..=10 {
        for z in -10..=10 {
            let s: Assignment = [("y".to_string(), int_elem(y)), ("z".to_string(), int_elem(z))].into();
            assert_eq!(r.evaluate(&s, &g).unwrap(), y + 1 < z);
        }
    }
}

/// Over `Z` the solution set of a formula in one variable is periodic outside
/// the interval spanned by its constants, so a bounded search is exact.
#[test]
fn cooper_bound_oracle_on_integers() {
    let g = GroupDescriptor::parse("lex(Z)").unwrap();
    let mut gen = Gen::new(&g, 7);
    gen.moduli = vec![2, 3, 4, 6];
    let mut trues = 0;
    for _ in 0..200 {
        let body = gen.qf(&["x", "y", "z"], 3);
        let sigma = gen.assignment(&["y", "z"]);
        let phi = body.substitute_all(&sigma);
        let (c, p) = linear_data(&phi, "x");
        let bound = c + p.to_i64().unwrap() + 1;
        let brute = (-bound..=bound).any(|v| phi.evaluate(&[("x".to_string(), int_elem(v))].into(), &g).unwrap());
        let sentence = Formula::exists("x", phi.clone());
        assert_eq!(decide(&sentence, &g).unwrap(), brute, "{sentence}");
        let open = qe(&Formula::exists("x", body.clone()), &g).unwrap();
        assert_eq!(open.evaluate(&sigma, &g).unwrap(), brute, "{body} at {sigma:?} gave {open}");
        trues += brute as usize;
    }
    assert!(trues > 20 && trues < 180, "{trues}");
}

/// `qe(φ)` at a point agrees with deciding the instantiated sentence, and any
/// witness found by search forces the existential to hold.
#[test]
fn elimination_is_extensionally_sound() {
    for (i, gs) in GROUPS.iter().enumerate() {
        let g = GroupDescriptor::parse(gs).unwrap();
        let mut gen = Gen::new(&g, 900 + i as u64);
        let mut capped = 0;
        for _ in 0..12 {
            let q = 1 + gen.rng_range(0, 1);
            let f = gen.prenex(&["y", "z"], q, 2);
            let r = match qe_with(&f, &g, &QeOptions { dnf_cap: 20_000 }) {
                Ok(r) => r,
                Err(LogicError::DnfCap { .. }) => {
                    capped += 1;
                    continue;
                }
                Err(e) => panic!("{gs}: {f}: {e}"),
            };
            assert!(r.is_quantifier_free());
            for _ in 0..40 {
                let sigma = gen.assignment(&["y", "z"]);
                let direct = decide(&f.substitute_all(&sigma), &g).unwrap();
                assert_eq!(r.evaluate(&sigma, &g).unwrap(), direct, "{gs}: {f} at {sigma:?}");
            }
        }
        // the cell cap is a resource limit, hit only by large alternating formulas
        assert!(capped <= 2, "{gs}: {capped} of 12 formulas hit the cell cap");
        for _ in 0..40 {
            let body = gen.qf(&["x", "y"], 2);
            let f = Formula::exists("x", body.clone());
            let r = qe(&f, &g).unwrap();
            for _ in 0..10 {
                let sigma = gen.assignment(&["y"]);
                let got = r.evaluate(&sigma, &g).unwrap();
                for _ in 0..30 {
                    let mut s = sigma.clone();
                    s.insert("x".into(), gen.element());
                    if body.evaluate(&s, &g).unwrap() {
                        assert!(got, "{gs}: witness {s:?} for {f}, qe gave {r}");
                        break;
                    }
                }
            }
        }
    }
}

#[test]
fn decisions_on_small_sentences() {
    let cases = [
        ("lex(Z)", "forall y. exists x. x+x = y", false),
        ("lex(Q)", "forall y. exists x. x+x = y", true),
        ("lex(Z,Z)", "exists x. 0 < x /\\ x+x <= (1,0)", true),
        ("lex(Z,Z)", "exists x. 0 < x /\\ x+x <= (0,1)", false),
        ("lex(Z,Q)", "exists x. 0 < x /\\ x+x <= (0,1)", true),
        ("lex(Zloc(3))", "forall y. exists x. 3*x = y", true),
        ("lex(Zloc(3))", "forall y. exists x. 2*x = y", false),
        ("lex(Quad(2))", "forall y. exists x. 0 < x /\\ x < y \\/ y <= 0", true),
        ("lex(Quad(2))", "exists x. cong(x,2,1+sqrt(2)) /\\ 0 < x /\\ x < 1/1", true),
        ("lex(Z)", "forall y. cong(y,2,0) \\/ cong(y,2,1)", true),
    ];
    for (gs, f, want) in cases {
        let g = GroupDescriptor::parse(gs).unwrap();
        assert_eq!(decide(&parse_formula(f, &g).unwrap(), &g).unwrap(), want, "{gs}: {f}");
    }
}

trait RngRange {
    fn rng_range(&mut self, lo: usize, hi: usize) -> usize;
}

impl RngRange for Gen<'_> {
    fn rng_range(&mut self, lo: usize, hi: usize) -> usize {
        use rand::Rng;
        self.rng.gen_range(lo..=hi)
    }
}

#[test]
fn negative_constants_survive_printing() {
    let g = GroupDescriptor::parse("lex(Quad(2))").unwrap();
    let f = parse_formula("x + (-1+2*sqrt(2)) < 0", &g).unwrap();
    let back = parse_formula(&f.to_string(), &g).unwrap();
    assert_eq!(back, f, "{f}");
}
