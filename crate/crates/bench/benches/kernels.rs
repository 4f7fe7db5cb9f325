use criterion::{black_box, criterion_group, criterion_main, Criterion};

use valkit_core::hahn::{HahnSeries, SeriesAlgebra, SeriesField};
use valkit_core::hensel::{conjugate_form, newton_lift, MultiPoly, UniPoly};
use valkit_core::logic::{decide, parse_formula, qe};
use valkit_core::ordcut::{valuation_report, AmbientPair};
use valkit_core::perfectness::{injectivity_scan, RationalFunction};
use valkit_core::{GroupDescriptor, GroupElement};

fn logic(c: &mut Criterion) {
    let z = GroupDescriptor::parse("lex(Z)").unwrap();
    let f = parse_formula("exists x. y < x /\\ x < z /\\ cong(x,3,1)", &z).unwrap();
    c.bench_function("qe/lex(Z) interval with congruence", |b| b.iter(|| qe(black_box(&f), &z).unwrap()));
    let zz = GroupDescriptor::parse("lex(Z,Z)").unwrap();
    let s = parse_formula("forall x. exists y. x < y /\\ y < x + (1,0) /\\ ~in_H(y - x,1)", &zz).unwrap();
    c.bench_function("decide/lex(Z,Z) sentence", |b| b.iter(|| decide(black_box(&s), &zz).unwrap()));
}

fn series(c: &mut Criterion) {
    let f = SeriesField::parse("Q((t^lex(Z)))").unwrap();
    let a = HahnSeries::parse("1 + 2*t - t^3 + 5*t^4", &f).unwrap();
    let prec = GroupElement::from_ints(&[32]);
    c.bench_function("hahn/invert to t^32", |b| b.iter(|| black_box(&a).invert(&prec).unwrap()));
    let p = UniPoly::parse("X^3 + (1+t)*X^2 + t*X - t^2", "X", Some("t"), &SeriesAlgebra { field: &f }).unwrap();
    let a0 = HahnSeries::from_int(&f, -1);
    c.bench_function("hensel/newton lift to t^32", |b| b.iter(|| newton_lift(&p, black_box(&a0), &prec).unwrap()));
    let m = MultiPoly::parse("Z^3 - 2").unwrap();
    c.bench_function("hensel/conjugate form cbrt2", |b| b.iter(|| conjugate_form(black_box(&m), false).unwrap()));
}

fn cuts_and_scans(c: &mut Criterion) {
    let pair = AmbientPair::parse("Q((t^lex(Z)))", "1 + t^(3/2)").unwrap();
    c.bench_function("ordcut/report 200 samples", |b| b.iter(|| valuation_report(black_box(&pair), 200, 0).unwrap()));
    let z = RationalFunction::parse("s", 2).unwrap();
    c.bench_function("perfect/scan 1000", |b| b.iter(|| injectivity_scan(black_box(&z), 2, 1000, 0).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = logic, series, cuts_and_scans
}
criterion_main!(benches);
