//! `valkit`: command-line front end.
//!
//! Exit codes: 0 success, 1 domain error (the library error is echoed), 2 usage error.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use valkit_core::hahn::{
    random_series, typev_check, uniformity_check, BallFamily, HahnSeries, SeriesAlgebra, SeriesField, ValSet,
};
use valkit_core::hensel::{
    conjugate_form, find_nonvanishing_point, hensel_form_check, hensel_start, jacobian_polynomial, newton_lift,
    LiftCertificate, LiftScalar, MultiPoly, PadicAlgebra, PadicRat, UniPoly,
};
use valkit_core::logic::{parse_formula, qe_with, QeOptions, DEFAULT_DNF_CAP};
use valkit_core::oag::sample::random_element;
use valkit_core::oag::Index;
use valkit_core::ordcut::{density_check, valuation_report, AmbientPair, DEFAULT_SAMPLES};
use valkit_core::perfectness::{injectivity_scan, is_pth_power, tau_eval, RationalFunction};
use valkit_core::valstruct::{
    canonical_henselian, canonical_p_henselian, classify_field, coarsening_chain, galois_descriptor,
    ValuedFieldDescriptor, PRIME_BOUND,
};
use valkit_core::{GroupDescriptor, GroupElement};

#[derive(Parser)]
#[command(name = "valkit", version, about = "Ordered abelian groups, Hahn series and henselian valuations")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized scan.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group invariants.
    #[command(subcommand)]
    Oag(OagCmd),
    /// Quantifier elimination over an ordered abelian group.
    Qe {
        #[arg(long)]
        group: String,
        #[arg(long)]
        formula: String,
    },
    /// Hahn series arithmetic and ball-family checks.
    #[command(subcommand)]
    Hahn(HahnCmd),
    /// Hensel form, Newton lifting and conjugate forms.
    #[command(subcommand)]
    Hensel(HenselCmd),
    /// Closure flags, coarsenings and canonical valuations of k((t^G)).
    Valfield {
        /// `k((t^GROUP))` or a JSON descriptor.
        #[arg(long)]
        field: String,
        /// Coefficient flags for the text form, e.g. `real_closed,p_closed(3)`.
        #[arg(long, value_delimiter = ',')]
        flags: Vec<String>,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// The valuation defined by the cut of an element over k((t^G)).
    Cut {
        #[arg(long)]
        field: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Comma-separated positive elements for the density check.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<String>,
    },
    /// Shape of the absolute Galois group of a real closed k((t^G)).
    Galois {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = PRIME_BOUND)]
        bound: u64,
    },
    /// Frobenius and `x^p + z*y^p` over F_p(s).
    #[command(subcommand)]
    Perfect(PerfectCmd),
}

#[derive(Subcommand)]
enum OagCmd {
    /// Index of pG, r_p, convex chain and S_p.
    Info {
        #[arg(long)]
        group: String,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// The largest convex subgroup H with a outside H + pG.
    H {
        #[arg(long)]
        group: String,
        #[arg(long)]
        element: String,
        #[arg(long)]
        prime: u64,
    },
}

#[derive(Subcommand)]
enum HahnCmd {
    /// Normal form, valuation and sign of an expression.
    Eval {
        #[arg(long)]
        field: String,
        #[arg(long)]
        expr: String,
    },
    /// Ball-family axioms on random points and bounded/inverse duality on sample sets.
    Check {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
}

#[derive(Args)]
struct PolyArgs {
    /// A series field such as `Q((t^lex(Z)))`, or `Q` with `--prime p` for the p-adic valuation.
    #[arg(long)]
    field: String,
    #[arg(long)]
    poly: String,
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(Subcommand)]
enum HenselCmd {
    /// Check the Hensel form and report the residue start.
    Check {
        #[command(flatten)]
        f: PolyArgs,
    },
    /// Newton lifting to `v(f(a)) >= prec` with a certificate.
    Lift {
        #[command(flatten)]
        f: PolyArgs,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        prec: String,
    },
    /// `g = Res_Z(m(Z), Y - sum Z^j X_j)` for a monic minimal polynomial `m` in `Z`.
    Conjugate {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        assert_irreducible: bool,
        #[arg(long, default_value_t = 3)]
        radius: i64,
    },
}

#[derive(Subcommand)]
enum PerfectCmd {
    /// Decide whether `f` is a p-th power and give the root.
    Root {
        #[arg(long = "char")]
        p: u64,
        #[arg(long)]
        f: String,
    },
    /// `x^p + z*y^p`.
    Tau {
        #[arg(long = "char")]
        p: u64,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
    /// Random search for collisions of `x^p + z*y^p`.
    Scan {
        #[arg(long = "char")]
        p: u64,
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

struct Report {
    text: String,
    json: Value,
}

enum Failure {
    Domain(String),
    Usage(String),
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

type Out = Result<Report, Failure>;

fn group(text: &str) -> Result<GroupDescriptor, Failure> {
    GroupDescriptor::parse(text).map_err(domain)
}

fn dnf_cap() -> Result<usize, Failure> {
    match std::env::var("VALKIT_DNF_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("VALKIT_DNF_CAP must be a positive integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_DNF_CAP),
    }
}

fn index_json(i: Index) -> Value {
    match i {
        Index::Finite(n) => json!(n),
        Index::Infinite => json!("INFINITE"),
    }
}

fn oag(cmd: OagCmd) -> Out {
    match cmd {
        OagCmd::Info { group: gt, prime } => {
            let g = group(&gt)?;
            let chain = g.convex_chain(valkit_core::oag::DEFAULT_CHAIN_DEPTH);
            let chain_s: Vec<String> = chain.members.iter().map(|h| h.to_string()).collect();
            let (ok, bad) = g.is_nonsingular();
            let mut json = json!({
                "group": g.to_string(),
                "chain": chain_s,
                "chain_truncated": chain.truncated,
                "nonsingular": ok,
                "singular_witness": bad,
            });
            let mut text = format!("group {g}\nchain {}\nnonsingular {ok}\n", chain_s.join(" > "));
            if let Some(p) = prime {
                let (index, r) = g.mod_p_index(p).map_err(domain)?;
                json["prime"] = json!(p);
                json["index"] = index_json(index);
                json["r_p"] = index_json(r);
                text += &format!("index {index}\nr_p {r}\n");
                // S_p is enumerated over G/pG, so only for finite index
                if let Index::Finite(_) = index {
                    let sp = g.aux_sort_sp(p).map_err(domain)?;
                    let sp_s: Vec<Value> = sp
                        .iter()
                        .map(|c| {
                            json!({
                                "subgroup": c.subgroup.map_or("NONE".to_string(), |h| h.to_string()),
                                "representative": c.representative.to_string(),
                            })
                        })
                        .collect();
                    text += "S_p";
                    for c in &sp_s {
                        text +=
                            &format!(" {}@{}", c["subgroup"].as_str().unwrap(), c["representative"].as_str().unwrap());
                    }
                    text.push('\n');
                    json["S_p"] = Value::Array(sp_s);
                }
            }
            Ok(Report { text, json })
        }
        OagCmd::H { group: gt, element, prime } => {
            let g = group(&gt)?;
            let a = g.element(&element).map_err(domain)?;
            let h = g.h_subgroup(&a, prime).map_err(domain)?;
            let s = h.map_or("NONE".to_string(), |h| h.to_string());
            Ok(Report { text: format!("{s}\n"), json: json!({"element": a.to_string(), "prime": prime, "H": s}) })
        }
    }
}

fn qe_cmd(gt: &str, formula: &str) -> Out {
    let g = group(gt)?;
    let f = parse_formula(formula, &g).map_err(domain)?;
    let out = qe_with(&f, &g, &QeOptions { dnf_cap: dnf_cap()? }).map_err(domain)?;
    Ok(Report {
        text: format!("{out}\n"),
        json: json!({"group": g.to_string(), "input": f.to_string(), "qf": out.to_string()}),
    })
}

fn hahn(cmd: HahnCmd, seed: u64) -> Out {
    match cmd {
        HahnCmd::Eval { field, expr } => {
            let f = SeriesField::parse(&field).map_err(domain)?;
            let a = HahnSeries::parse(&expr, &f).map_err(domain)?;
            let sign = if f.coeff.is_ordered() {
                a.sign().ok().map(|s| match s {
                    std::cmp::Ordering::Less => "-1",
                    std::cmp::Ordering::Equal => "0",
                    std::cmp::Ordering::Greater => "1",
                })
            } else {
                None
            };
            let val = a.val().to_string();
            let mut text = format!("{a}\nv = {val}\n");
            if let Some(s) = sign {
                text += &format!("sign {s}\n");
            }
            Ok(Report { text, json: json!({"value": a.to_string(), "valuation": val, "sign": sign}) })
        }
        HahnCmd::Check { field, points } => {
            let f = SeriesField::parse(&field).map_err(domain)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<HahnSeries> = (0..points).map(|_| random_series(&f, &mut rng, 3, 3)).collect();
            let radii: Vec<GroupElement> = (0..6).map(|_| random_element(&f.group, &mut rng, 3)).collect();
            let uni = uniformity_check(&BallFamily::new(f.group.clone()), &pts, &radii);
            let mut sets = Vec::new();
            for r in &radii {
                sets.push(ValSet::Ball(r.clone()));
                sets.push(ValSet::CoBall(r.clone()));
                let hi = r.add(&f.group.unit(f.group.len() - 1));
                sets.push(ValSet::Annulus(r.clone(), hi));
            }
            let mut typev = Vec::new();
            for s in &sets {
                typev.push(typev_check(s, &f.group, seed).map_err(domain)?);
            }
            let dual_ok = typev.iter().all(|r| r.duality_holds());
            let text = format!(
                "uniformity {} ({} violations)\ntype V duality {} on {} sets\n",
                if uni.passed() { "PASS" } else { "FAIL" },
                uni.violations.len(),
                if dual_ok { "PASS" } else { "FAIL" },
                typev.len()
            );
            let json = json!({"uniformity": uni, "typev": typev, "passed": uni.passed() && dual_ok});
            if uni.passed() && dual_ok {
                Ok(Report { text, json })
            } else {
                Err(Failure::Domain(format!("check failed: {json}")))
            }
        }
    }
}

enum Lifted {
    Series(UniPoly<HahnSeries>),
    Padic(UniPoly<PadicRat>),
}

fn read_poly(a: &PolyArgs) -> Result<Lifted, Failure> {
    match a.prime {
        Some(p) => {
            if a.field.trim() != "Q" {
                return Err(Failure::Usage("--prime selects the p-adic valuation on Q; use --field Q".into()));
            }
            UniPoly::parse(&a.poly, "X", None, &PadicAlgebra { p }).map(Lifted::Padic).map_err(domain)
        }
        None => {
            let f = SeriesField::parse(&a.field).map_err(domain)?;
            UniPoly::parse(&a.poly, "X", Some("t"), &SeriesAlgebra { field: &f }).map(Lifted::Series).map_err(domain)
        }
    }
}

fn lift_report<S: LiftScalar>(f: &UniPoly<S>, start: Option<S>, prec: &GroupElement) -> Out {
    let a0 = match start {
        Some(s) => s,
        None => hensel_start(f).map_err(domain)?,
    };
    let (a, cert): (S, LiftCertificate) = newton_lift(f, &a0, prec).map_err(domain)?;
    let mut text = format!("{a}\n");
    text += &format!("iterates {}\ndelta {}\n", cert.iterates, cert.delta);
    for (n, s) in cert.steps.iter().enumerate() {
        text += &format!("a{n} = {}  v(f) {}  v(f') {}  gap {}\n", s.iterate, s.residual, s.deriv, s.gap);
    }
    text += &format!("final v(f) {}\n", cert.final_residual);
    Ok(Report { text, json: json!({"root": a.to_string(), "start": a0.to_string(), "certificate": cert}) })
}

fn hensel(cmd: HenselCmd) -> Out {
    match cmd {
        HenselCmd::Check { f } => {
            let (form, start) = match read_poly(&f)? {
                Lifted::Series(p) => {
                    (hensel_form_check(&p).map_err(domain)?, hensel_start(&p).map_err(domain)?.to_string())
                }
                Lifted::Padic(p) => {
                    (hensel_form_check(&p).map_err(domain)?, hensel_start(&p).map_err(domain)?.to_string())
                }
            };
            Ok(Report {
                text: format!("hensel_form {form}\nstart {start}\n"),
                json: json!({"hensel_form": form, "start": start}),
            })
        }
        HenselCmd::Lift { f, start, prec } => match read_poly(&f)? {
            Lifted::Series(p) => {
                let field = p.zero_scalar().field().clone();
                let prec = field.group.element(&prec).map_err(domain)?;
                let start = start.map(|s| HahnSeries::parse(&s, &field)).transpose().map_err(domain)?;
                lift_report(&p, start, &prec)
            }
            Lifted::Padic(p) => {
                let pr = f.prime.expect("padic");
                let prec = GroupDescriptor::parse("lex(Z)").expect("lex(Z)").element(&prec).map_err(domain)?;
                let start = match start {
                    Some(s) => {
                        let c = UniPoly::parse(&s, "X", None, &PadicAlgebra { p: pr }).map_err(domain)?;
                        if c.degree().unwrap_or(0) > 0 {
                            return Err(Failure::Usage("--start must be a constant".into()));
                        }
                        Some(c.coeff(0))
                    }
                    None => None,
                };
                lift_report(&p, start, &prec)
            }
        },
        HenselCmd::Conjugate { poly, assert_irreducible, radius } => {
            let m = MultiPoly::parse(&poly).map_err(domain)?;
            let cf = conjugate_form(&m, assert_irreducible).map_err(domain)?;
            let gs: Vec<String> = cf.gs.iter().map(|g| g.to_string()).collect();
            let jac = jacobian_polynomial(&cf.gs);
            let (pt, val) = find_nonvanishing_point(&cf.gs, radius).map_err(domain)?;
            let text = format!("g = {}\nG = ({})\nJ = {}\nJ{:?} = {}\n", cf.g, gs.join(", "), jac, pt, val);
            let json = json!({
                "g": cf.g.to_string(),
                "G": gs,
                "jacobian": jac.to_string(),
                "point": pt,
                "jacobian_at_point": val.to_string(),
                "vanishes_at_root": cf.vanishes_at_root(),
            });
            Ok(Report { text, json })
        }
    }
}

fn valfield(field: &str, flags: &[String], prime: Option<u64>) -> Out {
    let k = if field.trim_start().starts_with('{') {
        if !flags.is_empty() {
            return Err(Failure::Usage("--flags only applies to the text form of --field".into()));
        }
        ValuedFieldDescriptor::from_json(field)
    } else {
        let f: Vec<&str> = flags.iter().map(|s| s.trim()).collect();
        ValuedFieldDescriptor::parse(field, &f)
    }
    .map_err(domain)?;
    let flags_k = classify_field(&k).map_err(domain)?;
    let chain = coarsening_chain(&k);
    let (hi, hv) = canonical_henselian(&k).map_err(domain)?;
    let mut json = json!({
        "field": k.to_json(),
        "flags": flags_k,
        "chain": chain,
        "canonical": {"index": hi, "valuation": hv},
    });
    let mut names: Vec<String> = Vec::new();
    for (on, n) in
        [(flags_k.alg_closed, "alg_closed"), (flags_k.real_closed, "real_closed"), (flags_k.euclidean, "euclidean")]
    {
        if on {
            names.push(n.to_string());
        }
    }
    names.extend(flags_k.p_closed.iter().map(|p| format!("p_closed({p})")));
    let mut text = format!("{k}\nflags [{}]\n", names.join(", "));
    text += &format!("v_K: chain[{hi}] value group {} residue {}\n", hv.value_group, hv.residue_field);
    if let Some(p) = prime {
        let (pi, pv) = canonical_p_henselian(&k, p).map_err(domain)?;
        json["canonical_p"] = json!({"prime": p, "index": pi, "valuation": pv});
        text += &format!("v_K^{p}: chain[{pi}] value group {} residue {}\n", pv.value_group, pv.residue_field);
    }
    Ok(Report { text, json })
}

fn cut(field: &str, alpha: &str, samples: usize, eps: &[String], seed: u64) -> Out {
    let pair = AmbientPair::parse(field, alpha).map_err(domain)?;
    let rep = valuation_report(&pair, samples, seed).map_err(domain)?;
    let mut json = serde_json::to_value(&rep).expect("plain data");
    let mut text = format!(
        "alpha {}\ngap {}\nA: {}\nO: {}\nO equals natural ring {}\nviolations {}\n",
        rep.alpha,
        rep.gap,
        rep.a_rule,
        rep.o_rule,
        rep.o_equals_natural_ring,
        rep.violations.len()
    );
    if !eps.is_empty() {
        let es = eps.iter().map(|e| HahnSeries::parse(e, &pair.base)).collect::<Result<Vec<_>, _>>().map_err(domain)?;
        let d = density_check(&pair, &es).map_err(domain)?;
        text += &format!("density {}\n", d.verdict);
        json["density"] = serde_json::to_value(&d).expect("plain data");
    }
    if !rep.passed() {
        return Err(Failure::Domain(format!("cut checks failed: {:?}", rep.violations)));
    }
    Ok(Report { text, json })
}

fn galois(gt: &str, bound: u64) -> Out {
    let g = group(gt)?;
    let shape = galois_descriptor(&g, bound);
    Ok(Report { text: format!("{}\n", shape.descriptor), json: serde_json::to_value(&shape).expect("plain data") })
}

fn rf(text: &str, p: u64) -> Result<RationalFunction, Failure> {
    RationalFunction::parse(text, p).map_err(domain)
}

fn perfect(cmd: PerfectCmd, seed: u64) -> Out {
    match cmd {
        PerfectCmd::Root { p, f } => {
            let f = rf(&f, p)?;
            let w = is_pth_power(&f, p).map_err(domain)?;
            let text = match &w {
                Some(g) => format!("true\nroot {g}\n"),
                None => "false\n".to_string(),
            };
            Ok(Report {
                text,
                json: json!({"f": f.to_string(), "pth_power": w.is_some(), "root": w.map(|g| g.to_string())}),
            })
        }
        PerfectCmd::Tau { p, x, y, z } => {
            let v = tau_eval(&rf(&x, p)?, &rf(&y, p)?, &rf(&z, p)?).map_err(domain)?;
            Ok(Report { text: format!("{v}\n"), json: json!({"value": v.to_string()}) })
        }
        PerfectCmd::Scan { p, z, samples } => {
            let r = injectivity_scan(&rf(&z, p)?, p, samples, seed).map_err(domain)?;
            let mut text = format!(
                "z {} in K^p {}\nsamples {} distinct {}\ncollisions {}\n",
                r.z,
                r.z_is_pth_power,
                r.samples,
                r.distinct_inputs,
                r.collisions.len()
            );
            if let Some(c) = &r.constructed {
                text += &format!(
                    "constructed ({}, {}) ~ ({}, {}) -> {}\n",
                    c.first.0, c.first.1, c.second.0, c.second.1, c.value
                );
            }
            Ok(Report { text, json: serde_json::to_value(&r).expect("plain data") })
        }
    }
}

fn dispatch(cli: Cli) -> Out {
    let seed = cli.seed;
    match cli.cmd {
        Command::Oag(c) => oag(c),
        Command::Qe { group, formula } => qe_cmd(&group, &formula),
        Command::Hahn(c) => hahn(c, seed),
        Command::Hensel(c) => hensel(c),
        Command::Valfield { field, flags, prime } => valfield(&field, &flags, prime),
        Command::Cut { field, alpha, samples, eps } => cut(&field, &alpha, samples, &eps, seed),
        Command::Galois { group, bound } => galois(&group, bound),
        Command::Perfect(c) => perfect(c, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    match dispatch(cli) {
        Ok(r) => {
            let body = if as_json { serde_json::to_string_pretty(&r.json).expect("json") + "\n" } else { r.text };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
