//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release --test acceptance`. Exits nonzero when
//! any criterion fails, except one that cannot pass as worded; that one is
//! still printed as FAIL with the reason.

use std::sync::Arc;
use std::time::{Duration, Instant};

use advwb::adversary::{
    balance, kushilevitz_cover_counts, scheme_f, scheme_g, scheme_h, loads, relation_bound,
    unit_scheme, Side,
};
use advwb::compose::compose_scheme;
use advwb::matchings::{build_matchings, listed_first_matching, SetId, CORRECTED_ENTRY, LISTED_FIRST_MATCHING};
use advwb::measures::{
    block_sensitivity_at, degree, det_complexity, exact_polynomial, iterated_certificates,
    sensitivity_at, ComplexityReport, ReportOptions,
};
use advwb::qsim::{check_drop_bound, progress_trace, QueryAlgorithm};
use advwb::{BooleanFunction, ExactWeight, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Float tolerance for simulator checks.
const SIM_TOL: f64 = 1e-9;
/// Exact rational checks compare with `==`; approximate weights would use this.
const WEIGHT_TOL: f64 = 1e-9;

const LIMIT_1: Duration = Duration::from_secs(5);
const LIMIT_2: Duration = Duration::from_secs(1);
const LIMIT_5: Duration = Duration::from_secs(60);
const LIMIT_7: Duration = Duration::from_secs(60);
const LIMIT_8: Duration = Duration::from_secs(120);
const LIMIT_9: Duration = Duration::from_secs(30);
const LIMIT_10: Duration = Duration::from_secs(60);

const RANDOM_ALGORITHMS: u64 = 100;
const RANDOM_FUNCTIONS: usize = 1000;
const SUITE_SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

enum Verdict {
    Pass(String),
    Fail(String),
    /// Fails as worded for a reason outside the implementation.
    Unattainable(String),
}

impl From<Outcome> for Verdict {
    fn from(o: Outcome) -> Self {
        match o {
            Ok(m) => Verdict::Pass(m),
            Err(m) => Verdict::Fail(m),
        }
    }
}

fn w(s: &str) -> Weight {
    Weight::Exact(s.parse::<ExactWeight>().expect("literal"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1() -> Outcome {
    let f = BooleanFunction::base_f();
    ensure(degree(&f).map_err(err)? == 2, || "deg(f) != 2".into())?;
    ensure(det_complexity(&f).map_err(err)?.0 == 3, || "D(f) != 3".into())?;
    for x in 0..16 {
        ensure(sensitivity_at(&f, x) == 2, || format!("s_{x}(f) != 2"))?;
        ensure(block_sensitivity_at(&f, x).map_err(err)? == 3, || format!("bs_{x}(f) != 3"))?;
    }
    let g = BooleanFunction::nae_g();
    ensure(degree(&g).map_err(err)? == 2, || "deg(g) != 2".into())?;
    ensure(det_complexity(&g).map_err(err)?.0 == 3, || "D(g) != 3".into())?;
    let h = BooleanFunction::kushilevitz_h();
    ensure(degree(&h).map_err(err)? == 3, || "deg(h) != 3".into())?;
    ensure(det_complexity(&h).map_err(err)?.0 == 6, || "D(h) != 6".into())?;
    Ok("f: deg 2, D 3, s_x 2, bs_x 3 on 16 inputs; g: deg 2, D 3; h: deg 3, D 6".into())
}

fn c2() -> Outcome {
    let s = scheme_f();
    ensure(s.verify().is_valid(), || "verifier rejects".into())?;
    let l = loads(&s).map_err(err)?;
    for e in &l.elements {
        ensure(e.wt == w("10/3"), || format!("wt({}) = {}", e.x, e.wt))?;
        ensure(e.v.iter().all(|v| *v == w("4/3")), || format!("v({}, .) = {:?}", e.x, e.v))?;
    }
    ensure(l.bound == w("5/2"), || format!("bound {}", l.bound))?;
    Ok(format!("{} elements, wt 10/3, v 4/3, bound {}", l.elements.len(), l.bound))
}

fn c3() -> Outcome {
    let s = scheme_g();
    ensure(s.verify().is_valid(), || "verifier rejects".into())?;
    let l = loads(&s).map_err(err)?;
    for (side, wt, v) in [(Side::A, "9", "3*sqrt(2)"), (Side::B, "3", "sqrt(2)")] {
        for e in l.side(side) {
            ensure(e.wt == w(wt), || format!("wt({}) = {}", e.x, e.wt))?;
            ensure(e.v.iter().all(|x| *x == w(v)), || format!("v({}, .) = {:?}", e.x, e.v))?;
        }
    }
    ensure(l.v_max == w("1/3*sqrt(2)"), || format!("v_max {}", l.v_max))?;
    ensure(l.bound == w("3/2*sqrt(2)"), || format!("bound {}", l.bound))?;
    Ok(format!("wt 9 / 3, loads 3*sqrt(2) / sqrt(2), v_max {}, bound {}", l.v_max, l.bound))
}

fn c4() -> Outcome {
    let s = scheme_h();
    ensure(s.verify().is_valid(), || "verifier rejects".into())?;
    let l = loads(&s).map_err(err)?;
    ensure(l.v_a == w("1/6"), || format!("v_A {}", l.v_a))?;
    ensure(l.v_b == w("8/13"), || format!("v_B {}", l.v_b))?;
    ensure(l.v_max == w("2/39*sqrt(39)"), || format!("v_max {}", l.v_max))?;
    let counts = kushilevitz_cover_counts();
    ensure(counts.len() == 30 && counts.iter().all(|c| c.2 == 2), || format!("{counts:?}"))?;
    Ok(format!(
        "v_A 1/6, v_B 8/13, v_max {} (= 2/sqrt(39)), 30 cover counts all 2",
        l.v_max
    ))
}

fn c5_c6() -> (Outcome, Outcome) {
    let start = Instant::now();
    let base = Arc::new(scheme_f());
    let composed = match compose_scheme(base.clone(), base) {
        Ok(c) => c,
        Err(e) => return (Err(e.to_string()), Err("composition failed".into())),
    };
    let scheme = &composed.scheme;
    let c5 = (|| {
        let r = scheme.verify();
        ensure(r.is_valid() && r.exact, || format!("{} violations, exact {}", r.total, r.exact))?;
        let l = loads(scheme).map_err(err)?;
        let wt = w("100000/243");
        ensure(l.elements.iter().all(|e| e.wt == wt), || "wt != (10/3)^5".into())?;
        ensure(l.v_a == w("4/25") && l.v_b == w("4/25"), || format!("v_A {}, v_B {}", l.v_a, l.v_b))?;
        ensure(l.bound == w("25/4"), || format!("bound {}", l.bound))?;
        let t = start.elapsed();
        ensure(t < LIMIT_5, || format!("took {t:.1?}"))?;
        Ok(format!(
            "{} pairs verified exactly, wt (10/3)^5, v_A = v_B = 4/25, bound {} ({t:.1?})",
            r.pairs_checked, l.bound
        ))
    })();
    let c6 = (|| {
        let a = composed.check_block_sums();
        let b = composed.check_weight_products();
        ensure(a.holds() && a.exact, || format!("block sums: {a:?}"))?;
        ensure(b.holds() && b.exact, || format!("weight products: {b:?}"))?;
        Ok(format!("{} (x, z) slices and {} elements, exact", a.checked, b.checked))
    })();
    (c5, c6)
}

fn c7() -> Outcome {
    let f = BooleanFunction::base_f();
    let c = iterated_certificates(&f, 2).map_err(err)?;
    ensure(c.materialized, || "not materialized".into())?;
    ensure(c.s_min == 4 && c.s_max == 4, || format!("s in {}..{}", c.s_min, c.s_max))?;
    ensure(c.bs_lower_min == 9 && c.d_upper == 9 && c.tight(), || format!("{c:?}"))?;
    let deg = degree(&f.iterate(2).map_err(err)?).map_err(err)?;
    ensure(deg == 4, || format!("deg(f^2) = {deg}"))?;
    Ok("s = 4 on 65536 inputs, bs = D = 9 via composed blocks and tree, deg 4".into())
}

/// Criterion 8 cannot pass as worded: the listing contains a pair of two
/// 1-inputs. Every other part is checked first and fails normally.
fn c8() -> Verdict {
    let run = || -> Result<(Vec<usize>, String), String> {
        let expected_bound = ["3/2*sqrt(2)", "9/2"];
        for d in 1..=2 {
            let three = 3u64.pow(d as u32);
            let two = 2u64.pow(d as u32);
            for (set, l, lp) in [(SetId::First, 1, two), (SetId::Second, two, 1)] {
                let c = build_matchings(d, set).map_err(err)?.check().map_err(err)?;
                let p = &c.params;
                ensure(c.bijective && c.disjoint, || format!("d={d} {set:?} not disjoint perfect matchings"))?;
                ensure(
                    (p.m, p.m_prime, p.l, p.l_prime) == (three, three, l, lp),
                    || format!("d={d} {set:?}: {p:?}"),
                )?;
                ensure(p.bound.to_string() == expected_bound[d - 1], || format!("bound {}", p.bound))?;
            }
        }
        let first = build_matchings(1, SetId::First).map_err(err)?;
        let ours = first.render_first().expect("depth 1");
        let listed = listed_first_matching();
        let ours_pairs: Vec<&str> = ours.split("), ").collect();
        let listed_pairs: Vec<&str> = listed.split("), ").collect();
        let differing = (0..8).filter(|&k| ours_pairs[k] != listed_pairs[k]).collect();
        Ok((differing, ours))
    };
    let start = Instant::now();
    let (differing, ours) = match run() {
        Ok(v) => v,
        Err(e) => return Verdict::Fail(e),
    };
    let t = start.elapsed();
    if t >= LIMIT_8 {
        return Verdict::Fail(format!("took {t:.1?}, limit {LIMIT_8:?}"));
    }
    let checks = format!(
        "d=1,2 give m = m' = 3^d, l = 1, l' = 2^d and the mirror, bounds 3/2*sqrt(2) and 9/2 [{t:.2?}]"
    );
    if differing.is_empty() {
        return Verdict::Pass(format!("listing reproduced byte-exactly; {checks}"));
    }
    let f = BooleanFunction::base_f();
    let (u, v) = LISTED_FIRST_MATCHING[CORRECTED_ENTRY.0];
    let bits = |s: &str| u64::from_str_radix(s, 2).unwrap();
    if differing == vec![CORRECTED_ENTRY.0] && f.value(bits(u)) && f.value(bits(v)) {
        Verdict::Unattainable(format!(
            "7/8 listed pairs byte-exact; listed ({u}, {v}) joins two 1-inputs, so no A-B matching \
             contains it; built {ours}; {checks}"
        ))
    } else {
        Verdict::Fail(format!("listing differs at {differing:?}: {ours}"))
    }
}

fn c9() -> Outcome {
    let scheme = balance(&scheme_f()).map_err(err)?;
    let mut worst: f64 = 0.0;
    for seed in 0..RANDOM_ALGORITHMS {
        let alg = QueryAlgorithm::random(4, 2, 2, SUITE_SEED + seed).map_err(err)?;
        let t = progress_trace(&alg, &scheme).map_err(err)?;
        ensure(check_drop_bound(&t), || format!("seed {}: drops {:?}", SUITE_SEED + seed, t.drops()))?;
        worst = worst.max(t.max_drop() / t.drop_limit());
    }
    let parity = QueryAlgorithm::parity2();
    for x in 0..4u64 {
        let p = parity.run(x).1;
        let want = (x.count_ones() % 2) as f64;
        ensure((p - want).abs() <= SIM_TOL, || format!("parity on {x}: {p}"))?;
    }
    let f = Arc::new(BooleanFunction::parity(2).map_err(err)?);
    let unit = unit_scheme(f, &[0, 3], &[1, 2], &[(0, 1), (0, 2), (3, 1), (3, 2)]).map_err(err)?;
    let t = progress_trace(&parity, &unit).map_err(err)?;
    ensure(t.w[1] <= SIM_TOL, || format!("W_1 = {}", t.w[1]))?;
    for (alg, s) in [
        (QueryAlgorithm::identity(4, 2, 3).map_err(err)?, &scheme),
        (QueryAlgorithm::identity(2, 2, 3).map_err(err)?, &unit),
    ] {
        let t = progress_trace(&alg, s).map_err(err)?;
        ensure(t.drops().iter().all(|&d| d == 0.0), || format!("identity drops {:?}", t.drops()))?;
    }
    Ok(format!(
        "{RANDOM_ALGORITHMS} random algorithms (seeds {SUITE_SEED}..) within bound, worst {worst:.3} of limit; \
         parity exact, W_1 = {:.1e}; identity drops 0",
        t.w[1]
    ))
}

fn c10() -> Outcome {
    // balance keeps v_max and every w'(x,y,i) w'(y,x,i)
    for s in [scheme_f(), scheme_g(), scheme_h()] {
        let b = balance(&s).map_err(err)?;
        let (l0, l1) = (loads(&s).map_err(err)?, loads(&b).map_err(err)?);
        ensure(l0.v_max == l1.v_max, || format!("v_max {} -> {}", l0.v_max, l1.v_max))?;
        ensure(l1.v_a == l1.v_b, || "not balanced".into())?;
        for p in 0..s.len() {
            let before = s.directional(p);
            let after = b.directional(p);
            for ((i, f0, g0), (_, f1, g1)) in before.into_iter().zip(after) {
                let (x, y) = (f0 * g0, f1 * g1);
                ensure(x.eq_tol(&y), || format!("pair {p}, index {i}: {x} -> {y}"))?;
            }
        }
    }
    // relation bound against the unit scheme on regular relations
    let mut regular = 0;
    for d in 1..=2 {
        for set in [SetId::First, SetId::Second] {
            let ms = build_matchings(d, set).map_err(err)?;
            let r = ms.relation();
            let rb = relation_bound(&ms.function, &ms.a, &ms.b, &r).map_err(err)?;
            let unit = unit_scheme(ms.function.clone(), &ms.a, &ms.b, &r).map_err(err)?;
            let ub = loads(&unit).map_err(err)?.bound;
            ensure(Weight::Exact(rb.bound).eq_tol(&ub), || format!("{} vs {ub}", rb.bound))?;
            ensure((ub.to_f64() - rb.bound.to_f64()).abs() < WEIGHT_TOL, || "float mismatch".into())?;
            regular += 1;
        }
    }
    // order relations on every built-in
    let names = ["base_f", "nae_g", "kushilevitz_h", "parity(4)", "or(4)", "and(5)"];
    for name in names {
        let f = BooleanFunction::builtin(name).map_err(err)?;
        let r = ComplexityReport::compute(&f, &ReportOptions::default()).map_err(err)?;
        ensure(r.order_relations_hold(), || format!("{name}: {r:?}"))?;
    }
    // polynomial round trip
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for k in 0..RANDOM_FUNCTIONS {
        let n = rng.gen_range(1..=10);
        let table: Vec<bool> = (0..1u64 << n).map(|_| rng.gen()).collect();
        let f = BooleanFunction::from_table(n, &table).map_err(err)?;
        let values = exact_polynomial(&f).map_err(err)?.values();
        ensure(
            values.iter().zip(&table).all(|(&v, &b)| v == b as i64),
            || format!("function {k} (arity {n}) does not round-trip"),
        )?;
    }
    Ok(format!(
        "balance on 3 schemes; {regular} regular relations; order relations on {} built-ins; \
         {RANDOM_FUNCTIONS} polynomial round trips (seed {SUITE_SEED})",
        names.len()
    ))
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let t = start.elapsed();
    match (out, limit) {
        (Ok(_), Some(l)) if t >= l => Err(format!("took {t:.1?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg} [{t:.2?}]")),
        (Err(e), _) => Err(format!("{e} [{t:.2?}]")),
    }
}

fn main() {
    let mut results: Vec<(usize, &str, Verdict)> = vec![
        (1, "base-function measures", timed(Some(LIMIT_1), c1).into()),
        (2, "base scheme for f", timed(Some(LIMIT_2), c2).into()),
        (3, "scheme for g", timed(None, c3).into()),
        (4, "scheme for h", timed(None, c4).into()),
    ];
    let (r5, r6) = c5_c6();
    results.push((5, "composition f^2", r5.into()));
    results.push((6, "block-sum and weight-product identities", r6.into()));
    results.push((7, "iterated certificates", timed(Some(LIMIT_7), c7).into()));
    results.push((8, "matchings", c8()));
    results.push((9, "simulator properties", timed(Some(LIMIT_9), c9).into()));
    results.push((10, "invariant suite", timed(Some(LIMIT_10), c10).into()));

    let (mut passed, mut failed, mut unattainable) = (0, 0, 0);
    for (n, name, r) in &results {
        match r {
            Verdict::Pass(msg) => {
                passed += 1;
                println!("PASS {n:>2} {name}: {msg}");
            }
            Verdict::Fail(msg) => {
                failed += 1;
                println!("FAIL {n:>2} {name}: {msg}");
            }
            Verdict::Unattainable(msg) => {
                unattainable += 1;
                println!("FAIL {n:>2} {name} (unattainable as worded): {msg}");
            }
        }
    }
    println!("{passed} passed, {} failed ({unattainable} unattainable as worded)", failed + unattainable);
    if failed > 0 {
        std::process::exit(1);
    }
}
