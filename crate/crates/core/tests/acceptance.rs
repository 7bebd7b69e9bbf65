//! Acceptance gate. Prints one PASS/FAIL line per criterion; tolerances are
//! pinned here rather than read from the corpus.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use hyperdist::core_types::{arg_position, parse_expr, ArgPosition, Bindings, Expr, HypSeries, ParamList};
use hyperdist::corpus::{default_corpus, run_all, verify, CorpusEntry, EntryReport, RunOptions};
use hyperdist::numerics::{eval_expression, ComplexApprox, Precision, Rigor};
use hyperdist::transforms::{dist, init, pfd, reduce_root_expr, stir, DistSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn value(e: &Expr, prec: &Precision) -> Option<ComplexApprox> {
    eval_expression(e, &Bindings::new(), prec).ok()
}

fn expr(src: &str) -> Expr {
    parse_expr(src).unwrap()
}

struct Run {
    corpus: Vec<CorpusEntry>,
    reports: BTreeMap<String, EntryReport>,
}

impl Run {
    /// Every sample of `name` within `10^tol`, with at least `min` samples.
    fn check(&self, name: &str, tol: i32, min: usize, failures: &mut Vec<String>) -> f64 {
        let Some(e) = self.reports.get(name) else {
            failures.push(format!("{name} missing"));
            return f64::NAN;
        };
        let bound = 10f64.powi(tol);
        let ok = e.sampling_error.is_none()
            && e.reports.len() >= min
            && e.reports.iter().all(|r| r.error.is_none() && r.abs_diff <= bound);
        if !ok {
            failures.push(format!("{name} (n={}, worst {:.2e})", e.reports.len(), e.worst_diff()));
        }
        e.worst_diff()
    }

    fn entry(&self, name: &str) -> &CorpusEntry {
        self.corpus.iter().find(|e| e.name() == name).unwrap()
    }
}

fn summarise(failures: Vec<String>, what: &str) -> Outcome {
    if failures.is_empty() {
        Outcome::new(true, what.to_string())
    } else {
        Outcome::new(false, format!("{what}; failing: {}", failures.join(", ")))
    }
}

fn criterion_1(run: &Run) -> Outcome {
    let start = Instant::now();
    let prec = Precision::new(40);
    let spec = DistSpec::new(4, 3, Expr::int(1), ParamList::parse(&["1", "1", "1"]).unwrap(), ParamList::parse(&["3/2", "2"]).unwrap());
    let id = match dist(&spec, false) {
        Ok(id) => id,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let Expr::Hyp(s) = &id.lhs else { return Outcome::new(false, "left side is not a series") };
    let sorted = |l: &ParamList| {
        let mut v = l.rationals().unwrap();
        v.sort();
        v
    };
    let want_up: Vec<Rational> = ["1", "1", "1", "5/4", "3/2", "7/4"].iter().map(|x| x.parse().unwrap()).collect();
    let want_lo: Vec<Rational> = ["9/8", "11/8", "13/8", "15/8", "2"].iter().map(|x| x.parse().unwrap()).collect();
    let lists_ok = sorted(&s.upper) == want_up && sorted(&s.lower) == want_lo && s.z.as_rational().is_some_and(|z| z == 1);
    let series = value(&id.lhs, &prec);
    let mut worst: f64 = 0.0;
    let mut ok = lists_ok && series.is_some();
    for name in ["dist-4-3-arcsin", "dist-4-3-log"] {
        let src = &run.entry(name).identity.rhs;
        match (value(src, &prec), &series) {
            (Some(v), Some(s)) => worst = worst.max(v.abs_diff(s)),
            _ => ok = false,
        }
    }
    let elapsed = start.elapsed();
    ok &= worst <= 1e-15 && elapsed < Duration::from_secs(30);
    Outcome::new(ok, format!("lists {}, worst diff {worst:.2e}, {:.2?}", if lists_ok { "match" } else { "differ" }, elapsed))
}

fn criterion_2(run: &Run) -> Outcome {
    let mut failures = Vec::new();
    for name in ["L1", "L2", "L3"] {
        run.check(name, -20, 100, &mut failures);
        let covered = run.reports[name].reports.iter().all(|r| r.err_covers_diff());
        if !covered {
            failures.push(format!("{name} err does not bound diff"));
        }
    }
    run.check("L4", -20, 50, &mut failures);
    summarise(failures, "L1-L3 at 100 bindings, L4 at 50, within 1e-20")
}

fn criterion_3(run: &Run) -> Outcome {
    let mut failures = Vec::new();
    for name in ["K1+", "K1-", "K2", "K3", "K4"] {
        run.check(name, -20, 50, &mut failures);
    }
    summarise(failures, "K1-K4 at 50 bindings within 1e-20")
}

fn criterion_4(run: &Run) -> Outcome {
    let mut failures = Vec::new();
    for group in [11..=15, 21..=26, 31..=36] {
        for n in group {
            run.check(&format!("P{n}"), -12, 20, &mut failures);
        }
    }
    for name in [
        "prop1-6f5-a",
        "prop1-6f5-b",
        "prop1-6f5-c",
        "prop2-7f6",
        "prop2-6f5-a",
        "prop2-6f5-b",
        "prop3-9f8-a",
        "prop3-9f8-b",
        "prop3-9f8-c",
        "bonus-12f11-gamma-form",
        "bonus-12f11-radical-form",
    ] {
        run.check(name, -15, 1, &mut failures);
    }
    summarise(failures, "17 propositions at 20 bindings within 1e-12, 11 specialisations within 1e-15")
}

fn criterion_5(run: &Run) -> Outcome {
    let mut failures = Vec::new();
    let names = [
        "dist-7f6-catalan",
        "dist-8f7-li2",
        "dist-7f6-gamma-a",
        "dist-7f6-gamma-b",
        "dist-8f7-gamma",
        "dist-9f8-gamma",
        "dist-5f4-li3",
        "dist-8f7-li2-b",
        "dist-9f8-li3",
        "dist-6f5-li3",
        "dist-6f5-li4",
        "dist-5f4-at-1/64",
        "dist-6f5-at-1/16",
    ];
    let mut inside = 0;
    for name in names {
        run.check(name, -18, 1, &mut failures);
        let Expr::Hyp(s) = &run.entry(name).identity.lhs else { continue };
        if arg_position(&s.z, 128).unwrap() == ArgPosition::Inside {
            inside += 1;
            let lhs = run.reports[name].reports[0].lhs_value.as_ref().map(|v| v.rigor());
            if lhs != Some(Rigor::Rigorous) {
                failures.push(format!("{name} not rigorous"));
            }
        }
    }
    summarise(failures, format!("13 identities within 1e-18, {inside} inside the disk rigorous").as_str())
}

fn criterion_6(run: &Run) -> Outcome {
    let mut failures = Vec::new();
    run.check("bessel-0f23", -20, 1, &mut failures);
    let bessel_time = run.reports["bessel-0f23"].elapsed();
    if bessel_time >= Duration::from_secs(1) {
        failures.push(format!("bessel-0f23 took {bessel_time:.2?}"));
    }
    for name in ["central-binomial-6f5-a", "central-binomial-6f5-b", "binomial-3n-4f3"] {
        run.check(name, -25, 1, &mut failures);
    }
    for name in ["elliptic-6f5-at-1", "elliptic-6f5-at-1/4096", "elliptic-4f3-K-product", "elliptic-8f7-two-K"] {
        run.check(name, -15, 1, &mut failures);
    }
    summarise(failures, format!("Bessel in {bessel_time:.2?}, binomial within 1e-25, elliptic within 1e-15").as_str())
}

fn criterion_7(run: &Run) -> Outcome {
    let prec = Precision::new(40);
    let gamma_form = run.entry("12f11-gamma-form");
    let algebraic = run.entry("12f11-algebraic-form");
    let values: Vec<Option<ComplexApprox>> =
        [&gamma_form.identity.lhs, &gamma_form.identity.rhs, &algebraic.identity.rhs].iter().map(|e| value(e, &prec)).collect();
    if values.iter().any(Option::is_none) {
        return Outcome::new(false, "evaluation failed");
    }
    let v: Vec<ComplexApprox> = values.into_iter().flatten().collect();
    let worst = [(0, 1), (0, 2), (1, 2)].iter().map(|&(i, j)| v[i].abs_diff(&v[j])).fold(0.0, f64::max);
    Outcome::new(worst <= 1e-15, format!("worst pairwise diff {worst:.2e}"))
}

fn rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let d = rng.gen_range(1..=24i64);
    Rational::from((rng.gen_range(lo * d + 1..=hi * d), d))
}

fn small_z(rng: &mut ChaCha8Rng) -> Expr {
    let d = rng.gen_range(1..=12i64);
    let n = rng.gen_range(1..=d);
    let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
    Expr::rational(Rational::from((sign * n, 2 * d)))
}

fn params(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rational(rng, 0, 3)).collect()
}

fn criterion_8() -> Outcome {
    let prec = Precision::new(40);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut worst_err: f64 = 0.0;
    let mut check = |label: &str, id: hyperdist::Result<hyperdist::core_types::Identity>, failures: &mut Vec<String>| {
        let r = id.and_then(|id| verify(&id, &prec, -25));
        match r {
            Ok(r) if r.passed && r.err_covers_diff() && r.err_bound() <= 1e-25 && r.rigor == Rigor::Rigorous => {
                worst_err = worst_err.max(r.err_bound());
            }
            Ok(r) => failures.push(format!("{label}: diff {:.2e} err {:.2e}", r.abs_diff, r.err_bound())),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };
    for _ in 0..200 {
        let n = rng.gen_range(1..=4u32);
        let m = rng.gen_range(0..n);
        let q = rng.gen_range(0..=3usize);
        let p = rng.gen_range(0..=(q + 1).min(3));
        let (a, b) = (params(&mut rng, p), params(&mut rng, q));
        let spec = DistSpec::new(n, m, small_z(&mut rng), ParamList::from_rationals(a), ParamList::from_rationals(b));
        check("dist", dist(&spec, false), &mut failures);
    }
    let series = |up: Vec<Rational>, lo: Vec<Rational>, z: Expr| HypSeries::from_rationals(up, lo, z);
    for _ in 0..200 {
        let low = rational(&mut rng, 0, 3);
        let mut up = vec![Rational::from(&low + rng.gen_range(0..=3u32))];
        up.extend(params(&mut rng, 1));
        let mut lo = vec![low];
        lo.extend(params(&mut rng, 1));
        let z = small_z(&mut rng);
        check("stir", series(up, lo, z).and_then(|s| stir(&s, 0, 0)), &mut failures);
    }
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(1..=4u32);
        let (a, b) = (params(&mut rng, 1), params(&mut rng, 1));
        if a.iter().chain(&b).any(|x| *x.denom() == 1 && *x <= n) {
            continue;
        }
        let mut up = vec![Rational::from(1)];
        up.extend(a);
        let mut lo = vec![Rational::from(n + 1)];
        lo.extend(b);
        let z = small_z(&mut rng);
        check("init", series(up, lo, z).and_then(|s| init(&s, 0, 0)), &mut failures);
        done += 1;
    }
    let mut done = 0;
    while done < 200 {
        let k = rng.gen_range(1..=3usize);
        let shifts = params(&mut rng, k);
        if (1..k).any(|i| shifts[..i].contains(&shifts[i])) {
            continue;
        }
        let mut up = shifts.clone();
        up.extend(params(&mut rng, 1));
        let mut lo: Vec<Rational> = shifts.iter().map(|x| Rational::from(x + 1)).collect();
        lo.extend(params(&mut rng, 1));
        let pairs: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
        let z = small_z(&mut rng);
        check("pfd", series(up, lo, z).and_then(|s| pfd(&s, &pairs)), &mut failures);
        done += 1;
    }
    let mut annihilated = true;
    for n in 1..=12u64 {
        for j in 0..n as i64 {
            for m in 0..n as i64 {
                let sum = Expr::Add((0..n as i64).map(|k| Expr::RootOfUnity(n, k * (j - m))).collect());
                let want = if j == m { vec![n as i64] } else { vec![] };
                annihilated &= reduce_root_expr(&sum, n) == Some(want);
            }
        }
    }
    if !annihilated {
        failures.push("root-of-unity annihilation".into());
    }
    failures.truncate(5);
    summarise(failures, format!("800 rewrites within combined rigorous err (max {worst_err:.1e}), annihilation exact").as_str())
}

fn criterion_9(run: &Run) -> Outcome {
    let prec = Precision::new(50);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut pair = |label: &str, lhs: String, rhs: String| match (value(&expr(&lhs), &prec), value(&expr(&rhs), &prec)) {
        (Some(a), Some(b)) => {
            let d = a.abs_diff(&b);
            worst = worst.max(d);
            if d > 1e-30 {
                failures.push(format!("{label}: {d:.2e}"));
            }
        }
        _ => failures.push(format!("{label}: evaluation failed")),
    };
    for z in ["1/7", "1/3", "1/2", "5/8", "23/24"] {
        pair("reflection", format!("gamma({z})*gamma(1 - {z})"), format!("pi/sin(pi*{z})"));
    }
    for (n, z) in [(2, "1/3"), (3, "5/7"), (4, "2/5"), (5, "7/4"), (6, "1/11")] {
        let lhs: Vec<String> = (0..n).map(|k| format!("gamma({z} + {k}/{n})")).collect();
        pair("multiplication", lhs.join("*"), format!("(2*pi)^({}/2)*{n}^(1/2 - {n}*{z})*gamma({n}*{z})", n - 1));
    }
    for m in ["1/10", "1/3", "1/2", "4/5"] {
        pair("legendre", format!("E({m})*K(1 - {m}) + E(1 - {m})*K({m}) - K({m})*K(1 - {m})"), "pi/2".into());
    }
    for z in ["1/2", "-2/3", "1/3 + i/2", "(1 - i)/2"] {
        for s in 2..=4 {
            pair("duplication", format!("Li{s}({z}) + Li{s}(-({z}))"), format!("2^(1 - {s})*Li{s}(({z})^2)"));
        }
    }
    for name in ["K-singular-value", "E-singular-value"] {
        let id = &run.entry(name).identity;
        pair(name, id.lhs.to_string(), id.rhs.to_string());
    }
    summarise(failures, format!("worst diff {worst:.2e} at 50 digits").as_str())
}

fn criterion_10() -> Outcome {
    let go = || {
        Command::new(env!("CARGO_BIN_EXE_hyperdist"))
            .args(["corpus", "run", "--json", "--seed", "3"])
            .env_remove("HYPERDIST_CORPUS")
            .output()
            .unwrap()
    };
    let (a, b) = (go(), go());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = same && a.status.success() && b.status.success();
    Outcome::new(ok, format!("{} bytes, {}", a.stdout.len(), if same { "identical" } else { "different" }))
}

#[test]
fn acceptance() {
    let corpus = default_corpus().unwrap();
    let summary = run_all(&corpus, &RunOptions::default());
    let reports = summary.entries.iter().map(|e| (e.name.clone(), e.clone())).collect();
    let run = Run { corpus, reports };

    let outcomes = [
        ("distribution example", criterion_1(&run)),
        ("Dougall lemma", criterion_2(&run)),
        ("special-value lemma", criterion_3(&run)),
        ("propositions and specialisations", criterion_4(&run)),
        ("polylogarithm corpus", criterion_5(&run)),
        ("miscellany", criterion_6(&run)),
        ("12F11 triple", criterion_7(&run)),
        ("rewrite soundness", criterion_8()),
        ("numerics", criterion_9(&run)),
        ("determinism", criterion_10()),
    ];
    // straight to the process stdout so the lines survive test capture
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for (i, (title, o)) in outcomes.iter().enumerate() {
        writeln!(out, "{} {:2} {title}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail).unwrap();
    }
    out.flush().unwrap();
    let failed: Vec<usize> = outcomes.iter().enumerate().filter(|(_, (_, o))| !o.passed).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
