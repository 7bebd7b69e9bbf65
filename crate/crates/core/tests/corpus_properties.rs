use hyperdist::core_types::{Expr, Identity};
use hyperdist::corpus::{default_corpus, parse_corpus, run_all, serialize, to_text, verify, RunOptions, VerifyMode, SHIPPED_CORPUS};
use hyperdist::numerics::Precision;
use rug::Integer;

/// Negates the first nonzero numeric literal met in a pre-order walk.
fn flip_first_literal(e: &Expr, done: &mut bool) -> Expr {
    if *done {
        return e.clone();
    }
    match e {
        Expr::Int(n) if *n != 0 => {
            *done = true;
            Expr::Int(Integer::from(-n))
        }
        Expr::Rational(r) if *r != 0 => {
            *done = true;
            Expr::Rational(-r.clone())
        }
        _ => e.map_children(&mut |c| flip_first_literal(c, done)),
    }
}

#[test]
fn fixed_entries_pass_at_two_precisions() {
    let corpus = default_corpus().unwrap();
    let fixed: Vec<_> = corpus.iter().filter(|e| e.verify_mode == VerifyMode::Fixed).collect();
    assert!(fixed.len() >= 40);
    for e in fixed {
        let lo = verify(&e.identity, &Precision::new(40), e.expected_tolerance).unwrap();
        let hi = verify(&e.identity, &Precision::new(60), e.expected_tolerance).unwrap();
        assert!(lo.passed && hi.passed, "{}: {:.2e} / {:.2e}", e.name(), lo.abs_diff, hi.abs_diff);
        // the finer value must sit inside the coarse one's reported error
        for (a, b) in [(&lo.lhs_value, &hi.lhs_value), (&lo.rhs_value, &hi.rhs_value)] {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert!(a.abs_diff(b) <= a.err(), "{}: diff {:.3e} err {:.3e} {:?}", e.name(), a.abs_diff(b), a.err(), a.rigor());
        }
    }
}

#[test]
fn mutated_right_sides_fail() {
    let corpus = default_corpus().unwrap();
    let picked: Vec<_> = corpus.iter().filter(|e| e.verify_mode == VerifyMode::Fixed).step_by(4).take(10).collect();
    assert_eq!(picked.len(), 10);
    for e in picked {
        let mut done = false;
        let rhs = flip_first_literal(&e.identity.rhs, &mut done);
        assert!(done, "{} has no literal", e.name());
        let id = Identity { rhs, ..e.identity.clone() };
        let passed = verify(&id, &Precision::new(40), e.expected_tolerance).map(|r| r.passed).unwrap_or(false);
        assert!(!passed, "{} still passes after mutation: {}", e.name(), id.rhs);
    }
}

#[test]
fn shipped_file_round_trips() {
    let entries = parse_corpus(SHIPPED_CORPUS).unwrap();
    assert_eq!(to_text(&serialize(&entries)), SHIPPED_CORPUS);
}

#[test]
fn equal_seeds_give_equal_reports() {
    let corpus = default_corpus().unwrap();
    let opts = RunOptions { seed: 5, tag: Some("lemma".into()), ..RunOptions::default() };
    let a = run_all(&corpus, &opts).to_json(false);
    let b = run_all(&corpus, &RunOptions { threads: Some(1), ..opts.clone() }).to_json(false);
    assert_eq!(a, b);
    let c = run_all(&corpus, &RunOptions { seed: 6, ..opts }).to_json(false);
    assert_ne!(a, c);
}

#[test]
fn failures_carry_their_binding() {
    let mut corpus = default_corpus().unwrap();
    corpus.retain(|e| e.name() == "L2");
    let mut done = false;
    corpus[0].identity.rhs = flip_first_literal(&corpus[0].identity.rhs, &mut done);
    let summary = run_all(&corpus, &RunOptions { seed: 1, ..RunOptions::default() });
    assert!(!summary.all_passed());
    let bad = summary.entries[0].reports.iter().find(|r| !r.passed).unwrap();
    let binding = bad.binding.as_ref().unwrap();
    assert!(binding.contains_key("a") && binding.contains_key("b") && binding.contains_key("c"));
}
