mod common;

use common::{param, q, rational_in};
use hyperdist::core_types::{convergence_class, parse_expr, ConvergenceClass, Expr, HypSeries};
use hyperdist::corpus::{default_corpus, VerifyMode};
use hyperdist::numerics::Precision;
use hyperdist::series_eval::{eval_pfq, eval_with_plan, plan, EvalPlan};
use proptest::prelude::*;
use rug::Rational;

/// A `_{q+1}F_q` with parameters in `(0, 3]`.
fn balanced() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
    (0usize..3).prop_flat_map(|q| (prop::collection::vec(param(), q + 1), prop::collection::vec(param(), q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conjugate_argument_gives_conjugate_value(
        (up, lo) in balanced(),
        x in rational_in(-1, 1),
        y in rational_in(-1, 1),
    ) {
        let (x, y) = (x * q(1, 3), y * q(1, 3));
        let at = |sign: &str| {
            let z = parse_expr(&format!("({x}) {sign} ({y})*i")).unwrap();
            eval_pfq(&HypSeries::from_rationals(up.clone(), lo.clone(), z).unwrap(), &Precision::new(40)).unwrap()
        };
        let (v, w) = (at("+"), at("-"));
        prop_assert!(v.conj().abs_diff(&w) <= v.err() + w.err(), "{} vs {}", v.to_decimal(30), w.to_decimal(30));
    }

    #[test]
    fn refinement_stays_inside_reported_error((up, lo) in balanced(), z in common::small_z()) {
        let s = HypSeries::from_rationals(up, lo, Expr::rational(z)).unwrap();
        let coarse = eval_pfq(&s, &Precision::new(30)).unwrap();
        let fine = eval_pfq(&s, &Precision::new(60)).unwrap();
        prop_assert!(coarse.abs_diff(&fine) <= coarse.err(), "{} vs {}", coarse.to_decimal(30), fine.to_decimal(50));
    }
}

/// Every series at `z = +-1` appearing in a fixed corpus entry.
fn boundary_series() -> Vec<HypSeries> {
    let mut out = Vec::new();
    for e in default_corpus().unwrap() {
        if e.verify_mode != VerifyMode::Fixed {
            continue;
        }
        for side in [&e.identity.lhs, &e.identity.rhs] {
            side.visit(&mut |x| {
                if let Expr::Hyp(s) = x {
                    if matches!(convergence_class(s), Ok(ConvergenceClass::BoundaryAbs | ConvergenceClass::BoundaryCond)) {
                        out.push((**s).clone());
                    }
                }
            });
        }
    }
    out
}

#[test]
fn doubled_tail_parameters_agree() {
    let prec = Precision::new(40);
    let all = boundary_series();
    assert!(all.len() >= 30, "{}", all.len());
    for s in all {
        let p = plan(&s, &prec).unwrap();
        let wider = EvalPlan { head_terms: 2 * p.head_terms, tail_order: p.tail_order + 2, ..p };
        let a = eval_with_plan(&s, &p, &prec).unwrap();
        let b = eval_with_plan(&s, &wider, &prec).unwrap();
        assert!(a.abs_diff(&b) <= a.err() + b.err(), "{s}: {:.2e} > {:.2e} + {:.2e}", a.abs_diff(&b), a.err(), b.err());
    }
}
