mod common;

use std::collections::BTreeMap;

use common::{bind, eval, q, rational_in};
use hyperdist::core_types::{parse_expr, Bindings, Expr};
use hyperdist::corpus::{sample_bindings, verify, CorpusEntry, EntryStatus, VerifyMode};
use hyperdist::numerics::Precision;
use hyperdist::theorems::{apply_theorem, match_closed_form, templates, Template, TheoremId};
use proptest::prelude::*;
use rug::Rational;

fn as_entry(t: &Template) -> CorpusEntry {
    let mut ranges = BTreeMap::new();
    if let Expr::Symbol(z) = &t.lhs.z {
        ranges.insert(z.clone(), (q(0, 1), q(1, 1)));
    }
    CorpusEntry {
        identity: t.identity(),
        class_tags: Vec::new(),
        verify_mode: VerifyMode::Parametric { samples: 50 },
        expected_tolerance: -20,
        ranges,
        status: EntryStatus::Active,
    }
}

#[test]
fn every_template_holds_and_is_recognised() {
    let prec = Precision::new(40);
    for t in templates() {
        let entry = as_entry(t);
        for b in sample_bindings(&entry, 50, 11).unwrap() {
            let id = entry.instantiate(&b).unwrap();
            let r = verify(&id, &prec, -20).unwrap();
            assert!(r.passed && r.err_covers_diff(), "{} at {b:?}: diff {:.2e}, err {:.2e}", t.label(), r.abs_diff, r.err_bound());

            let Expr::Hyp(s) = &id.lhs else { panic!("{}", t.label()) };
            let rhs = r.rhs_value.unwrap();
            let found = match_closed_form(s).into_iter().any(|m| {
                m.theorem == t.theorem
                    && m.variant == t.variant
                    && eval(&m.closed_form, &prec).abs_diff(&rhs) <= 1e-30
            });
            assert!(found, "{} not recovered from {s}", t.label());
        }
    }
}

fn rhs_value(t: TheoremId, b: &Bindings, prec: &Precision) -> Option<hyperdist::numerics::ComplexApprox> {
    apply_theorem(t, b).ok().map(|id| eval(&id.rhs, prec))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn l1_is_the_limit_of_l3(a in rational_in(-1, 3), b in rational_in(-3, 3), c in rational_in(-3, 3)) {
        let prec = Precision::new(40);
        let d = (a.clone() + 1u32) / 2u32;
        let l1 = rhs_value(TheoremId::DougallL1, &bind(&[("a", a.clone()), ("b", b.clone()), ("c", c.clone())]), &prec);
        let l3 = rhs_value(TheoremId::DougallL3, &bind(&[("a", a), ("b", b), ("c", c), ("d", d)]), &prec);
        prop_assume!(l1.is_some() && l3.is_some());
        let (l1, l3) = (l1.unwrap(), l3.unwrap());
        prop_assert!(l1.abs_diff(&l3) <= 1e-30, "{} vs {}", l1.to_decimal(30), l3.to_decimal(30));
    }

    #[test]
    fn clausen_product(a in rational_in(-3, 3), b in rational_in(-3, 3), z in rational_in(-1, 1)) {
        let z: Rational = z / 2u32;
        prop_assume!(*b.denom() != 1);
        let prec = Precision::new(40);
        let lhs = parse_expr(&format!("3F2(1/2, 1/2 - ({a}), ({a}) + 1/2; 1 - ({b}), ({b}) + 1; {z})")).unwrap();
        let half = format!("(1 - sqrt(1 - ({z})))/2");
        let rhs = parse_expr(&format!(
            "2F1(1/2 - ({a}), ({a}) + 1/2; 1 - ({b}); {half})*2F1(1/2 - ({a}), ({a}) + 1/2; ({b}) + 1; {half})"
        ))
        .unwrap();
        let (l, r) = (eval(&lhs, &prec), eval(&rhs, &prec));
        prop_assert!(l.abs_diff(&r) <= 1e-30, "{} vs {}", l.to_decimal(30), r.to_decimal(30));
    }
}
