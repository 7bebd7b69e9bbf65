#![allow(dead_code)]

use hyperdist::core_types::{Bindings, Expr};
use hyperdist::numerics::{eval_expression, ComplexApprox, Precision};
use proptest::prelude::*;
use rug::Rational;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Rationals with denominator at most 24 in the half-open interval `(lo, hi]`.
pub fn rational_in(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (1i64..=24).prop_flat_map(move |d| (lo * d + 1..=hi * d).prop_map(move |n| q(n, d)))
}

/// Parameters in `(0, 3]`.
pub fn param() -> impl Strategy<Value = Rational> {
    rational_in(0, 3)
}

/// Nonzero rational arguments with `|z| <= 1/2`.
pub fn small_z() -> impl Strategy<Value = Rational> {
    (1i64..=12)
        .prop_flat_map(|d| (Just(d), 1..=d, any::<bool>()))
        .prop_map(|(d, n, neg)| if neg { -q(n, 2 * d) } else { q(n, 2 * d) })
}

pub fn eval(e: &Expr, prec: &Precision) -> ComplexApprox {
    eval_expression(e, &Bindings::new(), prec).unwrap_or_else(|err| panic!("{e}: {err}"))
}

pub fn bind(pairs: &[(&str, Rational)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
