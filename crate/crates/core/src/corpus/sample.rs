//! Random rational bindings for parametric entries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use super::CorpusEntry;
use crate::core_types::{Bindings, Expr, Func};
use crate::error::{Error, Result};

const MAX_DENOMINATOR: i64 = 24;
const ATTEMPTS: usize = 200_000;

/// Per-entry stream so that adding entries does not move other samples.
fn entry_rng(name: &str, seed: u64) -> ChaCha8Rng {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn default_range() -> (Rational, Rational) {
    (Rational::from(-3), Rational::from(3))
}

fn draw(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    loop {
        let d = rng.gen_range(1..=MAX_DENOMINATOR);
        // numerators strictly inside (lo, hi)
        let lo_n: Integer = Integer::from((lo.clone() * d).floor_ref()) + 1;
        let hi_n: Integer = Integer::from((hi.clone() * d).ceil_ref()) - 1;
        let (Some(a), Some(b)) = (lo_n.to_i64(), hi_n.to_i64()) else { continue };
        if a > b {
            continue;
        }
        return Rational::from((rng.gen_range(a..=b), d));
    }
}

fn exact(e: &Expr) -> Option<Rational> {
    e.fold_rational(&Bindings::new())
}

/// `pi`-linear form `c*pi + d` of an expression, when it has one.
fn pi_linear(e: &Expr) -> Option<(Rational, Rational)> {
    match e {
        Expr::Pi => Some((Rational::from(1), Rational::new())),
        Expr::Neg(x) => pi_linear(x).map(|(c, d)| (-c, -d)),
        Expr::Add(xs) => xs.iter().try_fold((Rational::new(), Rational::new()), |(c, d), x| {
            let (c2, d2) = pi_linear(x)?;
            Some((c + c2, d + d2))
        }),
        Expr::Mul(xs) => {
            let mut scale = Rational::from(1);
            let mut pi: Option<(Rational, Rational)> = None;
            for x in xs {
                match exact(x) {
                    Some(q) => scale *= q,
                    None if pi.is_none() => pi = Some(pi_linear(x)?),
                    None => return None,
                }
            }
            let (c, d) = pi.unwrap_or((Rational::new(), Rational::from(1)));
            Some((c * &scale, d * scale))
        }
        other => exact(other).map(|q| (Rational::new(), q)),
    }
}

/// True if a concrete expression hits a gamma pole or divides by a
/// vanishing sine or cosine.
fn has_pole(e: &Expr) -> bool {
    let mut pole = false;
    e.visit(&mut |x| match x {
        Expr::Apply(Func::Gamma, a) => {
            if let Some(q) = exact(a) {
                pole |= *q.denom() == 1 && q <= 0;
            }
        }
        Expr::Pow(b, p) if exact(p).is_some_and(|q| q < 0) => {
            if let Expr::Apply(f @ (Func::Sin | Func::Cos), a) = b.as_ref() {
                if let Some((c, d)) = pi_linear(a) {
                    if d == 0 {
                        let shifted = if *f == Func::Cos { c + Rational::from((1, 2)) } else { c };
                        pole |= *shifted.denom() == 1;
                    }
                }
            }
        }
        _ => {}
    });
    pole
}

/// True if every series in the concrete identity is well defined and
/// non-terminating, and neither side has an exact pole.
pub fn admissible(lhs: &Expr, rhs: &Expr) -> bool {
    let mut ok = true;
    for side in [lhs, rhs] {
        side.visit(&mut |x| {
            if let Expr::Hyp(s) = x {
                ok &= s.validate().is_ok() && !s.upper.contains_nonpositive_integer();
            }
        });
        ok &= !has_pole(side);
    }
    ok
}

fn attempt(entry: &CorpusEntry, rng: &mut ChaCha8Rng) -> Option<Bindings> {
    let mut b = Bindings::new();
    for s in &entry.identity.free_symbols {
        let (lo, hi) = entry.ranges.get(s).cloned().unwrap_or_else(default_range);
        b.insert(s.clone(), draw(rng, &lo, &hi));
    }
    let id = entry.identity.instantiate(&b).ok()?;
    admissible(&id.lhs, &id.rhs).then_some(b)
}

pub(super) fn constraints_satisfiable(entry: &CorpusEntry) -> bool {
    let mut rng = entry_rng(entry.name(), 0);
    (0..ATTEMPTS).any(|_| attempt(entry, &mut rng).is_some())
}

/// `samples` distinct admissible bindings for a parametric entry, fixed by
/// the entry name and `seed`.
pub fn sample_bindings(entry: &CorpusEntry, samples: u32, seed: u64) -> Result<Vec<Bindings>> {
    let mut rng = entry_rng(entry.name(), seed);
    let mut out: Vec<Bindings> = Vec::new();
    for _ in 0..ATTEMPTS {
        if out.len() == samples as usize {
            return Ok(out);
        }
        if let Some(b) = attempt(entry, &mut rng) {
            if !out.contains(&b) {
                out.push(b);
            }
        }
    }
    if out.len() == samples as usize {
        return Ok(out);
    }
    Err(Error::Validation {
        entry: entry.name().to_string(),
        message: format!("found only {} of {samples} admissible bindings", out.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_types::parse_expr;

    #[test]
    fn draws_stay_inside() {
        let mut rng = entry_rng("x", 7);
        let (lo, hi) = (Rational::from((-1, 2)), Rational::from((1, 3)));
        for _ in 0..500 {
            let q = draw(&mut rng, &lo, &hi);
            assert!(q > lo && q < hi && *q.denom() <= 24);
        }
    }

    #[test]
    fn poles_are_detected() {
        let p = |s: &str| has_pole(&parse_expr(s).unwrap());
        assert!(p("gamma(-2)"));
        assert!(!p("gamma(-5/2)"));
        assert!(p("csc(3*pi)"));
        assert!(!p("csc(pi/3)"));
        assert!(p("sec((3*pi*(1/3) + pi)/4)"));
        assert!(!p("sec(pi/4)"));
        assert!(!p("sin(pi)"));
    }
}
