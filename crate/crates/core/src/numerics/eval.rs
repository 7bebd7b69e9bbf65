//! Recursive numeric evaluation of expression trees.

use rug::Rational;

use super::approx::{ComplexApprox, Precision, Rigor};
use super::elliptic::{elliptic_e, elliptic_k};
use super::gamma::{gamma, gamma_rational};
use super::polylog::polylog;
use super::zeta::{catalan, hurwitz_zeta, zeta_int};
use crate::core_types::{rational_pow, Bindings, Expr, Func};
use crate::error::{Error, Result};

/// Evaluates `e` with its symbols bound to rationals. Subtrees that fold
/// to a rational are computed exactly first and rounded once.
pub fn eval_expression(e: &Expr, bindings: &Bindings, prec: &Precision) -> Result<ComplexApprox> {
    let bits = prec.bits();
    if let Some(q) = e.fold_rational(bindings) {
        return Ok(ComplexApprox::from_rational(&q, bits));
    }
    let ev = |x: &Expr| eval_expression(x, bindings, prec);
    match e {
        Expr::Int(_) | Expr::Rational(_) => unreachable!("literals fold"),
        Expr::Symbol(s) => Err(Error::UnboundSymbol(s.clone())),
        Expr::I => Ok(ComplexApprox::i(bits)),
        Expr::Pi => Ok(ComplexApprox::pi(bits)),
        Expr::Catalan => Ok(catalan(prec)),
        Expr::Add(xs) => {
            let mut acc = ComplexApprox::zero(bits);
            for x in xs {
                acc = &acc + &ev(x)?;
            }
            Ok(acc)
        }
        Expr::Mul(xs) => {
            let mut acc = ComplexApprox::one(bits);
            for x in xs {
                acc = &acc * &ev(x)?;
            }
            Ok(acc)
        }
        Expr::Neg(x) => Ok(-&ev(x)?),
        Expr::Pow(b, x) => match x.fold_rational(bindings) {
            Some(q) => {
                if let Some(base) = b.fold_rational(bindings) {
                    if let Some(v) = rational_pow(&base, &q) {
                        return Ok(ComplexApprox::from_rational(&v, bits));
                    }
                    if base == 0 {
                        return Err(Error::domain("pow", "zero to a nonpositive power"));
                    }
                }
                ev(b)?.pow_rational(&q)
            }
            None => ev(b)?.pow(&ev(x)?),
        },
        Expr::Apply(f, x) => apply(*f, x, bindings, prec),
        Expr::PolyLog(s, x) => polylog(*s, &ev(x)?, prec),
        Expr::RootOfUnity(n, k) => Ok(ComplexApprox::root_of_unity(*n, *k, bits)),
        Expr::Hyp(s) => {
            let concrete = s.substitute(bindings);
            if let Some(sym) = concrete.upper.iter().chain(concrete.lower.iter()).flat_map(|a| a.symbols()).next() {
                return Err(Error::UnboundSymbol(sym));
            }
            crate::series_eval::eval_pfq(&concrete, prec)
        }
    }
}

fn apply(f: Func, x: &Expr, bindings: &Bindings, prec: &Precision) -> Result<ComplexApprox> {
    let exact = x.fold_rational(bindings);
    if f == Func::Gamma {
        if let Some(q) = &exact {
            return gamma_rational(q, prec);
        }
    }
    if f == Func::Zeta {
        return match &exact {
            Some(q) if *q.denom() == 1 && *q >= 2 => zeta_int(q.numer().to_i64().unwrap_or(i64::MAX), prec),
            _ => {
                let s = eval_expression(x, bindings, prec)?;
                hurwitz_zeta(&s, &Rational::from(1), prec)
            }
        };
    }
    let v = eval_expression(x, bindings, prec)?;
    Ok(match f {
        Func::Log => v.ln()?,
        Func::Exp => v.exp(),
        Func::Sin => v.sin(),
        Func::Cos => v.cos(),
        Func::Sinh => v.sinh(),
        Func::Cosh => v.cosh(),
        Func::ArcSin => v.asin(),
        Func::ArcTan => v.atan(),
        Func::ArcSinh => v.asinh(),
        Func::ArcTanh => v.atanh(),
        Func::Gamma => gamma(&v, prec)?,
        Func::EllipticK => elliptic_k(&v, prec)?,
        Func::EllipticE => elliptic_e(&v, prec)?,
        Func::Zeta => unreachable!(),
    })
}

/// The weaker rigor tag of two values.
pub fn combined_rigor(a: &ComplexApprox, b: &ComplexApprox) -> Rigor {
    a.rigor().weaker(b.rigor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_types::parse_expr;

    fn ev(s: &str) -> ComplexApprox {
        eval_expression(&parse_expr(s).unwrap(), &Bindings::new(), &Precision::new(40)).unwrap()
    }

    #[test]
    fn zero_times_symbol_still_needs_binding() {
        let e = parse_expr("pi^2 + 0*x").unwrap();
        let mut b = Bindings::new();
        assert!(eval_expression(&e, &b, &Precision::new(40)).is_err());
        b.insert("x".into(), Rational::from(7));
        let v = eval_expression(&e, &b, &Precision::new(40)).unwrap();
        assert!(v.abs_diff(&ev("6*zeta(2)")) < 1e-40);
    }

    #[test]
    fn elementary_identities() {
        assert!(ev("asinh(1) - log(1 + sqrt(2))").abs_f64() < 1e-40);
        assert!(ev("unity(6, 1)^6 - 1").abs_f64() < 1e-40);
        assert!(ev("exp(i*pi) + 1").abs_f64() < 1e-40);
        assert!(ev("tan(1/3) - sin(1/3)/cos(1/3)").abs_f64() < 1e-40);
        assert!(ev("beta(1/2, 1/2) - pi").abs_f64() < 1e-40);
        assert!(ev("(1/4)^(1/2) - 1/2").abs_f64() == 0.0);
    }

    #[test]
    fn domain_errors_surface() {
        let p = Precision::new(20);
        assert!(eval_expression(&parse_expr("log(0)").unwrap(), &Bindings::new(), &p).is_err());
        assert!(eval_expression(&parse_expr("gamma(-2)").unwrap(), &Bindings::new(), &p).is_err());
        assert!(eval_expression(&parse_expr("0^(-1)").unwrap(), &Bindings::new(), &p).is_err());
    }
}
