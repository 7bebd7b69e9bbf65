//! Exact arithmetic in the cyclotomic field, enough to decide when sums
//! of roots of unity vanish.

use crate::core_types::Expr;

fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Remainder of `num` modulo the monic polynomial `den`.
fn rem_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = trim(num.to_vec());
    let d = den.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        for (i, c) in den.iter().enumerate() {
            r[shift + i] -= lead * c;
        }
        r = trim(r);
    }
    r
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let d = den.len() - 1;
    let mut quot = vec![0; r.len().saturating_sub(d)];
    for shift in (0..quot.len()).rev() {
        let lead = r[shift + d];
        quot[shift] = lead;
        for (i, c) in den.iter().enumerate() {
            r[shift + i] -= lead * c;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0), "inexact division");
    quot
}

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        p = div_monic(&p, &cyclotomic_poly(d));
    }
    p
}

/// Reduces a polynomial in `w = exp(2 pi i / n)` to its canonical form
/// modulo the minimal polynomial of `w`. Zero reduces to the empty vector.
pub fn reduce_mod_cyclotomic(poly: &[i64], n: u64) -> Vec<i64> {
    rem_monic(poly, &cyclotomic_poly(n))
}

/// `sum_{k=0}^{n-1} w^{k j}` in reduced form: `[n]` when `n | j`, else empty.
pub fn root_sum(n: u64, j: i64) -> Vec<i64> {
    let mut p = vec![0i64; n as usize];
    for k in 0..n as i64 {
        p[(k * j).rem_euclid(n as i64) as usize] += 1;
    }
    reduce_mod_cyclotomic(&p, n)
}

/// Reduces a sum of integer multiples of roots of unity of order
/// dividing `n`. Returns `None` for any other shape of expression.
pub fn reduce_root_expr(e: &Expr, n: u64) -> Option<Vec<i64>> {
    let mut p = vec![0i64; n as usize];
    let terms: Vec<&Expr> = match e {
        Expr::Add(xs) => xs.iter().collect(),
        other => vec![other],
    };
    for t in terms {
        let (c, k) = root_term(t, n)?;
        p[k] += c;
    }
    Some(reduce_mod_cyclotomic(&p, n))
}

fn root_term(t: &Expr, n: u64) -> Option<(i64, usize)> {
    match t {
        Expr::Int(c) => Some((c.to_i64()?, 0)),
        Expr::RootOfUnity(m, k) if n % m == 0 => Some((1, (k * (n / m) as i64).rem_euclid(n as i64) as usize)),
        Expr::Neg(x) => root_term(x, n).map(|(c, k)| (-c, k)),
        Expr::Mul(xs) => {
            let mut c = 1i64;
            let mut k = 0usize;
            for x in xs {
                let (c2, k2) = root_term(x, n)?;
                c = c.checked_mul(c2)?;
                k = (k + k2) % n as usize;
            }
            Some((c, k))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(9).len(), 7);
    }

    #[test]
    fn annihilation() {
        for n in 1..=12u64 {
            for j in -15..15i64 {
                let expect = if j.rem_euclid(n as i64) == 0 { vec![n as i64] } else { vec![] };
                assert_eq!(root_sum(n, j), expect, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn expression_sums() {
        let e = Expr::Add(vec![
            Expr::int(1),
            Expr::RootOfUnity(3, 1),
            Expr::Mul(vec![Expr::int(1), Expr::RootOfUnity(6, 4)]),
        ]);
        assert_eq!(reduce_root_expr(&e, 6), Some(vec![]));
        assert_eq!(reduce_root_expr(&Expr::Pi, 6), None);
    }
}
