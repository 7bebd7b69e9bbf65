//! Exact Bernoulli numbers and polynomials.

use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

fn cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    let mut table = cache().lock().expect("bernoulli cache poisoned");
    while table.len() <= n {
        let m = table.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, b) in table.iter().enumerate() {
            acc += Rational::from(&binom * b.numer()) / b.denom();
            binom *= (m + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        // binom is now C(m+1, m) = m + 1
        let bm = -acc / Rational::from(binom);
        table.push(bm);
    }
    table[n].clone()
}

/// `B_n(x)` for rational `x`.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    let mut xp = vec![Rational::from(1); n + 1];
    for j in 1..=n {
        xp[j] = Rational::from(&xp[j - 1] * x);
    }
    // sum_k C(n,k) B_k x^{n-k}
    let mut acc = Rational::new();
    let mut binom = Integer::from(1);
    for k in 0..=n {
        acc += Rational::from(&binom * bernoulli(k)) * &xp[n - k];
        binom *= (n - k) as u64;
        binom /= (k + 1) as u64;
    }
    acc
}
