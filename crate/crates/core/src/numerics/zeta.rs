//! Hurwitz zeta by Euler-Maclaurin summation, and the constants built on it.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::{Complex, Float, Integer, Rational};

use super::approx::{complex_abs, unit, ComplexApprox, Precision, Rigor};
use super::bernoulli::bernoulli;
use crate::error::{Error, Result};

/// `zeta(s, a) = sum_{k>=0} (a+k)^-s` for `Re s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: &ComplexApprox, a: &Rational, prec: &Precision) -> Result<ComplexApprox> {
    let sigma = s.re().to_f64();
    if sigma <= 1.0 {
        return Err(Error::domain("hurwitz_zeta", format!("Re(s) = {sigma} <= 1")));
    }
    if *a <= 0 {
        return Err(Error::domain("hurwitz_zeta", format!("a = {a} <= 0")));
    }
    let bits = prec.bits().max(s.bits());
    let (value, trunc) = hurwitz_core(s.value(), a, bits + 16);
    let value = Complex::with_val(bits, &value);
    let abs = complex_abs(&value);
    // d/ds zeta(s,a) is bounded by |zeta(sigma,a)| (|ln a| + 1/(sigma-1) + 1).
    let af = a.to_f64();
    let dz = abs * (af.ln().abs() + 1.0 / (sigma - 1.0) + 1.0);
    let err = trunc + abs * unit(bits) * 4.0 + dz * s.err();
    Ok(ComplexApprox::new(value, err, s.rigor()))
}

/// Core Euler-Maclaurin evaluation at working precision `wb`; returns the
/// value and a bound on the truncation plus accumulated rounding error.
pub(crate) fn hurwitz_core(s: &Complex, a: &Rational, wb: u32) -> (Complex, f64) {
    let sigma = s.real().to_f64();
    let s_abs = complex_abs(s);
    let af = a.to_f64();
    let x_min = (wb as f64) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI) * 1.3 + s_abs + 4.0;
    let shift = if af < x_min { (x_min - af).ceil() as u64 } else { 0 };

    let mut sum = Complex::with_val(wb, (0, 0));
    let neg_s = Complex::with_val(wb, -s);
    for k in 0..shift {
        let base = Float::with_val(wb, Rational::from(a + Integer::from(k)));
        sum += ComplexApprox::real_pow(&base, &neg_s, wb);
    }
    let x = Float::with_val(wb, Rational::from(a + Integer::from(shift)));
    let x_pow = ComplexApprox::real_pow(&x, &neg_s, wb); // x^-s
    // x^{1-s}/(s-1)
    let s_minus_1 = Complex::with_val(wb, s - 1u32);
    let mut lead = Complex::with_val(wb, &x_pow * &x);
    lead /= &s_minus_1;
    sum += lead;
    sum += Complex::with_val(wb, &x_pow / 2u32);

    let inv_x2 = Float::with_val(wb, x.square_ref()).recip();
    // P_j = (s)_{2j-1} x^{-s-2j+1}
    let mut p = Complex::with_val(wb, &x_pow * s);
    p /= &x;
    let mut fact = Integer::from(2); // (2j)!
    let target = unit(wb);
    let mut j = 1usize;
    let trunc;
    loop {
        let coeff = Float::with_val(wb, &bernoulli(2 * j)) / Float::with_val(wb, &fact);
        sum += Complex::with_val(wb, &p * &coeff);
        // advance P to j+1
        let f1 = Complex::with_val(wb, s + (2 * j - 1) as u64);
        let f2 = Complex::with_val(wb, s + (2 * j) as u64);
        p *= &f1;
        p *= &f2;
        p *= &inv_x2;
        fact *= ((2 * j + 1) * (2 * j + 2)) as u64;
        let next_coeff = Float::with_val(wb, &bernoulli(2 * j + 2)) / Float::with_val(wb, &fact);
        let next = complex_abs(&p) * next_coeff.to_f64().abs();
        let ratio = (s_abs + (2 * j + 1) as f64) / (sigma + (2 * j + 1) as f64);
        let bound = next * ratio;
        if bound <= target * complex_abs(&sum) || j > 4 * wb as usize {
            trunc = bound;
            break;
        }
        j += 1;
    }
    let rounding = complex_abs(&sum) * unit(wb) * (shift as f64 + 2.0 * j as f64 + 8.0);
    (sum, trunc + rounding)
}

fn cached(key: (&'static str, i64, u32), compute: impl FnOnce() -> ComplexApprox) -> ComplexApprox {
    static CACHE: OnceLock<Mutex<HashMap<(&'static str, i64, u32), ComplexApprox>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("constant cache poisoned").get(&key) {
        return v.clone();
    }
    let v = compute();
    cache.lock().expect("constant cache poisoned").insert(key, v.clone());
    v
}

/// Riemann zeta at an integer `s >= 2`; negative integers and zero give the
/// Bernoulli values.
pub fn zeta_int(s: i64, prec: &Precision) -> Result<ComplexApprox> {
    let bits = prec.bits();
    if s == 1 {
        return Err(Error::Pole { function: "zeta", at: "1".into() });
    }
    if s <= 0 {
        // zeta(-n) = (-1)^n B_{n+1}/(n+1)
        let n = (-s) as usize;
        let mut v = bernoulli(n + 1) / Rational::from(n as u64 + 1);
        if n % 2 == 1 {
            v = -v;
        }
        return Ok(ComplexApprox::from_rational(&v, bits));
    }
    Ok(cached(("zeta", s, bits), || {
        let sv = Complex::with_val(bits + 16, (s, 0));
        let (v, trunc) = hurwitz_core(&sv, &Rational::from(1), bits + 16);
        let v = Complex::with_val(bits, v);
        let err = trunc + complex_abs(&v) * unit(bits) * 2.0;
        ComplexApprox::new(v, err, Rigor::Rigorous)
    }))
}

/// Catalan's constant `sum (-1)^k/(2k+1)^2 = (zeta(2,1/4) - zeta(2,3/4))/16`.
pub fn catalan(prec: &Precision) -> ComplexApprox {
    let bits = prec.bits();
    cached(("catalan", 0, bits), || {
        let wb = bits + 16;
        let two = Complex::with_val(wb, (2, 0));
        let (a, ea) = hurwitz_core(&two, &Rational::from((1, 4)), wb);
        let (b, eb) = hurwitz_core(&two, &Rational::from((3, 4)), wb);
        let v = Complex::with_val(bits, (a - b) / 16u32);
        let err = (ea + eb) / 16.0 + complex_abs(&v) * unit(bits) * 2.0;
        ComplexApprox::new(v, err, Rigor::Rigorous)
    })
}
