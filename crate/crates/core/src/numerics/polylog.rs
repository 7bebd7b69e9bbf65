//! Polylogarithms `Li_s(z)` of order 2, 3 and 4 on the principal sheet
//! (cut along `[1, inf)`, approached from below on the cut itself).

use rug::float::Constant;
use rug::{Assign, Complex, Float, Integer, Rational};

use super::approx::{complex_abs, unit, ComplexApprox, Precision};
use super::bernoulli::bernoulli;
use super::zeta::zeta_int;
use crate::error::{Error, Result};

/// Negation that keeps a zero imaginary part positive, so that
/// `log(-x)` for real `x > 0` lands on `+i pi`.
fn neg_clean(c: &Complex) -> Complex {
    let mut v = Complex::with_val(c.prec().0, -c);
    if v.imag().is_zero() {
        v.mut_imag().assign(0u32);
    }
    v
}

/// Direct series for `|z| <= 1/2`.
fn direct(s: u32, z: &Complex, wb: u32) -> (Complex, f64) {
    let r = complex_abs(z);
    let mut sum = Complex::with_val(wb, (0, 0));
    let mut pow = z.clone();
    let target = unit(wb);
    let mut k: u64 = 1;
    loop {
        let denom = Integer::from(Integer::u_pow_u(k as u32, s));
        sum += Complex::with_val(wb, &pow / Float::with_val(wb, &denom));
        let next = r.powi(k as i32 + 1) / ((k + 1) as f64).powi(s as i32) / (1.0 - r);
        if next <= target * complex_abs(&sum) || r == 0.0 {
            let rounding = complex_abs(&sum) * unit(wb) * (3 * k + 4) as f64;
            return (sum, next + rounding);
        }
        pow *= z;
        k += 1;
    }
}

/// Series in `mu = log z`, valid for `|mu| < 2 pi`.
fn log_series(s: u32, z: &Complex, wb: u32) -> Result<(Complex, f64)> {
    let mu = Complex::with_val(wb, z.ln_ref());
    let mu_abs = complex_abs(&mu);
    let two_pi = 2.0 * std::f64::consts::PI;
    let q = mu_abs / two_pi;
    let target = unit(wb);

    let mut sum = Complex::with_val(wb, (0, 0));
    let mut pow = Complex::with_val(wb, (1, 0)); // mu^k / k!
    let mut k: u32 = 0;
    let mut zeta_err = 0.0;
    loop {
        if k + 1 == s {
            // mu^{s-1}/(s-1)! (H_{s-1} - log(-mu))
            let mut h = Rational::new();
            for j in 1..s {
                h += Rational::from((1, j));
            }
            let ln_neg = if mu_abs == 0.0 {
                Complex::with_val(wb, (0, 0))
            } else {
                neg_clean(&mu).ln()
            };
            let mut bracket = Complex::with_val(wb, (Float::with_val(wb, &h), 0));
            bracket -= &ln_neg;
            if mu_abs != 0.0 {
                sum += Complex::with_val(wb, &pow * &bracket);
            }
        } else {
            let sk = s as i64 - k as i64;
            let zv = if sk >= 2 {
                let zz = zeta_int(sk, &bits_precision(wb))?;
                zeta_err += zz.err() * complex_abs(&pow);
                Float::with_val(wb, zz.re())
            } else {
                let n = (-sk) as usize;
                let mut v = bernoulli(n + 1) / Rational::from(n as u64 + 1);
                if n % 2 == 1 {
                    v = -v;
                }
                Float::with_val(wb, &v)
            };
            if !zv.is_zero() {
                sum += Complex::with_val(wb, &pow * &zv);
            }
        }
        k += 1;
        pow *= &mu;
        pow /= k;
        if k > s + 2 {
            let tail = 4.0 * two_pi.powi(s as i32 - 1) * q.powi(k as i32) / (1.0 - q);
            if tail <= target * complex_abs(&sum).max(1e-300) || mu_abs == 0.0 {
                let rounding = complex_abs(&sum) * unit(wb) * (4 * k + 8) as f64;
                return Ok((sum, tail + rounding + zeta_err));
            }
        }
        if k > 20 * wb {
            return Err(Error::PrecisionExhausted { err: 1.0, target });
        }
    }
}

fn bits_precision(wb: u32) -> Precision {
    // smallest Precision whose bit count is at least wb
    let digits = ((wb as f64) / std::f64::consts::LOG2_10).ceil() as u32;
    Precision::with_guard(digits, 10)
}

fn core(s: u32, z: &Complex, wb: u32) -> Result<(Complex, f64)> {
    let r = complex_abs(z);
    if z.imag().is_zero() && *z.real() == 1 {
        let zz = zeta_int(s as i64, &bits_precision(wb))?;
        return Ok((Complex::with_val(wb, zz.value()), zz.err()));
    }
    if r == 0.0 {
        return Ok((Complex::with_val(wb, (0, 0)), 0.0));
    }
    if r <= 0.5 {
        return Ok(direct(s, z, wb));
    }
    if r >= 2.0 {
        // Li_s(z) = -(-1)^s Li_s(1/z) - (2 pi i)^s / s! B_s(1/2 + log(-z)/(2 pi i))
        let inv = Complex::with_val(wb, z.recip_ref());
        let (li_inv, e_inv) = direct_or_log(s, &inv, wb)?;
        let pi = Float::with_val(wb, Constant::Pi);
        let two_pi_i = Complex::with_val(wb, (0, Float::with_val(wb, &pi * 2u32)));
        let ln_neg = neg_clean(z).ln();
        let mut x = Complex::with_val(wb, &ln_neg / &two_pi_i);
        x += Float::with_val(wb, 0.5);
        // Bernoulli polynomial B_s(x)
        let mut bpoly = Complex::with_val(wb, (0, 0));
        let mut binom = Integer::from(1);
        let mut xp = vec![Complex::with_val(wb, (1, 0))];
        for j in 1..=s as usize {
            let next = Complex::with_val(wb, &xp[j - 1] * &x);
            xp.push(next);
        }
        for k in 0..=s as usize {
            let c = Float::with_val(wb, &bernoulli(k)) * Float::with_val(wb, &binom);
            bpoly += Complex::with_val(wb, &xp[s as usize - k] * &c);
            binom *= s as u64 - k as u64;
            binom /= k as u64 + 1;
        }
        let mut factor = Complex::with_val(wb, (1, 0));
        for _ in 0..s {
            factor *= &two_pi_i;
        }
        let fact = Integer::from(Integer::factorial(s));
        factor /= Float::with_val(wb, &fact);
        let mut val = Complex::with_val(wb, &factor * &bpoly);
        val = neg_clean(&val);
        if s % 2 == 0 {
            val -= &li_inv;
        } else {
            val += &li_inv;
        }
        let rounding = (complex_abs(&val) + complex_abs(&factor) * complex_abs(&bpoly)) * unit(wb) * 16.0;
        return Ok((val, e_inv + rounding));
    }
    log_series(s, z, wb)
}

fn direct_or_log(s: u32, z: &Complex, wb: u32) -> Result<(Complex, f64)> {
    if complex_abs(z) <= 0.5 {
        Ok(direct(s, z, wb))
    } else {
        log_series(s, z, wb)
    }
}

/// `Li_s(z)` for `s` in {2, 3, 4}.
pub fn polylog(order: i64, z: &ComplexApprox, prec: &Precision) -> Result<ComplexApprox> {
    if !(2..=4).contains(&order) {
        return Err(Error::domain("polylog", format!("order {order} not in {{2,3,4}}")));
    }
    let s = order as u32;
    let bits = z.bits().max(prec.bits());
    let wb = bits + 24;
    let c = Complex::with_val(wb, z.value());
    let (v, e) = core(s, &c, wb)?;
    let value = Complex::with_val(bits, &v);
    let mut err = e + complex_abs(&value) * unit(bits);
    if z.err() > 0.0 {
        // d/dz Li_s(z) = Li_{s-1}(z)/z
        let zabs = z.abs_f64();
        let lower = if s == 2 {
            let one_minus = Complex::with_val(64, 1 - &c);
            complex_abs(&one_minus.ln())
        } else {
            let c64 = Complex::with_val(80, &c);
            complex_abs(&core(s - 1, &c64, 80)?.0)
        };
        let d = if zabs > z.err() { lower / (zabs - z.err()) } else { f64::INFINITY };
        err += d * z.err() * 1.01;
    }
    Ok(ComplexApprox::new(value, err, z.rigor()))
}
