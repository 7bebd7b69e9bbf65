//! Complex gamma function.
//!
//! Arguments with `Re z < 1/2` are reflected; the rest are shifted up to
//! `Re w >= r` and evaluated by the Stirling series, whose remainder is
//! bounded by the first omitted term times `sec(arg w / 2)^(2K+2)`.

use rug::float::Constant;
use rug::{Complex, Float, Rational};

use super::approx::{complex_abs, unit, ComplexApprox, Precision};
use super::bernoulli::bernoulli;
use crate::error::{Error, Result};

/// Natural log of `|B_n|` as f64 (`-inf` for zero).
fn ln_abs_bernoulli(n: usize) -> f64 {
    let b = bernoulli(n);
    if b == 0 {
        return f64::NEG_INFINITY;
    }
    let f = Float::with_val(64, &b).abs();
    f.ln().to_f64()
}

struct GammaCore {
    value: Complex,
    rel_err: f64,
    /// Upper estimate of `|psi(z)|`, used for input-error propagation.
    psi: f64,
}

/// Log-gamma by the Stirling series for `Re w` large.
fn stirling_ln_gamma(w: &Complex, wb: u32) -> (Complex, f64) {
    let absw = complex_abs(w);
    let arg = w.imag().to_f64().atan2(w.real().to_f64());
    let sec_half = 1.0 / (arg / 2.0).cos();
    let ln_w = Complex::with_val(wb, w.ln_ref());
    let half = Float::with_val(wb, 0.5);
    let two_pi = Float::with_val(wb, Constant::Pi) * 2u32;
    let mut acc = Complex::with_val(wb, w - &half);
    acc *= &ln_w;
    acc -= w;
    acc += Float::with_val(wb, two_pi.ln()) / 2u32;

    let inv = Complex::with_val(wb, w.recip_ref());
    let inv2 = Complex::with_val(wb, inv.square_ref());
    let mut pow = inv.clone();
    let target = -(wb as f64) * std::f64::consts::LN_2;
    let mut k = 1usize;
    let bound;
    loop {
        let b = bernoulli(2 * k);
        let coeff = Float::with_val(wb, &b) / Float::with_val(wb, (2 * k * (2 * k - 1)) as u64);
        acc += Complex::with_val(wb, &pow * &coeff);
        pow *= &inv2;
        // remainder after K = k terms
        let kk = k + 1;
        let ln_r = ln_abs_bernoulli(2 * kk) - (((2 * kk) * (2 * kk - 1)) as f64).ln() - ((2 * kk - 1) as f64) * absw.ln()
            + (2 * kk) as f64 * sec_half.ln();
        if ln_r < target || k > 4 * wb as usize {
            bound = ln_r.exp();
            break;
        }
        k += 1;
    }
    (acc, bound)
}

fn gamma_core(c: &Complex, wb: u32) -> Result<GammaCore> {
    let re = c.real().to_f64();
    if c.imag().is_zero() && c.real().is_integer() && re <= 0.0 {
        return Err(Error::Pole { function: "gamma", at: c.real().to_string_radix(10, Some(20)) });
    }
    if re < 0.5 {
        // Gamma(c) = pi / (sin(pi c) Gamma(1 - c))
        let one_minus = Complex::with_val(wb, 1 - c);
        let inner = gamma_core(&one_minus, wb)?;
        let nearest = Float::with_val(wb, c.real().round_ref());
        let n_int = nearest.to_f64();
        let frac = Complex::with_val(wb, c - &nearest);
        let pi = Float::with_val(wb, Constant::Pi);
        let mut s = Complex::with_val(wb, &frac * &pi).sin();
        if (n_int as i64).rem_euclid(2) == 1 {
            s = -s;
        }
        let s_abs = complex_abs(&s);
        if s_abs == 0.0 {
            return Err(Error::Pole { function: "gamma", at: format!("{re}") });
        }
        let denom = Complex::with_val(wb, &s * &inner.value);
        let value = Complex::with_val(wb, &pi / &denom);
        let frac_abs = complex_abs(&frac).max(unit(wb));
        let sin_rel = unit(wb) * 4.0 * (1.0 + frac_abs.recip() * unit(wb));
        let pi_cot = {
            let cot_abs = complex_abs(&Complex::with_val(wb, &frac * &pi).cos()) / s_abs;
            std::f64::consts::PI * cot_abs
        };
        return Ok(GammaCore {
            value,
            rel_err: inner.rel_err + sin_rel + 4.0 * unit(wb),
            psi: inner.psi + pi_cot,
        });
    }
    let r = (wb as f64 * 0.15 + 6.0).ceil();
    let shift = if re < r { (r - re).ceil() as u64 } else { 0 };
    let w = Complex::with_val(wb, c + shift);
    let (ln_g, rem) = stirling_ln_gamma(&w, wb);
    let mut value = Complex::with_val(wb, ln_g.exp_ref());
    let mut psi = complex_abs(&Complex::with_val(wb, w.ln_ref())) + 1.0 / complex_abs(&w);
    if shift > 0 {
        let mut prod = Complex::with_val(wb, (1, 0));
        for k in 0..shift {
            let t = Complex::with_val(wb, c + k);
            psi += 1.0 / complex_abs(&t);
            prod *= &t;
        }
        value /= &prod;
    }
    let ln_abs = complex_abs(&ln_g) + 1.0;
    let rel_err = rem * 1.01 + unit(wb) * (ln_abs * 4.0 + 2.0 * shift as f64 + 64.0);
    Ok(GammaCore { value, rel_err, psi })
}

/// Gamma function with relative error at most `10^-digits`.
pub fn gamma(z: &ComplexApprox, prec: &Precision) -> Result<ComplexApprox> {
    let bits = z.bits().max(prec.bits());
    let wb = bits + 24;
    let e = z.err();
    if e > 0.0 && z.im().to_f64().abs() <= e {
        let re = z.re().to_f64();
        let nearest = re.round();
        if nearest <= 0.0 && (re - nearest).abs() <= e {
            return Err(Error::Pole { function: "gamma", at: format!("{re} +/- {e:e}") });
        }
    }
    let c = Complex::with_val(wb, z.value());
    let core = gamma_core(&c, wb)?;
    let value = Complex::with_val(bits, &core.value);
    let abs = complex_abs(&value);
    let prop = abs * core.psi * e * (1.0 + core.psi * e);
    let err = abs * (core.rel_err + unit(bits)) + prop;
    Ok(ComplexApprox::new(value, err, z.rigor()))
}

/// `Gamma(q)` for an exact rational argument.
pub fn gamma_rational(q: &Rational, prec: &Precision) -> Result<ComplexApprox> {
    let wb = prec.bits() + 24;
    let c = Complex::with_val(wb, (Float::with_val(wb, q), 0));
    let core = gamma_core(&c, wb)?;
    let bits = prec.bits();
    let value = Complex::with_val(bits, &core.value);
    let abs = complex_abs(&value);
    Ok(ComplexApprox::new(value, abs * (core.rel_err + unit(bits)), super::approx::Rigor::Rigorous))
}
