//! Complex values with an attached absolute error radius.
//!
//! Arithmetic is carried out by MPC at a fixed working precision; every
//! operation adds its own rounding contribution and a first-order
//! propagation of the operands' radii.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Assign, Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested decimal digits plus guard digits used internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    pub digits: u32,
    pub guard: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 10;
    pub const MIN_GUARD: u32 = 10;

    pub fn new(digits: u32) -> Self {
        Self::with_guard(digits, Self::MIN_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Self {
        Precision { digits: digits.max(Self::MIN_DIGITS), guard: guard.max(Self::MIN_GUARD) }
    }

    /// Working precision in bits.
    pub fn bits(&self) -> u32 {
        ((self.digits + self.guard) as f64 * LOG2_10).ceil() as u32 + 16
    }

    /// The relative accuracy promised to callers, `10^-digits`.
    pub fn target(&self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }

    /// Same request with `extra` more working digits.
    pub fn raised(&self, extra: u32) -> Self {
        Precision { digits: self.digits, guard: self.guard + extra }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(40)
    }
}

/// Whether an error radius is a proven bound or an empirical estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rigor {
    Rigorous,
    Heuristic,
}

impl Rigor {
    pub fn weaker(self, other: Rigor) -> Rigor {
        self.max(other)
    }
}

impl fmt::Display for Rigor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rigor::Rigorous => f.write_str("rigorous"),
            Rigor::Heuristic => f.write_str("heuristic"),
        }
    }
}

/// A complex number `value` known to lie within `err` (absolute) of the
/// true result.
#[derive(Clone, Debug)]
pub struct ComplexApprox {
    value: Complex,
    err: f64,
    rigor: Rigor,
}

/// `2^(1-bits)`, the relative rounding unit of one operation.
pub(crate) fn unit(bits: u32) -> f64 {
    2f64.powi(1 - bits as i32)
}

pub(crate) fn float_abs(x: &Float) -> f64 {
    x.to_f64().abs()
}

pub(crate) fn complex_abs(c: &Complex) -> f64 {
    let re = c.real().to_f64();
    let im = c.imag().to_f64();
    if re.is_finite() && im.is_finite() && (re != 0.0 || im != 0.0 || (c.real().is_zero() && c.imag().is_zero())) {
        return re.hypot(im);
    }
    // Magnitudes outside the f64 range.
    let bits = c.prec().0;
    let abs = Float::with_val(bits, c.real().clone().hypot(c.imag()));
    abs.to_f64()
}

impl ComplexApprox {
    pub fn new(value: Complex, err: f64, rigor: Rigor) -> Self {
        let mut value = value;
        clean_zero(&mut value);
        ComplexApprox { value, err: err.max(0.0), rigor }
    }

    pub fn exact(value: Complex) -> Self {
        Self::new(value, 0.0, Rigor::Rigorous)
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        let re = Float::with_val(bits, q);
        let err = float_abs(&re) * unit(bits);
        Self::new(Complex::with_val(bits, (re, 0)), err, Rigor::Rigorous)
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Self::exact(Complex::with_val(bits, (v, 0)))
    }

    pub fn from_float(re: Float, err: f64) -> Self {
        let bits = re.prec();
        Self::new(Complex::with_val(bits, (re, 0)), err, Rigor::Rigorous)
    }

    pub fn from_parts(re: Float, im: Float, err: f64) -> Self {
        let bits = re.prec().max(im.prec());
        Self::new(Complex::with_val(bits, (re, im)), err, Rigor::Rigorous)
    }

    pub fn zero(bits: u32) -> Self {
        Self::exact(Complex::new(bits))
    }

    pub fn one(bits: u32) -> Self {
        Self::from_i64(1, bits)
    }

    pub fn i(bits: u32) -> Self {
        Self::exact(Complex::with_val(bits, (0, 1)))
    }

    pub fn pi(bits: u32) -> Self {
        let pi = Float::with_val(bits, Constant::Pi);
        let err = float_abs(&pi) * unit(bits);
        Self::from_float(pi, err)
    }

    pub fn value(&self) -> &Complex {
        &self.value
    }

    pub fn re(&self) -> &Float {
        self.value.real()
    }

    pub fn im(&self) -> &Float {
        self.value.imag()
    }

    pub fn err(&self) -> f64 {
        self.err
    }

    pub fn rigor(&self) -> Rigor {
        self.rigor
    }

    pub fn bits(&self) -> u32 {
        self.value.prec().0
    }

    pub fn abs_f64(&self) -> f64 {
        complex_abs(&self.value)
    }

    pub fn with_err(mut self, err: f64) -> Self {
        self.err = err.max(0.0);
        self
    }

    pub fn add_err(mut self, extra: f64) -> Self {
        self.err += extra.max(0.0);
        self
    }

    pub fn with_rigor(mut self, rigor: Rigor) -> Self {
        self.rigor = rigor;
        self
    }

    pub fn weaken(mut self, rigor: Rigor) -> Self {
        self.rigor = self.rigor.weaker(rigor);
        self
    }

    /// Re-round the value to `bits`.
    pub fn to_bits(&self, bits: u32) -> Self {
        let value = Complex::with_val(bits, &self.value);
        let extra = if bits < self.bits() { complex_abs(&value) * unit(bits) } else { 0.0 };
        ComplexApprox { value, err: self.err + extra, rigor: self.rigor }
    }

    /// True when the ball certainly does not contain zero.
    pub fn is_nonzero(&self) -> bool {
        self.abs_f64() > self.err
    }

    /// True when the imaginary part is zero within the error radius.
    pub fn is_real(&self) -> bool {
        float_abs(self.im()) <= self.err
    }

    /// Decimal rendering of the real and imaginary parts.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = self.re().to_string_radix(10, Some(digits));
        if self.im().is_zero() {
            re
        } else {
            let im = self.im().to_string_radix(10, Some(digits));
            if im.starts_with('-') {
                format!("{re} - {}i", &im[1..])
            } else {
                format!("{re} + {im}i")
            }
        }
    }

    /// Absolute difference between two centres, in f64.
    pub fn abs_diff(&self, other: &Self) -> f64 {
        let bits = self.bits().max(other.bits());
        let d = Complex::with_val(bits, &self.value - &other.value);
        complex_abs(&d)
    }

    fn finish(value: Complex, propagated: f64, ops: f64, rigor: Rigor) -> Self {
        let bits = value.prec().0;
        let round = complex_abs(&value) * unit(bits) * ops;
        Self::new(value, propagated + round, rigor)
    }

    pub fn conj(&self) -> Self {
        let mut v = self.value.clone();
        v.conj_mut();
        ComplexApprox::new(v, self.err, self.rigor)
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let bits = self.bits();
        let v = Complex::with_val(bits, &self.value * Float::with_val(bits, q));
        let qa = q.to_f64().abs();
        Self::finish(v, self.err * qa, 2.0, self.rigor)
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one(self.bits()));
        }
        if n < 0 {
            return Self::one(self.bits()).checked_div(&self.powi(-n)?);
        }
        let mut base = self.clone();
        let mut acc = Self::one(self.bits());
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let b = rhs.abs_f64();
        if b <= rhs.err || b == 0.0 {
            return Err(Error::domain("division", "divisor ball contains zero"));
        }
        let bits = self.bits().max(rhs.bits());
        let v = Complex::with_val(bits, &self.value / &rhs.value);
        let a = self.abs_f64();
        let prop = (a * rhs.err + b * self.err) / (b * (b - rhs.err));
        Ok(Self::finish(v, prop, 2.0, self.rigor.weaker(rhs.rigor)))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let r = self.abs_f64();
        let v = Complex::with_val(self.bits(), self.value.sqrt_ref());
        let prop = if self.err == 0.0 {
            0.0
        } else if r > self.err {
            self.err / (2.0 * (r - self.err).sqrt())
        } else {
            self.err.sqrt()
        };
        Ok(Self::finish(v, prop, 1.0, self.rigor))
    }

    pub fn ln(&self) -> Result<Self> {
        let r = self.abs_f64();
        if self.value.real().is_zero() && self.value.imag().is_zero() {
            return Err(Error::domain("log", "log(0)"));
        }
        if r <= self.err {
            return Err(Error::domain("log", "argument ball contains zero"));
        }
        let v = Complex::with_val(self.bits(), self.value.ln_ref());
        let prop = self.err / (r - self.err);
        // ln can be near zero, so bound rounding relative to |ln| + 1.
        let bits = self.bits();
        let round = (complex_abs(&v) + 1.0) * unit(bits);
        Ok(Self::new(v, prop + round, self.rigor))
    }

    pub fn exp(&self) -> Self {
        let v = Complex::with_val(self.bits(), self.value.exp_ref());
        let a = complex_abs(&v);
        let prop = a * (self.err.exp() - 1.0).max(self.err);
        Self::finish(v, prop, 1.0, self.rigor)
    }

    /// Principal power `self^w = exp(w log self)`.
    pub fn pow(&self, w: &Self) -> Result<Self> {
        if self.value.real().is_zero() && self.value.imag().is_zero() && w.err == 0.0 {
            if w.value.real().is_sign_positive() && !w.value.real().is_zero() {
                return Ok(Self::zero(self.bits()));
            }
        }
        let l = self.ln()?;
        Ok((&l * w).exp())
    }

    pub fn pow_rational(&self, q: &Rational) -> Result<Self> {
        if q.denom() == &1u32 {
            if let Some(n) = q.numer().to_i64() {
                return self.powi(n);
            }
        }
        if q.denom() == &2u32 {
            if let Some(n) = q.numer().to_i64() {
                // z^(n/2) = (sqrt z)^n on the principal branch.
                return self.sqrt()?.powi(n);
            }
        }
        let w = Self::from_rational(q, self.bits());
        self.pow(&w)
    }

    pub fn sin(&self) -> Self {
        let v = Complex::with_val(self.bits(), self.value.sin_ref());
        let d = (float_abs(self.im()) + self.err).cosh();
        Self::finish(v, self.err * d, 2.0, self.rigor)
    }

    pub fn cos(&self) -> Self {
        let v = Complex::with_val(self.bits(), self.value.cos_ref());
        let d = (float_abs(self.im()) + self.err).cosh();
        Self::finish(v, self.err * d, 2.0, self.rigor)
    }

    pub fn sinh(&self) -> Self {
        let v = Complex::with_val(self.bits(), self.value.sinh_ref());
        let d = (float_abs(self.re()) + self.err).cosh();
        Self::finish(v, self.err * d, 2.0, self.rigor)
    }

    pub fn cosh(&self) -> Self {
        let v = Complex::with_val(self.bits(), self.value.cosh_ref());
        let d = (float_abs(self.re()) + self.err).cosh();
        Self::finish(v, self.err * d, 2.0, self.rigor)
    }

    /// Bound on `|1/g(z)|` used for the derivative of the inverse functions.
    fn inv_deriv(&self, g: Complex) -> f64 {
        let a = complex_abs(&g);
        if a > 0.0 {
            1.0 / a
        } else {
            f64::INFINITY
        }
    }

    pub fn asin(&self) -> Self {
        let bits = self.bits();
        let v = Complex::with_val(bits, self.value.asin_ref());
        let one_minus = Complex::with_val(bits, 1 - Complex::with_val(bits, self.value.square_ref()));
        let d = self.inv_deriv(one_minus.sqrt());
        Self::finish(v, self.err * d, 2.0, self.rigor)
    }

    pub fn atan(&self) -> Self {
        let bits = self.bits();
        let v = Complex::with_val(bits, self.value.atan_ref());
        let g = Complex::with_val(bits, 1 + Complex::with_val(bits, self.value.square_ref()));
        let d = self.inv_deriv(g);
        Self::finish(v, self.err * d, 2.0, self.rigor)
    }

    pub fn asinh(&self) -> Self {
        let bits = self.bits();
        let v = Complex::with_val(bits, self.value.asinh_ref());
        let g = Complex::with_val(bits, 1 + Complex::with_val(bits, self.value.square_ref()));
        let d = self.inv_deriv(g.sqrt());
        Self::finish(v, self.err * d, 2.0, self.rigor)
    }

    pub fn atanh(&self) -> Self {
        let bits = self.bits();
        let v = Complex::with_val(bits, self.value.atanh_ref());
        let g = Complex::with_val(bits, 1 - Complex::with_val(bits, self.value.square_ref()));
        let d = self.inv_deriv(g);
        Self::finish(v, self.err * d, 2.0, self.rigor)
    }

    /// `e^{2 pi i k / n}`.
    pub fn root_of_unity(n: u64, k: i64, bits: u32) -> Self {
        let kk = k.rem_euclid(n as i64) as u64;
        // Exact values on the axes.
        if kk == 0 {
            return Self::one(bits);
        }
        if 2 * kk == n {
            return Self::from_i64(-1, bits);
        }
        if 4 * kk == n {
            return Self::i(bits);
        }
        if 4 * kk == 3 * n {
            return Self::exact(Complex::with_val(bits, (0, -1)));
        }
        let pi = Float::with_val(bits + 8, Constant::Pi);
        let theta = Float::with_val(bits + 8, &pi * (2 * kk)) / n;
        let (s, c) = theta.sin_cos(Float::new(bits + 8));
        let v = Complex::with_val(bits, (c, s));
        Self::finish(v, 0.0, 2.0, Rigor::Rigorous)
    }

    /// `x^s` for real `x > 0` given as a float and complex `s`.
    pub(crate) fn real_pow(x: &Float, s: &Complex, bits: u32) -> Complex {
        let l = Float::with_val(bits, x.ln_ref());
        let w = Complex::with_val(bits, s * &l);
        w.exp()
    }
}

fn clean_zero(v: &mut Complex) {
    // Normalise negative zero so branch cuts behave uniformly.
    if v.imag().is_zero() && v.imag().is_sign_negative() {
        v.mut_imag().assign(0u32);
    }
    if v.real().is_zero() && v.real().is_sign_negative() {
        v.mut_real().assign(0u32);
    }
}

impl Add for &ComplexApprox {
    type Output = ComplexApprox;
    fn add(self, rhs: &ComplexApprox) -> ComplexApprox {
        let bits = self.bits().max(rhs.bits());
        let v = Complex::with_val(bits, &self.value + &rhs.value);
        ComplexApprox::finish(v, self.err + rhs.err, 1.0, self.rigor.weaker(rhs.rigor))
    }
}

impl Sub for &ComplexApprox {
    type Output = ComplexApprox;
    fn sub(self, rhs: &ComplexApprox) -> ComplexApprox {
        let bits = self.bits().max(rhs.bits());
        let v = Complex::with_val(bits, &self.value - &rhs.value);
        ComplexApprox::finish(v, self.err + rhs.err, 1.0, self.rigor.weaker(rhs.rigor))
    }
}

impl Mul for &ComplexApprox {
    type Output = ComplexApprox;
    fn mul(self, rhs: &ComplexApprox) -> ComplexApprox {
        let bits = self.bits().max(rhs.bits());
        let v = Complex::with_val(bits, &self.value * &rhs.value);
        let prop = self.abs_f64() * rhs.err + rhs.abs_f64() * self.err + self.err * rhs.err;
        ComplexApprox::finish(v, prop, 2.0, self.rigor.weaker(rhs.rigor))
    }
}

impl Div for &ComplexApprox {
    type Output = ComplexApprox;
    /// Panics if the divisor ball contains zero; use `checked_div` otherwise.
    fn div(self, rhs: &ComplexApprox) -> ComplexApprox {
        self.checked_div(rhs).expect("division by a ball containing zero")
    }
}

impl Neg for &ComplexApprox {
    type Output = ComplexApprox;
    fn neg(self) -> ComplexApprox {
        ComplexApprox { value: Complex::with_val(self.bits(), -&self.value), err: self.err, rigor: self.rigor }
    }
}

impl Add for ComplexApprox {
    type Output = ComplexApprox;
    fn add(self, rhs: ComplexApprox) -> ComplexApprox {
        &self + &rhs
    }
}

impl Sub for ComplexApprox {
    type Output = ComplexApprox;
    fn sub(self, rhs: ComplexApprox) -> ComplexApprox {
        &self - &rhs
    }
}

impl Mul for ComplexApprox {
    type Output = ComplexApprox;
    fn mul(self, rhs: ComplexApprox) -> ComplexApprox {
        &self * &rhs
    }
}

impl Neg for ComplexApprox {
    type Output = ComplexApprox;
    fn neg(self) -> ComplexApprox {
        -&self
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits() as f64) / LOG2_10).floor() as usize;
        write!(f, "{} +/- {:.2e} ({})", self.to_decimal(digits.max(5)), self.err, self.rigor)
    }
}
