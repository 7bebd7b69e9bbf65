//! Complete elliptic integrals in the parameter convention `m = k^2`:
//! `K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt`, likewise `E(m)`.
//!
//! Both come from one arithmetic-geometric mean run,
//! `K = pi / (2 AGM(1, sqrt(1-m)))` and
//! `E = K (1 - sum_n 2^(n-1) c_n^2)` with `c_0^2 = m`.
//! The AGM takes the root with `Re(b/a) >= 0` at each step, which gives the
//! principal branch off the cut `[1, inf)`.

use rug::float::Constant;
use rug::{Complex, Float};

use super::approx::{complex_abs, unit, ComplexApprox, Precision};
use crate::error::{Error, Result};

struct AgmRun {
    k: Complex,
    e: Complex,
    steps: u32,
}

fn agm_run(m: &Complex, wb: u32) -> Result<AgmRun> {
    let one_minus = Complex::with_val(wb, 1 - m);
    if one_minus.real().is_zero() && one_minus.imag().is_zero() {
        return Err(Error::Pole { function: "elliptic_k", at: "1".into() });
    }
    let mut a = Complex::with_val(wb, (1, 0));
    let mut b = one_minus.sqrt();
    // sum_{n>=0} 2^{n-1} c_n^2, with c_0^2 = m
    let mut csum = Complex::with_val(wb, m / 2u32);
    let mut weight = Float::with_val(wb, 1); // 2^{n-1} for n = 1
    let tol = unit(wb);
    let mut steps = 0;
    loop {
        let c = Complex::with_val(wb, &a - &b) / 2u32;
        let next_a = Complex::with_val(wb, &a + &b) / 2u32;
        let mut next_b = Complex::with_val(wb, &a * &b).sqrt();
        // choose the root closer to next_a
        let plus = Complex::with_val(wb, &next_a - &next_b);
        let minus = Complex::with_val(wb, &next_a + &next_b);
        if complex_abs(&plus) > complex_abs(&minus) {
            next_b = -next_b;
        }
        let c2 = Complex::with_val(wb, c.square_ref());
        csum += Complex::with_val(wb, &c2 * &weight);
        weight *= 2u32;
        let delta = complex_abs(&c);
        a = next_a;
        b = next_b;
        steps += 1;
        if delta <= tol * complex_abs(&a) || steps > 200 {
            break;
        }
    }
    let pi = Float::with_val(wb, Constant::Pi);
    let k = Complex::with_val(wb, &pi / Complex::with_val(wb, &a * 2u32));
    let one_minus_sum = Complex::with_val(wb, 1 - &csum);
    let e = Complex::with_val(wb, &k * &one_minus_sum);
    Ok(AgmRun { k, e, steps })
}

fn derivatives(m: &Complex, run: &AgmRun) -> (f64, f64) {
    // dK/dm = (E - (1-m)K) / (2m(1-m)), dE/dm = (E - K)/(2m)
    let wb = 64;
    let m = Complex::with_val(wb, m);
    let k = Complex::with_val(wb, &run.k);
    let e = Complex::with_val(wb, &run.e);
    let m_abs = complex_abs(&m);
    if m_abs < 1e-8 {
        let pi = std::f64::consts::PI;
        return (pi / 8.0 * 1.5, pi / 8.0 * 1.5);
    }
    let one_minus = Complex::with_val(wb, 1 - &m);
    let num_k = Complex::with_val(wb, &e - Complex::with_val(wb, &one_minus * &k));
    let dk = complex_abs(&num_k) / (2.0 * m_abs * complex_abs(&one_minus));
    let de = complex_abs(&Complex::with_val(wb, &e - &k)) / (2.0 * m_abs);
    (dk, de)
}

fn finish(value: &Complex, bits: u32, steps: u32, deriv: f64, m: &ComplexApprox) -> ComplexApprox {
    let value = Complex::with_val(bits, value);
    let abs = complex_abs(&value);
    let err = abs * unit(bits) * (8.0 * steps as f64 + 16.0) + deriv * m.err() * 1.5;
    ComplexApprox::new(value, err, m.rigor())
}

/// Complete elliptic integral of the first kind, parameter convention.
pub fn elliptic_k(m: &ComplexApprox, prec: &Precision) -> Result<ComplexApprox> {
    let bits = m.bits().max(prec.bits());
    let wb = bits + 24;
    let c = Complex::with_val(wb, m.value());
    let one_minus = Complex::with_val(64, 1 - &c);
    if complex_abs(&one_minus) <= m.err() {
        return Err(Error::Pole { function: "elliptic_k", at: "1".into() });
    }
    let run = agm_run(&c, wb)?;
    let (dk, _) = derivatives(&c, &run);
    Ok(finish(&run.k, bits, run.steps, dk, m))
}

/// Complete elliptic integral of the second kind, parameter convention.
pub fn elliptic_e(m: &ComplexApprox, prec: &Precision) -> Result<ComplexApprox> {
    let bits = m.bits().max(prec.bits());
    let wb = bits + 24;
    let c = Complex::with_val(wb, m.value());
    let one_minus = Complex::with_val(wb, 1 - &c);
    if one_minus.real().is_zero() && one_minus.imag().is_zero() {
        return Ok(ComplexApprox::one(bits));
    }
    let run = agm_run(&c, wb)?;
    let (_, de) = derivatives(&c, &run);
    Ok(finish(&run.e, bits, run.steps, de, m))
}

/// Converts a modulus `k` to the parameter `m = k^2`.
pub fn modulus_to_parameter(k: &ComplexApprox) -> ComplexApprox {
    k * k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma::gamma_rational;
    use rug::Rational;

    fn prec() -> Precision {
        Precision::new(50)
    }

    fn q(n: i64, d: i64) -> ComplexApprox {
        ComplexApprox::from_rational(&Rational::from((n, d)), prec().bits())
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        let k = elliptic_k(&q(0, 1), &prec()).unwrap();
        let half_pi = ComplexApprox::from_float(Float::with_val(prec().bits(), Constant::Pi) / 2u32, 0.0);
        assert!(k.abs_diff(&half_pi) < 1e-50);
        let e = elliptic_e(&q(0, 1), &prec()).unwrap();
        assert!(e.abs_diff(&half_pi) < 1e-50);
    }

    #[test]
    fn k_half_gamma_form() {
        // K(1/2) = Gamma(1/4)^2 / (4 sqrt(pi))
        let p = prec();
        let k = elliptic_k(&q(1, 2), &p).unwrap();
        let g = gamma_rational(&Rational::from((1, 4)), &p).unwrap();
        let sqrt_pi = ComplexApprox::pi(p.bits()).sqrt().unwrap();
        let expect = (&(&g * &g) / &sqrt_pi).mul_rational(&Rational::from((1, 4)));
        assert!(k.abs_diff(&expect) < 1e-49, "{k} vs {expect}");
    }

    #[test]
    fn e_at_one() {
        let e = elliptic_e(&q(1, 1), &prec()).unwrap();
        assert_eq!(e.re().to_f64(), 1.0);
        assert!(matches!(elliptic_k(&q(1, 1), &prec()), Err(Error::Pole { .. })));
    }

    #[test]
    fn legendre_relation_at_third() {
        // E(m)K(1-m) + E(1-m)K(m) - K(m)K(1-m) = pi/2
        let p = prec();
        let m = q(1, 3);
        let m1 = q(2, 3);
        let (k, e) = (elliptic_k(&m, &p).unwrap(), elliptic_e(&m, &p).unwrap());
        let (k1, e1) = (elliptic_k(&m1, &p).unwrap(), elliptic_e(&m1, &p).unwrap());
        let lhs = &(&(&e * &k1) + &(&e1 * &k)) - &(&k * &k1);
        let half_pi = ComplexApprox::from_float(Float::with_val(p.bits(), Constant::Pi) / 2u32, 0.0);
        assert!(lhs.abs_diff(&half_pi) < 1e-48);
    }

    #[test]
    fn negative_and_complex_parameters() {
        // Imaginary-modulus transformation: K(-m) = K(m/(1+m)) / sqrt(1+m)
        let p = prec();
        let k_neg = elliptic_k(&q(-1, 1), &p).unwrap();
        let k_half = elliptic_k(&q(1, 2), &p).unwrap();
        let expect = &k_half / &q(2, 1).sqrt().unwrap();
        assert!(k_neg.abs_diff(&expect) < 1e-48);
        // conjugate symmetry off the real axis
        let bits = p.bits();
        let z = ComplexApprox::exact(Complex::with_val(bits, (0.5, 0.5)));
        let a = elliptic_k(&z, &p).unwrap();
        let b = elliptic_k(&z.conj(), &p).unwrap();
        assert!(a.abs_diff(&b.conj()) < 1e-48);
    }
}
