//! Identity generators: the distribution relation and three parameter
//! rewrites (falling-factorial split, initial-term removal, partial fractions).

mod cyclotomic;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::core_types::{
    arg_position, cancel_parameters, pochhammer_expr, Affine, ArgPosition, Expr, HypSeries, Identity, ParamList,
};
use crate::error::{Error, Result};

pub use cyclotomic::{cyclotomic_poly, reduce_mod_cyclotomic, reduce_root_expr, root_sum};

/// Arguments of the distribution relation.
#[derive(Clone, Debug, PartialEq)]
pub struct DistSpec {
    pub n: u32,
    pub m: u32,
    pub z: Expr,
    pub a: ParamList,
    pub b: ParamList,
}

impl DistSpec {
    pub fn new(n: u32, m: u32, z: Expr, a: ParamList, b: ParamList) -> Self {
        DistSpec { n, m, z, a, b }
    }
}

/// `{(c+m)/n, (c+m+1)/n, ..., (c+m+n-1)/n}`.
pub fn dist_block(c: &Affine, n: u32, m: u32) -> ParamList {
    let inv = Rational::from((1, n.max(1)));
    (0..n).map(|j| c.add_const(&Rational::from(m + j)).scale(&inv)).collect()
}

fn dist_blocks<'a>(cs: impl IntoIterator<Item = &'a Affine>, n: u32, m: u32) -> ParamList {
    cs.into_iter().flat_map(|c| dist_block(c, n, m).entries().to_vec()).collect()
}

fn product(factors: Vec<Expr>) -> Expr {
    Expr::Mul(factors).canonical()
}

fn ratio(num: Vec<Expr>, den: Vec<Expr>) -> Expr {
    let mut f = num;
    let den = product(den);
    if den.as_rational().map_or(true, |q| q != 1) {
        f.push(Expr::recip(den));
    }
    product(f)
}

fn rat(q: Rational) -> Expr {
    Expr::rational(q)
}

/// `(a)_k` for a concrete `a`, rejecting zero when it sits in a denominator.
fn denominator_pochhammer(a: &Affine, k: u32) -> Result<Expr> {
    let e = pochhammer_expr(a, k);
    if e.as_rational().is_some_and(|q| q == 0) {
        return Err(Error::VanishingPochhammer { param: a.to_string(), order: k });
    }
    Ok(e)
}

fn series(upper: ParamList, lower: ParamList, z: Expr) -> Result<HypSeries> {
    HypSeries::new(upper, lower, z)
}

/// The distribution relation. The left side is cancelled unless `raw`.
pub fn dist(spec: &DistSpec, raw: bool) -> Result<Identity> {
    let DistSpec { n, m, z, a, b } = spec;
    let (n, m) = (*n, *m);
    if n == 0 || m >= n {
        return Err(Error::InvalidSpec(format!("need 0 <= m < n, got n = {n}, m = {m}")));
    }
    if z.symbols().is_empty() && arg_position(z, 128)? == ArgPosition::Outside {
        return Err(Error::InvalidSpec(format!("|z| > 1 for z = {z}")));
    }
    let one = Affine::constant(1);
    let mut upper = ParamList::new(vec![one.clone()]);
    for x in dist_blocks(a.iter(), n, m).iter() {
        upper.push(x.clone());
    }
    let lower = dist_blocks(std::iter::once(&one).chain(b.iter()), n, m);
    let lhs = series(upper, lower, z.clone()).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let lhs = if raw { lhs } else { cancel_parameters(&lhs) };

    let (p, q) = (a.len() as i64, b.len() as i64);
    let mut num = vec![rat(Rational::from(Integer::from(Integer::factorial(m))))];
    let ex = m as i64 * (p - q - 1) - 1;
    num.push(Expr::pow(Expr::int(n as i64), Expr::int(ex)));
    if m > 0 {
        num.push(Expr::pow(z.clone(), rat(Rational::from((-(m as i64), n as i64)))));
    }
    num.extend(b.iter().map(|bj| pochhammer_expr(bj, m)));
    let den = a.iter().map(|ai| denominator_pochhammer(ai, m)).collect::<Result<Vec<_>>>()?;
    let prefactor = ratio(num, den);

    let scale = rat(rational_power(n, q - p + 1));
    let root = if n == 1 { z.clone() } else { Expr::pow(z.clone(), rat(Rational::from((1, n)))) };
    let mut terms = Vec::with_capacity(n as usize);
    for k in 0..n as i64 {
        let mut arg = vec![scale.clone()];
        if k > 0 {
            arg.push(Expr::RootOfUnity(n as u64, k));
        }
        arg.push(root.clone());
        let inner = series(a.clone(), b.clone(), product(arg)).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let h = Expr::hyp(inner);
        let w = (k * m as i64).rem_euclid(n as i64);
        terms.push(if w == 0 { h } else { Expr::Mul(vec![Expr::RootOfUnity(n as u64, -(k * m as i64)), h]) });
    }
    let sum = if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) };
    let rhs = if prefactor.as_rational().is_some_and(|q| q == 1) { sum } else { Expr::Mul(vec![prefactor, sum]) };
    let name = format!("DIST({n},{m},{z},{{{}}},{{{}}})", join(a), join(b));
    Ok(Identity::new(name, Expr::hyp(lhs), rhs, "dist"))
}

fn rational_power(n: u32, e: i64) -> Rational {
    let base = Integer::from(n).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from(base)
    } else {
        Rational::from((Integer::from(1), base))
    }
}

fn join(p: &ParamList) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn remove_at(p: &ParamList, idx: usize) -> Vec<Affine> {
    p.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, x)| x.clone()).collect()
}

fn check_index(p: &ParamList, idx: usize, what: &str) -> Result<()> {
    if idx >= p.len() {
        return Err(Error::InvalidSpec(format!("{what} index {idx} out of range (len {})", p.len())));
    }
    Ok(())
}

fn shifted(xs: &[Affine], by: i64) -> ParamList {
    let d = Rational::from(by);
    xs.iter().map(|x| x.add_const(&d)).collect()
}

fn natural_difference(a: &Affine, b: &Affine) -> Result<u32> {
    let d = a.sub(b);
    match d.as_rational() {
        Some(q) if *q.denom() == 1 && *q >= 0 => q.numer().to_u32().ok_or(Error::NotIntegerDifference),
        _ => Err(Error::NotIntegerDifference),
    }
}

/// Splits `s` where `upper[ui] - lower[li] = m` into `m + 1` series of
/// order `(p-1, q-1)` with shifted parameters.
pub fn stir(s: &HypSeries, ui: usize, li: usize) -> Result<Identity> {
    check_index(&s.upper, ui, "upper")?;
    check_index(&s.lower, li, "lower")?;
    let a = &s.upper.entries()[ui];
    let am = &s.lower.entries()[li];
    let m = natural_difference(a, am)?;
    let ups = remove_at(&s.upper, ui);
    let los = remove_at(&s.lower, li);
    let mut terms = Vec::new();
    for k in 0..=m {
        let mut num = vec![rat(Rational::from(Integer::from(Integer::binomial_u(m, k))))];
        if k > 0 {
            num.push(Expr::pow(s.z.clone(), Expr::int(k as i64)));
        }
        num.extend(ups.iter().map(|x| pochhammer_expr(x, k)));
        let mut den = vec![denominator_pochhammer(am, k)?];
        for b in &los {
            den.push(denominator_pochhammer(b, k)?);
        }
        let inner = series(shifted(&ups, k as i64), shifted(&los, k as i64), s.z.clone())?;
        terms.push(Expr::Mul(vec![ratio(num, den), Expr::hyp(inner)]));
    }
    let rhs = if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) };
    Ok(Identity::new(format!("STIR({s}; {ui}, {li})"), Expr::hyp(s.clone()), rhs, "stir"))
}

/// Removes the first `n` terms of a series with upper `1` and lower `n+1`.
pub fn init(s: &HypSeries, ui: usize, li: usize) -> Result<Identity> {
    check_index(&s.upper, ui, "upper")?;
    check_index(&s.lower, li, "lower")?;
    if s.upper.entries()[ui].as_rational().map_or(true, |q| *q != 1) {
        return Err(Error::InvalidSpec(format!("upper parameter {} is not 1", s.upper.entries()[ui])));
    }
    let n = match s.lower.entries()[li].as_rational() {
        Some(q) if *q.denom() == 1 && *q >= 2 => q.numer().to_u32().ok_or_else(|| Error::InvalidSpec("n too large".into()))? - 1,
        _ => return Err(Error::InvalidSpec(format!("lower parameter {} is not n+1 with n >= 1", s.lower.entries()[li]))),
    };
    if s.z.as_rational().is_some_and(|q| q == 0) {
        return Err(Error::InvalidSpec("z = 0".into()));
    }
    let ups = remove_at(&s.upper, ui);
    let los = remove_at(&s.lower, li);
    let (p, q) = (s.p() as i64, s.q() as i64);
    let one = Affine::constant(1);
    let sign = if ((p - q) * n as i64).rem_euclid(2) == 0 { 1 } else { -1 };
    let mut num = vec![Expr::int(sign), rat(Rational::from(Integer::from(Integer::factorial(n))))];
    num.extend(los.iter().map(|b| pochhammer_expr(&one.sub(b), n)));
    let mut den = vec![Expr::pow(s.z.clone(), Expr::int(n as i64))];
    for a in &ups {
        den.push(denominator_pochhammer(&one.sub(a), n)?);
    }
    let prefactor = ratio(num, den);

    let ups_n = shifted(&ups, -(n as i64));
    let los_n = shifted(&los, -(n as i64));
    let inner = series(ups_n.clone(), los_n.clone(), s.z.clone())
        .map_err(|e| Error::InvalidSpec(format!("shifted series undefined: {e}")))?;
    let mut diff = vec![Expr::hyp(inner)];
    for k in 0..n {
        let mut tn = vec![];
        if k > 0 {
            tn.push(Expr::pow(s.z.clone(), Expr::int(k as i64)));
        }
        tn.extend(ups_n.iter().map(|x| pochhammer_expr(x, k)));
        let mut td = vec![rat(Rational::from(Integer::from(Integer::factorial(k))))];
        for b in los_n.iter() {
            td.push(denominator_pochhammer(b, k)?);
        }
        diff.push(Expr::neg(ratio(tn, td)));
    }
    let rhs = Expr::Mul(vec![prefactor, Expr::Add(diff)]);
    Ok(Identity::new(format!("INIT({s}; {ui}, {li})"), Expr::hyp(s.clone()), rhs, "init"))
}

/// Partial fractions over the pairs `(ui, li)` with `lower[li] = upper[ui] + 1`.
pub fn pfd(s: &HypSeries, pairs: &[(usize, usize)]) -> Result<Identity> {
    if pairs.is_empty() {
        return Err(Error::InvalidSpec("no pairs given".into()));
    }
    let mut used_u = vec![false; s.p()];
    let mut used_l = vec![false; s.q()];
    let mut paired = Vec::new();
    for &(ui, li) in pairs {
        check_index(&s.upper, ui, "upper")?;
        check_index(&s.lower, li, "lower")?;
        if used_u[ui] || used_l[li] {
            return Err(Error::InvalidSpec(format!("index reused in pair ({ui}, {li})")));
        }
        used_u[ui] = true;
        used_l[li] = true;
        let a = s.upper.entries()[ui].clone();
        if s.lower.entries()[li].sub(&a).as_rational().map_or(true, |d| *d != 1) {
            return Err(Error::InvalidSpec(format!("lower {} is not upper {} + 1", s.lower.entries()[li], a)));
        }
        paired.push(a);
    }
    for (j, aj) in paired.iter().enumerate() {
        if let Some(ak) = paired[..j].iter().find(|ak| aj.sub(ak).as_rational().is_some_and(|d| *d == 0)) {
            return Err(Error::DuplicateParameter(ak.to_string()));
        }
    }
    let rest_u: Vec<Affine> = s.upper.iter().enumerate().filter(|(i, _)| !used_u[*i]).map(|(_, x)| x.clone()).collect();
    let rest_l: Vec<Affine> = s.lower.iter().enumerate().filter(|(i, _)| !used_l[*i]).map(|(_, x)| x.clone()).collect();
    let mut terms = Vec::new();
    for (k, ak) in paired.iter().enumerate() {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (j, aj) in paired.iter().enumerate() {
            if j != k {
                num.push(Expr::from_affine(aj));
                den.push(Expr::from_affine(&aj.sub(ak)));
            }
        }
        let mut up = vec![ak.clone()];
        up.extend(rest_u.iter().cloned());
        let mut lo = vec![ak.add_const(&Rational::from(1))];
        lo.extend(rest_l.iter().cloned());
        let inner = series(ParamList::new(up), ParamList::new(lo), s.z.clone())?;
        let coeff = ratio(num, den);
        terms.push(if coeff.as_rational().is_some_and(|q| q == 1) {
            Expr::hyp(inner)
        } else {
            Expr::Mul(vec![coeff, Expr::hyp(inner)])
        });
    }
    let rhs = if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) };
    let tag: Vec<String> = pairs.iter().map(|(u, l)| format!("({u},{l})")).collect();
    Ok(Identity::new(format!("PFD({s}; {})", tag.join(" ")), Expr::hyp(s.clone()), rhs, "pfd"))
}
