//! Affine forms `c + sum_i k_i * x_i` with rational coefficients.
//!
//! Series parameters are affine in the free symbols of an identity, so a
//! concrete parameter is simply a form with no symbol terms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rug::Rational;

use crate::error::{Error, Result};

pub type Bindings = HashMap<String, Rational>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Affine {
    terms: BTreeMap<String, Rational>,
    constant: Rational,
}

impl Affine {
    pub fn constant(q: impl Into<Rational>) -> Self {
        Affine { terms: BTreeMap::new(), constant: q.into() }
    }

    pub fn symbol(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), Rational::from(1));
        Affine { terms, constant: Rational::new() }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, name: &str) -> Rational {
        self.terms.get(name).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_constant() {
            Some(&self.constant)
        } else {
            None
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        self.terms.keys().cloned().collect()
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            *out.terms.entry(k.clone()).or_default() += v;
        }
        out.constant += &other.constant;
        out.prune()
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn add_const(&self, q: &Rational) -> Affine {
        let mut out = self.clone();
        out.constant += q;
        out
    }

    pub fn scale(&self, q: &Rational) -> Affine {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= q;
        }
        out.constant *= q;
        out.prune()
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, v| *v != 0);
        self
    }

    /// Value under a full binding of the symbols.
    pub fn eval(&self, bindings: &Bindings) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (k, v) in &self.terms {
            let x = bindings.get(k).ok_or_else(|| Error::UnboundSymbol(k.clone()))?;
            acc += Rational::from(v * x);
        }
        Ok(acc)
    }

    /// Substitutes the bound symbols, leaving the others in place.
    pub fn substitute(&self, bindings: &Bindings) -> Affine {
        let mut out = Affine::constant(self.constant.clone());
        for (k, v) in &self.terms {
            match bindings.get(k) {
                Some(x) => out.constant += Rational::from(v * x),
                None => {
                    out.terms.insert(k.clone(), v.clone());
                }
            }
        }
        out
    }

    /// True if the form is a concrete integer `<= 0`.
    pub fn is_nonpositive_integer(&self) -> bool {
        self.as_rational().is_some_and(|q| *q.denom() == 1 && *q <= 0)
    }
}

impl From<Rational> for Affine {
    fn from(q: Rational) -> Self {
        Affine::constant(q)
    }
}

impl From<i64> for Affine {
    fn from(v: i64) -> Self {
        Affine::constant(Rational::from(v))
    }
}

fn write_coeff_term(f: &mut fmt::Formatter<'_>, first: bool, coeff: &Rational, name: &str) -> fmt::Result {
    let neg = *coeff < 0;
    let abs = Rational::from(coeff.abs_ref());
    if neg {
        f.write_str("-")?;
    } else if !first {
        f.write_str("+")?;
    }
    if abs == 1 {
        f.write_str(name)
    } else {
        write!(f, "{abs}*{name}")
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.terms {
            write_coeff_term(f, first, v, k)?;
            first = false;
        }
        if first {
            return write!(f, "{}", self.constant);
        }
        if self.constant != 0 {
            if self.constant > 0 {
                f.write_str("+")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

impl FromStr for Affine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let expr = super::parse::parse_expr(s)?;
        expr.to_affine().ok_or_else(|| Error::parse(format!("`{s}`"), "parameter is not affine in its symbols"))
    }
}

/// Parses a rational literal such as `-5/4` or `3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let parsed = if let Some((n, d)) = t.split_once('/') {
        let n: rug::Integer = n.trim().parse().map_err(|_| Error::parse(format!("`{s}`"), "bad numerator"))?;
        let d: rug::Integer = d.trim().parse().map_err(|_| Error::parse(format!("`{s}`"), "bad denominator"))?;
        if d == 0 {
            return Err(Error::parse(format!("`{s}`"), "zero denominator"));
        }
        Rational::from((n, d))
    } else {
        let n: rug::Integer = t.parse().map_err(|_| Error::parse(format!("`{s}`"), "not a rational"))?;
        Rational::from(n)
    };
    Ok(parsed)
}
