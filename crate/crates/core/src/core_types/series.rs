//! Parameter lists and `pFq` series objects.

use std::fmt;

use rug::{Integer, Rational};
use serde_json::{json, Value};

use super::affine::{Affine, Bindings};
use super::expr::Expr;
use crate::error::{Error, Result};

/// Ordered multiset of parameters. Equality ignores order.
#[derive(Clone, Debug, Default, Eq, Hash)]
pub struct ParamList(Vec<Affine>);

impl PartialEq for ParamList {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl ParamList {
    pub fn new(entries: Vec<Affine>) -> Self {
        ParamList(entries)
    }

    pub fn from_rationals(qs: impl IntoIterator<Item = Rational>) -> Self {
        ParamList(qs.into_iter().map(Affine::constant).collect())
    }

    /// Parses each string as an affine form.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        items.iter().map(|s| s.as_ref().parse()).collect::<Result<Vec<_>>>().map(ParamList)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Affine> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[Affine] {
        &self.0
    }

    pub fn push(&mut self, a: Affine) {
        self.0.push(a);
    }

    pub fn sorted(&self) -> Vec<Affine> {
        let mut v = self.0.clone();
        v.sort();
        v
    }

    /// All entries as rationals, or the first unbound symbol.
    pub fn rationals(&self) -> Result<Vec<Rational>> {
        self.0
            .iter()
            .map(|a| {
                a.as_rational().cloned().ok_or_else(|| {
                    Error::UnboundSymbol(a.symbols().into_iter().next().unwrap_or_default())
                })
            })
            .collect()
    }

    pub fn substitute(&self, bindings: &Bindings) -> ParamList {
        ParamList(self.0.iter().map(|a| a.substitute(bindings)).collect())
    }

    pub fn contains_nonpositive_integer(&self) -> bool {
        self.0.iter().any(Affine::is_nonpositive_integer)
    }

    fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|a| json!(a.to_string())).collect())
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::parse(path, "parameter list must be an array"))?;
        let mut out = Vec::with_capacity(arr.len());
        for (j, item) in arr.iter().enumerate() {
            let loc = format!("{path}[{j}]");
            let s = item.as_str().ok_or_else(|| Error::parse(&loc, "parameter must be a string"))?;
            out.push(s.parse::<Affine>().map_err(|e| Error::parse(&loc, e.to_string()))?);
        }
        Ok(ParamList(out))
    }
}

impl FromIterator<Affine> for ParamList {
    fn from_iter<T: IntoIterator<Item = Affine>>(iter: T) -> Self {
        ParamList(iter.into_iter().collect())
    }
}

/// `pFq(upper; lower; z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypSeries {
    pub upper: ParamList,
    pub lower: ParamList,
    pub z: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceClass {
    InsideDisk,
    BoundaryAbs,
    BoundaryCond,
    Divergent,
    Terminating,
}

impl fmt::Display for ConvergenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvergenceClass::InsideDisk => "inside_disk",
            ConvergenceClass::BoundaryAbs => "boundary_abs",
            ConvergenceClass::BoundaryCond => "boundary_cond",
            ConvergenceClass::Divergent => "divergent",
            ConvergenceClass::Terminating => "terminating",
        })
    }
}

impl HypSeries {
    pub fn new(upper: ParamList, lower: ParamList, z: Expr) -> Result<Self> {
        let s = HypSeries { upper, lower, z };
        s.validate()?;
        Ok(s)
    }

    /// Builds a concrete series from rational parameters.
    pub fn from_rationals(
        upper: impl IntoIterator<Item = Rational>,
        lower: impl IntoIterator<Item = Rational>,
        z: Expr,
    ) -> Result<Self> {
        HypSeries::new(ParamList::from_rationals(upper), ParamList::from_rationals(lower), z)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(b) = self.lower.iter().find(|b| b.is_nonpositive_integer()) {
            return Err(Error::InvalidSeries(format!("lower parameter {b} is a nonpositive integer")));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// True if some upper parameter is a concrete nonpositive integer.
    pub fn is_terminating(&self) -> bool {
        self.upper.contains_nonpositive_integer()
    }

    pub fn is_concrete(&self) -> bool {
        self.upper.iter().chain(self.lower.iter()).all(Affine::is_constant)
    }

    pub fn substitute(&self, bindings: &Bindings) -> HypSeries {
        HypSeries {
            upper: self.upper.substitute(bindings),
            lower: self.lower.substitute(bindings),
            z: self.z.substitute(bindings),
        }
    }

    /// `Re(sum lower - sum upper)` for concrete parameters.
    pub fn excess(&self) -> Result<Rational> {
        let up: Rational = self.upper.rationals()?.into_iter().sum();
        let lo: Rational = self.lower.rationals()?.into_iter().sum();
        Ok(lo - up)
    }

    pub fn to_json(&self) -> Value {
        json!({"upper": self.upper.to_json(), "lower": self.lower.to_json(), "z": self.z.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::from_json_at(v, "$")
    }

    pub(crate) fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::parse(path, "series must be an object"))?;
        let field = |k: &str| obj.get(k).ok_or_else(|| Error::parse(path, format!("missing `{k}`")));
        let upper = ParamList::from_json_at(field("upper")?, &format!("{path}.upper"))?;
        let lower = ParamList::from_json_at(field("lower")?, &format!("{path}.lower"))?;
        let z = Expr::from_json_at(field("z")?, &format!("{path}.z"))?;
        HypSeries::new(upper, lower, z).map_err(|e| Error::parse(path, e.to_string()))
    }
}

impl fmt::Display for HypSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}F{}(", self.p(), self.q())?;
        self.upper.fmt_entries(f)?;
        f.write_str("; ")?;
        self.lower.fmt_entries(f)?;
        write!(f, "; {})", self.z)
    }
}

/// Rising factorial `a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: &Rational, k: u32) -> Rational {
    let mut acc = Rational::from(1);
    let mut x = a.clone();
    for _ in 0..k {
        acc *= &x;
        if acc == 0 {
            break;
        }
        x += 1u32;
    }
    acc
}

/// `(a)_k` for an affine `a`, as an expression (exact when concrete).
pub fn pochhammer_expr(a: &Affine, k: u32) -> Expr {
    if let Some(q) = a.as_rational() {
        return Expr::rational(pochhammer(q, k));
    }
    let factors: Vec<Expr> = (0..k).map(|j| Expr::from_affine(&a.add_const(&Rational::from(j)))).collect();
    match factors.len() {
        0 => Expr::int(1),
        1 => factors.into_iter().next().unwrap(),
        _ => Expr::Mul(factors),
    }
}

/// Removes the largest common multiset of upper and lower parameters.
pub fn cancel_parameters(s: &HypSeries) -> HypSeries {
    let mut lower: Vec<Option<Affine>> = s.lower.iter().cloned().map(Some).collect();
    let mut upper = Vec::new();
    for a in s.upper.iter() {
        match lower.iter_mut().find(|b| b.as_ref() == Some(a)) {
            Some(slot) => *slot = None,
            None => upper.push(a.clone()),
        }
    }
    HypSeries {
        upper: ParamList::new(upper),
        lower: lower.into_iter().flatten().collect(),
        z: s.z.clone(),
    }
}

/// Where `|z|` sits relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgPosition {
    Zero,
    Inside,
    One,
    OnCircle,
    Outside,
}

/// Locates the argument; exact when it folds to a rational, otherwise
/// decided at `bits` of working precision.
pub fn arg_position(z: &Expr, bits: u32) -> Result<ArgPosition> {
    if let Some(q) = z.fold_rational(&Bindings::new()) {
        let a = Rational::from(q.abs_ref());
        return Ok(if q == 0 {
            ArgPosition::Zero
        } else if q == 1 {
            ArgPosition::One
        } else if a == 1 {
            ArgPosition::OnCircle
        } else if a < 1 {
            ArgPosition::Inside
        } else {
            ArgPosition::Outside
        });
    }
    let prec = crate::numerics::Precision::with_guard(((bits as f64) / 3.33) as u32, 10);
    let v = crate::numerics::eval_expression(z, &Bindings::new(), &prec)?;
    let tol = 2f64.powi(-(bits as i32) / 2).max(v.err() * 4.0);
    let abs = v.abs_f64();
    let one = crate::numerics::ComplexApprox::one(v.bits());
    Ok(if abs <= tol {
        ArgPosition::Zero
    } else if v.abs_diff(&one) <= tol {
        ArgPosition::One
    } else if (abs - 1.0).abs() <= tol {
        ArgPosition::OnCircle
    } else if abs < 1.0 {
        ArgPosition::Inside
    } else {
        ArgPosition::Outside
    })
}

/// Classifies a concrete series by its convergence behaviour.
pub fn convergence_class(s: &HypSeries) -> Result<ConvergenceClass> {
    let upper = s.upper.rationals()?;
    s.lower.rationals()?;
    if upper.iter().any(|a| *a.denom() == 1 && *a <= 0) {
        return Ok(ConvergenceClass::Terminating);
    }
    let (p, q) = (s.p(), s.q());
    if p <= q {
        return Ok(ConvergenceClass::InsideDisk);
    }
    let pos = arg_position(&s.z, 256)?;
    if pos == ArgPosition::Zero {
        return Ok(ConvergenceClass::InsideDisk);
    }
    if p > q + 1 {
        return Ok(ConvergenceClass::Divergent);
    }
    Ok(match pos {
        ArgPosition::Zero | ArgPosition::Inside => ConvergenceClass::InsideDisk,
        ArgPosition::Outside => ConvergenceClass::Divergent,
        ArgPosition::One | ArgPosition::OnCircle => {
            let excess = s.excess()?;
            if excess > 0 {
                ConvergenceClass::BoundaryAbs
            } else if excess > -1 && pos == ArgPosition::OnCircle {
                ConvergenceClass::BoundaryCond
            } else {
                ConvergenceClass::Divergent
            }
        }
    })
}

/// The exact `k`-th Maclaurin term `prod (a)_k / (prod (b)_k k!) z^k`.
pub fn series_term(s: &HypSeries, k: u32) -> Expr {
    if k == 0 {
        return Expr::int(1);
    }
    let mut num = vec![];
    let mut den = vec![Expr::Int(Integer::factorial(k).into())];
    for a in s.upper.iter() {
        num.push(pochhammer_expr(a, k));
    }
    for b in s.lower.iter() {
        den.push(pochhammer_expr(b, k));
    }
    num.push(Expr::pow(s.z.clone(), Expr::int(k as i64)));
    num.push(Expr::recip(Expr::Mul(den)));
    Expr::Mul(num).canonical()
}
