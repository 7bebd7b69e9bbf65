//! Closed-form expression trees.

use std::collections::BTreeSet;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde_json::{json, Value};

use super::affine::{parse_rational, Affine, Bindings};
use super::series::{HypSeries, ParamList};
use crate::error::{Error, Result};

/// Unary special and elementary functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Log,
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    ArcSin,
    ArcTan,
    ArcSinh,
    ArcTanh,
    Gamma,
    Zeta,
    EllipticK,
    EllipticE,
}

impl Func {
    pub const ALL: [Func; 14] = [
        Func::Log,
        Func::Exp,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::ArcSin,
        Func::ArcTan,
        Func::ArcSinh,
        Func::ArcTanh,
        Func::Gamma,
        Func::Zeta,
        Func::EllipticK,
        Func::EllipticE,
    ];

    /// JSON `kind` tag.
    pub fn kind(self) -> &'static str {
        match self {
            Func::Log => "Log",
            Func::Exp => "Exp",
            Func::Sin => "Sin",
            Func::Cos => "Cos",
            Func::Sinh => "Sinh",
            Func::Cosh => "Cosh",
            Func::ArcSin => "ArcSin",
            Func::ArcTan => "ArcTan",
            Func::ArcSinh => "ArcSinh",
            Func::ArcTanh => "ArcTanh",
            Func::Gamma => "Gamma",
            Func::Zeta => "Zeta",
            Func::EllipticK => "EllipticK",
            Func::EllipticE => "EllipticE",
        }
    }

    /// Name in the text syntax.
    pub fn text_name(self) -> &'static str {
        match self {
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::ArcSin => "asin",
            Func::ArcTan => "atan",
            Func::ArcSinh => "asinh",
            Func::ArcTanh => "atanh",
            Func::Gamma => "gamma",
            Func::Zeta => "zeta",
            Func::EllipticK => "K",
            Func::EllipticE => "E",
        }
    }

    pub fn from_kind(kind: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.kind() == kind)
    }

    pub fn from_text_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.text_name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(Integer),
    Rational(Rational),
    Symbol(String),
    I,
    Pi,
    Catalan,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Apply(Func, Box<Expr>),
    PolyLog(i64, Box<Expr>),
    /// `exp(2 pi i k / n)`
    RootOfUnity(u64, i64),
    Hyp(Box<HypSeries>),
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Int(Integer::from(v))
    }

    pub fn rational(q: Rational) -> Expr {
        if *q.denom() == 1 {
            Expr::Int(q.numer().clone())
        } else {
            Expr::Rational(q)
        }
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Symbol(name.to_string())
    }

    pub fn apply(f: Func, arg: Expr) -> Expr {
        Expr::Apply(f, Box::new(arg))
    }

    pub fn pow(base: Expr, exp: Expr) -> Expr {
        Expr::Pow(Box::new(base), Box::new(exp))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn sqrt(e: Expr) -> Expr {
        Expr::pow(e, Expr::Rational(Rational::from((1, 2))))
    }

    pub fn recip(e: Expr) -> Expr {
        Expr::pow(e, Expr::int(-1))
    }

    pub fn hyp(s: HypSeries) -> Expr {
        Expr::Hyp(Box::new(s))
    }

    pub fn from_affine(a: &Affine) -> Expr {
        let mut parts = Vec::new();
        for (name, c) in a.terms() {
            if *c == 1 {
                parts.push(Expr::sym(name));
            } else {
                parts.push(Expr::Mul(vec![Expr::rational(c.clone()), Expr::sym(name)]));
            }
        }
        if *a.constant_term() != 0 || parts.is_empty() {
            parts.push(Expr::rational(a.constant_term().clone()));
        }
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::Add(parts)
        }
    }

    /// Rational value if the tree is a literal.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Expr::Int(n) => Some(Rational::from(n)),
            Expr::Rational(q) => Some(q.clone()),
            _ => None,
        }
    }

    /// Interprets the tree as an affine form in its symbols, if it is one.
    pub fn to_affine(&self) -> Option<Affine> {
        match self {
            Expr::Int(_) | Expr::Rational(_) => Some(Affine::constant(self.as_rational()?)),
            Expr::Symbol(s) => Some(Affine::symbol(s)),
            Expr::Neg(e) => Some(e.to_affine()?.scale(&Rational::from(-1))),
            Expr::Add(xs) => {
                let mut acc = Affine::default();
                for x in xs {
                    acc = acc.add(&x.to_affine()?);
                }
                Some(acc)
            }
            Expr::Mul(xs) => {
                let mut acc = Affine::constant(1);
                for x in xs {
                    let f = x.to_affine()?;
                    acc = if let Some(q) = acc.as_rational() {
                        f.scale(q)
                    } else {
                        acc.scale(f.as_rational()?)
                    };
                }
                Some(acc)
            }
            Expr::Pow(b, e) => {
                let ex = e.as_rational()?;
                if ex == 1 {
                    return b.to_affine();
                }
                let q = b.to_affine()?.as_rational()?.clone();
                Some(Affine::constant(rational_pow(&q, &ex)?))
            }
            _ => None,
        }
    }

    /// Folds the tree to an exact rational under `bindings` when possible.
    pub fn fold_rational(&self, bindings: &Bindings) -> Option<Rational> {
        match self {
            Expr::Int(_) | Expr::Rational(_) => self.as_rational(),
            Expr::Symbol(s) => bindings.get(s).cloned(),
            Expr::Neg(e) => Some(-e.fold_rational(bindings)?),
            Expr::Add(xs) => {
                let mut acc = Rational::new();
                for x in xs {
                    acc += x.fold_rational(bindings)?;
                }
                Some(acc)
            }
            Expr::Mul(xs) => {
                let mut acc = Rational::from(1);
                for x in xs {
                    acc *= x.fold_rational(bindings)?;
                }
                Some(acc)
            }
            Expr::Pow(b, e) => {
                let base = b.fold_rational(bindings)?;
                let ex = e.fold_rational(bindings)?;
                rational_pow(&base, &ex)
            }
            Expr::RootOfUnity(n, k) => {
                let r = k.rem_euclid(*n as i64) as u64;
                if r == 0 {
                    Some(Rational::from(1))
                } else if 2 * r == *n {
                    Some(Rational::from(-1))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Free symbols, including those inside embedded series.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Symbol(s) => {
                out.insert(s.clone());
            }
            Expr::Hyp(s) => {
                for p in s.upper.iter().chain(s.lower.iter()) {
                    out.extend(p.symbols());
                }
                s.z.collect_symbols(out);
            }
            _ => self.for_each_child(|c| c.collect_symbols(out)),
        }
    }

    fn for_each_child(&self, mut f: impl FnMut(&Expr)) {
        match self {
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(f),
            Expr::Pow(a, b) => {
                f(a);
                f(b);
            }
            Expr::Neg(e) | Expr::Apply(_, e) | Expr::PolyLog(_, e) => f(e),
            Expr::Hyp(s) => f(&s.z),
            _ => {}
        }
    }

    /// Applies `f` to every child, rebuilding the node.
    pub fn map_children(&self, f: &mut impl FnMut(&Expr) -> Expr) -> Expr {
        match self {
            Expr::Add(xs) => Expr::Add(xs.iter().map(&mut *f).collect()),
            Expr::Mul(xs) => Expr::Mul(xs.iter().map(&mut *f).collect()),
            Expr::Pow(a, b) => Expr::pow(f(a), f(b)),
            Expr::Neg(e) => Expr::neg(f(e)),
            Expr::Apply(g, e) => Expr::apply(*g, f(e)),
            Expr::PolyLog(s, e) => Expr::PolyLog(*s, Box::new(f(e))),
            Expr::Hyp(s) => {
                Expr::hyp(HypSeries { upper: s.upper.clone(), lower: s.lower.clone(), z: f(&s.z) })
            }
            other => other.clone(),
        }
    }

    /// Replaces bound symbols with their rational values (in series
    /// parameters too).
    pub fn substitute(&self, bindings: &Bindings) -> Expr {
        match self {
            Expr::Symbol(s) => match bindings.get(s) {
                Some(q) => Expr::rational(q.clone()),
                None => self.clone(),
            },
            Expr::Hyp(s) => Expr::hyp(HypSeries {
                upper: s.upper.substitute(bindings),
                lower: s.lower.substitute(bindings),
                z: s.z.substitute(bindings),
            }),
            _ => self.map_children(&mut |c| c.substitute(bindings)),
        }
    }

    /// Replaces a symbol by an arbitrary expression (not inside series
    /// parameters, which must stay affine).
    pub fn replace_symbol(&self, name: &str, with: &Expr) -> Expr {
        match self {
            Expr::Symbol(s) if s == name => with.clone(),
            _ => self.map_children(&mut |c| c.replace_symbol(name, with)),
        }
    }

    /// Pre-order visit of every node, including series arguments.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        self.for_each_child(|c| c.visit(f));
    }

    pub fn contains_hyp(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, Expr::Hyp(_)));
        found
    }

    /// Canonical form: flattened sums and products with sorted children and
    /// folded rational arithmetic. No other simplification is attempted.
    pub fn canonical(&self) -> Expr {
        match self {
            Expr::Rational(q) => Expr::rational(q.clone()),
            Expr::Neg(e) => Expr::Mul(vec![Expr::int(-1), e.canonical()]).canonical_flat(),
            Expr::Add(_) | Expr::Mul(_) => self.map_children(&mut |c| c.canonical()).canonical_flat(),
            Expr::Pow(b, e) => {
                let b = b.canonical();
                let e = e.canonical();
                if let Some(ex) = e.as_rational() {
                    if ex == 0 {
                        return Expr::int(1);
                    }
                    if ex == 1 {
                        return b;
                    }
                    if let Some(base) = b.as_rational() {
                        if let Some(v) = rational_pow(&base, &ex) {
                            return Expr::rational(v);
                        }
                    }
                }
                if b.as_rational().is_some_and(|q| q == 1) {
                    return Expr::int(1);
                }
                Expr::pow(b, e)
            }
            Expr::RootOfUnity(n, k) => {
                let n_i = *n as i64;
                let r = k.rem_euclid(n_i);
                let g = Integer::from(r).gcd(&Integer::from(n_i)).to_i64().unwrap_or(1).max(1);
                let (n2, k2) = (n_i / g, r / g);
                match (n2, k2) {
                    (1, _) => Expr::int(1),
                    (2, 1) => Expr::int(-1),
                    _ => Expr::RootOfUnity(n2 as u64, k2),
                }
            }
            _ => self.map_children(&mut |c| c.canonical()),
        }
    }

    fn canonical_flat(self) -> Expr {
        let is_add = matches!(self, Expr::Add(_));
        let children = match self {
            Expr::Add(xs) | Expr::Mul(xs) => xs,
            other => return other,
        };
        let mut flat = Vec::new();
        for c in children {
            match c {
                Expr::Add(inner) if is_add => flat.extend(inner),
                Expr::Mul(inner) if !is_add => flat.extend(inner),
                other => flat.push(other),
            }
        }
        let mut acc = if is_add { Rational::new() } else { Rational::from(1) };
        let mut rest = Vec::new();
        for c in flat {
            match c.as_rational() {
                Some(q) if is_add => acc += q,
                Some(q) => acc *= q,
                None => rest.push(c),
            }
        }
        if !is_add && acc == 0 {
            return Expr::int(0);
        }
        rest.sort_by_cached_key(|e| e.to_string());
        let neutral = if is_add { acc == 0 } else { acc == 1 };
        if !neutral || rest.is_empty() {
            rest.insert(0, Expr::rational(acc));
        }
        if rest.len() == 1 {
            return rest.pop().unwrap();
        }
        if is_add {
            Expr::Add(rest)
        } else {
            Expr::Mul(rest)
        }
    }

    /// Structural equality after canonicalization.
    pub fn equivalent(&self, other: &Expr) -> bool {
        self.canonical() == other.canonical()
    }

    /// JSON tree encoding: `{"kind": ..., "args": [...]}`.
    pub fn to_json(&self) -> Value {
        let (kind, args): (&str, Vec<Value>) = match self {
            Expr::Int(n) => ("Int", vec![json!(n.to_string())]),
            Expr::Rational(q) => ("Rational", vec![json!(q.to_string())]),
            Expr::Symbol(s) => ("Symbol", vec![json!(s)]),
            Expr::I => ("I", vec![]),
            Expr::Pi => ("Pi", vec![]),
            Expr::Catalan => ("Catalan", vec![]),
            Expr::Add(xs) => ("Add", xs.iter().map(Expr::to_json).collect()),
            Expr::Mul(xs) => ("Mul", xs.iter().map(Expr::to_json).collect()),
            Expr::Pow(a, b) => ("Pow", vec![a.to_json(), b.to_json()]),
            Expr::Neg(e) => ("Neg", vec![e.to_json()]),
            Expr::Apply(f, e) => (f.kind(), vec![e.to_json()]),
            Expr::PolyLog(s, e) => ("PolyLog", vec![json!(s), e.to_json()]),
            Expr::RootOfUnity(n, k) => ("RootOfUnity", vec![json!(n), json!(k)]),
            Expr::Hyp(s) => ("Hyp", vec![s.to_json()]),
        };
        json!({"kind": kind, "args": args})
    }

    pub fn from_json(v: &Value) -> Result<Expr> {
        Self::from_json_at(v, "$")
    }

    pub(crate) fn from_json_at(v: &Value, path: &str) -> Result<Expr> {
        let err = |m: &str| Error::parse(path.to_string(), m.to_string());
        let obj = v.as_object().ok_or_else(|| err("expression must be an object"))?;
        let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| err("missing `kind`"))?;
        let args = obj.get("args").and_then(Value::as_array).ok_or_else(|| err("missing `args`"))?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(&format!("`{kind}` takes {n} argument(s), got {}", args.len())))
            }
        };
        let sub = |i: usize| Expr::from_json_at(&args[i], &format!("{path}.args[{i}]"));
        let string_arg = |i: usize| args[i].as_str().ok_or_else(|| err("expected a string argument"));
        let int_arg = |i: usize| args[i].as_i64().ok_or_else(|| err("expected an integer argument"));
        Ok(match kind {
            "Int" => {
                arity(1)?;
                Expr::Int(string_arg(0)?.parse().map_err(|_| err("bad integer literal"))?)
            }
            "Rational" => {
                arity(1)?;
                Expr::Rational(parse_rational(string_arg(0)?).map_err(|_| err("bad rational literal"))?)
            }
            "Symbol" => {
                arity(1)?;
                Expr::Symbol(string_arg(0)?.to_string())
            }
            "I" => {
                arity(0)?;
                Expr::I
            }
            "Pi" => {
                arity(0)?;
                Expr::Pi
            }
            "Catalan" => {
                arity(0)?;
                Expr::Catalan
            }
            "Add" | "Mul" => {
                let xs = (0..args.len()).map(sub).collect::<Result<Vec<_>>>()?;
                if xs.is_empty() {
                    return Err(err("empty sum or product"));
                }
                if kind == "Add" {
                    Expr::Add(xs)
                } else {
                    Expr::Mul(xs)
                }
            }
            "Pow" => {
                arity(2)?;
                Expr::pow(sub(0)?, sub(1)?)
            }
            "Neg" => {
                arity(1)?;
                Expr::neg(sub(0)?)
            }
            "PolyLog" => {
                arity(2)?;
                let s = int_arg(0)?;
                if !(2..=4).contains(&s) {
                    return Err(err("polylog order must be 2, 3 or 4"));
                }
                Expr::PolyLog(s, Box::new(sub(1)?))
            }
            "RootOfUnity" => {
                arity(2)?;
                let n = int_arg(0)?;
                if n < 1 {
                    return Err(err("root of unity order must be positive"));
                }
                Expr::RootOfUnity(n as u64, int_arg(1)?)
            }
            "Hyp" => {
                arity(1)?;
                let s = HypSeries::from_json_at(&args[0], &format!("{path}.args[0]"))?;
                Expr::hyp(s)
            }
            other => match Func::from_kind(other) {
                Some(f) => {
                    arity(1)?;
                    Expr::apply(f, sub(0)?)
                }
                None => return Err(err(&format!("unknown expression kind `{other}`"))),
            },
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(_) => 1,
            Expr::Mul(xs) if xs.len() > 1 => 2,
            Expr::Rational(_) => 2,
            Expr::Neg(_) => 3,
            Expr::Int(n) if *n < 0 => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// `base^ex` when the result is rational (integer exponents, and fractional
/// exponents of perfect powers).
pub fn rational_pow(base: &Rational, ex: &Rational) -> Option<Rational> {
    let (num, den) = (ex.numer().to_i64()?, ex.denom().to_u32()?);
    if num.unsigned_abs() > 4096 {
        return None;
    }
    if *base == 0 {
        return if num > 0 { Some(Rational::new()) } else { None };
    }
    let mut root = base.clone();
    if den != 1 {
        if *base < 0 {
            return None;
        }
        let n = base.numer().clone().root(den);
        let d = base.denom().clone().root(den);
        if n.clone().pow(den) != *base.numer() || d.clone().pow(den) != *base.denom() {
            return None;
        }
        root = Rational::from((n, d));
    }
    let mut out = Rational::from(1);
    for _ in 0..num.unsigned_abs() {
        out *= &root;
    }
    if num < 0 {
        out = out.recip();
    }
    Some(out)
}

fn fmt_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Rational(q) => write!(f, "{q}"),
            Expr::Symbol(s) => f.write_str(s),
            Expr::I => f.write_str("i"),
            Expr::Pi => f.write_str("pi"),
            Expr::Catalan => f.write_str("Catalan"),
            Expr::Add(xs) => {
                for (j, x) in xs.iter().enumerate() {
                    let s = if x.precedence() < 2 { format!("({x})") } else { x.to_string() };
                    if j == 0 {
                        f.write_str(&s)?;
                    } else if let Some(rest) = s.strip_prefix('-') {
                        write!(f, " - {rest}")?;
                    } else {
                        write!(f, " + {s}")?;
                    }
                }
                Ok(())
            }
            Expr::Mul(xs) => {
                let mut rest: &[Expr] = xs;
                if let Some(Expr::Int(n)) = xs.first() {
                    if *n == -1 && xs.len() > 1 {
                        f.write_str("-")?;
                        rest = &xs[1..];
                    }
                }
                for (j, x) in rest.iter().enumerate() {
                    if j > 0 {
                        f.write_str("*")?;
                    }
                    fmt_child(f, x, 2)?;
                }
                Ok(())
            }
            Expr::Pow(a, b) => {
                fmt_child(f, a, 5)?;
                f.write_str("^")?;
                fmt_child(f, b, 5)
            }
            Expr::Neg(e) => {
                f.write_str("-")?;
                fmt_child(f, e, 4)
            }
            Expr::Apply(g, e) => write!(f, "{}({e})", g.text_name()),
            Expr::PolyLog(s, e) => write!(f, "Li{s}({e})"),
            Expr::RootOfUnity(n, k) => write!(f, "unity({n}, {k})"),
            Expr::Hyp(s) => write!(f, "{s}"),
        }
    }
}

impl ParamList {
    pub(crate) fn fmt_entries(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, p) in self.iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
