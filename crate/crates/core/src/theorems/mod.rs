//! Closed-form summation by template matching.
//!
//! Templates live in `data/theorems.json`. Matching solves the affine
//! equations between template and series parameters exactly, trying
//! every pairing of upper and of lower parameters.

mod solve;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rug::Rational;
use serde_json::{json, Value};

use crate::core_types::{
    parse_expr, parse_series, Affine, Bindings, ConstraintPredicate, Expr, Func, HypSeries, Identity,
};
use crate::error::{Error, Result};
use crate::numerics::{eval_expression, Precision};
use solve::Solver;

const TEMPLATES_JSON: &str = include_str!("../../data/theorems.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum TheoremId {
    Gauss1,
    KummerMinus1,
    KummerHalf,
    Dixon,
    Watson,
    Whipple,
    ClausenSquare,
    DougallL1,
    DougallL2,
    DougallL3,
    DougallL4,
    K1,
    K2,
    K3,
    K4,
    ArcsinSquare,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::Gauss1,
        TheoremId::KummerMinus1,
        TheoremId::KummerHalf,
        TheoremId::Dixon,
        TheoremId::Watson,
        TheoremId::Whipple,
        TheoremId::ClausenSquare,
        TheoremId::DougallL1,
        TheoremId::DougallL2,
        TheoremId::DougallL3,
        TheoremId::DougallL4,
        TheoremId::K1,
        TheoremId::K2,
        TheoremId::K3,
        TheoremId::K4,
        TheoremId::ArcsinSquare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Gauss1 => "Gauss1",
            TheoremId::KummerMinus1 => "KummerMinus1",
            TheoremId::KummerHalf => "KummerHalf",
            TheoremId::Dixon => "Dixon",
            TheoremId::Watson => "Watson",
            TheoremId::Whipple => "Whipple",
            TheoremId::ClausenSquare => "ClausenSquare",
            TheoremId::DougallL1 => "DougallL1",
            TheoremId::DougallL2 => "DougallL2",
            TheoremId::DougallL3 => "DougallL3",
            TheoremId::DougallL4 => "DougallL4",
            TheoremId::K1 => "K1",
            TheoremId::K2 => "K2",
            TheoremId::K3 => "K3",
            TheoremId::K4 => "K4",
            TheoremId::ArcsinSquare => "ArcsinSquare",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse(format!("`{s}`"), "unknown theorem"))
    }
}

/// One stored summation formula.
#[derive(Clone, Debug, PartialEq)]
pub struct Template {
    pub theorem: TheoremId,
    pub variant: Option<String>,
    /// Parameter symbols, excluding a free argument symbol.
    pub symbols: Vec<String>,
    pub lhs: HypSeries,
    pub rhs: Expr,
    pub constraints: Vec<ConstraintPredicate>,
}

impl Template {
    pub fn label(&self) -> String {
        match &self.variant {
            Some(v) => format!("{}{}", self.theorem, v),
            None => self.theorem.to_string(),
        }
    }

    /// The argument symbol when the template matches any argument.
    fn argument_symbol(&self) -> Option<&str> {
        match &self.lhs.z {
            Expr::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn identity(&self) -> Identity {
        Identity::new(self.label(), Expr::hyp(self.lhs.clone()), self.rhs.clone(), "summation template")
            .with_constraints(self.constraints.clone())
    }

    fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem.name(),
            "variant": self.variant,
            "symbols": self.symbols,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "constraints": self.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value, path: &str) -> Result<Template> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::parse(path, format!("missing `{k}`")));
        let theorem: TheoremId = field("theorem")?.as_str().unwrap_or_default().parse()?;
        let variant = v.get("variant").and_then(Value::as_str).map(String::from);
        let lhs = HypSeries::from_json(field("lhs")?)?;
        let rhs = Expr::from_json(field("rhs")?)?;
        let constraints = field("constraints")?
            .as_array()
            .ok_or_else(|| Error::parse(path, "`constraints` must be an array"))?
            .iter()
            .map(|c| c.as_str().unwrap_or_default().parse())
            .collect::<Result<Vec<_>>>()?;
        Ok(Template::new(theorem, variant, lhs, rhs, constraints))
    }

    fn new(theorem: TheoremId, variant: Option<String>, lhs: HypSeries, rhs: Expr, constraints: Vec<ConstraintPredicate>) -> Self {
        let mut t = Template { theorem, variant, symbols: Vec::new(), lhs, rhs, constraints };
        let arg = t.argument_symbol().map(String::from);
        let mut syms = t.identity().free_symbols;
        syms.retain(|s| Some(s) != arg.as_ref());
        t.symbols = syms;
        t
    }
}

#[derive(serde::Deserialize)]
struct TemplateSource {
    template: Vec<TemplateRow>,
}

#[derive(serde::Deserialize)]
struct TemplateRow {
    id: String,
    variant: Option<String>,
    lhs: String,
    rhs: String,
    #[serde(rename = "where", default)]
    constraints: Vec<String>,
}

/// Compiles the TOML template source into the shipped JSON document.
pub fn compile_templates(source: &str) -> Result<Value> {
    let src: TemplateSource = toml::from_str(source).map_err(|e| Error::parse("theorems.toml", e.to_string()))?;
    let mut out = Vec::new();
    for row in src.template {
        let at = |e: Error| Error::parse(format!("template {}", row.id), e.to_string());
        let theorem: TheoremId = row.id.parse()?;
        let lhs = parse_series(&row.lhs).map_err(at)?;
        let rhs = parse_expr(&row.rhs).map_err(at)?;
        let constraints = row.constraints.iter().map(|c| c.parse()).collect::<Result<Vec<_>>>().map_err(at)?;
        let t = Template::new(theorem, row.variant, lhs, rhs, constraints);
        t.identity().validate()?;
        out.push(t.to_json());
    }
    Ok(json!({"schema": 1, "templates": out}))
}

/// Parses a template JSON document.
pub fn load_templates(text: &str) -> Result<Vec<Template>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::parse(format!("line {}", e.line()), e.to_string()))?;
    let rows = v.get("templates").and_then(Value::as_array).ok_or_else(|| Error::parse("$", "missing `templates`"))?;
    rows.iter().enumerate().map(|(i, r)| Template::from_json(r, &format!("$.templates[{i}]"))).collect()
}

/// The shipped templates.
pub fn templates() -> &'static [Template] {
    static CELL: OnceLock<Vec<Template>> = OnceLock::new();
    CELL.get_or_init(|| load_templates(TEMPLATES_JSON).expect("shipped theorem templates are valid"))
}

pub fn templates_for(t: TheoremId) -> Vec<&'static Template> {
    templates().iter().filter(|x| x.theorem == t).collect()
}

fn instantiate(t: &Template, binding: &Bindings) -> Result<Identity> {
    instantiate_at(t, binding, None)
}

/// As `instantiate`, with the argument symbol (if any) replaced by `arg`.
fn instantiate_at(t: &Template, binding: &Bindings, arg: Option<&Expr>) -> Result<Identity> {
    for c in &t.constraints {
        if !c.holds(binding)? {
            return Err(Error::SideConditionViolated { theorem: t.label(), condition: c.to_string() });
        }
    }
    let id = t.identity();
    let replaced = arg.and(t.argument_symbol());
    for s in &id.free_symbols {
        if !binding.contains_key(s) && Some(s.as_str()) != replaced {
            return Err(Error::UnboundSymbol(s.clone()));
        }
    }
    let mut lhs = t.lhs.substitute(binding);
    let mut rhs = t.rhs.substitute(binding);
    if let (Some(z), Some(arg)) = (replaced, arg) {
        lhs.z = arg.clone();
        rhs = rhs.replace_symbol(z, arg);
    }
    lhs.validate().map_err(|e| Error::SideConditionViolated { theorem: t.label(), condition: e.to_string() })?;
    check_poles(&t.label(), &rhs)?;
    Ok(Identity::new(t.label(), Expr::hyp(lhs), rhs, format!("{} closed form", t.theorem)))
}

/// Rejects closed forms with a gamma pole or that fail to evaluate.
fn check_poles(theorem: &str, rhs: &Expr) -> Result<()> {
    let mut pole = None;
    rhs.visit(&mut |e| {
        if let Expr::Apply(Func::Gamma, x) = e {
            if let Some(q) = x.fold_rational(&Bindings::new()) {
                if *q.denom() == 1 && q <= 0 {
                    pole.get_or_insert_with(|| format!("gamma({q})"));
                }
            }
        }
    });
    if let Some(detail) = pole {
        return Err(Error::PoleInRhs { theorem: theorem.into(), detail });
    }
    match eval_expression(rhs, &Bindings::new(), &Precision::new(15)) {
        Ok(_) => Ok(()),
        Err(e @ (Error::UnboundSymbol(_) | Error::PrecisionExhausted { .. })) => Err(e),
        Err(e) => Err(Error::PoleInRhs { theorem: theorem.into(), detail: e.to_string() }),
    }
}

/// Instantiates the first template of `t` at `binding`.
pub fn apply_theorem(t: TheoremId, binding: &Bindings) -> Result<Identity> {
    let tpl = templates().iter().find(|x| x.theorem == t).expect("every theorem has a template");
    instantiate(tpl, binding)
}

/// Instantiates a specific template.
pub fn apply_template(t: &Template, binding: &Bindings) -> Result<Identity> {
    instantiate(t, binding)
}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub theorem: TheoremId,
    pub variant: Option<String>,
    pub binding: BTreeMap<String, Rational>,
    pub closed_form: Expr,
    pub side_conditions: Vec<ConstraintPredicate>,
}

impl MatchResult {
    pub fn label(&self) -> String {
        match &self.variant {
            Some(v) => format!("{}{}", self.theorem, v),
            None => self.theorem.to_string(),
        }
    }
}

fn same_point(a: &Expr, b: &Expr) -> bool {
    if a == b {
        return true;
    }
    if let (Some(x), Some(y)) = (a.fold_rational(&Bindings::new()), b.fold_rational(&Bindings::new())) {
        return x == y;
    }
    let p = Precision::new(40);
    match (eval_expression(a, &Bindings::new(), &p), eval_expression(b, &Bindings::new(), &p)) {
        (Ok(x), Ok(y)) => x.abs_diff(&y) < 1e-30,
        _ => false,
    }
}

/// All template instances summing `s`, with side conditions satisfied.
pub fn match_closed_form(s: &HypSeries) -> Vec<MatchResult> {
    if !s.is_concrete() || !s.z.symbols().is_empty() {
        return Vec::new();
    }
    let (Ok(upper), Ok(lower)) = (s.upper.rationals(), s.lower.rationals()) else { return Vec::new() };
    let mut out: Vec<MatchResult> = Vec::new();
    for t in templates() {
        if t.lhs.p() != s.p() || t.lhs.q() != s.q() {
            continue;
        }
        let arg_sym = t.argument_symbol();
        if arg_sym.is_none() && !same_point(&t.lhs.z, &s.z) {
            continue;
        }
        let mut forms: Vec<&Affine> = t.lhs.upper.iter().collect();
        let split = forms.len();
        forms.extend(t.lhs.lower.iter());
        let mut solutions = Vec::new();
        Solver::search(&forms, split, &upper, &lower, &mut solutions);
        for sol in solutions {
            if t.symbols.iter().any(|x| !sol.contains_key(x)) {
                continue;
            }
            let binding: Bindings = sol.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            if out.iter().any(|m| m.theorem == t.theorem && m.variant == t.variant && m.binding == sol) {
                continue;
            }
            let Ok(id) = instantiate_at(t, &binding, Some(&s.z)) else { continue };
            let closed_form = id.rhs;
            out.push(MatchResult {
                theorem: t.theorem,
                variant: t.variant.clone(),
                binding: sol,
                closed_form,
                side_conditions: t.constraints.iter().map(|c| c.substitute(&binding)).collect(),
            });
        }
    }
    out
}

/// An identity with recognised series replaced by closed forms.
#[derive(Clone, Debug)]
pub struct Summed {
    pub identity: Identity,
    pub fired: Vec<String>,
}

/// Replaces every series on the right side that some template sums.
pub fn sum_dist_rhs(id: &Identity) -> Summed {
    let mut fired = Vec::new();
    let rhs = replace_series(&id.rhs, &mut fired);
    let identity = Identity {
        name: id.name.clone(),
        lhs: id.lhs.clone(),
        rhs,
        free_symbols: id.free_symbols.clone(),
        constraints: id.constraints.clone(),
        provenance: id.provenance.clone(),
    };
    Summed { identity, fired }
}

fn replace_series(e: &Expr, fired: &mut Vec<String>) -> Expr {
    match e {
        Expr::Hyp(s) => match match_closed_form(s).into_iter().next() {
            Some(m) => {
                fired.push(m.label());
                m.closed_form
            }
            None => e.clone(),
        },
        _ => e.map_children(&mut |c| replace_series(c, fired)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{dist, DistSpec};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn bind(pairs: &[(&str, Rational)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    fn agree(id: &Identity, tol: f64) {
        let p = Precision::new(40);
        let l = eval_expression(&id.lhs, &Bindings::new(), &p).unwrap();
        let r = eval_expression(&id.rhs, &Bindings::new(), &p).unwrap();
        assert!(l.abs_diff(&r) <= tol, "{id}: {} vs {}", l.to_decimal(30), r.to_decimal(30));
    }

    #[test]
    fn shipped_json_matches_source() {
        let compiled = compile_templates(include_str!("../../data/theorems.toml")).unwrap();
        let shipped: Value = serde_json::from_str(TEMPLATES_JSON).unwrap();
        assert_eq!(compiled, shipped, "run `hyperdist corpus compile` to refresh data/theorems.json");
        for t in TheoremId::ALL {
            assert!(!templates_for(t).is_empty(), "{t}");
        }
    }

    #[test]
    fn gauss_instance() {
        let id = apply_theorem(TheoremId::Gauss1, &bind(&[("a", q(1, 2)), ("b", q(1, 2)), ("c", q(2, 1))])).unwrap();
        agree(&id, 1e-30);
        let bad = apply_theorem(TheoremId::Gauss1, &bind(&[("a", q(1, 1)), ("b", q(1, 1)), ("c", q(2, 1))]));
        assert!(matches!(bad, Err(Error::SideConditionViolated { .. })));
    }

    #[test]
    fn dougall_and_special_values() {
        agree(&apply_theorem(TheoremId::DougallL2, &bind(&[("a", q(1, 2)), ("b", q(1, 4)), ("c", q(1, 4))])).unwrap(), 1e-25);
        agree(&apply_theorem(TheoremId::K2, &bind(&[("a", q(1, 4))])).unwrap(), 1e-35);
        agree(&apply_theorem(TheoremId::K3, &bind(&[("a", q(1, 8))])).unwrap(), 1e-25);
        for t in templates_for(TheoremId::K1) {
            agree(&apply_template(t, &bind(&[("a", q(1, 5))])).unwrap(), 1e-25);
        }
    }

    #[test]
    fn matching_examples() {
        let s = parse_series("2F1(1/2, 1/8; 11/8; -1)").unwrap();
        let m = match_closed_form(&s);
        assert!(m.iter().any(|r| r.theorem == TheoremId::KummerMinus1), "{m:?}");
        let s = parse_series("5F4(3/2, 1, 1/4, 1/4, 1/4; 1/2, 7/4, 7/4, 7/4; 1)").unwrap();
        assert!(match_closed_form(&s).iter().any(|r| r.theorem == TheoremId::DougallL3));
        assert!(match_closed_form(&parse_series("2F1(1, 1; 2; 1)").unwrap()).is_empty());
    }

    #[test]
    fn arcsin_square_sums_dist_example() {
        let spec = DistSpec::new(
            4,
            3,
            Expr::int(1),
            crate::core_types::ParamList::parse(&["1", "1", "1"]).unwrap(),
            crate::core_types::ParamList::parse(&["3/2", "2"]).unwrap(),
        );
        let summed = sum_dist_rhs(&dist(&spec, false).unwrap());
        // the unit-argument term is also a Watson instance
        assert_eq!(summed.fired, vec!["Watson", "ArcsinSquare", "ArcsinSquare", "ArcsinSquare"]);
        assert!(!summed.identity.rhs.contains_hyp());
        agree(&summed.identity, 1e-30);
    }

    #[test]
    fn untouched_without_series() {
        let id = Identity::new("x", Expr::Pi, Expr::Pi, "");
        let s = sum_dist_rhs(&id);
        assert!(s.fired.is_empty() && s.identity == id);
    }
}
