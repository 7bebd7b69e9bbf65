//! Identities and the affine constraints attached to them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rug::Rational;

use super::affine::{Affine, Bindings};
use super::expr::Expr;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Gt,
    Ge,
    Ne,
    Integer,
    NotNonPosInt,
}

/// `form REL bound`, or an integrality test on `form`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintPredicate {
    pub form: Affine,
    pub relation: Relation,
    pub bound: Rational,
}

impl ConstraintPredicate {
    pub fn new(form: Affine, relation: Relation, bound: Rational) -> Self {
        match relation {
            // integrality tests keep the constant in the form
            Relation::Integer | Relation::NotNonPosInt => ConstraintPredicate { form, relation, bound: Rational::new() },
            _ => {
                let c = form.constant_term().clone();
                let form = form.add_const(&Rational::from(-&c));
                ConstraintPredicate { form, relation, bound: bound - c }
            }
        }
    }

    pub fn gt(form: Affine, bound: Rational) -> Self {
        Self::new(form, Relation::Gt, bound)
    }

    pub fn holds(&self, bindings: &Bindings) -> Result<bool> {
        let v = self.form.eval(bindings)?;
        Ok(match self.relation {
            Relation::Gt => v > self.bound,
            Relation::Ge => v >= self.bound,
            Relation::Ne => v != self.bound,
            Relation::Integer => *v.denom() == 1,
            Relation::NotNonPosInt => !(*v.denom() == 1 && v <= 0),
        })
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        self.form.symbols()
    }

    pub fn substitute(&self, bindings: &Bindings) -> ConstraintPredicate {
        Self::new(self.form.substitute(bindings), self.relation, self.bound.clone())
    }
}

impl fmt::Display for ConstraintPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relation {
            Relation::Gt => write!(f, "{} > {}", self.form, self.bound),
            Relation::Ge => write!(f, "{} >= {}", self.form, self.bound),
            Relation::Ne => write!(f, "{} != {}", self.form, self.bound),
            Relation::Integer => write!(f, "{} in Z", self.form),
            Relation::NotNonPosInt => write!(f, "{} notin Z<=0", self.form),
        }
    }
}

impl FromStr for ConstraintPredicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::parse(format!("constraint `{s}`"), m);
        if let Some(lhs) = s.strip_suffix("notin Z<=0") {
            return Ok(Self::new(lhs.trim().parse()?, Relation::NotNonPosInt, Rational::new()));
        }
        if let Some(lhs) = s.strip_suffix("in Z") {
            return Ok(Self::new(lhs.trim().parse()?, Relation::Integer, Rational::new()));
        }
        for (op, rel) in [(">=", Relation::Ge), ("!=", Relation::Ne), (">", Relation::Gt), ("<=", Relation::Ge), ("<", Relation::Gt)] {
            if let Some((l, r)) = s.split_once(op) {
                let l: Affine = l.trim().parse()?;
                let r: Affine = r.trim().parse()?;
                // `l < r` is `r - l > 0`
                let form = if op.starts_with('<') { r.sub(&l) } else { l.sub(&r) };
                return Ok(Self::new(form, rel, Rational::new()));
            }
        }
        Err(bad("expected one of >, >=, <, <=, !=, `in Z`, `notin Z<=0`"))
    }
}

/// An equation `lhs = rhs` over rational bindings of its free symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub free_symbols: Vec<String>,
    pub constraints: Vec<ConstraintPredicate>,
    pub provenance: String,
}

impl Identity {
    /// Builds an identity whose free symbols are those occurring in either side.
    pub fn new(name: impl Into<String>, lhs: Expr, rhs: Expr, provenance: impl Into<String>) -> Self {
        let mut syms = lhs.symbols();
        syms.extend(rhs.symbols());
        Identity {
            name: name.into(),
            lhs,
            rhs,
            free_symbols: syms.into_iter().collect(),
            constraints: Vec::new(),
            provenance: provenance.into(),
        }
    }

    pub fn with_constraints(mut self, constraints: Vec<ConstraintPredicate>) -> Self {
        self.constraints = constraints;
        self
    }

    /// Checks that every symbol on either side is declared.
    pub fn validate(&self) -> Result<()> {
        let declared: BTreeSet<&str> = self.free_symbols.iter().map(String::as_str).collect();
        let mut used = self.lhs.symbols();
        used.extend(self.rhs.symbols());
        for c in &self.constraints {
            used.extend(c.symbols());
        }
        if let Some(s) = used.iter().find(|s| !declared.contains(s.as_str())) {
            return Err(Error::Validation { entry: self.name.clone(), message: format!("undeclared symbol `{s}`") });
        }
        Ok(())
    }

    /// Returns the first violated constraint, if any.
    pub fn check_constraints(&self, bindings: &Bindings) -> Result<()> {
        for c in &self.constraints {
            if !c.holds(bindings)? {
                return Err(Error::ConstraintViolated(format!("{} ({})", c, self.name)));
            }
        }
        Ok(())
    }

    /// Substitutes a full binding after checking the constraints.
    pub fn instantiate(&self, bindings: &Bindings) -> Result<Identity> {
        for s in &self.free_symbols {
            if !bindings.contains_key(s) {
                return Err(Error::UnboundSymbol(s.clone()));
            }
        }
        self.check_constraints(bindings)?;
        Ok(Identity {
            name: self.name.clone(),
            lhs: self.lhs.substitute(bindings),
            rhs: self.rhs.substitute(bindings),
            free_symbols: Vec::new(),
            constraints: Vec::new(),
            provenance: self.provenance.clone(),
        })
    }

    pub fn is_concrete(&self) -> bool {
        self.free_symbols.is_empty()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.name, self.lhs, self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_types::parse::parse_expr;

    fn bind(pairs: &[(&str, (i64, i64))]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), Rational::from(*v))).collect()
    }

    #[test]
    fn constraint_text_round_trip() {
        for s in ["-a-b+c > 0", "a >= 1/2", "2*a != 1", "a+1/2 in Z", "a-b notin Z<=0"] {
            let c: ConstraintPredicate = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        let c: ConstraintPredicate = "a < 1/2".parse().unwrap();
        assert_eq!(c.to_string(), "-a > -1/2");
        assert!("a ~ 1".parse::<ConstraintPredicate>().is_err());
    }

    #[test]
    fn constraint_evaluation() {
        let c: ConstraintPredicate = "c - a - b > 0".parse().unwrap();
        assert!(c.holds(&bind(&[("a", (1, 2)), ("b", (1, 2)), ("c", (2, 1))])).unwrap());
        assert!(!c.holds(&bind(&[("a", (1, 1)), ("b", (1, 1)), ("c", (2, 1))])).unwrap());
        let n: ConstraintPredicate = "a notin Z<=0".parse().unwrap();
        assert!(!n.holds(&bind(&[("a", (-2, 1))])).unwrap());
        assert!(n.holds(&bind(&[("a", (-1, 2))])).unwrap());
        assert!(c.holds(&bind(&[("a", (1, 2))])).is_err());
    }

    #[test]
    fn identity_instantiation() {
        let lhs = parse_expr("2F1(a, b; c; 1)").unwrap();
        let rhs = parse_expr("gamma(c)*gamma(c-a-b)/(gamma(c-a)*gamma(c-b))").unwrap();
        let id = Identity::new("gauss", lhs, rhs, "classical")
            .with_constraints(vec!["c-a-b > 0".parse().unwrap()]);
        assert_eq!(id.free_symbols, vec!["a", "b", "c"]);
        id.validate().unwrap();
        let ok = id.instantiate(&bind(&[("a", (1, 2)), ("b", (1, 2)), ("c", (2, 1))])).unwrap();
        assert!(ok.is_concrete() && ok.lhs.symbols().is_empty());
        let bad = id.instantiate(&bind(&[("a", (1, 1)), ("b", (1, 1)), ("c", (2, 1))]));
        assert!(matches!(bad, Err(Error::ConstraintViolated(_))));
    }
}
