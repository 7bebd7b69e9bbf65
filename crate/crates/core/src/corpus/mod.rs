//! The identity corpus: loading, sampling and verification.
//!
//! The shipped corpus is authored in `data/corpus.toml` and compiled to
//! `data/corpus.json`. Only the JSON is read at run time.

mod sample;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rug::Rational;
use serde_json::{json, Map, Value};

use crate::core_types::{
    arg_position, parse_expr, parse_rational, Affine, ArgPosition, Bindings, ConstraintPredicate, Expr, HypSeries,
    Identity,
};
use crate::error::{Error, Result};

pub use sample::{admissible, sample_bindings};
pub use verify::{run_all, verify, CorpusSummary, EntryReport, RunOptions, VerificationReport};

/// The compiled corpus shipped with the crate.
pub const SHIPPED_CORPUS: &str = include_str!("../../data/corpus.json");

/// Environment variable naming an alternative corpus file.
pub const CORPUS_ENV: &str = "HYPERDIST_CORPUS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Fixed,
    Parametric { samples: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum EntryStatus {
    Active,
    /// Fails as printed; kept out of the pass/fail verdict.
    Disputed { discrepancy: f64, note: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub identity: Identity,
    pub class_tags: Vec<String>,
    pub verify_mode: VerifyMode,
    /// Decimal exponent of the accepted absolute difference.
    pub expected_tolerance: i32,
    /// Open sampling intervals overriding the default `(-3, 3)`.
    pub ranges: BTreeMap<String, (Rational, Rational)>,
    pub status: EntryStatus,
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        &self.identity.name
    }

    pub fn is_disputed(&self) -> bool {
        matches!(self.status, EntryStatus::Disputed { .. })
    }

    /// Concrete identity at `binding`.
    pub fn instantiate(&self, binding: &Bindings) -> Result<Identity> {
        self.identity.instantiate(binding)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Error::Validation { entry: self.name().to_string(), message: m };
        self.identity.validate()?;
        let free = &self.identity.free_symbols;
        match self.verify_mode {
            VerifyMode::Fixed if !free.is_empty() => {
                return Err(bad(format!("fixed entry has free symbols {}", free.join(", "))));
            }
            VerifyMode::Parametric { .. } if free.is_empty() => {
                return Err(bad("parametric entry has no free symbols".into()));
            }
            VerifyMode::Parametric { samples: 0 } => return Err(bad("zero samples".into())),
            _ => {}
        }
        for (s, (lo, hi)) in &self.ranges {
            if !free.contains(s) {
                return Err(bad(format!("range for unknown symbol `{s}`")));
            }
            if lo >= hi {
                return Err(bad(format!("empty range for `{s}`")));
            }
        }
        let mut err = None;
        for side in [&self.identity.lhs, &self.identity.rhs] {
            side.visit(&mut |e| {
                if let Expr::Hyp(s) = e {
                    if let Err(e) = s.validate() {
                        err.get_or_insert(e);
                    }
                }
            });
        }
        if let Some(e) = err {
            return Err(bad(e.to_string()));
        }
        if let VerifyMode::Parametric { .. } = self.verify_mode {
            if !sample::constraints_satisfiable(self) {
                return Err(bad("no admissible binding found".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.identity.name));
        m.insert("lhs".into(), self.identity.lhs.to_json());
        m.insert("rhs".into(), self.identity.rhs.to_json());
        m.insert("symbols".into(), json!(self.identity.free_symbols));
        m.insert("where".into(), json!(self.identity.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
        m.insert("tags".into(), json!(self.class_tags));
        match self.verify_mode {
            VerifyMode::Fixed => {
                m.insert("mode".into(), json!("fixed"));
            }
            VerifyMode::Parametric { samples } => {
                m.insert("mode".into(), json!("parametric"));
                m.insert("samples".into(), json!(samples));
            }
        }
        m.insert("tol".into(), json!(self.expected_tolerance));
        if !self.ranges.is_empty() {
            let r: Map<String, Value> = self
                .ranges
                .iter()
                .map(|(k, (lo, hi))| (k.clone(), json!([lo.to_string(), hi.to_string()])))
                .collect();
            m.insert("range".into(), Value::Object(r));
        }
        m.insert("provenance".into(), json!(self.identity.provenance));
        match &self.status {
            EntryStatus::Active => {
                m.insert("status".into(), json!("active"));
            }
            EntryStatus::Disputed { discrepancy, note } => {
                m.insert("status".into(), json!("disputed"));
                m.insert("dispute".into(), json!({"discrepancy": discrepancy, "note": note}));
            }
        }
        Value::Object(m)
    }

    fn from_json(v: &Value, path: &str) -> Result<CorpusEntry> {
        let at = |m: String| Error::parse(path, m);
        let field = |k: &str| v.get(k).ok_or_else(|| at(format!("missing `{k}`")));
        let string = |k: &str| field(k)?.as_str().map(String::from).ok_or_else(|| at(format!("`{k}` must be a string")));
        let strings = |k: &str| -> Result<Vec<String>> {
            field(k)?
                .as_array()
                .ok_or_else(|| at(format!("`{k}` must be an array")))?
                .iter()
                .map(|x| x.as_str().map(String::from).ok_or_else(|| at(format!("`{k}` must hold strings"))))
                .collect()
        };
        let name = string("name")?;
        let located = |e: Error| match e {
            Error::Parse { location, message } => Error::parse(format!("{path} ({name}): {location}"), message),
            other => Error::Validation { entry: name.clone(), message: other.to_string() },
        };
        let lhs = Expr::from_json(field("lhs")?).map_err(located)?;
        let rhs = Expr::from_json(field("rhs")?).map_err(located)?;
        let constraints = strings("where")?.iter().map(|c| c.parse()).collect::<Result<Vec<ConstraintPredicate>>>().map_err(located)?;
        let mut identity = Identity::new(name.clone(), lhs, rhs, string("provenance")?).with_constraints(constraints);
        identity.free_symbols = strings("symbols")?;
        let verify_mode = match string("mode")?.as_str() {
            "fixed" => VerifyMode::Fixed,
            "parametric" => VerifyMode::Parametric {
                samples: field("samples")?.as_u64().ok_or_else(|| at("`samples` must be a natural number".into()))? as u32,
            },
            other => return Err(at(format!("unknown mode `{other}`"))),
        };
        let expected_tolerance =
            field("tol")?.as_i64().ok_or_else(|| at("`tol` must be an integer".into()))? as i32;
        let mut ranges = BTreeMap::new();
        if let Some(r) = v.get("range") {
            let r = r.as_object().ok_or_else(|| at("`range` must be an object".into()))?;
            for (k, pair) in r {
                let pair: Vec<&str> = pair.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                let [lo, hi] = pair[..] else { return Err(at(format!("range for `{k}` must be two strings"))) };
                ranges.insert(k.clone(), (parse_rational(lo)?, parse_rational(hi)?));
            }
        }
        let status = match string("status")?.as_str() {
            "active" => EntryStatus::Active,
            "disputed" => {
                let d = field("dispute")?;
                EntryStatus::Disputed {
                    discrepancy: d.get("discrepancy").and_then(Value::as_f64).unwrap_or(f64::NAN),
                    note: d.get("note").and_then(Value::as_str).unwrap_or_default().to_string(),
                }
            }
            other => return Err(at(format!("unknown status `{other}`"))),
        };
        Ok(CorpusEntry {
            identity,
            class_tags: strings("tags")?,
            verify_mode,
            expected_tolerance,
            ranges,
            status,
        })
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusSource {
    entry: Vec<EntryRow>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRow {
    name: String,
    lhs: String,
    rhs: String,
    #[serde(rename = "where", default)]
    constraints: Vec<String>,
    #[serde(default)]
    tags: Vec<String>,
    samples: Option<u32>,
    tol: i32,
    #[serde(default)]
    range: BTreeMap<String, (String, String)>,
    #[serde(rename = "let", default)]
    abbreviations: BTreeMap<String, String>,
    provenance: String,
    disputed: Option<DisputeRow>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct DisputeRow {
    discrepancy: f64,
    note: String,
}

/// The affine convergence condition of a series at a unit-circle argument
/// with symbolic parameters: `excess > 0` at 1, `excess > -1` elsewhere.
fn convergence_constraint(s: &HypSeries) -> Option<ConstraintPredicate> {
    if s.is_concrete() || !s.z.symbols().is_empty() {
        return None;
    }
    let sum = |xs: &[Affine]| xs.iter().fold(Affine::constant(0), |acc, a| acc.add(a));
    let excess = sum(s.lower.entries()).sub(&sum(s.upper.entries()));
    match arg_position(&s.z, 128).ok()? {
        ArgPosition::One => Some(ConstraintPredicate::gt(excess, Rational::new())),
        ArgPosition::OnCircle => Some(ConstraintPredicate::gt(excess, Rational::from(-1))),
        _ => None,
    }
}

fn compile_row(row: EntryRow) -> Result<CorpusEntry> {
    let at = |e: Error| match e {
        Error::Parse { location, message } => Error::parse(format!("entry {}: {location}", row.name), message),
        other => other,
    };
    let mut lhs = parse_expr(&row.lhs).map_err(at)?;
    let mut rhs = parse_expr(&row.rhs).map_err(at)?;
    for (k, v) in &row.abbreviations {
        let v = parse_expr(v).map_err(at)?;
        lhs = lhs.replace_symbol(k, &v);
        rhs = rhs.replace_symbol(k, &v);
    }
    let mut constraints: Vec<ConstraintPredicate> =
        row.constraints.iter().map(|c| c.parse()).collect::<Result<_>>().map_err(at)?;
    for side in [&lhs, &rhs] {
        side.visit(&mut |e| {
            if let Expr::Hyp(s) = e {
                if let Some(c) = convergence_constraint(s) {
                    if !constraints.contains(&c) {
                        constraints.push(c);
                    }
                }
            }
        });
    }
    let identity = Identity::new(row.name.clone(), lhs, rhs, row.provenance).with_constraints(constraints);
    let mut ranges = BTreeMap::new();
    for (k, (lo, hi)) in row.range {
        ranges.insert(k, (parse_rational(&lo).map_err(at)?, parse_rational(&hi).map_err(at)?));
    }
    let entry = CorpusEntry {
        identity,
        class_tags: row.tags,
        verify_mode: match row.samples {
            Some(samples) => VerifyMode::Parametric { samples },
            None => VerifyMode::Fixed,
        },
        expected_tolerance: row.tol,
        ranges,
        status: match row.disputed {
            Some(d) => EntryStatus::Disputed { discrepancy: d.discrepancy, note: d.note },
            None => EntryStatus::Active,
        },
    };
    entry.validate()?;
    Ok(entry)
}

/// Compiles the TOML corpus source into the JSON document.
pub fn compile_corpus(source: &str) -> Result<Value> {
    let src: CorpusSource = toml::from_str(source).map_err(|e| Error::parse("corpus.toml", e.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for row in src.entry {
        if !seen.insert(row.name.clone()) {
            return Err(Error::Validation { entry: row.name, message: "duplicate name".into() });
        }
        entries.push(compile_row(row)?);
    }
    Ok(serialize(&entries))
}

/// The canonical JSON document for `entries`.
pub fn serialize(entries: &[CorpusEntry]) -> Value {
    json!({"schema": 1, "entries": entries.iter().map(CorpusEntry::to_json).collect::<Vec<_>>()})
}

/// Pretty JSON text with a trailing newline, as shipped.
pub fn to_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

/// Parses and validates a corpus JSON document.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    match v.get("schema").and_then(Value::as_u64) {
        Some(1) => {}
        _ => return Err(Error::parse("$.schema", "expected schema 1")),
    }
    let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| Error::parse("$", "missing `entries`"))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let e = CorpusEntry::from_json(r, &format!("$.entries[{i}]"))?;
        if !seen.insert(e.name().to_string()) {
            return Err(Error::Validation { entry: e.name().to_string(), message: "duplicate name".into() });
        }
        e.validate()?;
        out.push(e);
    }
    Ok(out)
}

/// Reads and validates a corpus file.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_corpus(&text)
}

/// The corpus named by `HYPERDIST_CORPUS`, or the shipped one.
pub fn default_corpus() -> Result<Vec<CorpusEntry>> {
    match std::env::var_os(CORPUS_ENV) {
        Some(p) => load_corpus(p),
        None => parse_corpus(SHIPPED_CORPUS),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOURCE: &str = include_str!("../../data/corpus.toml");

    #[test]
    fn shipped_json_matches_source() {
        let compiled = compile_corpus(SOURCE).unwrap();
        let shipped: Value = serde_json::from_str(SHIPPED_CORPUS).unwrap();
        assert_eq!(compiled, shipped, "run `hyperdist corpus compile`");
    }

    #[test]
    fn shipped_corpus_loads() {
        let entries = parse_corpus(SHIPPED_CORPUS).unwrap();
        assert!(entries.len() >= 60);
        let parametric = entries.iter().filter(|e| e.name().starts_with('P')).count();
        assert_eq!(parametric, 17);
        assert!(entries.iter().filter(|e| e.verify_mode == VerifyMode::Fixed).count() >= 40);
    }

    #[test]
    fn round_trip_is_canonical() {
        let entries = parse_corpus(SHIPPED_CORPUS).unwrap();
        let back: Value = serde_json::from_str(SHIPPED_CORPUS).unwrap();
        assert_eq!(serialize(&entries), back);
        assert_eq!(to_text(&serialize(&entries)), SHIPPED_CORPUS);
    }

    #[test]
    fn empty_and_malformed_files() {
        assert!(matches!(parse_corpus(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_corpus("{\"schema\": 2, \"entries\": []}"), Err(Error::Parse { .. })));
        assert!(matches!(compile_corpus(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn zero_lower_parameter_is_rejected() {
        let src = r#"
[[entry]]
name = "bad"
lhs = "2F1(1, 1; 0; 1/2)"
rhs = "1"
tol = -15
provenance = "test"
"#;
        match compile_corpus(src) {
            Err(Error::Parse { location, .. }) => assert!(location.contains("bad")),
            other => panic!("{other:?}"),
        }
        let good = compile_corpus(&src.replace("; 0;", "; 2;")).unwrap();
        let text = to_text(&good).replace("\"2\"", "\"0\"");
        match parse_corpus(&text) {
            Err(Error::Parse { location, .. }) => assert!(location.contains("bad")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn convergence_conditions_are_added() {
        let entries = parse_corpus(SHIPPED_CORPUS).unwrap();
        let p11 = entries.iter().find(|e| e.name() == "P11").unwrap();
        // excess 3a - 1 at -1 must exceed -1
        assert_eq!(p11.identity.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["3*a > 0"]);
        let l1 = entries.iter().find(|e| e.name() == "L1").unwrap();
        assert!(l1.identity.constraints.iter().any(|c| c.to_string() == "a-2*b-2*c > -1"));
    }
}
