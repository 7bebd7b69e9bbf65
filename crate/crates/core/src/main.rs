use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hyperdist::core_types::{parse_expr, parse_series, Bindings, Identity, ParamList};
use hyperdist::corpus::{self, RunOptions, VerificationReport};
use hyperdist::numerics::{eval_expression, ComplexApprox, Precision};
use hyperdist::theorems::{compile_templates, match_closed_form, sum_dist_rhs};
use hyperdist::transforms::{dist, init, pfd, stir, DistSpec};

#[derive(Parser)]
#[command(name = "hyperdist", version, about = "Distribution relations and summation for rational hypergeometric series")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 40)]
    prec: u32,
    /// Pass threshold as a power of ten.
    #[arg(long, global = true, default_value_t = -15, allow_hyphen_values = true)]
    tol: i32,
    /// Seed for parametric sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression, e.g. `3F2(1,1,1; 3/2,2; 1/2)`.
    Eval { expr: String },
    /// Build DIST(n, m, z, A, B). Lists are comma separated and may be empty.
    Dist {
        n: u32,
        m: u32,
        #[arg(allow_hyphen_values = true)]
        upper: String,
        #[arg(allow_hyphen_values = true)]
        lower: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
        /// Keep the left side uncancelled.
        #[arg(long)]
        raw: bool,
        /// Sum recognised series on the right side.
        #[arg(long)]
        sum: bool,
        /// Check both sides numerically.
        #[arg(long)]
        check: bool,
    },
    /// Apply a rewrite to a series. Parameter indices count from 0.
    Rewrite {
        #[command(subcommand)]
        kind: Rewrite,
    },
    /// List closed forms for a series.
    Sum { series: String },
    /// Check `lhs = rhs` numerically.
    Verify {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
    },
    /// Work with the identity corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum Rewrite {
    /// Split an upper/lower pair differing by a positive integer.
    Stir {
        series: String,
        upper: usize,
        lower: usize,
        #[arg(long)]
        check: bool,
    },
    /// Strip the initial terms of a series with upper 1 and lower n+1.
    Init {
        series: String,
        upper: usize,
        lower: usize,
        #[arg(long)]
        check: bool,
    },
    /// Partial fractions over pairs `u:l` with lower[l] = upper[u] + 1.
    Pfd {
        series: String,
        #[arg(required = true)]
        pairs: Vec<String>,
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Verify the corpus (HYPERDIST_CORPUS overrides the shipped file).
    Run {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Only entries with this tag.
        #[arg(long)]
        tag: Option<String>,
        /// Only these entries.
        #[arg(long = "name")]
        names: Vec<String>,
        #[arg(long)]
        threads: Option<usize>,
        /// Use `--tol` for every entry instead of each entry's own.
        #[arg(long)]
        override_tol: bool,
        /// Include timings in the JSON report.
        #[arg(long)]
        timing: bool,
    },
    /// Regenerate the JSON data files from their TOML sources.
    Compile {
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/data"))]
        dir: PathBuf,
    },
}

fn list(s: &str) -> anyhow::Result<ParamList> {
    let items: Vec<&str> = s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
    Ok(ParamList::parse(&items)?)
}

fn approx_json(v: &ComplexApprox, digits: usize) -> Value {
    json!({"value": v.to_decimal(digits), "err": format!("{:.3e}", v.err()), "rigor": v.rigor()})
}

fn report_json(r: &VerificationReport, digits: usize) -> Value {
    json!({
        "lhs": r.lhs_value.as_ref().map(|v| approx_json(v, digits)),
        "rhs": r.rhs_value.as_ref().map(|v| approx_json(v, digits)),
        "abs_diff": format!("{:.3e}", r.abs_diff),
        "tolerance": r.tolerance,
        "passed": r.passed,
        "rigor": r.rigor,
    })
}

/// Prints an identity and, when asked, its numeric check. Returns the pass flag.
fn show(id: &Identity, check: bool, g: &Global, extra: Value) -> anyhow::Result<bool> {
    let digits = g.prec as usize;
    let report = if check { Some(corpus::verify(id, &Precision::new(g.prec), g.tol)?) } else { None };
    if g.json {
        let mut v = json!({"lhs": id.lhs.to_json(), "rhs": id.rhs.to_json(), "text": format!("{} = {}", id.lhs, id.rhs.canonical())});
        if let Some(r) = &report {
            v["check"] = report_json(r, digits);
        }
        if let (Value::Object(v), Value::Object(extra)) = (&mut v, extra) {
            v.extend(extra);
        }
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("{} = {}", id.lhs, id.rhs.canonical());
        if let Some(r) = &report {
            print_check(r, digits);
        }
    }
    Ok(report.is_none_or(|r| r.passed))
}

fn print_check(r: &VerificationReport, digits: usize) {
    let (l, rr) = (r.lhs_value.as_ref().unwrap(), r.rhs_value.as_ref().unwrap());
    println!("lhs  {}", l.to_decimal(digits));
    println!("rhs  {}", rr.to_decimal(digits));
    println!("diff {:.3e} ({}, tol 1e{})  {}", r.abs_diff, r.rigor, r.tolerance, if r.passed { "PASS" } else { "FAIL" });
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let g = &cli.global;
    let prec = Precision::new(g.prec);
    let digits = g.prec as usize;
    match cli.command {
        Command::Eval { expr } => {
            let e = parse_expr(&expr)?;
            let v = eval_expression(&e, &Bindings::new(), &prec)?;
            if g.json {
                let mut out = approx_json(&v, digits);
                out["expr"] = json!(e.to_string());
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("{}", v.to_decimal(digits));
            }
            Ok(true)
        }
        Command::Dist { n, m, upper, lower, z, raw, sum, check } => {
            let spec = DistSpec::new(n, m, parse_expr(&z)?, list(&upper)?, list(&lower)?);
            let mut id = dist(&spec, raw)?;
            let mut fired = Vec::new();
            if sum {
                let s = sum_dist_rhs(&id);
                id = s.identity;
                fired = s.fired;
                if !g.json && !fired.is_empty() {
                    println!("summed by: {}", fired.join(", "));
                }
            }
            show(&id, check, g, json!({"fired": fired}))
        }
        Command::Rewrite { kind } => {
            let (id, check) = match kind {
                Rewrite::Stir { series, upper, lower, check } => (stir(&parse_series(&series)?, upper, lower)?, check),
                Rewrite::Init { series, upper, lower, check } => (init(&parse_series(&series)?, upper, lower)?, check),
                Rewrite::Pfd { series, pairs, check } => {
                    let pairs = pairs
                        .iter()
                        .map(|p| {
                            let (u, l) = p.split_once(':').with_context(|| format!("expected `u:l`, got `{p}`"))?;
                            Ok((u.trim().parse()?, l.trim().parse()?))
                        })
                        .collect::<anyhow::Result<Vec<(usize, usize)>>>()?;
                    (pfd(&parse_series(&series)?, &pairs)?, check)
                }
            };
            show(&id, check, g, json!({}))
        }
        Command::Sum { series } => {
            let s = parse_series(&series)?;
            let matches = match_closed_form(&s);
            if g.json {
                let rows: Vec<Value> = matches
                    .iter()
                    .map(|m| {
                        json!({
                            "theorem": m.label(),
                            "binding": m.binding.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect::<serde_json::Map<_, _>>(),
                            "closed_form": m.closed_form.to_json(),
                            "text": m.closed_form.canonical().to_string(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&json!({"series": s.to_string(), "matches": rows}))?);
            } else if matches.is_empty() {
                println!("no closed form found");
            } else {
                for m in &matches {
                    let b: Vec<String> = m.binding.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    println!("{} [{}]: {}", m.label(), b.join(", "), m.closed_form.canonical());
                }
            }
            Ok(true)
        }
        Command::Verify { lhs, rhs } => {
            let id = Identity::new("cli", parse_expr(&lhs)?, parse_expr(&rhs)?, "command line");
            if !id.free_symbols.is_empty() {
                bail!("free symbols {:?}; bind them before verifying", id.free_symbols);
            }
            let r = corpus::verify(&id, &prec, g.tol)?;
            if g.json {
                println!("{}", serde_json::to_string_pretty(&report_json(&r, digits))?);
            } else {
                print_check(&r, digits);
            }
            Ok(r.passed)
        }
        Command::Corpus { action: CorpusAction::Run { corpus: path, tag, names, threads, override_tol, timing } } => {
            let entries = match path {
                Some(p) => corpus::load_corpus(p)?,
                None => corpus::default_corpus()?,
            };
            let opts = RunOptions {
                digits: g.prec,
                seed: g.seed,
                threads,
                tol_override: override_tol.then_some(g.tol),
                tag,
                names,
            };
            let summary = corpus::run_all(&entries, &opts);
            if g.json {
                println!("{}", serde_json::to_string_pretty(&summary.to_json(timing))?);
            } else {
                for e in &summary.entries {
                    let mark = match (e.is_disputed(), e.passed()) {
                        (true, _) => "DISPUTED",
                        (false, true) => "PASS",
                        (false, false) => "FAIL",
                    };
                    println!("{mark:8} {:40} samples={:3} worst={:.2e}", e.name, e.reports.len(), e.worst_diff());
                    if let Some(err) = &e.sampling_error {
                        println!("         sampling: {err}");
                    }
                    for r in e.reports.iter().filter(|r| !r.passed) {
                        println!("         binding={:?} diff={:.2e} {}", r.binding, r.abs_diff, r.error.as_deref().unwrap_or(""));
                    }
                }
                println!(
                    "{} entries: {} passed, {} failed, {} disputed",
                    summary.entries.len(),
                    summary.passed(),
                    summary.failed(),
                    summary.disputed()
                );
            }
            Ok(summary.all_passed())
        }
        Command::Corpus { action: CorpusAction::Compile { dir } } => {
            let read = |f: &str| std::fs::read_to_string(dir.join(f)).with_context(|| format!("reading {}", dir.join(f).display()));
            let theorems = compile_templates(&read("theorems.toml")?)?;
            std::fs::write(dir.join("theorems.json"), corpus::to_text(&theorems))?;
            let entries = corpus::compile_corpus(&read("corpus.toml")?)?;
            std::fs::write(dir.join("corpus.json"), corpus::to_text(&entries))?;
            println!("wrote {} and {}", dir.join("theorems.json").display(), dir.join("corpus.json").display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
