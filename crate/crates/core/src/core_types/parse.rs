//! Text syntax for expressions and series.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | name | name '(' args ')' | pFq '(' list ';' list ';' expr ')' | '(' expr ')'
//! ```
//!
//! Names `i`, `pi` and `Catalan` are constants. Besides the functions of
//! [`Func`] the parser accepts `sqrt`, `tan`, `cot`, `sec`, `csc`, `acot`,
//! `beta(x, y)`, `Li2`/`Li3`/`Li4` and `unity(n, k)`, expanding the sugar
//! into core nodes.

use rug::{Integer, Rational};

use super::affine::Affine;
use super::expr::{Expr, Func};
use super::series::{HypSeries, ParamList};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Integer),
    Name(String),
    Series(usize, usize),
    Sym(char),
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer { src, toks: Vec::new() };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // `12F11(`
                if i < bytes.len() && bytes[i] == b'F' {
                    let mut j = i + 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j > i + 1 && j < bytes.len() && bytes[j] == b'(' {
                        let p = src[start..i].parse().map_err(|_| lx.err(start, "bad series order"))?;
                        let q = src[i + 1..j].parse().map_err(|_| lx.err(start, "bad series order"))?;
                        lx.toks.push((start, Tok::Series(p, q)));
                        i = j;
                        continue;
                    }
                }
                let n: Integer = src[start..i].parse().map_err(|_| lx.err(start, "bad integer"))?;
                lx.toks.push((start, Tok::Num(n)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lx.toks.push((start, Tok::Name(src[start..i].to_string())));
            } else if "+-*/^(),;".contains(c) {
                lx.toks.push((i, Tok::Sym(c)));
                i += 1;
            } else {
                return Err(lx.err(i, &format!("unexpected character `{c}`")));
            }
        }
        Ok(lx.toks)
    }

    fn err(&self, pos: usize, msg: &str) -> Error {
        Error::parse(format!("offset {pos} in `{}`", self.src), msg)
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.0)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(format!("offset {} in `{}`", self.offset(), self.src), msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                let t = self.term()?;
                terms.push(negate(t));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat('*') {
                factors.push(self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let last = factors.last_mut().unwrap();
                match (last.as_rational(), d.as_rational()) {
                    (Some(n), Some(q)) if q != 0 => *last = Expr::rational(n / q),
                    _ => factors.push(Expr::recip(d)),
                }
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            let e = self.unary()?;
            return Ok(negate(e));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let ex = self.unary()?;
            return Ok(Expr::pow(base, ex));
        }
        Ok(base)
    }

    fn args(&mut self) -> Result<Vec<Expr>> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn one_arg(&mut self, name: &str) -> Result<Expr> {
        let mut a = self.args()?;
        if a.len() != 1 {
            return Err(self.err(format!("`{name}` takes one argument")));
        }
        Ok(a.pop().unwrap())
    }

    fn param_list(&mut self, count: usize, end: char) -> Result<ParamList> {
        let mut out = Vec::new();
        if !self.eat(end) {
            loop {
                let start = self.offset();
                let e = self.expr()?;
                let a: Affine = e.to_affine().ok_or_else(|| {
                    Error::parse(format!("offset {start} in `{}`", self.src), "parameter is not affine")
                })?;
                out.push(a);
                if self.eat(end) {
                    break;
                }
                self.expect(',')?;
            }
        }
        if out.len() != count {
            return Err(self.err(format!("expected {count} parameters, found {}", out.len())));
        }
        Ok(ParamList::new(out))
    }

    fn series(&mut self, p: usize, q: usize) -> Result<Expr> {
        self.expect('(')?;
        let upper = self.param_list(p, ';')?;
        let lower = self.param_list(q, ';')?;
        let z = self.expr()?;
        self.expect(')')?;
        if z.contains_hyp() {
            return Err(self.err("nested series in argument"));
        }
        HypSeries::new(upper, lower, z).map(Expr::hyp).map_err(|e| self.err(e.to_string()))
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Expr::Int(n)),
            Tok::Series(p, q) => self.series(p, q),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(c) => {
                self.pos -= 1;
                Err(self.err(format!("unexpected `{c}`")))
            }
            Tok::Name(name) => {
                let call = self.peek() == Some(&Tok::Sym('('));
                if !call {
                    return Ok(match name.as_str() {
                        "i" => Expr::I,
                        "pi" => Expr::Pi,
                        "Catalan" => Expr::Catalan,
                        _ => Expr::Symbol(name),
                    });
                }
                self.call(&name)
            }
        }
    }

    fn call(&mut self, name: &str) -> Result<Expr> {
        if let Some(f) = Func::from_text_name(name) {
            return Ok(Expr::apply(f, self.one_arg(name)?));
        }
        let half = || Expr::rational(Rational::from((1, 2)));
        match name {
            "sqrt" => Ok(Expr::pow(self.one_arg(name)?, half())),
            "tan" | "cot" | "sec" | "csc" => {
                let x = self.one_arg(name)?;
                let s = Expr::apply(Func::Sin, x.clone());
                let c = Expr::apply(Func::Cos, x);
                Ok(match name {
                    "tan" => Expr::Mul(vec![s, Expr::recip(c)]),
                    "cot" => Expr::Mul(vec![c, Expr::recip(s)]),
                    "sec" => Expr::recip(c),
                    _ => Expr::recip(s),
                })
            }
            "acos" => {
                let x = self.one_arg(name)?;
                Ok(Expr::Add(vec![
                    Expr::Mul(vec![Expr::rational(Rational::from((1, 2))), Expr::Pi]),
                    Expr::neg(Expr::apply(Func::ArcSin, x)),
                ]))
            }
            "acot" => Ok(Expr::apply(Func::ArcTan, Expr::recip(self.one_arg(name)?))),
            "beta" => {
                let a = self.args()?;
                if a.len() != 2 {
                    return Err(self.err("`beta` takes two arguments"));
                }
                let sum = Expr::Add(vec![a[0].clone(), a[1].clone()]);
                Ok(Expr::Mul(vec![
                    Expr::apply(Func::Gamma, a[0].clone()),
                    Expr::apply(Func::Gamma, a[1].clone()),
                    Expr::recip(Expr::apply(Func::Gamma, sum)),
                ]))
            }
            "Li2" | "Li3" | "Li4" => {
                let order = name[2..].parse().unwrap();
                Ok(Expr::PolyLog(order, Box::new(self.one_arg(name)?)))
            }
            "unity" => {
                let a = self.args()?;
                let ints: Vec<Option<Integer>> = a
                    .iter()
                    .map(|e| e.as_rational().filter(|q| *q.denom() == 1).map(|q| q.numer().clone()))
                    .collect();
                match ints.as_slice() {
                    [Some(n), Some(k)] if *n > 0 => {
                        let n = n.to_u64().ok_or_else(|| self.err("root order too large"))?;
                        let k = k.to_i64().ok_or_else(|| self.err("root index too large"))?;
                        Ok(Expr::RootOfUnity(n, k))
                    }
                    _ => Err(self.err("`unity` takes integers n > 0 and k")),
                }
            }
            _ => Err(self.err(format!("unknown function `{name}`"))),
        }
    }
}

fn negate(e: Expr) -> Expr {
    match e.as_rational() {
        Some(q) => Expr::rational(-q),
        None => Expr::neg(e),
    }
}

/// Parses an expression in the text syntax.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = Lexer::run(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses a series literal such as `2F1(1/2, 1/2; 2; 1)`.
pub fn parse_series(src: &str) -> Result<HypSeries> {
    match parse_expr(src)? {
        Expr::Hyp(h) => Ok(*h),
        _ => Err(Error::parse(format!("`{src}`"), "expected a series literal pFq(...; ...; z)")),
    }
}
