//! Text grammar, parser and renderers for jet-space expressions.
//!
//! # Grammar
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' '-'? INT)?
//! primary := INT | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers are `t`, `xN` (also `x_N`, `x{N}`; `x0` is `t`), `u`, `u_N`,
//! `u_MN` and the braced forms `u_{N}`, `u_{M,N}` for indices of ten or more.
//! `u_10` is accepted and normalized to `u_01`.
//!
//! An integer literal divided by an integer literal is folded into one
//! rational literal, so `1/18*u_3^2` reads as `(1/18)·u_3²`. Folding is
//! skipped when the quotient is itself the right operand of a division
//! (`a/2/3` stays `(a/2)/3`) and when the denominator carries an exponent
//! (`1/3^2` is `1/(3²)`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde_json::{json, Map, Value};

use crate::arith::{parse_rat, rat_text, HalfInt, Rat};
use crate::error::{Error, Result};
use crate::jet::{JetCoord, LaurentPoly, Monomial, RatExpr};
use crate::prolong::{ProlongedField, VectorField};
use crate::scalar::Variable;
use crate::Expr;

/// Largest exponent accepted by the parser; bounds the cost of lowering.
pub const MAX_EXPONENT: i32 = 64;

/// Output format shared by every renderer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            _ => Err(Error::Unsupported(format!("format `{s}` (expected text, latex or json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Latex => "latex",
            Format::Json => "json",
        })
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Syntax tree of a user expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Lit(Rat),
    Var(JetCoord),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(JetCoord),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(s) => write!(f, "number `{s}`"),
            Tok::Ident(c) => write!(f, "`{c}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn perr(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

struct Lexer<'a> {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
    k: u8,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, k: u8) -> Self {
        Lexer {
            chars: src.chars().collect(),
            i: 0,
            line: 1,
            col: 1,
            k,
            _src: src,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn index(&self, s: &str, at: Pos) -> Result<u8> {
        let v: u32 = s.parse().map_err(|_| perr(at, format!("bad index `{s}`")))?;
        if v > self.k as u32 {
            return Err(perr(at, format!("index {v} exceeds K={}", self.k)));
        }
        Ok(v as u8)
    }

    /// `{N}` or `{M,N}` after the opening brace has been seen.
    fn braced(&mut self, at: Pos) -> Result<Vec<String>> {
        self.bump();
        let mut parts = vec![];
        loop {
            while self.peek() == Some(' ') {
                self.bump();
            }
            let d = self.digits();
            if d.is_empty() {
                return Err(perr(self.pos(), "expected an index inside braces"));
            }
            parts.push(d);
            while self.peek() == Some(' ') {
                self.bump();
            }
            match self.bump() {
                Some(',') => continue,
                Some('}') => break,
                _ => return Err(perr(at, "unterminated `{` in identifier")),
            }
        }
        Ok(parts)
    }

    fn ident(&mut self, at: Pos) -> Result<JetCoord> {
        let first = self.bump().expect("caller saw a letter");
        let rest_alpha = self.peek().is_some_and(|c| c.is_ascii_alphabetic());
        match first {
            't' if !rest_alpha => Ok(JetCoord::T),
            'x' => {
                if self.peek() == Some('_') {
                    self.bump();
                }
                let idx = if self.peek() == Some('{') {
                    let p = self.braced(at)?;
                    if p.len() != 1 {
                        return Err(perr(at, "x takes a single index"));
                    }
                    p[0].clone()
                } else {
                    self.digits()
                };
                if idx.is_empty() {
                    return Err(perr(at, "`x` needs an index, as in `x1`"));
                }
                Ok(JetCoord::X(self.index(&idx, at)?))
            }
            'u' if !rest_alpha => {
                if self.peek() != Some('_') {
                    return Ok(JetCoord::U);
                }
                self.bump();
                let parts = if self.peek() == Some('{') {
                    self.braced(at)?
                } else {
                    let d = self.digits();
                    match d.len() {
                        1 => vec![d],
                        2 => d.chars().map(|c| c.to_string()).collect(),
                        0 => return Err(perr(at, "`u_` needs one or two indices")),
                        _ => {
                            return Err(perr(
                                at,
                                format!("ambiguous index `{d}`; write u_{{M,N}} for indices of ten or more"),
                            ))
                        }
                    }
                };
                match parts.as_slice() {
                    [a] => Ok(JetCoord::U1(self.index(a, at)?)),
                    [a, b] => Ok(JetCoord::u2(self.index(a, at)?, self.index(b, at)?)),
                    _ => Err(perr(at, "at most two derivative indices")),
                }
            }
            _ => {
                let mut name = first.to_string();
                while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    name.push(c);
                    self.bump();
                }
                Err(perr(at, format!("unknown variable `{name}`")))
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, Pos)> {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let at = self.pos();
        let Some(c) = self.peek() else {
            return Ok((Tok::End, at));
        };
        let tok = match c {
            '0'..='9' => {
                let d = self.digits();
                if self.peek() == Some('.') {
                    return Err(perr(self.pos(), "decimal points are not supported; write p/q"));
                }
                Tok::Int(d)
            }
            'a'..='z' | 'A'..='Z' => Tok::Ident(self.ident(at)?),
            _ => {
                self.bump();
                match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => return Err(perr(at, format!("unexpected character `{c}`"))),
                }
            }
        };
        Ok((tok, at))
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.i + n).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.unary(true)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.unary(true)?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(self.unary(false)?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self, may_fold: bool) -> Result<ExprAst> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(ExprAst::Neg(Box::new(self.unary(may_fold)?)));
        }
        self.power(may_fold)
    }

    fn power(&mut self, may_fold: bool) -> Result<ExprAst> {
        let base = self.primary(may_fold)?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.pos();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let e = match self.bump() {
            Tok::Int(s) => s
                .parse::<i32>()
                .ok()
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or_else(|| perr(at, format!("exponent `{s}` exceeds {MAX_EXPONENT}")))?,
            Tok::LParen => return Err(perr(at, "exponents must be integer literals")),
            t => return Err(perr(at, format!("expected an integer exponent, found {t}"))),
        };
        if *self.peek() == Tok::Caret {
            return Err(perr(self.pos(), "chained exponents need parentheses"));
        }
        Ok(ExprAst::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn primary(&mut self, may_fold: bool) -> Result<ExprAst> {
        let at = self.pos();
        match self.bump() {
            Tok::Int(p) => {
                let fold = may_fold
                    && *self.peek() == Tok::Slash
                    && matches!(self.peek_at(1), Tok::Int(_))
                    && *self.peek_at(2) != Tok::Caret;
                if fold {
                    self.bump();
                    let q_at = self.pos();
                    let Tok::Int(q) = self.bump() else { unreachable!() };
                    let r = parse_rat(&format!("{p}/{q}")).map_err(|_| perr(q_at, "zero denominator in rational literal"))?;
                    return Ok(ExprAst::Lit(r));
                }
                Ok(ExprAst::Lit(parse_rat(&p).map_err(|e| perr(at, e.to_string()))?))
            }
            Tok::Ident(c) => Ok(ExprAst::Var(c)),
            Tok::LParen => {
                let e = self.expr()?;
                match self.bump() {
                    Tok::RParen => Ok(e),
                    t => Err(perr(at, format!("unclosed `(`: found {t}"))),
                }
            }
            t => Err(perr(at, format!("expected a number, variable or `(`, found {t}"))),
        }
    }
}

/// Parses `src` against the jet space of `ell`.
pub fn parse(src: &str, ell: HalfInt) -> Result<ExprAst> {
    let mut lx = Lexer::new(src, ell.k() as u8);
    let mut toks = Vec::new();
    loop {
        let (t, p) = lx.next()?;
        let end = t == Tok::End;
        toks.push((t, p));
        if end {
            break;
        }
    }
    let mut p = Parser { toks, i: 0 };
    if *p.peek() == Tok::End {
        return Err(perr(p.pos(), "empty expression"));
    }
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(perr(p.pos(), format!("unexpected {t}"))),
    }
}

/// Converts a syntax tree to an exact rational expression.
pub fn lower(ast: &ExprAst) -> Result<Expr> {
    Ok(match ast {
        ExprAst::Lit(r) => Expr::constant(r.clone()),
        ExprAst::Var(c) => LaurentPoly::var(*c).into(),
        ExprAst::Neg(a) => lower(a)?.neg_ref(),
        ExprAst::Add(a, b) => lower(a)?.add_ref(&lower(b)?),
        ExprAst::Sub(a, b) => lower(a)?.sub_ref(&lower(b)?),
        ExprAst::Mul(a, b) => lower(a)?.mul_ref(&lower(b)?),
        ExprAst::Div(a, b) => lower(a)?.div_ref(&lower(b)?)?,
        ExprAst::Pow(a, e) => lower(a)?.pow(*e)?,
    })
}

/// `parse` followed by `lower`.
pub fn parse_expr(src: &str, ell: HalfInt) -> Result<Expr> {
    lower(&parse(src, ell)?)
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn pow_text(name: &str, e: i32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

fn pow_latex(name: &str, e: i32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{{{e}}}")
    }
}

/// Unsigned text of `|c|·m`.
fn term_text<V: Variable>(m: &Monomial<V>, c: &Rat) -> String {
    let mag = c.abs();
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    if !mag.numer().is_one() {
        num.push(mag.numer().to_string());
    }
    if !mag.denom().is_one() {
        den.push(mag.denom().to_string());
    }
    for &(v, e) in m.factors() {
        if e > 0 {
            num.push(pow_text(&v.text_name(), e));
        } else {
            den.push(pow_text(&v.text_name(), -e));
        }
    }
    let n = if num.is_empty() { "1".to_string() } else { num.join("*") };
    match den.len() {
        0 => n,
        1 => format!("{n}/{}", den[0]),
        _ => format!("{n}/({})", den.join("*")),
    }
}

fn term_latex<V: Variable>(m: &Monomial<V>, c: &Rat) -> String {
    let mag = c.abs();
    let (pos, neg): (Vec<_>, Vec<_>) = m.factors().iter().partition(|(_, e)| *e > 0);
    let vars = |fs: &[&(V, i32)]| {
        fs.iter()
            .map(|(v, e)| pow_latex(&v.latex_name(), e.abs()))
            .collect::<Vec<_>>()
            .join(" ")
    };
    if neg.is_empty() {
        let coef = if mag.is_one() {
            String::new()
        } else if mag.denom().is_one() {
            mag.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        };
        let v = vars(&pos);
        match (coef.is_empty(), v.is_empty()) {
            (true, true) => "1".into(),
            (true, false) => v,
            (false, true) => coef,
            (false, false) => format!("{coef} {v}"),
        }
    } else {
        let mut top = Vec::new();
        if !mag.numer().is_one() || pos.is_empty() {
            top.push(mag.numer().to_string());
        }
        let pv = vars(&pos);
        if !pv.is_empty() {
            top.push(pv);
        }
        let mut bottom = Vec::new();
        if !mag.denom().is_one() {
            bottom.push(mag.denom().to_string());
        }
        bottom.push(vars(&neg));
        format!("\\frac{{{}}}{{{}}}", top.join(" "), bottom.join(" "))
    }
}

fn join_signed(terms: impl Iterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (neg, body) in terms {
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text of a polynomial, such as `u_0/u + x2*u_1/u - u_22/(2*u)`.
pub fn poly_text<V: Variable>(p: &LaurentPoly<Rat, V>) -> String {
    join_signed(p.canonical_terms().into_iter().map(|(m, c)| (c.is_negative(), term_text(m, c))))
}

/// Canonical LaTeX of a polynomial.
pub fn poly_latex<V: Variable>(p: &LaurentPoly<Rat, V>) -> String {
    join_signed(p.canonical_terms().into_iter().map(|(m, c)| (c.is_negative(), term_latex(m, c))))
}

/// `[{"coef": "p/q", "exps": {"u_01": 2}}, …]` in canonical order.
pub fn poly_json<V: Variable>(p: &LaurentPoly<Rat, V>) -> Value {
    Value::Array(
        p.canonical_terms()
            .into_iter()
            .map(|(m, c)| {
                let exps: Map<String, Value> = m
                    .factors()
                    .iter()
                    .map(|(v, e)| (v.text_name(), json!(e)))
                    .collect();
                json!({"coef": rat_text(c), "exps": exps})
            })
            .collect(),
    )
}

/// Inverse of [`poly_json`] for jet polynomials.
pub fn poly_from_json(v: &Value, ell: HalfInt) -> Result<LaurentPoly<Rat>> {
    let bad = |m: &str| Error::Unsupported(format!("polynomial JSON: {m}"));
    let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let coef = t
            .get("coef")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing \"coef\" string"))?;
        let coef = parse_rat(coef)?;
        let exps = t
            .get("exps")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing \"exps\" object"))?;
        let mut pairs = Vec::new();
        for (name, e) in exps {
            let ExprAst::Var(c) = parse(name, ell)? else {
                return Err(bad(&format!("`{name}` is not a variable")));
            };
            let e = e.as_i64().ok_or_else(|| bad("exponent must be an integer"))?;
            pairs.push((c, e as i32));
        }
        terms.push((Monomial::from_pairs(pairs), coef));
    }
    Ok(LaurentPoly::from_terms(terms))
}

/// Integer content and denominator lcm of the coefficients, as `gcd / lcm`.
fn coefficient_content<V: Variable>(p: &LaurentPoly<Rat, V>) -> Rat {
    let (g, l) = p.terms().iter().fold((BigInt::from(0), BigInt::one()), |(g, l), (_, c)| {
        (g.gcd(c.numer()), l.lcm(c.denom()))
    });
    if g == BigInt::from(0) {
        Rat::one()
    } else {
        Rat::new(g, l)
    }
}

/// Display form of a quotient: integer-coefficient numerator, integer constant
/// and primitive integer-coefficient factors in the denominator.
fn display_parts<V: Variable>(e: &RatExpr<Rat, V>) -> (LaurentPoly<Rat, V>, Option<BigInt>, Vec<(LaurentPoly<Rat, V>, u32)>) {
    let mut scale = Rat::one();
    let mut factors = Vec::with_capacity(e.den_factors().len());
    for (f, k) in e.den_factors() {
        let c = coefficient_content(f);
        factors.push((f.scale(&c.recip()), *k));
        scale /= num_traits::pow(c, *k as usize);
    }
    let c = coefficient_content(e.num());
    let num = e.num().scale(&c.recip());
    scale *= c;
    let num = num.scale(&Rat::from_integer(scale.numer().clone()));
    let den = scale.denom().clone();
    (num, (!den.is_one()).then_some(den), factors)
}

fn factor_text<V: Variable>(f: &LaurentPoly<Rat, V>, e: u32) -> String {
    let body = if f.len() > 1 {
        format!("({})", poly_text(f))
    } else {
        poly_text(f)
    };
    if e == 1 {
        body
    } else {
        format!("{body}^{e}")
    }
}

fn factor_latex<V: Variable>(f: &LaurentPoly<Rat, V>, e: u32) -> String {
    let body = if f.len() > 1 {
        format!("\\left({}\\right)", poly_latex(f))
    } else {
        poly_latex(f)
    };
    if e == 1 {
        body
    } else {
        format!("{body}^{{{e}}}")
    }
}

/// Text of a rational expression; the denominator stays factored.
pub fn expr_text<V: Variable>(e: &RatExpr<Rat, V>) -> String {
    if e.den_factors().is_empty() {
        return poly_text(e.num());
    }
    let (num_poly, lcm, factors) = display_parts(e);
    let num = if num_poly.len() > 1 {
        format!("({})", poly_text(&num_poly))
    } else {
        poly_text(&num_poly)
    };
    let den: Vec<String> = lcm
        .into_iter()
        .map(|l| l.to_string())
        .chain(factors.iter().map(|(f, k)| factor_text(f, *k)))
        .collect();
    if den.len() == 1 && factors.len() == 1 && factors[0].1 == 1 {
        format!("{num}/{}", den[0])
    } else {
        format!("{num}/({})", den.join("*"))
    }
}

pub fn expr_latex<V: Variable>(e: &RatExpr<Rat, V>) -> String {
    if e.den_factors().is_empty() {
        return poly_latex(e.num());
    }
    let (num_poly, lcm, factors) = display_parts(e);
    let den: Vec<String> = lcm
        .into_iter()
        .map(|l| l.to_string())
        .chain(factors.iter().map(|(f, k)| factor_latex(f, *k)))
        .collect();
    format!("\\frac{{{}}}{{{}}}", poly_latex(&num_poly), den.join(" "))
}

/// `{"num": <poly>, "den": <poly>}` with the denominator expanded.
pub fn expr_json<V: Variable>(e: &RatExpr<Rat, V>) -> Value {
    json!({"num": poly_json(e.num()), "den": poly_json(&e.den())})
}

/// Renders an expression in the requested format.
pub fn render<V: Variable>(e: &RatExpr<Rat, V>, fmt: Format) -> String {
    match fmt {
        Format::Text => expr_text(e),
        Format::Latex => expr_latex(e),
        Format::Json => expr_json(e).to_string(),
    }
}

fn deriv_text(c: JetCoord) -> String {
    format!("d_{}", c.text_name())
}

fn deriv_latex(c: JetCoord) -> String {
    format!("\\partial_{{{}}}", c.latex_name())
}

fn operator_render<'a>(parts: impl Iterator<Item = (JetCoord, &'a LaurentPoly<Rat>)>, fmt: Format) -> String {
    let mut pieces = Vec::new();
    for (c, p) in parts {
        if p.is_zero() {
            continue;
        }
        let (d, single) = match fmt {
            Format::Latex => (deriv_latex(c), p.len() == 1),
            _ => (deriv_text(c), p.len() == 1),
        };
        if single {
            let (m, coef) = &p.terms()[0];
            let body = match fmt {
                Format::Latex => term_latex(m, coef),
                _ => term_text(m, coef),
            };
            let sep = if fmt == Format::Latex { " " } else { "*" };
            let body = if body == "1" { d } else { format!("{body}{sep}{d}") };
            pieces.push((coef.is_negative(), body));
        } else {
            let body = match fmt {
                Format::Latex => format!("\\left({}\\right) {d}", poly_latex(p)),
                _ => format!("({})*{d}", poly_text(p)),
            };
            pieces.push((false, body));
        }
    }
    join_signed(pieces.into_iter())
}

/// `{"xi": {"0": <poly>, …}, "eta": <poly>}`; zero components are omitted from `xi`.
pub fn field_json(f: &VectorField<Rat>) -> Value {
    let xi: Map<String, Value> = f
        .xis()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| (i.to_string(), poly_json(p)))
        .collect();
    json!({"xi": xi, "eta": poly_json(f.eta())})
}

/// Inverse of [`field_json`].
pub fn field_from_json(v: &Value, ell: HalfInt) -> Result<VectorField<Rat>> {
    let k = ell.k() as u8;
    let bad = |m: &str| Error::Unsupported(format!("vector field JSON: {m}"));
    let mut f = VectorField::zero(k);
    if let Some(xi) = v.get("xi") {
        for (key, p) in xi.as_object().ok_or_else(|| bad("\"xi\" must be an object"))? {
            let mu: u8 = key.parse().map_err(|_| bad("xi keys are indices"))?;
            if mu > k {
                return Err(Error::IndexOutOfRange {
                    what: "xi",
                    index: mu as i64,
                    lo: 0,
                    hi: k as i64,
                });
            }
            f.set_xi(mu, poly_from_json(p, ell)?);
        }
    }
    if let Some(eta) = v.get("eta") {
        f.set_eta(poly_from_json(eta, ell)?);
    }
    Ok(f)
}

/// Renders `Σ ξ^μ ∂_{x_μ} + η ∂_U`.
pub fn render_field(f: &VectorField<Rat>, fmt: Format) -> String {
    if fmt == Format::Json {
        return field_json(f).to_string();
    }
    let parts = f
        .xis()
        .iter()
        .enumerate()
        .map(|(i, p)| (JetCoord::X(i as u8), p))
        .chain(std::iter::once((JetCoord::U, f.eta())));
    operator_render(parts, fmt)
}

/// Renders every coefficient of a second-order operator.
pub fn render_prolonged(f: &ProlongedField<Rat>, fmt: Format) -> String {
    if fmt == Format::Json {
        let m: BTreeMap<String, Value> = f
            .coeffs()
            .iter()
            .map(|(c, p)| (c.text_name(), poly_json(p)))
            .collect();
        return json!({"coeffs": m}).to_string();
    }
    operator_render(f.coeffs().iter().map(|(c, p)| (*c, p)), fmt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::jet::Jet;

    fn ell(t: u32) -> HalfInt {
        HalfInt::from_twice(t).unwrap()
    }

    #[test]
    fn phi4_canonical_text() {
        let j = Jet::with_k(2);
        let p = j.u1(0).mul_ref(&j.u_inv(1))
            + j.x(2).mul_ref(&j.u1(1)).mul_ref(&j.u_inv(1))
            - j.u2(2, 2).mul_ref(&j.u_inv(1)).scale(&rat(1, 2));
        assert_eq!(poly_text(&p), "u_0/u + x2*u_1/u - u_22/(2*u)");
        let back = parse_expr(&poly_text(&p), ell(3)).unwrap();
        assert!(back.equals(&p.into()));
    }

    #[test]
    fn w_at_five_halves() {
        let src = "u_0/u + x2*u_1/u + 2*x3*u_2/u - u_3^2/(8*u^2)";
        let e = parse_expr(src, ell(5)).unwrap();
        let p = e.as_poly().expect("only powers of u in the denominator").clone();
        assert_eq!(poly_text(&p), src);
    }

    #[test]
    fn errors_are_positioned() {
        match parse("u_4", ell(5)) {
            Err(Error::Parse { line: 1, column: 1, message }) => assert!(message.contains("K=3")),
            other => panic!("{other:?}"),
        }
        match parse("u +\n  * u", ell(3)) {
            Err(Error::Parse { line: 2, column: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse("u^x1", ell(3)).is_err());
        assert!(parse("1.5", ell(3)).is_err());
        assert!(parse("(u", ell(3)).is_err());
        assert!(parse("", ell(3)).is_err());
        assert!(parse("phi", ell(3)).is_err());
        assert!(matches!(lower(&parse("u/(u-u)", ell(3)).unwrap()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn literal_folding() {
        assert_eq!(parse("1/18", ell(3)).unwrap(), ExprAst::Lit(rat(1, 18)));
        let e = parse_expr("u/2/3", ell(3)).unwrap();
        assert!(e.equals(&Expr::from(Jet::with_k(2).u().scale(&rat(1, 6)))));
        let e = parse_expr("1/3^2", ell(3)).unwrap();
        assert_eq!(e.as_constant(), Some(rat(1, 9)));
        assert_eq!(parse_expr("0", ell(3)).unwrap(), Expr::zero());
        assert!(parse_expr("(u - u)", ell(3)).unwrap().is_zero());
    }

    #[test]
    fn identifiers() {
        let l = ell(3);
        assert_eq!(parse("x0", l).unwrap(), ExprAst::Var(JetCoord::T));
        assert_eq!(parse("x_2", l).unwrap(), ExprAst::Var(JetCoord::X(2)));
        assert_eq!(parse("u_10", l).unwrap(), ExprAst::Var(JetCoord::U2(0, 1)));
        assert_eq!(parse("u_{2}", l).unwrap(), ExprAst::Var(JetCoord::U1(2)));
        assert_eq!(parse("u_{2,1}", l).unwrap(), ExprAst::Var(JetCoord::U2(1, 2)));
        let big = ell(21);
        assert_eq!(parse("u_{3,11}", big).unwrap(), ExprAst::Var(JetCoord::U2(3, 11)));
        assert_eq!(parse("x11", big).unwrap(), ExprAst::Var(JetCoord::X(11)));
    }

    #[test]
    fn precedence() {
        let l = ell(3);
        let a = parse_expr("-u^2", l).unwrap();
        assert!(a.equals(&Expr::from(-Jet::with_k(2).u().pow(2))));
        let b = parse_expr("2*u - 3*u + u", l).unwrap();
        assert!(b.is_zero());
        let c = parse_expr("u^-2*u^2", l).unwrap();
        assert_eq!(c.as_constant(), Some(rat_int(1)));
    }

    #[test]
    fn latex_forms() {
        let j = Jet::with_k(3);
        let w = j.u1(0).mul_ref(&j.u_inv(1)) - j.u1(3).pow(2).mul_ref(&j.u_inv(2)).scale(&rat(1, 8));
        assert_eq!(poly_latex(&w), "\\frac{U_{0}}{U} - \\frac{U_{3}^{2}}{8 U^{2}}");
        assert_eq!(poly_latex(&LaurentPoly::<Rat>::zero()), "0");
        assert_eq!(poly_text(&LaurentPoly::<Rat>::constant(rat(-4, 3))), "-4/3");
    }

    #[test]
    fn json_round_trip() {
        let l = ell(5);
        let e = parse_expr("3/4*u_01^2*x3 - u_2/u + 7", l).unwrap();
        let p = e.as_poly().unwrap();
        let v = poly_json(p);
        assert_eq!(&poly_from_json(&v, l).unwrap(), p);
    }
}
