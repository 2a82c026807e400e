//! Textual forms: group and field descriptions, literals, rational-function
//! expressions and rendered series.
//!
//! Expression grammar (no implicit multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-' | '+') factor | atom ('^' int)?
//! atom   := integer | identifier | '(' expr ')'
//! int    := '-'? digits | '(' '-'? digits ')'
//! ```

pub mod json;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElem, MPoly, RatFn};
use crate::groups::{rat, DenominatorLaw, GroupDesc, GroupElem, Rat};
use crate::series::{Precision, Series, ValuationResult};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_i128(s: &str) -> Result<i128> {
    s.trim().parse::<i128>().map_err(|_| perr(format!("expected an integer, got {s:?}")))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse::<u64>().map_err(|_| perr(format!("expected a positive integer, got {s:?}")))
}

/// `"a"` or `"a/b"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_i128(d)?;
            if d == 0 {
                return Err(perr("zero denominator"));
            }
            Ok(rat(parse_i128(n)?, d))
        }
        None => Ok(rat(parse_i128(s)?, 1)),
    }
}

/// Accepts the rendered forms (`Z`, `Q`, `(1/6)Z`, `(1/2^inf)Z`, `Z^2lex`,
/// `Z+sqrt2Z`) and the short forms `1/6`, `1/2^inf`, `lex2`, `quad`.
pub fn parse_group_desc(s: &str) -> Result<GroupDesc> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = t.to_ascii_lowercase();
    match lower.as_str() {
        "z" | "int" | "integers" => return Ok(GroupDesc::integers()),
        "q" | "rationals" => return Ok(GroupDesc::rationals()),
        "quad" | "z+sqrt2z" | "sqrt2" => return Ok(GroupDesc::QuadSqrt2),
        _ => {}
    }
    if let Some(r) = lower.strip_prefix("lex") {
        return GroupDesc::lex(if r.is_empty() { 2 } else { parse_u64(r)? as usize });
    }
    if let Some(r) = lower.strip_prefix("z^").and_then(|r| r.strip_suffix("lex")) {
        return GroupDesc::lex(parse_u64(r)? as usize);
    }
    let inner = lower.strip_prefix("(").and_then(|r| r.strip_suffix(")z")).unwrap_or(&lower);
    if let Some(d) = inner.strip_prefix("1/") {
        if let Some(p) = d.strip_suffix("^inf") {
            return GroupDesc::p_divisible_hull(parse_u64(p)?);
        }
        return GroupDesc::one_over(parse_u64(d)?);
    }
    Err(perr(format!("unknown group {s:?}")))
}

/// Split at top-level `+`/`-` into signed pieces. A sign directly after `^`,
/// `*`, `/` or `(` belongs to the following token.
fn signed_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(perr(format!("unbalanced parentheses in {s:?}")));
        }
        let binds = matches!(prev, None | Some('^') | Some('*') | Some('/') | Some('('));
        if depth == 0 && (ch == '+' || ch == '-') && !(binds && !cur.is_empty()) {
            if cur.is_empty() && prev.is_none() {
                neg = ch == '-';
            } else if cur.is_empty() && matches!(prev, Some('+') | Some('-')) {
                neg ^= ch == '-';
            } else if cur.is_empty() {
                return Err(perr(format!("dangling sign in {s:?}")));
            } else {
                out.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            }
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if depth != 0 {
        return Err(perr(format!("unbalanced parentheses in {s:?}")));
    }
    if cur.is_empty() {
        return Err(perr(format!("empty term in {s:?}")));
    }
    out.push((neg, cur));
    Ok(out)
}

fn parse_quad(s: &str) -> Result<GroupElem> {
    let (mut a, mut b) = (rat(0, 1), rat(0, 1));
    for (neg, term) in signed_terms(s)? {
        let sign = if neg { rat(-1, 1) } else { rat(1, 1) };
        if term.contains("sqrt2") {
            let coeff = term.replace("sqrt2", "");
            let coeff = coeff.trim_matches('*');
            let c = if coeff.is_empty() { rat(1, 1) } else { parse_rat(coeff)? };
            b += sign * c;
        } else {
            a += sign * parse_rat(&term)?;
        }
    }
    Ok(GroupElem::Quad(a, b))
}

/// Parse an element of `group`: `a/b` for subgroups of ℚ, `(n1,…,nr)` for
/// lex groups, `a+b*sqrt2` for ℤ + √2ℤ.
pub fn parse_group_elem(s: &str, group: &GroupDesc) -> Result<GroupElem> {
    let e = match group {
        GroupDesc::RatSub(_) => GroupElem::Rat(parse_rat(s)?),
        GroupDesc::LexZ(r) => {
            let t = s.trim();
            let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(|| perr(format!("expected (n1,...,n{r}), got {s:?}")))?;
            let v = inner.split(',').map(|x| parse_i128(x).map(|n| n as i64)).collect::<Result<Vec<_>>>()?;
            if v.len() != *r {
                return Err(perr(format!("expected {r} components, got {}", v.len())));
            }
            GroupElem::Lex(v)
        }
        GroupDesc::QuadSqrt2 => parse_quad(s)?,
    };
    group.check(&e)?;
    Ok(e)
}

/// `Q`, `F7`, `F9`, `GF(9)`, `GF9`.
pub fn parse_field(s: &str) -> Result<FieldDesc> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(FieldDesc::Rational);
    }
    let q = t
        .strip_prefix("GF(")
        .and_then(|x| x.strip_suffix(')'))
        .or_else(|| t.strip_prefix("GF"))
        .or_else(|| t.strip_prefix('F'))
        .ok_or_else(|| perr(format!("unknown field {s:?}")))?;
    FieldDesc::of_order(parse_u64(q)?)
}

/// A field literal. Elements of F_q are polynomials in the generator `u`.
pub fn parse_field_elem(s: &str, field: &FieldDesc) -> Result<FieldElem> {
    let vars: Vec<String> = match field {
        FieldDesc::Rational => Vec::new(),
        FieldDesc::Finite(_) => vec!["u".into()],
    };
    let r = parse_expr(s, field, &vars)?;
    let point: Vec<FieldElem> = if vars.is_empty() { Vec::new() } else { vec![field.generator()] };
    r.eval(&point)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| perr(lit))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(perr(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Identifiers in an expression, in order of first appearance.
pub fn expr_identifiers(s: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for t in tokenize(s)? {
        if let Tok::Ident(n) = t {
            if !out.contains(&n) {
                out.push(n);
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a FieldDesc,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, c: FieldElem) -> RatFn {
        RatFn::from_poly(MPoly::constant(self.field, self.vars, c))
    }

    fn expr(&mut self) -> Result<RatFn> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.try_mul(&self.factor()?)?;
            } else if self.eat('/') {
                acc = acc.try_div(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatFn> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return base.powi(e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i64::try_from(n).map_err(|_| perr("exponent too large"))?
            }
            _ => return Err(perr("exponents must be integers")),
        };
        if paren && !self.eat(')') {
            return Err(perr("expected ')' after exponent"));
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<RatFn> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = self.field.from_rational(&BigRational::from_integer(n))?;
                Ok(self.constant(c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(RatFn::from_poly(MPoly::var(self.field, self.vars, &name)?))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(perr("expected ')'"));
                }
                Ok(e)
            }
            Some(t) => Err(perr(format!("unexpected token {t:?}"))),
            None => Err(perr("unexpected end of expression")),
        }
    }
}

/// Parse a rational function in `vars` over `field`.
pub fn parse_expr(s: &str, field: &FieldDesc, vars: &[String]) -> Result<RatFn> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(perr("empty expression"));
    }
    let mut p = Parser { toks, pos: 0, field, vars };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(format!("trailing input after token {}", p.pos)));
    }
    Ok(r)
}

/// Parse a polynomial (denominator must be a constant).
pub fn parse_poly(s: &str, field: &FieldDesc, vars: &[String]) -> Result<MPoly> {
    let r = parse_expr(s, field, vars)?;
    if !r.den.is_constant() {
        return Err(perr(format!("{s:?} is not a polynomial")));
    }
    Ok(r.num.scale(&r.den.constant_term().inv()?))
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        let inner = &t[1..t.len() - 1];
        let mut depth = 0i32;
        for c in inner.chars() {
            depth += match c {
                '(' => 1,
                ')' => -1,
                _ => 0,
            };
            if depth < 0 {
                return t;
            }
        }
        return inner;
    }
    t
}

/// Parse `c*t^(e)` terms joined by `+`/`-`, optionally followed by
/// `O(t^(prec))`; this accepts the rendered form of a series.
pub fn parse_series(s: &str, field: &FieldDesc, group: &GroupDesc) -> Result<Series> {
    let mut terms = Vec::new();
    let mut prec = Precision::Infinite;
    if s.trim() == "0" {
        return Ok(Series::zero(field, group));
    }
    for (neg, term) in signed_terms(s)? {
        if let Some(inner) = term.strip_prefix("O(").and_then(|x| x.strip_suffix(')')) {
            let e = inner.strip_prefix("t^").ok_or_else(|| perr(format!("bad precision term {term:?}")))?;
            prec = Precision::Finite(parse_group_elem(strip_parens(e), group)?);
            continue;
        }
        let (coeff, mono) = match term.find("t^").or_else(|| term.rfind('t').filter(|i| *i + 1 == term.len())) {
            Some(i) => (term[..i].trim_end_matches('*'), &term[i..]),
            None => (term.as_str(), ""),
        };
        let mut c = if coeff.is_empty() { field.one() } else { parse_field_elem(strip_parens(coeff), field)? };
        if neg {
            c = -c;
        }
        let e = match mono {
            "" => group.zero(),
            "t" => group.unit(),
            m => parse_group_elem(strip_parens(&m[2..]), group)?,
        };
        terms.push((e, c));
    }
    Series::new(field, group, terms, prec)
}

pub fn render_valuation(v: &ValuationResult) -> String {
    match v {
        ValuationResult::Exact(g) => g.to_string(),
        ValuationResult::Infinity => "inf".into(),
        ValuationResult::AtLeast(g) => format!(">= {g}"),
    }
}

/// Short form of a group, as accepted by [`parse_group_desc`].
pub fn group_name(g: &GroupDesc) -> String {
    match g {
        GroupDesc::RatSub(DenominatorLaw::All) => "Q".into(),
        GroupDesc::RatSub(DenominatorLaw::Bounded(1)) => "Z".into(),
        GroupDesc::RatSub(DenominatorLaw::Bounded(m)) => format!("1/{m}"),
        GroupDesc::RatSub(DenominatorLaw::PPower(p)) => format!("1/{p}^inf"),
        GroupDesc::LexZ(r) => format!("lex{r}"),
        GroupDesc::QuadSqrt2 => "quad".into(),
    }
}
