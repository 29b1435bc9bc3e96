//! Expression lexer and parsers for the model-file dialect: affine-linear
//! forms in the declared parameters, and exact Laurent matrix entries over
//! the fixture variables.

use std::collections::BTreeMap;

use flagclean_core::loopgroup::{ExactLaurent, RatFunc};
use flagclean_core::rat::{Int, Rat};
use flagclean_core::symcore::{LinearForm, ParamSpace};
use num_bigint::BigInt;

use crate::diag::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub col: usize,
}

/// Tokenize one line. Identifiers are `[A-Za-z_]` followed by
/// alphanumerics, `_`, and `-` when it directly follows `_` (so `mu_-1` is
/// one identifier while `x-y` lexes as a subtraction).
pub fn lex(line: &str, line_no: usize, path: &str) -> Result<Vec<Spanned>, Diagnostic> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Int(text.parse().expect("digits")),
                    col,
                });
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                i += 1;
                while i < chars.len() {
                    let d = chars[i];
                    let ok =
                        d.is_ascii_alphanumeric() || d == '_' || (d == '-' && chars[i - 1] == '_');
                    if !ok {
                        break;
                    }
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    col,
                });
                continue;
            }
            other => {
                return Err(Diagnostic::new(
                    line_no,
                    col,
                    path,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Spanned { tok, col });
        i += 1;
    }
    Ok(out)
}

/// Exact Laurent polynomial value during expression evaluation: finitely
/// many powers of `t` with rational-function coefficients.
#[derive(Debug, Clone)]
pub struct LaurentValue {
    nvars: usize,
    terms: BTreeMap<i64, RatFunc>,
}

impl LaurentValue {
    fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    fn constant(nvars: usize, r: RatFunc) -> Self {
        let mut v = Self::zero(nvars);
        v.insert(0, r);
        v
    }

    fn insert(&mut self, k: i64, r: RatFunc) {
        if r.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(c) => {
                *c = c.add(&r);
                if c.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, r);
            }
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, r) in &other.terms {
            out.insert(*k, r.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, r)| (*k, r.neg())).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ka, ra) in &self.terms {
            for (kb, rb) in &other.terms {
                out.insert(ka + kb, ra.mul(rb));
            }
        }
        out
    }

    fn single_term(&self) -> Option<(i64, &RatFunc)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, r)| (*k, r))
        } else {
            None
        }
    }

    pub fn into_exact(self) -> ExactLaurent {
        ExactLaurent::new(self.terms.into_iter().collect())
    }
}

struct ExprParser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    path: &'a str,
    vars: &'a [String],
    nvars: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|s| s.col)
            .unwrap_or_else(|| self.toks.last().map(|s| s.col + 1).unwrap_or(1))
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let s = self.toks.get(self.pos);
        self.pos += 1;
        s
    }

    fn err(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.line, self.col(), self.path, message)
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), Diagnostic> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn sum(&mut self) -> Result<LaurentValue, Diagnostic> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<LaurentValue, Diagnostic> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let col = self.col();
                    let rhs = self.unary()?;
                    let (k, r) = rhs.single_term().ok_or_else(|| {
                        Diagnostic::new(
                            self.line,
                            col,
                            self.path,
                            "denominator must be a single power of t times a rational function",
                        )
                    })?;
                    let rinv = r.recip().map_err(|_| {
                        Diagnostic::new(self.line, col, self.path, "division by zero")
                    })?;
                    let mut inv = LaurentValue::zero(self.nvars);
                    inv.insert(-k, rinv);
                    acc = acc.mul(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentValue, Diagnostic> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let negate = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let col = self.col();
            let exp = match self.bump().map(|s| s.tok.clone()) {
                Some(Tok::Int(n)) => n,
                _ => {
                    return Err(Diagnostic::new(
                        self.line,
                        col,
                        self.path,
                        "expected an integer exponent",
                    ))
                }
            };
            let e: i64 = exp
                .try_into()
                .map_err(|_| Diagnostic::new(self.line, col, self.path, "exponent too large"))?;
            let e = if negate { -e } else { e };
            return self.pow(base, e, col);
        }
        Ok(base)
    }

    fn pow(&self, base: LaurentValue, e: i64, col: usize) -> Result<LaurentValue, Diagnostic> {
        if let Some((k, r)) = base.single_term() {
            let mag = u32::try_from(e.unsigned_abs())
                .map_err(|_| Diagnostic::new(self.line, col, self.path, "exponent too large"))?;
            let mut coeff = RatFunc::from_poly(r.num().pow(mag))
                .div(&RatFunc::from_poly(r.den().pow(mag)))
                .expect("nonzero denominator");
            if e < 0 {
                coeff = coeff.recip().map_err(|_| {
                    Diagnostic::new(
                        self.line,
                        col,
                        self.path,
                        "zero base under negative exponent",
                    )
                })?;
            }
            let mut out = LaurentValue::zero(self.nvars);
            out.insert(k * e, coeff);
            return Ok(out);
        }
        if e < 0 {
            return Err(Diagnostic::new(
                self.line,
                col,
                self.path,
                "negative exponent needs a single-term base",
            ));
        }
        let mut acc = LaurentValue::constant(self.nvars, RatFunc::one(self.nvars));
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<LaurentValue, Diagnostic> {
        let col = self.col();
        match self.bump().map(|s| s.tok.clone()) {
            Some(Tok::Int(n)) => Ok(LaurentValue::constant(
                self.nvars,
                RatFunc::constant(self.nvars, Rat::from_integer(n)),
            )),
            Some(Tok::Ident(name)) => {
                if name == "t" {
                    let mut v = LaurentValue::zero(self.nvars);
                    v.insert(1, RatFunc::one(self.nvars));
                    return Ok(v);
                }
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(LaurentValue::constant(
                        self.nvars,
                        RatFunc::var(self.nvars, i),
                    )),
                    None => Err(Diagnostic::new(
                        self.line,
                        col,
                        self.path,
                        format!("unknown variable `{name}`"),
                    )),
                }
            }
            Some(Tok::LParen) => {
                let v = self.sum()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(v)
            }
            _ => Err(Diagnostic::new(
                self.line,
                col,
                self.path,
                "expected a number, variable, or `(`",
            )),
        }
    }
}

/// Parse a 2x2 matrix `[ e , e ; e , e ]` of Laurent expressions over the
/// fixture variables (plus the series variable `t`).
pub fn parse_matrix(
    toks: &[Spanned],
    line: usize,
    path: &str,
    vars: &[String],
) -> Result<[[ExactLaurent; 2]; 2], Diagnostic> {
    let mut p = ExprParser {
        toks,
        pos: 0,
        line,
        path,
        vars,
        nvars: vars.len(),
    };
    p.expect(&Tok::LBracket, "`[`")?;
    let e00 = p.sum()?;
    p.expect(&Tok::Comma, "`,`")?;
    let e01 = p.sum()?;
    p.expect(&Tok::Semi, "`;`")?;
    let e10 = p.sum()?;
    p.expect(&Tok::Comma, "`,`")?;
    let e11 = p.sum()?;
    p.expect(&Tok::RBracket, "`]`")?;
    if p.pos != toks.len() {
        return Err(p.err("trailing tokens after `]`"));
    }
    Ok([
        [e00.into_exact(), e01.into_exact()],
        [e10.into_exact(), e11.into_exact()],
    ])
}

/// Parse an affine-linear form such as `mu_-1 + 2*mu_0 - 1/2` over the
/// declared parameters.
pub fn parse_linear_form(
    toks: &[Spanned],
    line: usize,
    path: &str,
    params: &ParamSpace,
) -> Result<LinearForm, Diagnostic> {
    struct P<'a> {
        toks: &'a [Spanned],
        pos: usize,
    }
    impl<'a> P<'a> {
        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos).map(|s| &s.tok)
        }
        fn col(&self) -> usize {
            self.toks
                .get(self.pos)
                .map(|s| s.col)
                .unwrap_or_else(|| self.toks.last().map(|s| s.col + 1).unwrap_or(1))
        }
    }
    let mut p = P { toks, pos: 0 };
    let mut form = LinearForm::zero();
    if p.toks.is_empty() {
        return Err(Diagnostic::new(line, 1, path, "empty form"));
    }

    let mut first = true;
    loop {
        // sign
        let mut negative = false;
        if first {
            if p.peek() == Some(&Tok::Minus) {
                negative = true;
                p.pos += 1;
            }
        } else {
            match p.peek() {
                Some(Tok::Plus) => p.pos += 1,
                Some(Tok::Minus) => {
                    negative = true;
                    p.pos += 1;
                }
                None => break,
                _ => return Err(Diagnostic::new(line, p.col(), path, "expected `+` or `-`")),
            }
        }
        first = false;

        // coefficient and/or parameter
        let mut coeff: Option<Rat> = None;
        let mut parens = false;
        if p.peek() == Some(&Tok::LParen) {
            parens = true;
            p.pos += 1;
        }
        if let Some(Tok::Int(_)) = p.peek() {
            let num = match p.toks[p.pos].tok.clone() {
                Tok::Int(n) => n,
                _ => unreachable!(),
            };
            p.pos += 1;
            let mut den = Int::from(1);
            if p.peek() == Some(&Tok::Slash) {
                p.pos += 1;
                match p.toks.get(p.pos).map(|s| s.tok.clone()) {
                    Some(Tok::Int(d)) => {
                        if d == Int::from(0) {
                            return Err(Diagnostic::new(line, p.col(), path, "zero denominator"));
                        }
                        den = d;
                        p.pos += 1;
                    }
                    _ => {
                        return Err(Diagnostic::new(
                            line,
                            p.col(),
                            path,
                            "expected a denominator",
                        ))
                    }
                }
            }
            coeff = Some(Rat::new(num, den));
        }
        if parens {
            if p.peek() == Some(&Tok::RParen) {
                p.pos += 1;
            } else {
                return Err(Diagnostic::new(line, p.col(), path, "expected `)`"));
            }
        }
        if coeff.is_some() && p.peek() == Some(&Tok::Star) {
            p.pos += 1;
        }
        let param = match p.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                let col = p.col();
                p.pos += 1;
                Some(params.index(&name).ok_or_else(|| {
                    Diagnostic::new(line, col, path, format!("unknown parameter `{name}`"))
                })?)
            }
            _ => None,
        };
        let had_coeff = coeff.is_some();
        let c = coeff.unwrap_or_else(|| Rat::from_integer(Int::from(1)));
        let c = if negative { -c } else { c };
        match param {
            Some(i) => {
                let v = form.coeff(i) + c;
                form.set_coeff(i, v);
            }
            None => {
                if !had_coeff {
                    return Err(Diagnostic::new(
                        line,
                        p.col(),
                        path,
                        "expected a coefficient or parameter",
                    ));
                }
                form.set_constant(form.constant_term() + c);
            }
        }
        if p.peek().is_none() {
            break;
        }
    }
    Ok(form)
}
