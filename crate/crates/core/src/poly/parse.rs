//! Text form of polynomials, e.g. `3*x1^2*x2 - x3 + (1-2i)`.
//!
//! Grammar: sums and differences of products of factors; a factor is a
//! number (optionally followed by `i`), the imaginary unit `i`, a variable,
//! or a parenthesised expression, optionally raised to a non-negative
//! integer power with `^`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Monomial, MultiPoly};
use crate::{Error, Result, C64};

/// `x1, ..., xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Op(u8),
}

fn err(pos: usize, msg: &str) -> Error {
    Error::Parse {
        pos,
        msg: msg.to_string(),
    }
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let ident_char = |c: u8| c.is_ascii_alphanumeric() || c == b'_';
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == b'.' && b.get(i + 1).is_some_and(u8::is_ascii_digit))
        {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut k = i + 1;
                if k < b.len() && (b[k] == b'+' || b[k] == b'-') {
                    k += 1;
                }
                if k < b.len() && b[k].is_ascii_digit() {
                    while k < b.len() && b[k].is_ascii_digit() {
                        k += 1;
                    }
                    i = k;
                }
            }
            let v: f64 = s[start..i]
                .parse()
                .map_err(|_| err(start, "malformed number"))?;
            if i < b.len() && b[i] == b'i' && !b.get(i + 1).is_some_and(|&c| ident_char(c)) {
                i += 1;
                out.push((start, Tok::Imag(v)));
            } else {
                out.push((start, Tok::Num(v)));
            }
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < b.len() && ident_char(b[i]) {
                i += 1;
            }
            let id = &s[start..i];
            if id == "i" {
                out.push((start, Tok::Imag(1.0)));
            } else {
                out.push((start, Tok::Ident(id.to_string())));
            }
        } else if matches!(c, b'+' | b'-' | b'*' | b'^' | b'(' | b')') {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, "unexpected character"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ (b'+' | b'-'))) = self.peek() {
            let op = *op;
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op(b'*')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                Some(Tok::Num(_) | Tok::Imag(_) | Tok::Ident(_) | Tok::Op(b'(')) => {
                    return Err(err(
                        self.here(),
                        "expected an operator (use `*` for products)",
                    ));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(Tok::Op(b'-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Op(b'+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if let Some(Tok::Op(b'^')) = self.peek() {
            self.pos += 1;
            let at = self.here();
            match self.peek() {
                Some(Tok::Num(v)) if *v >= 0.0 && *v == libm::trunc(*v) && *v <= 1024.0 => {
                    let k = *v as u32;
                    self.pos += 1;
                    let mut out = MultiPoly::constant(self.nvars(), C64::new(1.0, 0.0));
                    for _ in 0..k {
                        out = &out * &base;
                    }
                    Ok(out)
                }
                _ => Err(err(at, "exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let at = self.here();
        let n = self.nvars();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| err(at, "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(MultiPoly::constant(n, C64::new(v, 0.0))),
            Tok::Imag(v) => Ok(MultiPoly::constant(n, C64::new(0.0, v))),
            Tok::Ident(name) => match self.names.iter().position(|s| *s == name) {
                Some(j) => Ok(MultiPoly::var(n, j)),
                None => Err(unknown_variable(&name, n)),
            },
            Tok::Op(b'(') => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(b')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(err(self.here(), "expected `)`")),
                }
            }
            Tok::Op(_) => Err(err(at, "unexpected operator")),
        }
    }
}

fn unknown_variable(name: &str, nvars: usize) -> Error {
    if let Some(k) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
        if k == 0 || k > nvars {
            return Error::VariableOutOfRange { index: k, nvars };
        }
    }
    Error::UnknownVariable(name.to_string())
}

/// Parses an expression over the given variable names.
pub fn parse_poly(src: &str, names: &[String]) -> Result<MultiPoly> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        names,
    };
    if p.toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.here(), "trailing input"));
    }
    Ok(out)
}

fn fmt_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (j, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[j].clone()),
            _ => parts.push(format!("{}^{}", names[j], e)),
        }
    }
    parts.join("*")
}

/// Formats in descending graded-lex order. Coefficients use the shortest
/// decimal form that parses back to the same `f64`.
pub fn format_poly(p: &MultiPoly, names: &[String]) -> String {
    assert_eq!(names.len(), p.nvars(), "one name per variable");
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let mono = fmt_monomial(m, names);
        let (neg, coef) = if c.im == 0.0 {
            let mag = c.re.abs();
            (
                c.re < 0.0,
                if mag == 1.0 && !mono.is_empty() {
                    String::new()
                } else {
                    fmt_real(mag)
                },
            )
        } else if c.re == 0.0 {
            let mag = c.im.abs();
            (
                c.im < 0.0,
                if mag == 1.0 {
                    "i".to_string()
                } else {
                    format!("{}i", fmt_real(mag))
                },
            )
        } else {
            let sign = if c.im < 0.0 { '-' } else { '+' };
            (
                false,
                format!("({}{}{}i)", fmt_real(c.re), sign, fmt_real(c.im.abs())),
            )
        };
        let body = match (coef.is_empty(), mono.is_empty()) {
            (true, _) => mono,
            (false, true) => coef,
            (false, false) => format!("{coef}*{mono}"),
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
