//! Text syntax for Lie elements: `[v,[v,w]]`, `1/2*[u,u] - 3*w`, `0`.

use num_traits::{One, Signed, Zero};

use super::algebra::FreeLieAlgebra;
use super::element::LieElement;
use crate::error::{Error, Result};
use crate::qlinalg::rational::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Slash,
    Open,
    Close,
    Comma,
    Plus,
    Minus,
    Star,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '/' => { out.push(Tok::Slash); i += 1 }
            '[' => { out.push(Tok::Open); i += 1 }
            ']' => { out.push(Tok::Close); i += 1 }
            ',' => { out.push(Tok::Comma); i += 1 }
            '+' => { out.push(Tok::Plus); i += 1 }
            '-' => { out.push(Tok::Minus); i += 1 }
            '*' => { out.push(Tok::Star); i += 1 }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Tok::Number(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::parse(other.to_string(), "unexpected character")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    alg: &'a FreeLieAlgebra,
    toks: Vec<Tok>,
    pos: usize,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "<end>".into(),
        Some(Tok::Ident(s)) | Some(Tok::Number(s)) => s.clone(),
        Some(Tok::Slash) => "/".into(),
        Some(Tok::Open) => "[".into(),
        Some(Tok::Close) => "]".into(),
        Some(Tok::Comma) => ",".into(),
        Some(Tok::Plus) => "+".into(),
        Some(Tok::Minus) => "-".into(),
        Some(Tok::Star) => "*".into(),
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let got = self.next();
        if got.as_ref() == Some(&want) {
            Ok(())
        } else {
            Err(Error::parse(describe(got.as_ref()), format!("expected `{}`", describe(Some(&want)))))
        }
    }

    fn expr(&mut self) -> Result<LieElement> {
        let mut acc = LieElement::zero();
        let mut sign = Rational::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                sign = -sign;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &sign);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LieElement> {
        if let Some(Tok::Number(n)) = self.peek().cloned() {
            self.pos += 1;
            let mut text = n.clone();
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                match self.next() {
                    Some(Tok::Number(d)) => text = format!("{n}/{d}"),
                    other => return Err(Error::parse(describe(other.as_ref()), "expected denominator")),
                }
            }
            let c = parse_rational(&text)?;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                let f = self.factor()?;
                return Ok(f.scale(&c));
            }
            if c.is_zero() {
                return Ok(LieElement::zero());
            }
            return Err(Error::parse(text, "a nonzero scalar is not a Lie element"));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<LieElement> {
        match self.next() {
            Some(Tok::Ident(name)) => self
                .alg
                .gen_by_name(&name)
                .ok_or_else(|| Error::parse(name.clone(), "unknown generator")),
            Some(Tok::Open) => {
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::Close)?;
                self.alg.bracket(&a, &b)
            }
            other => Err(Error::parse(describe(other.as_ref()), "expected generator or `[`")),
        }
    }
}

impl FreeLieAlgebra {
    /// Parses the text syntax against this algebra's generator names.
    pub fn parse(&self, text: &str) -> Result<LieElement> {
        let toks = tokenize(text)?;
        if toks.is_empty() {
            return Err(Error::parse(text, "empty Lie element"));
        }
        let mut p = Parser { alg: self, toks, pos: 0 };
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            return Err(Error::parse(describe(p.peek()), "trailing input"));
        }
        Ok(e)
    }

    /// Canonical text of an element; inverse of [`FreeLieAlgebra::parse`].
    pub fn format(&self, x: &LieElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (idx, c)) in x.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&self.basis_name(*idx));
        }
        out
    }
}
