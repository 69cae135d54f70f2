//! Recursive-descent parser for series expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-'? atom ('^' uint)?
//! atom   := rational | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant except inside a rational literal: `3/4`
//! is a single literal, `3 / 4` is a division.

use num_bigint::BigInt;

use super::ast::{Builtin, Expr, ExprKind, Span};
use super::{DslError, DslErrorKind};
use crate::ring::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number { value: Rational, fraction: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number { value, .. } => format!("number {value}"),
            Tok::Ident(name) => format!("identifier {name:?}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(span: Span, expected: &[&str], found: String) -> DslError {
    DslError {
        kind: DslErrorKind::Syntax {
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        },
        span,
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, Span)>, DslError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: BigInt = input[start..i].parse().expect("ascii digits");
                let mut denom = BigInt::from(1);
                let mut fraction = false;
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    let d0 = i + 1;
                    i = d0;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    denom = input[d0..i].parse().expect("ascii digits");
                    fraction = true;
                }
                let value = Rational::new(numer, denom).map_err(|_| {
                    syntax(
                        Span::new(start, i),
                        &["nonzero denominator"],
                        input[start..i].to_string(),
                    )
                })?;
                toks.push((Tok::Number { value, fraction }, Span::new(start, i)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(input[start..i].to_string()), Span::new(start, i)));
                continue;
            }
            _ => {
                let ch = input[start..].chars().next().expect("in bounds");
                return Err(syntax(
                    Span::new(start, start + ch.len_utf8()),
                    &["number", "identifier", "operator", "'('", "')'"],
                    format!("{ch:?}"),
                ));
            }
        };
        i += 1;
        toks.push((tok, Span::new(start, i)));
    }
    toks.push((Tok::Eof, Span::new(input.len(), input.len())));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &[&str]) -> DslError {
        syntax(self.span(), expected, self.peek().describe())
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let ctor = match self.peek() {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr {
                kind: ctor(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.factor()?;
        loop {
            let ctor = match self.peek() {
                Tok::Star => ExprKind::Mul,
                Tok::Slash => ExprKind::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr {
                kind: ctor(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn factor(&mut self) -> Result<Expr, DslError> {
        let neg = if *self.peek() == Tok::Minus {
            Some(self.bump().1)
        } else {
            None
        };
        let mut e = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let (tok, span) = self.bump();
            let k = match tok {
                Tok::Number {
                    value,
                    fraction: false,
                } => u32::try_from(value.numer())
                    .map_err(|_| syntax(span, &["exponent below 2^32"], value.to_string()))?,
                other => {
                    return Err(syntax(
                        span,
                        &["non-negative integer exponent"],
                        other.describe(),
                    ))
                }
            };
            let span = e.span.join(span);
            e = Expr {
                kind: ExprKind::Pow(Box::new(e), k),
                span,
            };
        }
        if let Some(minus) = neg {
            let span = minus.join(e.span);
            e = Expr {
                kind: ExprKind::Neg(Box::new(e)),
                span,
            };
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        match self.peek().clone() {
            Tok::Number { value, .. } => {
                let (_, span) = self.bump();
                Ok(Expr {
                    kind: ExprKind::Literal(value),
                    span,
                })
            }
            Tok::Ident(name) => {
                let (_, span) = self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Expr {
                        kind: ExprKind::Var(name),
                        span,
                    });
                }
                let builtin = Builtin::lookup(&name).ok_or(DslError {
                    kind: DslErrorKind::UnknownFunction(name),
                    span,
                })?;
                self.bump();
                let arg = self.expr()?;
                let close = self.expect_rparen()?;
                Ok(Expr {
                    kind: ExprKind::Call(builtin, Box::new(arg)),
                    span: span.join(close),
                })
            }
            Tok::LParen => {
                let (_, open) = self.bump();
                let mut inner = self.expr()?;
                let close = self.expect_rparen()?;
                inner.span = open.join(close);
                Ok(inner)
            }
            _ => Err(self.fail(&["number", "identifier", "'('"])),
        }
    }

    fn expect_rparen(&mut self) -> Result<Span, DslError> {
        if *self.peek() == Tok::RParen {
            Ok(self.bump().1)
        } else {
            Err(self.fail(&["')'", "operator"]))
        }
    }
}

/// Parses a whole expression; trailing input is an error.
pub fn parse(input: &str) -> Result<Expr, DslError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.fail(&["operator", "end of input"]));
    }
    Ok(e)
}
