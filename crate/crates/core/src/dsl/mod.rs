//! Text syntax for series: `1/(1-x)`, `x*exp(-x)`, `inverse(x - x^2)`.
//!
//! [`parse`] builds an [`Expr`], [`eval`] turns it into a
//! [`TruncatedSeries`] at the context's truncation order. Errors carry the
//! byte span of the offending sub-expression.

mod ast;
mod eval;
mod parser;

use std::fmt;

pub use ast::{Builtin, Expr, ExprKind, Span};
pub use eval::{eval, eval_str, EvalContext};
pub use parser::parse;

use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct DslError {
    pub kind: DslErrorKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DslErrorKind {
    Syntax {
        expected: Vec<String>,
        found: String,
    },
    UnknownFunction(String),
    UnboundVariable(String),
    Eval(Error),
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = self.span;
        match &self.kind {
            DslErrorKind::Syntax { expected, found } => write!(
                f,
                "syntax error at byte {}: expected {}, found {found}",
                at.start,
                expected.join(" or ")
            ),
            DslErrorKind::UnknownFunction(name) => {
                let known: Vec<_> = Builtin::ALL.iter().map(|b| b.name()).collect();
                write!(
                    f,
                    "unknown function {name:?} at {at} (known: {})",
                    known.join(", ")
                )
            }
            DslErrorKind::UnboundVariable(name) => write!(f, "unbound variable {name:?} at {at}"),
            DslErrorKind::Eval(e) => write!(f, "{e} (in expression at {at})"),
        }
    }
}

impl std::error::Error for DslError {}

impl DslError {
    /// Renders the message with the source line and a caret underline.
    pub fn render(&self, source: &str) -> String {
        let start = self.span.start.min(source.len());
        let width = self.span.end.saturating_sub(start).max(1);
        format!(
            "{self}\n  {source}\n  {}{}",
            " ".repeat(source[..start].chars().count()),
            "^".repeat(width)
        )
    }
}
