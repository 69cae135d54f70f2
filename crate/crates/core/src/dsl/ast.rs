use std::fmt;

use crate::ring::Rational;

/// Half-open byte range into the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Exp,
    Log1p,
    Inverse,
    XOverF,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Exp,
        Builtin::Log1p,
        Builtin::Inverse,
        Builtin::XOverF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Exp => "exp",
            Builtin::Log1p => "log1p",
            Builtin::Inverse => "inverse",
            Builtin::XOverF => "xoverf",
        }
    }

    pub fn lookup(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }
}

/// Expression node with its source span. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Literal(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Builtin, Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: Span::default(),
        }
    }

    pub fn lit(c: impl Into<Rational>) -> Self {
        Expr::new(ExprKind::Literal(c.into()))
    }

    pub fn var(name: &str) -> Self {
        Expr::new(ExprKind::Var(name.to_string()))
    }

    fn is_atom(&self) -> bool {
        match &self.kind {
            ExprKind::Literal(c) => !c.is_negative(),
            ExprKind::Var(_) | ExprKind::Call(..) => true,
            _ => false,
        }
    }

    fn is_sum(&self) -> bool {
        matches!(self.kind, ExprKind::Add(..) | ExprKind::Sub(..))
    }

    fn is_factor(&self) -> bool {
        self.is_atom() || matches!(self.kind, ExprKind::Neg(_) | ExprKind::Pow(..))
    }

    fn write_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atom() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    fn write_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_factor() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }

    fn write_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sum() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    /// Minimal-parenthesis form that parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            // the parser never produces these; printed as a negation
            ExprKind::Literal(c) if c.is_negative() => write!(f, "(-{})", c.abs()),
            ExprKind::Literal(c) => write!(f, "{c}"),
            ExprKind::Var(name) => f.write_str(name),
            ExprKind::Neg(inner) => {
                f.write_str("-")?;
                if matches!(inner.kind, ExprKind::Pow(..)) {
                    write!(f, "{inner}")
                } else {
                    inner.write_atom(f)
                }
            }
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                let op = if matches!(self.kind, ExprKind::Add(..)) {
                    '+'
                } else {
                    '-'
                };
                write!(f, "{a} {op} ")?;
                b.write_term(f)
            }
            ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                let op = if matches!(self.kind, ExprKind::Mul(..)) {
                    '*'
                } else {
                    '/'
                };
                a.write_term(f)?;
                write!(f, " {op} ")?;
                b.write_factor(f)
            }
            ExprKind::Pow(base, k) => {
                base.write_atom(f)?;
                write!(f, "^{k}")
            }
            ExprKind::Call(b, arg) => write!(f, "{}({arg})", b.name()),
        }
    }
}
