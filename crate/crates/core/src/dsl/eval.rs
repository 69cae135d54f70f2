use std::collections::HashMap;

use super::ast::{Builtin, Expr, ExprKind};
use super::{parse, DslError, DslErrorKind};
use crate::error::Error;
use crate::lif::phi_from_f;
use crate::ring::Rational;
use crate::series::TruncatedSeries;

#[derive(Clone, Debug, Default)]
pub struct EvalContext {
    pub truncation: usize,
    /// Named series usable as variables; `x` is always the series `x`.
    pub bindings: HashMap<String, TruncatedSeries>,
}

impl EvalContext {
    pub fn new(truncation: usize) -> Self {
        EvalContext {
            truncation,
            bindings: HashMap::new(),
        }
    }

    pub fn bind(mut self, name: &str, series: TruncatedSeries) -> Self {
        self.bindings.insert(name.to_string(), series);
        self
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(input: &str, truncation: usize) -> Result<TruncatedSeries, DslError> {
    eval(&parse(input)?, &EvalContext::new(truncation))
}

pub fn eval(expr: &Expr, ctx: &EvalContext) -> Result<TruncatedSeries, DslError> {
    let at = |e: Error| DslError {
        kind: DslErrorKind::Eval(e),
        span: expr.span,
    };
    let n = ctx.truncation;
    Ok(match &expr.kind {
        ExprKind::Literal(c) => TruncatedSeries::constant(c.clone(), n),
        ExprKind::Var(name) if name == "x" => {
            if n == 0 {
                TruncatedSeries::zero(0)
            } else {
                TruncatedSeries::monomial(1, n).map_err(at)?
            }
        }
        ExprKind::Var(name) => ctx
            .bindings
            .get(name)
            .ok_or_else(|| DslError {
                kind: DslErrorKind::UnboundVariable(name.clone()),
                span: expr.span,
            })?
            .truncate(n)
            .map_err(at)?,
        ExprKind::Neg(a) => eval(a, ctx)?.neg(),
        ExprKind::Add(a, b) => eval(a, ctx)?.add(&eval(b, ctx)?),
        ExprKind::Sub(a, b) => eval(a, ctx)?.sub(&eval(b, ctx)?),
        ExprKind::Mul(a, b) => eval(a, ctx)?.mul(&eval(b, ctx)?),
        ExprKind::Div(a, b) => {
            TruncatedSeries::divide(&eval(a, ctx)?, &eval(b, ctx)?).map_err(at)?
        }
        ExprKind::Pow(a, k) => eval(a, ctx)?.pow(*k),
        ExprKind::Call(f, arg) => {
            let s = eval(arg, ctx)?;
            match f {
                Builtin::Exp => exp_coefficients(s.truncation()).compose(&s).map_err(at)?,
                Builtin::Log1p => log1p_coefficients(s.truncation()).compose(&s).map_err(at)?,
                Builtin::Inverse => s.comp_inverse().map_err(at)?,
                Builtin::XOverF => phi_from_f(&s).map_err(at)?,
            }
        }
    })
}

/// `1/k!`.
fn exp_coefficients(n: usize) -> TruncatedSeries {
    let mut fact = Rational::one();
    TruncatedSeries::from_fn(n, |k| {
        if k > 0 {
            fact = fact.mul_int(k as i64);
        }
        fact.inv().expect("factorials are nonzero")
    })
}

/// `(-1)^{k+1}/k` for `k >= 1`, zero constant term.
fn log1p_coefficients(n: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(n, |k| {
        if k == 0 {
            return Rational::zero();
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        Rational::new(sign, k as i64).expect("k >= 1")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::Span;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q).unwrap()
    }

    fn s(c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_ints(c)
    }

    fn series(c: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::new(c.iter().map(|&(p, q)| r(p, q)).collect()).unwrap()
    }

    fn eval_err(input: &str, n: usize) -> DslError {
        eval_str(input, n).expect_err(input)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(eval_str("x*(1-x)", 4).unwrap(), s(&[0, 1, -1, 0, 0]));
        assert_eq!(
            eval_str("exp(x)", 3).unwrap(),
            series(&[(1, 1), (1, 1), (1, 2), (1, 6)])
        );
        assert_eq!(
            eval_str("inverse(x - x^2)", 5).unwrap(),
            s(&[0, 1, 1, 2, 5, 14])
        );
    }

    #[test]
    fn builtins() {
        assert_eq!(
            eval_str("log1p(x)", 4).unwrap(),
            series(&[(0, 1), (1, 1), (-1, 2), (1, 3), (-1, 4)])
        );
        // log1p(exp(x) - 1) = x
        assert_eq!(
            eval_str("log1p(exp(x) - 1)", 6).unwrap(),
            s(&[0, 1, 0, 0, 0, 0, 0])
        );
        assert_eq!(eval_str("xoverf(x - x^2)", 4).unwrap(), s(&[1, 1, 1, 1]));
        assert_eq!(
            eval_str("exp(x) * exp(-x)", 5).unwrap(),
            s(&[1, 0, 0, 0, 0, 0])
        );
    }

    #[test]
    fn division_shortens_window() {
        let q = eval_str("x/(x - x^2)", 5).unwrap();
        assert_eq!(q, s(&[1, 1, 1, 1, 1]));
        assert_eq!(eval_str("1/(1-x)", 4).unwrap(), s(&[1, 1, 1, 1, 1]));
        assert_eq!(
            eval_str("3/4 + x / 2", 2).unwrap(),
            series(&[(3, 4), (1, 2), (0, 1)])
        );
    }

    #[test]
    fn bindings() {
        let ctx = EvalContext::new(3).bind("phi", s(&[1, 1, 1, 1, 1]));
        let e = parse("x / phi").unwrap();
        assert_eq!(eval(&e, &ctx).unwrap(), s(&[0, 1, -1, 0]));
        let short = EvalContext::new(3).bind("phi", s(&[1, 1]));
        assert!(matches!(
            eval(&e, &short).unwrap_err().kind,
            DslErrorKind::Eval(Error::TruncationExceeded { .. })
        ));
        let err = eval_err("x + y", 3);
        assert_eq!(err.kind, DslErrorKind::UnboundVariable("y".into()));
        assert_eq!(err.span, Span::new(4, 5));
    }

    #[test]
    fn errors_point_at_subexpression() {
        let err = eval_err("1 + 1/x", 4);
        assert!(matches!(
            err.kind,
            DslErrorKind::Eval(Error::NotDivisible(_))
        ));
        assert_eq!(err.span, Span::new(4, 7));

        let err = eval_err("2 * exp(1 + x)", 4);
        assert_eq!(
            err.kind,
            DslErrorKind::Eval(Error::CompositionRequiresNonunit)
        );
        assert_eq!(err.span, Span::new(4, 14));

        let err = eval_err("inverse(1 + x)", 4);
        assert_eq!(err.kind, DslErrorKind::Eval(Error::NotAlmostUnit));

        let err = eval_err("xoverf(x^2)", 4);
        assert_eq!(err.kind, DslErrorKind::Eval(Error::NotAlmostUnit));
        assert!(err.render("xoverf(x^2)").contains("^^^^^^^^^^^"));
    }

    #[test]
    fn zero_truncation() {
        assert_eq!(eval_str("x + 2", 0).unwrap(), s(&[2]));
        assert!(eval_str("inverse(x)", 0).is_err());
    }

    // Random small expressions over x, rendered through the pretty printer.
    fn expr_strategy() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0i64..6, 1i64..4).prop_map(|(p, q)| Expr::lit(r(p, q))),
            Just(Expr::var("x")),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner
                    .clone()
                    .prop_map(|a| Expr::new(ExprKind::Neg(Box::new(a)))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::new(ExprKind::Add(Box::new(a), Box::new(b)))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::new(ExprKind::Sub(Box::new(a), Box::new(b)))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::new(ExprKind::Mul(Box::new(a), Box::new(b)))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::new(ExprKind::Div(Box::new(a), Box::new(b)))),
                (inner.clone(), 0u32..4)
                    .prop_map(|(a, k)| Expr::new(ExprKind::Pow(Box::new(a), k))),
                inner
                    .clone()
                    .prop_map(|a| Expr::new(ExprKind::Call(Builtin::Exp, Box::new(a)))),
                inner.prop_map(|a| Expr::new(ExprKind::Call(Builtin::Inverse, Box::new(a)))),
            ]
        })
    }

    fn binary(kind: fn(Box<Expr>, Box<Expr>) -> ExprKind, a: &Expr, b: &Expr) -> Expr {
        Expr::new(kind(Box::new(a.clone()), Box::new(b.clone())))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn print_then_parse_is_identity(e in expr_strategy()) {
            let text = e.to_string();
            let back = parse(&text).map_err(|err| TestCaseError::fail(err.render(&text)))?;
            prop_assert_eq!(&back, &e, "printed as {}", text);
            prop_assert_eq!(back.to_string(), text);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in expr_strategy(), b in expr_strategy()) {
            let ctx = EvalContext::new(5);
            let (Ok(va), Ok(vb)) = (eval(&a, &ctx), eval(&b, &ctx)) else {
                return Ok(());
            };
            prop_assert_eq!(eval(&binary(ExprKind::Add, &a, &b), &ctx).unwrap(), va.add(&vb));
            prop_assert_eq!(eval(&binary(ExprKind::Sub, &a, &b), &ctx).unwrap(), va.sub(&vb));
            prop_assert_eq!(eval(&binary(ExprKind::Mul, &a, &b), &ctx).unwrap(), va.mul(&vb));
            match TruncatedSeries::divide(&va, &vb) {
                Ok(q) => prop_assert_eq!(eval(&binary(ExprKind::Div, &a, &b), &ctx).unwrap(), q),
                Err(_) => prop_assert!(eval(&binary(ExprKind::Div, &a, &b), &ctx).is_err()),
            }
            prop_assert_eq!(
                eval(&Expr::new(ExprKind::Neg(Box::new(a.clone()))), &ctx).unwrap(),
                va.neg()
            );
        }

        #[test]
        fn error_spans_lie_inside_input(e in expr_strategy()) {
            let text = e.to_string();
            if let Err(err) = eval_str(&text, 5) {
                prop_assert!(err.span.start <= err.span.end && err.span.end <= text.len());
            }
        }
    }
}
