//! Lagrange inversion: coefficient extraction for `g(fbar)` and `fbar^l`
//! without computing the compositional inverse.
//!
//! Throughout, `f` is an almost unit (`f_0 = 0`, `f_1 != 0`), `fbar` its
//! compositional inverse and `phi = x / f`, so that `fbar = x * phi(fbar)`.
//!
//! * functional form: `[x^n] g(fbar) = (1/n) [x^{n-1}] g' phi^n`
//! * Schur–Jabotinsky form: `[x^n] fbar^l = (l/n) [x^{n-l}] phi^n`
//!
//! Both are checked in [`checks`] against [`TruncatedSeries::comp_inverse`],
//! which solves for `fbar` directly and never goes through these formulas.

pub mod checks;
mod report;
pub mod suite;

pub use checks::{check_base_case, check_eq1, check_induction_step};
pub use report::{Mismatch, VerifyReport};
pub use suite::{run_suite, run_suite_with, CheckKind, SuiteConfig};

use crate::error::{Error, Result};
use crate::ring::Rational;
use crate::series::TruncatedSeries;

/// `x / f(x)`, i.e. the inverse of the backshifted `f`. Truncation `N_f - 1`.
pub fn phi_from_f(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !f.is_almost_unit() {
        return Err(Error::NotAlmostUnit);
    }
    f.backshift()?.mul_inverse()
}

/// The almost unit `f = x / phi(x)` at truncation `n`, for a user-chosen
/// `phi` with `phi_0 != 0`.
pub fn f_from_phi(phi: &TruncatedSeries, n: usize) -> Result<TruncatedSeries> {
    if phi.coeffs()[0].is_zero() {
        return Err(Error::NotInvertible);
    }
    if n == 0 {
        return Err(Error::PreconditionViolated(
            "an almost unit needs truncation at least 1".into(),
        ));
    }
    let inv = phi.truncate(n - 1)?.mul_inverse()?;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Rational::zero());
    coeffs.extend(inv.into_coeffs());
    TruncatedSeries::new(coeffs)
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::PreconditionViolated(
            "n must be a positive integer".into(),
        ));
    }
    Ok(())
}

fn require_window(s: &TruncatedSeries, n: usize) -> Result<()> {
    if n > s.truncation() {
        return Err(Error::TruncationExceeded {
            index: n,
            truncation: s.truncation(),
        });
    }
    Ok(())
}

/// `[x^n] g(fbar(x))` computed as `(1/n) [x^{n-1}] g'(x) phi(x)^n`.
pub fn lif_functional(g: &TruncatedSeries, f: &TruncatedSeries, n: usize) -> Result<Rational> {
    require_positive(n)?;
    if !f.is_almost_unit() {
        return Err(Error::NotAlmostUnit);
    }
    require_window(f, n)?;
    require_window(g, n)?;
    let w = n - 1;
    let dg = g.derivative()?.truncate(w)?;
    let phi_n = phi_from_f(&f.truncate(n)?)?.pow(exponent(n)?);
    dg.mul(&phi_n).coeff(w)?.div_by_int(n as u64)
}

/// `[x^n] fbar(x)^l` computed as `(l/n) [x^{n-l}] phi(x)^n`, for
/// `1 <= n`, `0 <= l <= n`.
pub fn lif_schur_jabotinsky(f: &TruncatedSeries, n: usize, l: usize) -> Result<Rational> {
    require_positive(n)?;
    if l > n {
        return Err(Error::PreconditionViolated(format!(
            "need l <= n, got l = {l}, n = {n}"
        )));
    }
    if !f.is_almost_unit() {
        return Err(Error::NotAlmostUnit);
    }
    require_window(f, n)?;
    if l == 0 {
        return Ok(Rational::zero());
    }
    let w = n - l;
    let phi_n = phi_from_f(&f.truncate(w + 1)?)?.pow(exponent(n)?);
    phi_n.coeff(w)?.mul_int(l as i64).div_by_int(n as u64)
}

/// `[x^s] (x^j g^{j-s} + x^{j+1} g^{j-s-1} g')`, which is the Kronecker
/// delta `δ_{j,s}` for every invertible `g`. Negative powers of `g` use its
/// multiplicative inverse.
pub fn lemma1_value(g: &TruncatedSeries, j: usize, s: usize) -> Result<Rational> {
    if g.coeffs()[0].is_zero() {
        return Err(Error::NotInvertible);
    }
    require_window(g, s + 1)?;
    let gw = g.truncate(s)?;
    let dg = g.derivative()?.truncate(s)?;
    let e = j as i64 - s as i64;
    let first = gw.pow_signed(e)?.shift_up(j);
    let second = gw.pow_signed(e - 1)?.mul(&dg).shift_up(j + 1);
    Ok(first.coeff(s)? + second.coeff(s)?)
}

fn exponent(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::PreconditionViolated(format!("exponent {n} too large")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q).unwrap()
    }

    fn s(c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_ints(c)
    }

    fn exp_series(n: usize, sign: i64) -> TruncatedSeries {
        let mut fact = Rational::one();
        TruncatedSeries::from_fn(n, |k| {
            if k > 0 {
                fact = fact.mul_int(k as i64);
            }
            fact.inv().unwrap().mul_int(sign.pow(k as u32))
        })
    }

    /// `x e^{-x}` at truncation `n`.
    fn x_exp_neg(n: usize) -> TruncatedSeries {
        let e = exp_series(n - 1, -1);
        let mut c = vec![Rational::zero()];
        c.extend(e.into_coeffs());
        TruncatedSeries::new(c).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_from_f(&s(&[0, 1, -1, 0, 0])).unwrap(), s(&[1, 1, 1, 1]));
        assert_eq!(phi_from_f(&s(&[0, 1, 0, 0])).unwrap(), s(&[1, 0, 0]));
        assert_eq!(phi_from_f(&x_exp_neg(5)).unwrap(), exp_series(4, 1));
        assert_eq!(phi_from_f(&s(&[1, 1, 0])), Err(Error::NotAlmostUnit));
        let phi = phi_from_f(&s(&[0, 3, 1])).unwrap();
        assert_eq!(phi.coeffs()[0], r(1, 3));
    }

    #[test]
    fn f_from_phi_examples() {
        assert_eq!(f_from_phi(&s(&[1, 0, 0, 0]), 3).unwrap(), s(&[0, 1, 0, 0]));
        assert_eq!(
            f_from_phi(&s(&[1, 1, 1, 1, 1]), 5).unwrap(),
            s(&[0, 1, -1, 0, 0, 0])
        );
        assert_eq!(f_from_phi(&exp_series(6, 1), 6).unwrap(), x_exp_neg(6));
        assert_eq!(f_from_phi(&s(&[0, 1]), 2), Err(Error::NotInvertible));
        let phi = exp_series(6, 1);
        let back = phi_from_f(&f_from_phi(&phi, 6).unwrap()).unwrap();
        assert!(back.equal_upto(&phi, 5).unwrap());
    }

    #[test]
    fn functional_form_examples() {
        let g = s(&[2, 3, -1, 5, 7]);
        let f = s(&[0, 2, 5, -1, 1]);
        let phi0 = phi_from_f(&f).unwrap().coeffs()[0].clone();
        assert_eq!(lif_functional(&g, &f, 1).unwrap(), &g.coeffs()[1] * &phi0);
        let x = s(&[0, 1, 0, 0, 0]);
        for n in 1..=4 {
            assert_eq!(&lif_functional(&g, &x, n).unwrap(), g.coeff(n).unwrap());
        }
        let catalan_f = s(&[0, 1, -1, 0, 0]);
        assert_eq!(lif_functional(&x, &catalan_f, 4).unwrap(), r(5, 1));
    }

    #[test]
    fn functional_form_errors() {
        let g = s(&[1, 1, 1]);
        let f = s(&[0, 1, 1]);
        assert!(matches!(
            lif_functional(&g, &f, 0),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            lif_functional(&g, &f, 3),
            Err(Error::TruncationExceeded { .. })
        ));
        assert!(matches!(
            lif_functional(&s(&[1, 1]), &s(&[0, 1, 1, 1]), 2),
            Err(Error::TruncationExceeded { .. })
        ));
        assert_eq!(
            lif_functional(&g, &s(&[0, 0, 1]), 1),
            Err(Error::NotAlmostUnit)
        );
    }

    #[test]
    fn schur_jabotinsky_examples() {
        let f = s(&[0, 3, 1, -2, 4]);
        let phi0 = r(1, 3);
        for n in 1..=4 {
            assert_eq!(
                lif_schur_jabotinsky(&f, n, n).unwrap(),
                phi0.powi(n as i32).unwrap()
            );
            assert_eq!(lif_schur_jabotinsky(&f, n, 0).unwrap(), Rational::zero());
        }
        let catalan_f = s(&[0, 1, -1, 0, 0]);
        assert_eq!(lif_schur_jabotinsky(&catalan_f, 4, 1).unwrap(), r(5, 1));
        assert!(matches!(
            lif_schur_jabotinsky(&catalan_f, 2, 3),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            lif_schur_jabotinsky(&catalan_f, 0, 0),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            lif_schur_jabotinsky(&catalan_f, 5, 1),
            Err(Error::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn cayley_values() {
        // [x^3] fbar for f = x e^{-x} is 3^2 / 3! = 3/2
        let f = x_exp_neg(8);
        assert_eq!(lif_schur_jabotinsky(&f, 3, 1).unwrap(), r(3, 2));
        assert_eq!(lif_schur_jabotinsky(&f, 4, 1).unwrap(), r(8, 3));
    }

    #[test]
    fn lemma1_examples() {
        let g = s(&[2, -1, 3, 1, 5, 0]);
        assert_eq!(lemma1_value(&g, 3, 3).unwrap(), Rational::one());
        assert_eq!(
            lemma1_value(&s(&[1, 1, 0]), 0, 1).unwrap(),
            Rational::zero()
        );
        assert_eq!(lemma1_value(&g, 2, 0).unwrap(), Rational::zero());
        assert_eq!(
            lemma1_value(&s(&[0, 1, 1]), 0, 1),
            Err(Error::NotInvertible)
        );
        assert!(matches!(
            lemma1_value(&g, 1, 5),
            Err(Error::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn lemma1_terms_individually() {
        // g = 1 + x: [x^1] g^{-1} = -1 and [x^1] x g^{-2} g' = 1
        let g = s(&[1, 1, 0]);
        let inv = g.pow_signed(-1).unwrap();
        assert_eq!(inv.coeffs()[1], r(-1, 1));
        let second = g
            .pow_signed(-2)
            .unwrap()
            .mul(&g.derivative().unwrap())
            .shift_up(1);
        assert_eq!(second.coeffs()[1], r(1, 1));
    }
}
