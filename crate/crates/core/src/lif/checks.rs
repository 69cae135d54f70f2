//! Identity checks over concrete series.
//!
//! Functions taking an explicit `fbar` compare the inversion formulas
//! against that series; callers normally pass
//! [`TruncatedSeries::comp_inverse`] and the negative-control tests pass a
//! deliberately corrupted copy.

use crate::error::{Error, Result};
use crate::ring::Rational;
use crate::series::TruncatedSeries;

use super::{lemma1_value, lif_functional, lif_schur_jabotinsky, phi_from_f, VerifyReport};

fn series_report(name: &str, lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Result<VerifyReport> {
    let m = lhs.truncation().min(rhs.truncation());
    Ok(VerifyReport::from_mismatch(
        name,
        lhs.first_mismatch(rhs, m)?,
    ))
}

fn almost_unit(f: &TruncatedSeries) -> Result<()> {
    if f.is_almost_unit() {
        Ok(())
    } else {
        Err(Error::NotAlmostUnit)
    }
}

fn nonunit(h: &TruncatedSeries) -> Result<()> {
    if h.coeffs()[0].is_zero() {
        Ok(())
    } else {
        Err(Error::CompositionRequiresNonunit)
    }
}

/// Functional form against `g(fbar)` for every `1 <= n <= min(N_g, N_f)`.
pub fn functional_form(
    g: &TruncatedSeries,
    f: &TruncatedSeries,
    fbar: &TruncatedSeries,
) -> Result<VerifyReport> {
    let oracle = g.compose(fbar)?;
    let top = g.truncation().min(f.truncation()).min(oracle.truncation());
    let mut pairs = Vec::with_capacity(top);
    for n in 1..=top {
        pairs.push((n, lif_functional(g, f, n)?, oracle.coeff(n)?.clone()));
    }
    Ok(VerifyReport::from_pairs("functional", pairs))
}

/// Schur–Jabotinsky form against powers of `fbar` for every
/// `1 <= l <= n <= N`. Scans `l` in the outer loop.
pub fn power_form(f: &TruncatedSeries, fbar: &TruncatedSeries) -> Result<VerifyReport> {
    let top = f.truncation().min(fbar.truncation());
    let mut power = TruncatedSeries::constant(Rational::one(), top);
    let fbar = fbar.truncate(top)?;
    for l in 1..=top {
        power = power.mul(&fbar);
        for n in l..=top {
            let lhs = lif_schur_jabotinsky(f, n, l)?;
            let rhs = power.coeff(n)?;
            if &lhs != rhs {
                return Ok(VerifyReport::from_pairs(
                    "power-form",
                    [(n, lhs, rhs.clone())],
                ));
            }
        }
    }
    Ok(VerifyReport::from_pairs("power-form", []))
}

/// `sum_{l=0}^{n} g_l [x^n] fbar^l` via the Schur–Jabotinsky form equals the
/// functional form at the same `n`.
pub fn linkage(g: &TruncatedSeries, f: &TruncatedSeries) -> Result<VerifyReport> {
    let top = g.truncation().min(f.truncation());
    let mut pairs = Vec::with_capacity(top);
    for n in 1..=top {
        let mut sum = Rational::zero();
        for l in 0..=n {
            let gl = g.coeff(l)?;
            if !gl.is_zero() {
                sum += gl * &lif_schur_jabotinsky(f, n, l)?;
            }
        }
        pairs.push((n, sum, lif_functional(g, f, n)?));
    }
    Ok(VerifyReport::from_pairs("linkage", pairs))
}

/// Kronecker-delta grid for `0 <= j, s <= max`. Mismatch index is `s`.
pub fn lemma1_grid(g: &TruncatedSeries, max: usize) -> Result<VerifyReport> {
    let mut pairs = Vec::new();
    for j in 0..=max {
        for s in 0..=max {
            let delta = if j == s {
                Rational::one()
            } else {
                Rational::zero()
            };
            pairs.push((s, lemma1_value(g, j, s)?, delta));
        }
    }
    Ok(VerifyReport::from_pairs("lemma1", pairs))
}

/// `(f g)' = f' g + f g'`.
pub fn product_rule(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<VerifyReport> {
    let lhs = f.mul(g).derivative()?;
    let rhs = f.derivative()?.mul(g).add(&f.mul(&g.derivative()?));
    series_report("product-rule", &lhs, &rhs)
}

/// `(f^{k+1})' = (k+1) f^k f'`.
pub fn power_rule(f: &TruncatedSeries, k: u32) -> Result<VerifyReport> {
    let lhs = f.pow(k + 1).derivative()?;
    let rhs = f
        .pow(k)
        .mul(&f.derivative()?)
        .scale(&Rational::from(i64::from(k) + 1));
    series_report("power-rule", &lhs, &rhs)
}

/// `(f ∘ h)' = (f' ∘ h) h'` for nonunit `h`.
pub fn chain_rule(f: &TruncatedSeries, h: &TruncatedSeries) -> Result<VerifyReport> {
    nonunit(h)?;
    let lhs = f.compose(h)?.derivative()?;
    let rhs = f.derivative()?.compose(h)?.mul(&h.derivative()?);
    series_report("chain-rule", &lhs, &rhs)
}

/// `[x^n] (f ∘ h)' = [x^n] sum_i f_i (h^i)'` for every `n <= N - 1`.
pub fn term_by_term(f: &TruncatedSeries, h: &TruncatedSeries) -> Result<VerifyReport> {
    nonunit(h)?;
    let top = f.truncation().min(h.truncation());
    let h = h.truncate(top)?;
    let lhs = f.compose(&h)?.derivative()?;
    let mut rhs = TruncatedSeries::zero(top - 1);
    let mut power = TruncatedSeries::constant(Rational::one(), top);
    for fi in &f.coeffs()[..=top] {
        if !fi.is_zero() {
            rhs = rhs.add(&power.derivative()?.scale(fi));
        }
        power = power.mul(&h);
    }
    series_report("term-by-term", &lhs, &rhs)
}

/// `(f g) ∘ h = (f ∘ h)(g ∘ h)` for nonunit `h`.
pub fn right_distributive(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    h: &TruncatedSeries,
) -> Result<VerifyReport> {
    nonunit(h)?;
    let lhs = f.mul(g).compose(h)?;
    let rhs = f.compose(h)?.mul(&g.compose(h)?);
    series_report("distributive", &lhs, &rhs)
}

/// `[x^1] g(fbar) = g_1 phi_0`.
pub fn base_case(
    g: &TruncatedSeries,
    f: &TruncatedSeries,
    fbar: &TruncatedSeries,
) -> Result<VerifyReport> {
    let phi0 = phi_from_f(f)?.coeff(0)?.clone();
    let lhs = g.compose(fbar)?.coeff(1)?.clone();
    let rhs = g.coeff(1)? * &phi0;
    Ok(VerifyReport::from_pairs("base-case", [(1, lhs, rhs)]))
}

/// The chain `[x^{n+1}] fbar^{l+1} = [x^n] fbar^l phi(fbar)
/// = ((l+1)/(n+1)) [x^{n-l}] phi^{n+1}` at one `(n, l)`.
pub fn induction_step(
    f: &TruncatedSeries,
    fbar: &TruncatedSeries,
    n: usize,
    l: usize,
) -> Result<VerifyReport> {
    if n == 0 || l > n {
        return Err(Error::PreconditionViolated(format!(
            "induction step needs 1 <= n and l <= n, got n = {n}, l = {l}"
        )));
    }
    let top = n + 1;
    let f = f.truncate(top)?;
    let fbar = fbar.truncate(top)?;
    let phi = phi_from_f(&f)?;
    let lhs = fbar.pow(l as u32 + 1).coeff(top)?.clone();
    let substituted = fbar
        .truncate(n)?
        .pow(l as u32)
        .mul(&phi.compose(&fbar)?)
        .coeff(n)?
        .clone();
    let closed = phi
        .truncate(n - l)?
        .pow(top as u32)
        .coeff(n - l)?
        .mul_int(l as i64 + 1)
        .div_by_int(top as u64)?;
    Ok(VerifyReport::from_pairs(
        "induction",
        [(top, lhs, substituted.clone()), (top, substituted, closed)],
    ))
}

/// `sum_{i=l}^{N} i [x^i]fbar^l f^{i-1} f' = l x^{l-1}` through index
/// `N - 1`. The sum stops at `N` because `f^{i-1}` has order `i - 1`.
pub fn eq1(
    f: &TruncatedSeries,
    fbar: &TruncatedSeries,
    l: usize,
    n: usize,
) -> Result<VerifyReport> {
    almost_unit(f)?;
    if l == 0 || l > n {
        return Err(Error::PreconditionViolated(format!(
            "eq1 needs 1 <= l <= N, got l = {l}, N = {n}"
        )));
    }
    let f = f.truncate(n)?;
    let fbar_l = fbar.truncate(n)?.pow(l as u32);
    let df = f.derivative()?;
    let mut lhs = TruncatedSeries::zero(n - 1);
    let mut f_pow = TruncatedSeries::constant(Rational::one(), n - 1);
    let f_low = f.truncate(n - 1)?;
    for _ in 1..l {
        f_pow = f_pow.mul(&f_low);
    }
    for i in l..=n {
        let c = fbar_l.coeff(i)?;
        if !c.is_zero() {
            lhs = lhs.add(&f_pow.mul(&df).scale(&c.mul_int(i as i64)));
        }
        f_pow = f_pow.mul(&f_low);
    }
    let rhs = TruncatedSeries::monomial(l - 1, n - 1)?.scale(&Rational::from(l as i64));
    series_report("eq1", &lhs, &rhs)
}

/// The final extraction of the calculus-route proof at one `(n, l)` with
/// `1 <= l <= n`, writing `fhat` for the backshift of `f` and `w = n - l`:
///
/// * terms with `i > n` in
///   `sum_i i fbar^l_i (x^{i-l} fhat^{i-n} + x^{i-l+1} fhat^{i-n-1} fhat')`
///   contribute nothing to `[x^w]`,
/// * the truncated sum at `[x^w]` equals `n [x^n] fbar^l`,
/// * and equals `l [x^w] fhat^{-n}`.
pub fn sj_cutoff(
    f: &TruncatedSeries,
    fbar: &TruncatedSeries,
    n: usize,
    l: usize,
) -> Result<VerifyReport> {
    almost_unit(f)?;
    if l == 0 || l > n {
        return Err(Error::PreconditionViolated(format!(
            "cutoff check needs 1 <= l <= n, got n = {n}, l = {l}"
        )));
    }
    let top = f.truncation().min(fbar.truncation());
    if top < n + 1 {
        return Err(Error::TruncationExceeded {
            index: n + 1,
            truncation: top,
        });
    }
    let fbar_l = fbar.truncate(top)?.pow(l as u32);
    cutoff_at(&BackshiftPowers::new(f, top)?, &fbar_l, top, n, l)
}

/// [`sj_cutoff`] over every `1 <= l <= n <= max_n`, sharing `fbar^l`
/// across each column. Mismatch index is `n - l`.
pub fn cutoff_grid(
    f: &TruncatedSeries,
    fbar: &TruncatedSeries,
    max_n: usize,
) -> Result<VerifyReport> {
    almost_unit(f)?;
    let top = f.truncation().min(fbar.truncation());
    if top < max_n + 1 {
        return Err(Error::TruncationExceeded {
            index: max_n + 1,
            truncation: top,
        });
    }
    let table = BackshiftPowers::new(f, top)?;
    let fbar = fbar.truncate(top)?;
    let mut fbar_l = TruncatedSeries::constant(Rational::one(), top);
    for l in 1..=max_n {
        fbar_l = fbar_l.mul(&fbar);
        for n in l..=max_n {
            let rep = cutoff_at(&table, &fbar_l, top, n, l)?;
            if !rep.passed {
                return Ok(rep);
            }
        }
    }
    Ok(VerifyReport::from_pairs("cutoff", []))
}

/// `fhat^e` and `fhat^{e-1} fhat'` for `-top <= e <= top`, on the window
/// `0..=top-2` where `fhat'` is exact.
struct BackshiftPowers {
    top: usize,
    plain: Vec<TruncatedSeries>,
    with_derivative: Vec<TruncatedSeries>,
}

impl BackshiftPowers {
    fn new(f: &TruncatedSeries, top: usize) -> Result<Self> {
        let fhat = f.truncate(top)?.backshift()?;
        let window = top - 2;
        let dfhat = fhat.derivative()?;
        let fhat = fhat.truncate(window)?;
        let inv = fhat.mul_inverse()?;
        // index e + top + 1 holds fhat^e, for e in -top-1 ..= top
        let mut plain = vec![TruncatedSeries::constant(Rational::one(), window)];
        for _ in 0..=top {
            let next = plain.last().expect("nonempty").mul(&inv);
            plain.push(next);
        }
        plain.reverse();
        for _ in 0..top {
            let next = plain.last().expect("nonempty").mul(&fhat);
            plain.push(next);
        }
        let with_derivative = plain[..plain.len() - 1]
            .iter()
            .map(|p| p.mul(&dfhat))
            .collect();
        Ok(BackshiftPowers {
            top,
            plain,
            with_derivative,
        })
    }

    fn plain(&self, e: i64) -> &TruncatedSeries {
        &self.plain[(e + self.top as i64 + 1) as usize]
    }

    /// `fhat^{e-1} fhat'`.
    fn with_derivative(&self, e: i64) -> &TruncatedSeries {
        &self.with_derivative[(e + self.top as i64) as usize]
    }
}

/// `[x^w] x^shift h`; zero once the shift passes `w`, which is the order
/// bound that lets the infinite sum stop at `i = n`.
fn shifted_coeff(h: &TruncatedSeries, shift: usize, w: usize) -> Result<Rational> {
    if shift > w {
        return Ok(Rational::zero());
    }
    Ok(h.coeff(w - shift)?.clone())
}

fn cutoff_at(
    table: &BackshiftPowers,
    fbar_l: &TruncatedSeries,
    top: usize,
    n: usize,
    l: usize,
) -> Result<VerifyReport> {
    let w = n - l;
    let mut head = Rational::zero();
    let mut tail = Rational::zero();
    for i in l..=top {
        let c = fbar_l.coeff(i)?;
        if c.is_zero() {
            continue;
        }
        let e = i as i64 - n as i64;
        let bracket = shifted_coeff(table.plain(e), i - l, w)?
            + shifted_coeff(table.with_derivative(e), i - l + 1, w)?;
        let value = bracket * &c.mul_int(i as i64);
        if i <= n {
            head += value;
        } else {
            tail += value;
        }
    }
    let extracted = fbar_l.coeff(n)?.mul_int(n as i64);
    let closed = table.plain(-(n as i64)).coeff(w)?.mul_int(l as i64);
    Ok(VerifyReport::from_pairs(
        "cutoff",
        [
            (w, tail, Rational::zero()),
            (w, head.clone(), extracted),
            (w, head, closed),
        ],
    ))
}

/// `f(fbar) = x` and `fbar(f) = x`.
pub fn inverse_roundtrip(f: &TruncatedSeries, fbar: &TruncatedSeries) -> Result<VerifyReport> {
    let top = f.truncation().min(fbar.truncation());
    let x = TruncatedSeries::monomial(1, top)?;
    let forward = f.compose(fbar)?;
    let backward = fbar.compose(f)?;
    let mismatch = forward
        .first_mismatch(&x, top)?
        .or(backward.first_mismatch(&x, top)?);
    Ok(VerifyReport::from_mismatch("inverse", mismatch))
}

/// `x / f` computed as `1 / fhat` agrees with the general division.
pub fn phi_forms(f: &TruncatedSeries) -> Result<VerifyReport> {
    let by_backshift = phi_from_f(f)?;
    let x = TruncatedSeries::monomial(1, f.truncation())?;
    let by_division = TruncatedSeries::divide(&x, f)?;
    series_report("phi-forms", &by_backshift, &by_division)
}

/// `g * (1/g) = 1`.
pub fn mul_inverse_identity(g: &TruncatedSeries) -> Result<VerifyReport> {
    let one = TruncatedSeries::monomial(0, g.truncation())?;
    series_report("mul-inverse", &g.mul(&g.mul_inverse()?), &one)
}

/// `(f g) / g = f` on the shortened window.
pub fn divide_roundtrip(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<VerifyReport> {
    let q = TruncatedSeries::divide(&f.mul(g), g)?;
    series_report("divide", &q, f)
}

/// Base case of the induction with `fbar` from the order-by-order solver.
pub fn check_base_case(g: &TruncatedSeries, f: &TruncatedSeries) -> Result<VerifyReport> {
    base_case(g, f, &f.comp_inverse()?)
}

/// One induction step at `(n, l)`; `f` must carry at least `n + 1` orders.
pub fn check_induction_step(f: &TruncatedSeries, n: usize, l: usize) -> Result<VerifyReport> {
    almost_unit(f)?;
    if n + 1 > f.truncation() {
        return Err(Error::TruncationExceeded {
            index: n + 1,
            truncation: f.truncation(),
        });
    }
    let f = f.truncate(n + 1)?;
    induction_step(&f, &f.comp_inverse()?, n, l)
}

/// The composed-derivative identity at truncation `n`.
pub fn check_eq1(f: &TruncatedSeries, l: usize, n: usize) -> Result<VerifyReport> {
    almost_unit(f)?;
    let f = f.truncate(n)?;
    eq1(&f, &f.comp_inverse()?, l, n)
}
