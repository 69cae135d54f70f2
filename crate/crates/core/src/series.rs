//! Dense truncated formal power series over the rationals.
//!
//! A [`TruncatedSeries`] stores `f_0 ..= f_N` where `N` is the truncation
//! order. Every coefficient inside that window is exact. Binary operations
//! produce a result truncated at the smaller of the two orders; derivative,
//! backshift and division by `x^d` lose one order per power of `x` removed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SeriesJson", try_from = "SeriesJson")]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

/// Position of the first nonzero coefficient, as far as the window can see.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    /// Every stored coefficient is zero. The true order may be anything
    /// above the truncation, including infinity.
    AboveTruncation,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    truncation: usize,
    coeffs: Vec<Rational>,
}

impl From<TruncatedSeries> for SeriesJson {
    fn from(s: TruncatedSeries) -> Self {
        SeriesJson {
            truncation: s.truncation(),
            coeffs: s.coeffs,
        }
    }
}

impl TryFrom<SeriesJson> for TruncatedSeries {
    type Error = String;

    fn try_from(j: SeriesJson) -> std::result::Result<Self, String> {
        if j.coeffs.len() != j.truncation + 1 {
            return Err(format!(
                "truncation {} needs {} coefficients, got {}",
                j.truncation,
                j.truncation + 1,
                j.coeffs.len()
            ));
        }
        Ok(TruncatedSeries { coeffs: j.coeffs })
    }
}

impl TruncatedSeries {
    /// Wraps a coefficient vector; its length fixes the truncation.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Integer coefficients, truncation `coeffs.len() - 1`.
    ///
    /// Panics on an empty slice.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        TruncatedSeries {
            coeffs: coeffs.iter().map(|&c| Rational::from(c)).collect(),
        }
    }

    /// The zero series θ at truncation `n`.
    pub fn zero(n: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); n + 1],
        }
    }

    pub fn constant(c: Rational, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = c;
        s
    }

    /// `x^l` at truncation `n`.
    pub fn monomial(l: usize, n: usize) -> Result<Self> {
        if l > n {
            return Err(Error::TruncationExceeded {
                index: l,
                truncation: n,
            });
        }
        let mut s = Self::zero(n);
        s.coeffs[l] = Rational::one();
        Ok(s)
    }

    /// Series built from `f(k)` for `k = 0..=n`.
    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Rational) -> Self {
        TruncatedSeries {
            coeffs: (0..=n).map(f).collect(),
        }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// `[x^n] f`.
    pub fn coeff(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::TruncationExceeded {
            index: n,
            truncation: self.truncation(),
        })
    }

    /// Overwrites `[x^n] f`; used to build corrupted fixtures.
    pub fn set_coeff(&mut self, n: usize, value: Rational) -> Result<()> {
        let truncation = self.truncation();
        let slot = self.coeffs.get_mut(n).ok_or(Error::TruncationExceeded {
            index: n,
            truncation,
        })?;
        *slot = value;
        Ok(())
    }

    /// Drops every coefficient above `n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.truncation() {
            return Err(Error::TruncationExceeded {
                index: n,
                truncation: self.truncation(),
            });
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_almost_unit(&self) -> bool {
        self.coeffs[0].is_zero() && self.coeffs.get(1).is_some_and(|c| !c.is_zero())
    }

    /// Exact equality of `[x^0] ..= [x^m]`.
    pub fn equal_upto(&self, other: &Self, m: usize) -> Result<bool> {
        Ok(self.first_mismatch(other, m)?.is_none())
    }

    /// First index `k <= m` where the two series differ, with both values.
    pub fn first_mismatch(
        &self,
        other: &Self,
        m: usize,
    ) -> Result<Option<(usize, Rational, Rational)>> {
        let window = self.truncation().min(other.truncation());
        if m > window {
            return Err(Error::TruncationExceeded {
                index: m,
                truncation: window,
            });
        }
        Ok(self.coeffs[..=m]
            .iter()
            .zip(&other.coeffs[..=m])
            .position(|(a, b)| a != b)
            .map(|k| (k, self.coeffs[k].clone(), other.coeffs[k].clone())))
    }

    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Order::Finite(k),
            None => Order::AboveTruncation,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::from_fn(n, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        Self::from_fn(n, |k| &self.coeffs[k] - &other.coeffs[k])
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product `h_n = sum_{i=0}^{n} f_i g_{n-i}`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// `f^k` by repeated squaring; `f^0 = x^0`.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = Self::constant(Rational::one(), self.truncation());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse via `h_0 = 1/g_0`,
    /// `h_n = -(1/g_0) sum_{i=1}^{n} g_i h_{n-i}`.
    pub fn mul_inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inv().map_err(|_| Error::NotInvertible)?;
        let n = self.truncation();
        let mut h: Vec<Rational> = Vec::with_capacity(n + 1);
        h.push(inv0.clone());
        for k in 1..=n {
            let s: Rational = (1..=k)
                .filter(|&i| !self.coeffs[i].is_zero())
                .map(|i| &self.coeffs[i] * &h[k - i])
                .sum();
            h.push(-(s * &inv0));
        }
        Ok(TruncatedSeries { coeffs: h })
    }

    /// `f^e` for a signed exponent; negative powers go through
    /// [`mul_inverse`](Self::mul_inverse).
    pub fn pow_signed(&self, e: i64) -> Result<Self> {
        let k = u32::try_from(e.unsigned_abs())
            .map_err(|_| Error::PreconditionViolated(format!("exponent {e} too large")))?;
        if e >= 0 {
            Ok(self.pow(k))
        } else {
            Ok(self.mul_inverse()?.pow(k))
        }
    }

    /// The unique `h` with `h * den = num`, at truncation `min(N) - d` where
    /// `d` is the order of `den`.
    pub fn divide(num: &Self, den: &Self) -> Result<Self> {
        let d = match den.order() {
            Order::Finite(d) => d,
            Order::AboveTruncation => {
                return Err(Error::NotDivisible(
                    "denominator is zero in the window".into(),
                ))
            }
        };
        let window = num.truncation().min(den.truncation());
        if d > window {
            return Err(Error::NotDivisible(format!(
                "denominator order {d} exceeds the common truncation {window}"
            )));
        }
        if let Some(i) = num.coeffs[..d].iter().position(|c| !c.is_zero()) {
            return Err(Error::NotDivisible(format!(
                "numerator has order {i}, below the denominator order {d}"
            )));
        }
        let n = window - d;
        let num_shift = TruncatedSeries {
            coeffs: num.coeffs[d..=d + n].to_vec(),
        };
        let den_shift = TruncatedSeries {
            coeffs: den.coeffs[d..=d + n].to_vec(),
        };
        Ok(num_shift.mul(&den_shift.mul_inverse()?))
    }

    /// `[x^n] f' = (n+1) f_{n+1}`.
    pub fn derivative(&self) -> Result<Self> {
        let n = self.truncation();
        if n == 0 {
            return Err(Error::TruncationExceeded {
                index: 1,
                truncation: 0,
            });
        }
        Ok(Self::from_fn(n - 1, |k| {
            self.coeffs[k + 1].mul_int(k as i64 + 1)
        }))
    }

    /// `[x^n] fhat = [x^{n+1}] f`.
    pub fn backshift(&self) -> Result<Self> {
        let n = self.truncation();
        if n == 0 {
            return Err(Error::TruncationExceeded {
                index: 1,
                truncation: 0,
            });
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplies by `x^k` without changing the truncation; coefficients
    /// pushed past the window are dropped.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.truncation();
        Self::from_fn(n, |i| {
            if i >= k {
                self.coeffs[i - k].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// `g(f(x))` for nonunit `f`, evaluated Horner-style:
    /// `((g_N f + g_{N-1}) f + ...) f + g_0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::CompositionRequiresNonunit);
        }
        let n = self.truncation().min(inner.truncation());
        let inner = inner.truncate(n)?;
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for i in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[i];
        }
        Ok(acc)
    }

    /// Compositional inverse of an almost unit, solved order by order.
    ///
    /// With `fbar_1 .. fbar_{k-1}` fixed, `[x^k] f(fbar)` is
    /// `f_1 fbar_k + sum_{i=2}^{k} f_i [x^k] fbar^i`, and for `i >= 2` the
    /// coefficient `[x^k] fbar^i` only involves `fbar_1 .. fbar_{k-1}`.
    /// Setting it to zero gives `fbar_k`. The table `powers[i][m]` holds
    /// `[x^m] fbar^i` and is filled one column `m = k` per step.
    pub fn comp_inverse(&self) -> Result<Self> {
        if !self.is_almost_unit() {
            return Err(Error::NotAlmostUnit);
        }
        let n = self.truncation();
        let inv1 = self.coeffs[1].inv()?;
        let mut powers = vec![vec![Rational::zero(); n + 1]; n + 1];
        powers[0][0] = Rational::one();
        powers[1][1] = inv1.clone();
        for k in 2..=n {
            for i in 2..=k {
                // fbar^{i-1} has order i-1, so j runs up to k-i+1 < k
                let c: Rational = (1..=k + 1 - i)
                    .filter(|&j| !powers[1][j].is_zero() && !powers[i - 1][k - j].is_zero())
                    .map(|j| &powers[1][j] * &powers[i - 1][k - j])
                    .sum();
                powers[i][k] = c;
            }
            let residual: Rational = (2..=k)
                .filter(|&i| !self.coeffs[i].is_zero())
                .map(|i| &self.coeffs[i] * &powers[i][k])
                .sum();
            powers[1][k] = -(residual * &inv1);
        }
        Ok(TruncatedSeries {
            coeffs: std::mem::take(&mut powers[1]),
        })
    }
}

impl fmt::Display for TruncatedSeries {
    /// Canonical text form `c0, c1, ..., cN`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TruncatedSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Rational>>>()?;
        TruncatedSeries::new(coeffs)
    }
}
