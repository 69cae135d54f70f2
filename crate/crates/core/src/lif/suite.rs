//! Seeded randomized verification of every identity in [`super::checks`].
//!
//! Each trial draws its own series from a ChaCha stream keyed by the suite
//! seed and the trial index, so results do not depend on how trials are
//! scheduled across threads or on which checks are selected.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ring::Rational;
use crate::series::TruncatedSeries;

use super::checks;
use super::VerifyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Functional,
    PowerForm,
    Linkage,
    Lemma1,
    ProductRule,
    PowerRule,
    ChainRule,
    TermByTerm,
    Distributive,
    BaseCase,
    Induction,
    Eq1,
    Cutoff,
    Inverse,
    PhiForms,
    MulInverse,
    Divide,
}

impl CheckKind {
    pub const ALL: [CheckKind; 17] = [
        CheckKind::Functional,
        CheckKind::PowerForm,
        CheckKind::Linkage,
        CheckKind::Lemma1,
        CheckKind::ProductRule,
        CheckKind::PowerRule,
        CheckKind::ChainRule,
        CheckKind::TermByTerm,
        CheckKind::Distributive,
        CheckKind::BaseCase,
        CheckKind::Induction,
        CheckKind::Eq1,
        CheckKind::Cutoff,
        CheckKind::Inverse,
        CheckKind::PhiForms,
        CheckKind::MulInverse,
        CheckKind::Divide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Functional => "functional",
            CheckKind::PowerForm => "power-form",
            CheckKind::Linkage => "linkage",
            CheckKind::Lemma1 => "lemma1",
            CheckKind::ProductRule => "product-rule",
            CheckKind::PowerRule => "power-rule",
            CheckKind::ChainRule => "chain-rule",
            CheckKind::TermByTerm => "term-by-term",
            CheckKind::Distributive => "distributive",
            CheckKind::BaseCase => "base-case",
            CheckKind::Induction => "induction",
            CheckKind::Eq1 => "eq1",
            CheckKind::Cutoff => "cutoff",
            CheckKind::Inverse => "inverse",
            CheckKind::PhiForms => "phi-forms",
            CheckKind::MulInverse => "mul-inverse",
            CheckKind::Divide => "divide",
        }
    }

    /// Whether the check consumes the (possibly corrupted) inverse series.
    pub fn uses_inverse(self) -> bool {
        matches!(
            self,
            CheckKind::Functional
                | CheckKind::PowerForm
                | CheckKind::BaseCase
                | CheckKind::Induction
                | CheckKind::Eq1
                | CheckKind::Cutoff
                | CheckKind::Inverse
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = CheckKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown check {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Truncation order `N` of every random series.
    pub order: usize,
    pub trials: usize,
    /// Empty means every check.
    pub checks: Vec<CheckKind>,
    /// Adds one to `[x^k] fbar` before any check sees it.
    pub fault: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            order: 16,
            trials: 50,
            checks: Vec::new(),
            fault: None,
        }
    }
}

/// Every check on `trials` random instances at truncation `n`.
pub fn run_suite(seed: u64, n: usize, trials: usize) -> Result<Vec<VerifyReport>> {
    run_suite_with(&SuiteConfig {
        seed,
        order: n,
        trials,
        ..SuiteConfig::default()
    })
}

/// Reports come back trial-major, checks in [`CheckKind::ALL`] order, named
/// `<check>#<trial>`.
pub fn run_suite_with(cfg: &SuiteConfig) -> Result<Vec<VerifyReport>> {
    if cfg.order < 4 {
        return Err(Error::PreconditionViolated(format!(
            "suite needs truncation order >= 4, got {}",
            cfg.order
        )));
    }
    if cfg.trials == 0 {
        return Err(Error::PreconditionViolated(
            "suite needs at least one trial".into(),
        ));
    }
    if let Some(k) = cfg.fault {
        if k == 0 || k > cfg.order {
            return Err(Error::PreconditionViolated(format!(
                "fault index must lie in 1..={}, got {k}",
                cfg.order
            )));
        }
    }
    let kinds: Vec<CheckKind> = CheckKind::ALL
        .into_iter()
        .filter(|k| cfg.checks.is_empty() || cfg.checks.contains(k))
        .collect();

    let slots: Mutex<Vec<Option<Result<Vec<VerifyReport>>>>> =
        Mutex::new((0..cfg.trials).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(usize::from)
        .unwrap_or(1)
        .min(cfg.trials);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let trial = next.fetch_add(1, Ordering::Relaxed);
                if trial >= cfg.trials {
                    break;
                }
                let out = run_trial(cfg, &kinds, trial);
                slots.lock().unwrap()[trial] = Some(out);
            });
        }
    });

    let mut reports = Vec::with_capacity(cfg.trials * kinds.len());
    for slot in slots.into_inner().unwrap() {
        reports.extend(slot.expect("every trial is scheduled")?);
    }
    Ok(reports)
}

/// Random series drawn for one trial.
#[derive(Clone, Debug)]
pub struct TrialSeries {
    /// Almost unit.
    pub f: TruncatedSeries,
    pub g: TruncatedSeries,
    pub g2: TruncatedSeries,
    /// Nonunit, `h_1` may vanish.
    pub h: TruncatedSeries,
    /// Unit, `u_0 != 0`.
    pub u: TruncatedSeries,
    /// Exponent for the power rule, `0..=6`.
    pub k: u32,
}

impl TrialSeries {
    pub fn draw(rng: &mut ChaCha8Rng, n: usize) -> Self {
        TrialSeries {
            f: random_almost_unit(rng, n),
            g: random_series(rng, n),
            g2: random_series(rng, n),
            h: random_nonunit(rng, n),
            u: random_unit(rng, n),
            k: rng.gen_range(0..=6),
        }
    }
}

fn run_trial(cfg: &SuiteConfig, kinds: &[CheckKind], trial: usize) -> Result<Vec<VerifyReport>> {
    let n = cfg.order;
    let data = TrialSeries::draw(&mut trial_rng(cfg.seed, trial as u64), n);
    let mut fbar = data.f.comp_inverse()?;
    if let Some(k) = cfg.fault {
        let bumped = fbar.coeff(k)? + Rational::one();
        fbar.set_coeff(k, bumped)?;
    }
    kinds
        .iter()
        .map(|&kind| {
            Ok(run_check(kind, &data, &fbar, n)?
                .with_name(format!("{}#{trial}", kind.name()))
                .with_seed(cfg.seed))
        })
        .collect()
}

fn run_check(
    kind: CheckKind,
    d: &TrialSeries,
    fbar: &TruncatedSeries,
    n: usize,
) -> Result<VerifyReport> {
    match kind {
        CheckKind::Functional => checks::functional_form(&d.g, &d.f, fbar),
        CheckKind::PowerForm => checks::power_form(&d.f, fbar),
        CheckKind::Linkage => checks::linkage(&d.g, &d.f),
        CheckKind::Lemma1 => checks::lemma1_grid(&d.u, 12.min(n - 1)),
        CheckKind::ProductRule => checks::product_rule(&d.g, &d.g2),
        CheckKind::PowerRule => checks::power_rule(&d.g, d.k),
        CheckKind::ChainRule => checks::chain_rule(&d.g, &d.h),
        CheckKind::TermByTerm => checks::term_by_term(&d.g, &d.h),
        CheckKind::Distributive => checks::right_distributive(&d.g, &d.g2, &d.h),
        CheckKind::BaseCase => checks::base_case(&d.g, &d.f, fbar),
        CheckKind::Induction => first_failure(
            "induction",
            (1..=10.min(n - 1))
                .flat_map(|m| (0..=m).map(move |l| (m, l)))
                .map(|(m, l)| checks::induction_step(&d.f, fbar, m, l)),
        ),
        CheckKind::Eq1 => first_failure(
            "eq1",
            (1..=5).map(|l| checks::eq1(&d.f, fbar, l, 12.min(n))),
        ),
        CheckKind::Cutoff => checks::cutoff_grid(&d.f, fbar, n - 1),
        CheckKind::Inverse => checks::inverse_roundtrip(&d.f, fbar),
        CheckKind::PhiForms => checks::phi_forms(&d.f),
        CheckKind::MulInverse => checks::mul_inverse_identity(&d.u),
        CheckKind::Divide => checks::divide_roundtrip(&d.g, &d.f),
    }
}

/// Collapses a family of reports into one, keeping the first failure.
fn first_failure(
    name: &str,
    reports: impl Iterator<Item = Result<VerifyReport>>,
) -> Result<VerifyReport> {
    for rep in reports {
        let rep = rep?;
        if !rep.passed {
            return Ok(rep.with_name(name));
        }
    }
    Ok(VerifyReport::from_pairs(name, []))
}

/// Independent stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Numerator in `[-9, 9]`, denominator in `[1, 4]`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let p: i64 = rng.gen_range(-9..=9);
    let q: i64 = rng.gen_range(1..=4);
    Rational::new(p, q).expect("denominator is positive")
}

fn random_nonzero<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let c = random_rational(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn random_series<R: Rng>(rng: &mut R, n: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(n, |_| random_rational(rng))
}

/// `f_0 = 0`, `f_1 != 0` (by rejection).
pub fn random_almost_unit<R: Rng>(rng: &mut R, n: usize) -> TruncatedSeries {
    assert!(n >= 1, "an almost unit needs truncation at least 1");
    TruncatedSeries::from_fn(n, |k| match k {
        0 => Rational::zero(),
        1 => random_nonzero(rng),
        _ => random_rational(rng),
    })
}

/// `h_0 = 0`, other coefficients unrestricted.
pub fn random_nonunit<R: Rng>(rng: &mut R, n: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(n, |k| {
        if k == 0 {
            Rational::zero()
        } else {
            random_rational(rng)
        }
    })
}

/// `u_0 != 0` (by rejection).
pub fn random_unit<R: Rng>(rng: &mut R, n: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(n, |k| {
        if k == 0 {
            random_nonzero(rng)
        } else {
            random_rational(rng)
        }
    })
}
