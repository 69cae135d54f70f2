//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 disagreement between an inversion formula and the direct inverse.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::dsl::{self, DslError};
use crate::error::Error;
use crate::lif::{self, CheckKind, SuiteConfig, VerifyReport};
use crate::ring::Rational;
use crate::series::TruncatedSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "lagrange",
    version,
    about = "Exact truncated power series and Lagrange inversion"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CliConfig {
    /// Truncation order N: series carry coefficients 0..=N.
    #[arg(long, global = true, default_value_t = 16,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub order: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random instances per check in `verify`.
    #[arg(long, global = true, default_value_t = 50,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// phi = 1/(1-x), f = x - x^2
    Catalan,
    /// phi = exp(x), f = x exp(-x)
    Cayley,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coefficients of an expression.
    Coeffs { expr: String },
    /// Print the compositional inverse of an almost unit.
    Inverse { expr: String },
    /// [x^n] g(fbar) by the functional form.
    LifFunctional {
        g: String,
        f: String,
        n: usize,
        /// Also compute the coefficient through the direct inverse.
        #[arg(long)]
        cross_check: bool,
    },
    /// [x^n] fbar^l by the Schur–Jabotinsky form.
    LifSj {
        f: String,
        n: usize,
        l: usize,
        #[arg(long)]
        cross_check: bool,
    },
    /// Run the randomized identity suite.
    Verify {
        /// Comma-separated subset of checks (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<CheckKind>,
        /// Negative control: add one to [x^K] of every computed inverse.
        #[arg(long, value_name = "K")]
        inject_fault: Option<usize>,
    },
    /// Tabulate [x^n] fbar for a classic family by three routes.
    Gallery { name: Family },
}

impl clap::ValueEnum for CheckKind {
    fn value_variants<'a>() -> &'a [Self] {
        &CheckKind::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

/// A failed command: message for stderr plus exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(format!("error: {e}"))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("error: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = &cli.config;
    let order = cfg.order as usize;
    match &cli.command {
        Command::Coeffs { expr } => {
            let s = eval_expr(expr, order)?;
            print_series(out, &s, cfg.format)?;
            Ok(EXIT_OK)
        }
        Command::Inverse { expr } => {
            let s = eval_expr(expr, order)?.comp_inverse()?;
            print_series(out, &s, cfg.format)?;
            Ok(EXIT_OK)
        }
        Command::LifFunctional {
            g,
            f,
            n,
            cross_check,
        } => {
            check_n(*n, order)?;
            let gs = eval_expr(g, order)?;
            let fs = eval_expr(f, order)?;
            let value = lif::lif_functional(&gs, &fs, *n)?;
            let oracle = if *cross_check {
                Some(gs.compose(&fs.comp_inverse()?)?.coeff(*n)?.clone())
            } else {
                None
            };
            print_extraction(out, value, oracle, cfg.format)
        }
        Command::LifSj {
            f,
            n,
            l,
            cross_check,
        } => {
            check_n(*n, order)?;
            let fs = eval_expr(f, order)?;
            let value = lif::lif_schur_jabotinsky(&fs, *n, *l)?;
            let oracle = if *cross_check {
                let l = u32::try_from(*l).map_err(|_| Failure::usage("l too large"))?;
                Some(fs.comp_inverse()?.pow(l).coeff(*n)?.clone())
            } else {
                None
            };
            print_extraction(out, value, oracle, cfg.format)
        }
        Command::Verify {
            checks,
            inject_fault,
        } => {
            let suite = SuiteConfig {
                seed: cfg.seed,
                order,
                trials: cfg.trials as usize,
                checks: checks.clone(),
                fault: *inject_fault,
            };
            let reports = lif::run_suite_with(&suite)?;
            print_reports(out, &reports, cfg.format)?;
            let failed = reports.iter().filter(|r| !r.passed).count();
            writeln!(err, "{} passed, {failed} failed", reports.len() - failed)?;
            Ok(if failed == 0 {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Command::Gallery { name } => {
            let rows = gallery(*name, order)?;
            print_gallery(out, *name, &rows, cfg.format)?;
            if rows.iter().all(GalleryRow::agrees) {
                Ok(EXIT_OK)
            } else {
                writeln!(err, "gallery routes disagree")?;
                Ok(EXIT_DISAGREEMENT)
            }
        }
    }
}

fn eval_expr(text: &str, order: usize) -> Result<TruncatedSeries, Failure> {
    dsl::eval_str(text, order)
        .map_err(|e: DslError| Failure::usage(format!("error: {}", e.render(text))))
}

fn check_n(n: usize, order: usize) -> Result<(), Failure> {
    if n > order {
        return Err(Failure::usage(format!(
            "error: n = {n} exceeds --order {order}"
        )));
    }
    Ok(())
}

fn print_series(out: &mut dyn Write, s: &TruncatedSeries, format: Format) -> Result<(), Failure> {
    match format {
        Format::Plain => {
            for (i, c) in s.coeffs().iter().enumerate() {
                writeln!(out, "{i}: {c}")?;
            }
        }
        Format::Json => writeln!(out, "{}", to_json(s))?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Extraction {
    value: Rational,
    oracle: Option<Rational>,
    agree: Option<bool>,
}

fn print_extraction(
    out: &mut dyn Write,
    value: Rational,
    oracle: Option<Rational>,
    format: Format,
) -> Result<i32, Failure> {
    let agree = oracle.as_ref().map(|o| o == &value);
    match format {
        Format::Plain => {
            writeln!(out, "{value}")?;
            if let (Some(o), Some(a)) = (&oracle, agree) {
                writeln!(out, "oracle: {o}")?;
                writeln!(out, "cross-check: {}", if a { "agree" } else { "DISAGREE" })?;
            }
        }
        Format::Json => writeln!(
            out,
            "{}",
            to_json(&Extraction {
                value,
                oracle,
                agree
            })
        )?,
    }
    Ok(if agree == Some(false) {
        EXIT_DISAGREEMENT
    } else {
        EXIT_OK
    })
}

fn print_reports(
    out: &mut dyn Write,
    reports: &[VerifyReport],
    format: Format,
) -> Result<(), Failure> {
    match format {
        Format::Plain => {
            for r in reports {
                writeln!(out, "{r}")?;
            }
        }
        Format::Json => writeln!(out, "{}", to_json(&reports))?,
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GalleryRow {
    pub n: usize,
    pub lif: Rational,
    pub oracle: Rational,
    pub closed: Rational,
}

impl GalleryRow {
    pub fn agrees(&self) -> bool {
        self.lif == self.oracle && self.oracle == self.closed
    }
}

/// `[x^n] fbar` for `n = 1..=order` via the Schur–Jabotinsky form with
/// `l = 1`, via the direct inverse, and via the closed form.
pub fn gallery(family: Family, order: usize) -> Result<Vec<GalleryRow>, Error> {
    let phi = match family {
        Family::Catalan => TruncatedSeries::from_fn(order, |_| Rational::one()),
        Family::Cayley => {
            let mut fact = Rational::one();
            TruncatedSeries::from_fn(order, |k| {
                if k > 0 {
                    fact = fact.mul_int(k as i64);
                }
                fact.inv().expect("nonzero")
            })
        }
    };
    let f = lif::f_from_phi(&phi, order)?;
    let fbar = f.comp_inverse()?;
    (1..=order)
        .map(|n| {
            Ok(GalleryRow {
                n,
                lif: lif::lif_schur_jabotinsky(&f, n, 1)?,
                oracle: fbar.coeff(n)?.clone(),
                closed: closed_form(family, n),
            })
        })
        .collect()
}

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn binomial(n: u64, k: u64) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Catalan(n-1) = C(2n-2, n-1)/n and n^{n-1}/n!.
fn closed_form(family: Family, n: usize) -> Rational {
    let n = n as u64;
    match family {
        Family::Catalan => Rational::new(binomial(2 * n - 2, n - 1), BigInt::from(n)),
        Family::Cayley => Rational::new(BigInt::from(n).pow(n as u32 - 1), factorial(n)),
    }
    .expect("positive denominator")
}

#[derive(Serialize)]
struct GalleryJson<'a> {
    family: &'static str,
    rows: &'a [GalleryRow],
}

fn print_gallery(
    out: &mut dyn Write,
    family: Family,
    rows: &[GalleryRow],
    format: Format,
) -> Result<(), Failure> {
    match format {
        Format::Plain => {
            writeln!(out, "n\tlif\toracle\tclosed")?;
            for r in rows {
                writeln!(out, "{}\t{}\t{}\t{}", r.n, r.lif, r.oracle, r.closed)?;
            }
        }
        Format::Json => {
            let family = match family {
                Family::Catalan => "catalan",
                Family::Cayley => "cayley",
            };
            writeln!(out, "{}", to_json(&GalleryJson { family, rows }))?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["lagrange"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn closed_forms() {
        let cat: Vec<String> = (1..=6)
            .map(|n| closed_form(Family::Catalan, n).to_string())
            .collect();
        assert_eq!(cat, ["1", "1", "2", "5", "14", "42"]);
        let cay: Vec<String> = (1..=4)
            .map(|n| closed_form(Family::Cayley, n).to_string())
            .collect();
        assert_eq!(cay, ["1", "1", "3/2", "8/3"]);
    }

    #[test]
    fn coeffs_plain_and_json() {
        let (code, out, _) = run_args(&["coeffs", "1/(1-x)", "--order", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0: 1\n1: 1\n2: 1\n3: 1\n4: 1\n");
        let (code, out, _) = run_args(&["coeffs", "exp(x)", "--order", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0: 1\n1: 1\n2: 1/2\n3: 1/6\n");
        let (code, out, _) = run_args(&["--format", "json", "coeffs", "x - x^2", "--order", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"truncation":2,"coeffs":["0","1","-1"]}"#);
    }

    #[test]
    fn input_errors_exit_2() {
        let (code, out, err) = run_args(&["coeffs", "1/x"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("not divisible"), "{err}");
        let (code, _, err) = run_args(&["coeffs", "x^-1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("syntax error at byte 2"), "{err}");
        assert_eq!(run_args(&["inverse", "1+x"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["coeffs", "x", "--order", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--trials", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["gallery", "motzkin"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["lif-sj", "x - x^2", "5", "1", "--order", "4"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["lif-sj", "x - x^2", "2", "3"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("gallery"));
    }

    #[test]
    fn inverse_command() {
        let (code, out, _) = run_args(&["inverse", "x - x^2", "--order", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0: 0\n1: 1\n2: 1\n3: 2\n4: 5\n5: 14\n");
        let (_, out, _) = run_args(&["inverse", "x", "--order", "3"]);
        assert_eq!(out, "0: 0\n1: 1\n2: 0\n3: 0\n");
    }

    #[test]
    fn extraction_commands() {
        assert_eq!(run_args(&["lif-sj", "x - x^2", "4", "1"]).1, "5\n");
        assert_eq!(run_args(&["lif-sj", "x * exp(-x)", "3", "1"]).1, "3/2\n");
        let (code, out, _) = run_args(&["lif-functional", "x^2", "x - x^2", "4", "--cross-check"]);
        assert_eq!(code, 0);
        // [x^4] fbar^2 = 2 fbar_1 fbar_3 + fbar_2^2 = 2*2 + 1
        assert_eq!(out, "5\noracle: 5\ncross-check: agree\n");
        let (code, out, _) = run_args(&[
            "--format",
            "json",
            "lif-sj",
            "x*exp(-x)",
            "4",
            "2",
            "--cross-check",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"value":"4","oracle":"4","agree":true}"#);
    }

    #[test]
    fn gallery_tables() {
        let (code, out, _) = run_args(&["gallery", "catalan", "--order", "6"]);
        assert_eq!(code, 0);
        let col: Vec<&str> = out
            .lines()
            .skip(1)
            .map(|l| l.split('\t').nth(2).unwrap())
            .collect();
        assert_eq!(col, ["1", "1", "2", "5", "14", "42"]);
        let (code, out, _) = run_args(&["gallery", "cayley", "--order", "4", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let lif: Vec<&str> = v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["lif"].as_str().unwrap())
            .collect();
        assert_eq!(lif, ["1", "1", "3/2", "8/3"]);
    }

    #[test]
    fn verify_filter_and_fault() {
        let (code, out, _) = run_args(&[
            "verify", "--checks", "lemma1", "--order", "6", "--trials", "2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "PASS lemma1#0\nPASS lemma1#1\n");
        let (code, out, err) = run_args(&[
            "verify",
            "--checks",
            "inverse,power-form",
            "--order",
            "6",
            "--trials",
            "1",
            "--inject-fault",
            "3",
        ]);
        assert_eq!(code, EXIT_VERIFY_FAILED);
        assert!(
            out.lines()
                .all(|l| l.starts_with("FAIL") && l.contains("index=3")),
            "{out}"
        );
        assert!(err.contains("0 passed, 2 failed"));
        assert_eq!(run_args(&["verify", "--checks", "bogus"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--order", "3"]).0, EXIT_USAGE);
    }
}
