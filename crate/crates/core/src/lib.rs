//! Exact truncated formal power series over the rationals, Lagrange
//! inversion in its functional and Schur–Jabotinsky forms, a small
//! expression language for writing series, and a harness that checks the
//! inversion identities coefficient by coefficient.

pub mod cli;
pub mod dsl;
pub mod error;
pub mod lif;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
pub use ring::Rational;
pub use series::{Order, TruncatedSeries};
