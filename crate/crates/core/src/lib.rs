//! Exact q-series kernel for level-2 modular Schwarzian equations.

pub mod cli;
pub mod error;
pub mod forms;
pub mod frobenius;
pub mod groups;
pub mod qseries;
pub mod scalar;
pub mod schwarz;
pub mod verify;

pub use error::{Error, Result};
pub use qseries::{AnyLogSeries, AnySeries, LogSeries, Series};
pub use scalar::{Backend, Complex, Rational, Scalar, Tolerance};
