use std::fmt;

use crate::error::Result;
use crate::scalar::{Rational, Scalar};

use super::{small_parts, Series};

/// `log_coeff · log q + body`, where `log q = 2πiτ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries<C: Scalar> {
    pub log_coeff: C,
    pub body: Series<C>,
}

impl<C: Scalar> LogSeries<C> {
    pub fn new(log_coeff: C, body: Series<C>) -> LogSeries<C> {
        LogSeries { log_coeff, body }
    }

    pub fn pure(body: Series<C>) -> LogSeries<C> {
        let log_coeff = C::zero(body.ctx());
        LogSeries { log_coeff, body }
    }

    pub fn is_logarithmic(&self) -> bool {
        !self.log_coeff.is_zero()
    }

    /// `D(c log q + body) = c + D(body)`.
    pub fn theta(&self) -> Result<Series<C>> {
        let d = self.body.theta();
        if self.log_coeff.is_zero() {
            return Ok(d);
        }
        let c = Series::from_terms(
            &[(Rational::ZERO, self.log_coeff.clone())],
            &d.truncation().max(Rational::ONE),
            d.ctx(),
        )?;
        d.add(&c)
    }
}

impl<C: Scalar> Series<C> {
    /// Termwise antiderivative for `D`: `q^s ↦ q^s / s`, `q^0 ↦ log q`.
    pub fn integrate(&self) -> Result<LogSeries<C>> {
        let mut log_coeff = C::zero(self.ctx());
        let mut terms = Vec::new();
        for (e, c) in self.terms() {
            if e == Rational::ZERO {
                log_coeff = c.clone();
            } else {
                terms.push((e.clone(), c.mul_rat(&(Rational::ONE / &e))));
            }
        }
        small_parts(&self.truncation())?;
        let body = Series::from_terms(&terms, &self.truncation(), self.ctx())?;
        Ok(LogSeries { log_coeff, body })
    }
}

impl<C: Scalar> fmt::Display for LogSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log_coeff.is_zero() {
            return write!(f, "{}", self.body);
        }
        write!(f, "({}) log q + {}", self.log_coeff, self.body)
    }
}
