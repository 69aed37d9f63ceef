//! Runtime-tagged series for the CLI, the verifier and the C ABI.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{
    format_rational, format_rational_short, parse_rational, Backend, Complex, Rational, Scalar,
    Tolerance,
};

use super::{LogSeries, Series};

/// A series in either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySeries {
    Rational(Series<Rational>),
    Complex(Series<Complex>),
}

/// A log-extended series in either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyLogSeries {
    Rational(LogSeries<Rational>),
    Complex(LogSeries<Complex>),
}

macro_rules! each {
    ($v:expr, $s:ident => $e:expr) => {
        match $v {
            AnySeries::Rational($s) => $e,
            AnySeries::Complex($s) => $e,
        }
    };
}

macro_rules! map_each {
    ($v:expr, $s:ident => $e:expr) => {
        match $v {
            AnySeries::Rational($s) => AnySeries::Rational($e),
            AnySeries::Complex($s) => AnySeries::Complex($e),
        }
    };
}

macro_rules! try_map_each {
    ($v:expr, $s:ident => $e:expr) => {
        Ok(match $v {
            AnySeries::Rational($s) => AnySeries::Rational($e?),
            AnySeries::Complex($s) => AnySeries::Complex($e?),
        })
    };
}

macro_rules! binary {
    ($name:ident) => {
        pub fn $name(&self, other: &AnySeries) -> Result<AnySeries> {
            match (self, other) {
                (AnySeries::Rational(a), AnySeries::Rational(b)) => {
                    Ok(AnySeries::Rational(a.$name(b)?))
                }
                (AnySeries::Complex(a), AnySeries::Complex(b)) => {
                    Ok(AnySeries::Complex(a.$name(b)?))
                }
                _ => Err(Error::BackendMismatch {
                    left: self.backend(),
                    right: other.backend(),
                }),
            }
        }
    };
}

/// Comparison outcome with coefficients rendered as text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MismatchReport {
    pub exponent: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub first_mismatch: Option<MismatchReport>,
    pub max_deviation: f64,
}

impl ComparisonReport {
    pub fn equal(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn report<C: Scalar>(c: super::Comparison<C>) -> ComparisonReport {
    ComparisonReport {
        first_mismatch: c.first_mismatch.map(|m| MismatchReport {
            exponent: format_rational(&m.exponent),
            lhs: m.lhs.to_string(),
            rhs: m.rhs.to_string(),
        }),
        max_deviation: c.max_deviation,
    }
}

fn to_complex(s: &Series<Rational>, precision: u32) -> Series<Complex> {
    s.map_scalar(precision, |r| Complex::from_rational(r, precision))
}

impl AnySeries {
    pub fn backend(&self) -> Backend {
        each!(self, s => s.backend())
    }

    /// A rational constant known modulo `O(q^order)` in the given backend.
    pub fn constant(r: &Rational, order: i64, backend: Backend) -> AnySeries {
        AnySeries::from_rational(Series::constant(r.clone(), order, ()), backend)
    }

    /// `i` as a constant series; rationals have no imaginary unit.
    pub fn imaginary_unit(order: i64, backend: Backend) -> Result<AnySeries> {
        match backend {
            Backend::Rational => Err(Error::InvalidArgument(
                "the imaginary unit needs the complex backend".into(),
            )),
            Backend::Complex { precision } => {
                let i = Complex::imaginary_unit(precision).expect("complex has i");
                Ok(AnySeries::Complex(Series::constant(i, order, precision)))
            }
        }
    }

    /// Embed an exact series into `backend`.
    pub fn from_rational(s: Series<Rational>, backend: Backend) -> AnySeries {
        match backend {
            Backend::Rational => AnySeries::Rational(s),
            Backend::Complex { precision } => AnySeries::Complex(to_complex(&s, precision)),
        }
    }

    /// Explicit conversion; only rational to complex is possible.
    pub fn to_backend(&self, backend: Backend) -> Result<AnySeries> {
        match (self, backend) {
            (_, b) if b == self.backend() => Ok(self.clone()),
            (AnySeries::Rational(s), Backend::Complex { precision }) => {
                Ok(AnySeries::Complex(to_complex(s, precision)))
            }
            _ => Err(Error::BackendMismatch {
                left: self.backend(),
                right: backend,
            }),
        }
    }

    pub fn as_rational(&self) -> Option<&Series<Rational>> {
        match self {
            AnySeries::Rational(s) => Some(s),
            AnySeries::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&Series<Complex>> {
        match self {
            AnySeries::Complex(s) => Some(s),
            AnySeries::Rational(_) => None,
        }
    }

    binary!(add);
    binary!(sub);
    binary!(mul);
    binary!(div);

    pub fn neg(&self) -> AnySeries {
        map_each!(self, s => s.neg())
    }

    pub fn inv(&self) -> Result<AnySeries> {
        try_map_each!(self, s => s.inv())
    }

    pub fn scale_rat(&self, r: &Rational) -> AnySeries {
        map_each!(self, s => s.scale_rat(r))
    }

    pub fn theta(&self) -> AnySeries {
        map_each!(self, s => s.theta())
    }

    pub fn substitute_power(&self, k: u64) -> AnySeries {
        map_each!(self, s => s.substitute_power(k))
    }

    pub fn mul_monomial(&self, r: &Rational) -> Result<AnySeries> {
        try_map_each!(self, s => s.mul_monomial(r))
    }

    pub fn truncate(&self, exp: &Rational) -> AnySeries {
        map_each!(self, s => s.truncate(exp))
    }

    pub fn pow_int(&self, n: i64) -> Result<AnySeries> {
        try_map_each!(self, s => s.pow_int(n))
    }

    /// Fractional power; returns the series and, when normalizing, a text
    /// rendering of the dropped constant.
    pub fn powf(&self, alpha: &Rational, normalize: bool) -> Result<(AnySeries, Option<String>)> {
        Ok(match self {
            AnySeries::Rational(s) => {
                let out = s.powf(alpha, normalize)?;
                (
                    AnySeries::Rational(out.series),
                    out.dropped.map(|d| d.to_string()),
                )
            }
            AnySeries::Complex(s) => {
                let out = s.powf(alpha, normalize)?;
                (
                    AnySeries::Complex(out.series),
                    out.dropped.map(|d| d.to_string()),
                )
            }
        })
    }

    pub fn log1(&self) -> Result<AnySeries> {
        try_map_each!(self, s => s.log1())
    }

    pub fn exp0(&self) -> Result<AnySeries> {
        try_map_each!(self, s => s.exp0())
    }

    /// Zero out complex coefficients below `tol`; exact series are unchanged.
    pub fn chop(&self, tol: &Tolerance) -> AnySeries {
        match self {
            AnySeries::Rational(_) => self.clone(),
            AnySeries::Complex(s) => AnySeries::Complex(s.chop(tol)),
        }
    }

    pub fn eval_poly(&self, coeffs: &[Rational]) -> Result<AnySeries> {
        match self {
            AnySeries::Rational(s) => Ok(AnySeries::Rational(s.eval_poly(coeffs)?)),
            AnySeries::Complex(s) => {
                let p = s.ctx();
                let cs: Vec<Complex> = coeffs
                    .iter()
                    .map(|r| Complex::from_rational(r, p))
                    .collect();
                Ok(AnySeries::Complex(s.eval_poly(&cs)?))
            }
        }
    }

    pub fn integrate(&self) -> Result<AnyLogSeries> {
        Ok(match self {
            AnySeries::Rational(s) => AnyLogSeries::Rational(s.integrate()?),
            AnySeries::Complex(s) => AnyLogSeries::Complex(s.integrate()?),
        })
    }

    pub fn is_zero(&self) -> bool {
        each!(self, s => s.is_zero())
    }

    pub fn branch_den(&self) -> u64 {
        each!(self, s => s.branch_den())
    }

    pub fn lead_exp(&self) -> Rational {
        each!(self, s => s.lead_exp())
    }

    pub fn order(&self) -> i64 {
        each!(self, s => s.order())
    }

    pub fn truncation(&self) -> Rational {
        each!(self, s => s.truncation())
    }

    pub fn has_integer_exponents(&self) -> bool {
        each!(self, s => s.has_integer_exponents())
    }

    /// Coefficient of `q^e` as text, or `None` past the truncation.
    pub fn coeff_string(&self, e: &Rational) -> Option<String> {
        each!(self, s => s.coeff_at(e).map(|c| c.to_string()))
    }

    /// Exact coefficient of `q^e` (rational backend only).
    pub fn rational_coeff(&self, e: &Rational) -> Option<Rational> {
        self.as_rational()?.coeff_at(e)
    }

    /// Exponents of nonzero coefficients that are not integers.
    pub fn fractional_exponents(&self) -> Vec<Rational> {
        each!(self, s => s.fractional_terms().into_iter().map(|(e, _)| e).collect())
    }

    pub fn eq_to_order(
        &self,
        other: &AnySeries,
        m: &Rational,
        tol: Option<&Tolerance>,
    ) -> Result<ComparisonReport> {
        match (self, other) {
            (AnySeries::Rational(a), AnySeries::Rational(b)) => {
                Ok(report(a.eq_to_order(b, m, tol)?))
            }
            (AnySeries::Complex(a), AnySeries::Complex(b)) => Ok(report(a.eq_to_order(b, m, tol)?)),
            _ => Err(Error::BackendMismatch {
                left: self.backend(),
                right: other.backend(),
            }),
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        let coeffs = match self {
            AnySeries::Rational(s) => s
                .coeffs()
                .iter()
                .map(|c| Value::String(format_rational(c)))
                .collect(),
            AnySeries::Complex(s) => s
                .coeffs()
                .iter()
                .map(|c| {
                    let (re, im) = c.to_decimal_pair();
                    Value::Array(vec![Value::String(re), Value::String(im)])
                })
                .collect(),
        };
        each!(self, s => SeriesJson {
            branch_den: s.branch_den(),
            lead_exp: s.lead_units(),
            order: s.order(),
            backend: s.backend().to_string(),
            coeffs,
        })
    }

    pub fn from_json(json: &SeriesJson) -> Result<AnySeries> {
        let backend: Backend = json.backend.parse()?;
        if json.branch_den == 0 {
            return Err(Error::Parse("branch_den must be positive".into()));
        }
        if json.order < 0 || json.coeffs.len() as i64 > json.order {
            return Err(Error::Parse(
                "more coefficients than the stated order".into(),
            ));
        }
        match backend {
            Backend::Rational => {
                let coeffs = json
                    .coeffs
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => parse_rational(s),
                        other => Err(Error::Parse(format!("expected \"p/q\", got {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnySeries::Rational(Series::new(
                    json.branch_den,
                    json.lead_exp,
                    coeffs,
                    json.order,
                    (),
                )))
            }
            Backend::Complex { precision } => {
                let coeffs = json
                    .coeffs
                    .iter()
                    .map(|v| {
                        let pair = v.as_array().filter(|a| a.len() == 2);
                        let parts = pair.and_then(|a| Some((a[0].as_str()?, a[1].as_str()?)));
                        let (re, im) = parts.ok_or_else(|| {
                            Error::Parse(format!("expected [\"re\", \"im\"], got {v}"))
                        })?;
                        Complex::parse_pair(re, im, precision)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnySeries::Complex(Series::new(
                    json.branch_den,
                    json.lead_exp,
                    coeffs,
                    json.order,
                    precision,
                )))
            }
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("series JSON serializes")
    }

    pub fn from_json_str(s: &str) -> Result<AnySeries> {
        let json: SeriesJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("series JSON: {e}")))?;
        AnySeries::from_json(&json)
    }
}

impl fmt::Display for AnySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        each!(self, s => fmt::Display::fmt(s, f))
    }
}

impl From<Series<Rational>> for AnySeries {
    fn from(s: Series<Rational>) -> AnySeries {
        AnySeries::Rational(s)
    }
}

impl From<Series<Complex>> for AnySeries {
    fn from(s: Series<Complex>) -> AnySeries {
        AnySeries::Complex(s)
    }
}

/// Wire format of a series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub branch_den: u64,
    pub lead_exp: i64,
    pub order: i64,
    pub backend: String,
    pub coeffs: Vec<Value>,
}

impl AnyLogSeries {
    pub fn backend(&self) -> Backend {
        match self {
            AnyLogSeries::Rational(h) => h.body.backend(),
            AnyLogSeries::Complex(h) => h.body.backend(),
        }
    }

    pub fn from_series(s: AnySeries) -> AnyLogSeries {
        match s {
            AnySeries::Rational(s) => AnyLogSeries::Rational(LogSeries::pure(s)),
            AnySeries::Complex(s) => AnyLogSeries::Complex(LogSeries::pure(s)),
        }
    }

    pub fn theta(&self) -> Result<AnySeries> {
        Ok(match self {
            AnyLogSeries::Rational(h) => AnySeries::Rational(h.theta()?),
            AnyLogSeries::Complex(h) => AnySeries::Complex(h.theta()?),
        })
    }

    pub fn body(&self) -> AnySeries {
        match self {
            AnyLogSeries::Rational(h) => AnySeries::Rational(h.body.clone()),
            AnyLogSeries::Complex(h) => AnySeries::Complex(h.body.clone()),
        }
    }

    pub fn log_coeff_string(&self) -> String {
        match self {
            AnyLogSeries::Rational(h) => format_rational_short(&h.log_coeff),
            AnyLogSeries::Complex(h) => h.log_coeff.to_string(),
        }
    }

    pub fn is_logarithmic(&self) -> bool {
        match self {
            AnyLogSeries::Rational(h) => h.is_logarithmic(),
            AnyLogSeries::Complex(h) => h.is_logarithmic(),
        }
    }
}

impl fmt::Display for AnyLogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyLogSeries::Rational(h) => fmt::Display::fmt(h, f),
            AnyLogSeries::Complex(h) => fmt::Display::fmt(h, f),
        }
    }
}
