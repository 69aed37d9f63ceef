//! Expression trees over named forms, evaluated to q-series.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{form, rational_eval, FormName};
use crate::qseries::AnySeries;
use crate::scalar::{format_rational_short, Backend, Rational, Tolerance};
use crate::schwarz::schwarzian_any;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Form(FormName),
    Const(Rational),
    /// The imaginary unit (complex backend only).
    I,
    /// `q^r`.
    Monomial(Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Scale(Rational, Box<Expr>),
    PowInt(Box<Expr>, i64),
    /// `base^exponent`. With `normalize` the leading coefficient is
    /// rescaled to one first, which leaves Schwarzians unchanged.
    Pow {
        base: Box<Expr>,
        exponent: Rational,
        normalize: bool,
    },
    /// `q ↦ q^k`, i.e. `τ ↦ kτ`.
    Subst(Box<Expr>, u64),
    /// Normalized Schwarzian `{h, τ}/2π²`.
    Schwarz(Box<Expr>),
    /// `P(t)/Q(t)`, coefficients in increasing degree.
    Rational {
        t: Box<Expr>,
        p: Vec<Rational>,
        q: Vec<Rational>,
    },
    /// Drop coefficients below the backend tolerance (cancellation noise).
    Chop(Box<Expr>),
}

pub fn f(name: FormName) -> Expr {
    Expr::Form(name)
}

pub fn c(r: Rational) -> Expr {
    Expr::Const(r)
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn add(self, o: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(o))
    }

    pub fn div(self, o: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(o))
    }

    pub fn scale(self, r: Rational) -> Expr {
        Expr::Scale(r, Box::new(self))
    }

    pub fn pow_int(self, n: i64) -> Expr {
        Expr::PowInt(Box::new(self), n)
    }

    pub fn pow(self, exponent: Rational) -> Expr {
        Expr::Pow {
            base: Box::new(self),
            exponent,
            normalize: false,
        }
    }

    pub fn pow_normalized(self, exponent: Rational) -> Expr {
        Expr::Pow {
            base: Box::new(self),
            exponent,
            normalize: true,
        }
    }

    pub fn subst(self, k: u64) -> Expr {
        Expr::Subst(Box::new(self), k)
    }

    pub fn schwarz(self) -> Expr {
        Expr::Schwarz(Box::new(self))
    }

    pub fn chop(self) -> Expr {
        Expr::Chop(Box::new(self))
    }

    pub fn rational_fn(self, p: Vec<Rational>, q: Vec<Rational>) -> Expr {
        Expr::Rational {
            t: Box::new(self),
            p,
            q,
        }
    }

    /// Evaluate with named forms known modulo `O(q^order)`.
    pub fn eval(&self, order: i64, backend: Backend) -> Result<AnySeries> {
        Ok(match self {
            Expr::Form(name) => form(*name, order, backend)?,
            Expr::Const(r) => AnySeries::constant(r, order, backend),
            Expr::I => AnySeries::imaginary_unit(order, backend)?,
            Expr::Monomial(r) => {
                AnySeries::constant(&Rational::ONE, order, backend).mul_monomial(r)?
            }
            Expr::Add(a, b) => a.eval(order, backend)?.add(&b.eval(order, backend)?)?,
            Expr::Sub(a, b) => a.eval(order, backend)?.sub(&b.eval(order, backend)?)?,
            Expr::Mul(a, b) => a.eval(order, backend)?.mul(&b.eval(order, backend)?)?,
            Expr::Div(a, b) => a.eval(order, backend)?.div(&b.eval(order, backend)?)?,
            Expr::Scale(r, a) => a.eval(order, backend)?.scale_rat(r),
            Expr::PowInt(a, n) => a.eval(order, backend)?.pow_int(*n)?,
            Expr::Pow {
                base,
                exponent,
                normalize,
            } => base.eval(order, backend)?.powf(exponent, *normalize)?.0,
            Expr::Subst(a, k) => a.eval(order, backend)?.substitute_power(*k),
            Expr::Schwarz(a) => schwarzian_any(&a.eval(order, backend)?)?,
            Expr::Rational { t, p, q } => rational_eval(p, q, &t.eval(order, backend)?)?,
            Expr::Chop(a) => {
                let s = a.eval(order, backend)?;
                match backend {
                    Backend::Rational => s,
                    Backend::Complex { precision } => s.chop(&Tolerance::for_precision(precision)),
                }
            }
        })
    }

    /// Evaluate to at least `O(q^order)`, widening the working order of the
    /// leaves until the bookkeeping allows it.
    pub fn eval_to(&self, order: i64, backend: Backend) -> Result<AnySeries> {
        let target = Rational::from(order);
        let mut pad = 8;
        loop {
            let s = self.eval(order + pad, backend)?;
            if s.truncation() >= target {
                return Ok(s);
            }
            if pad > 4 * order + 64 {
                return Err(Error::InsufficientPrecision {
                    requested: order.to_string(),
                    available: format_rational_short(&s.truncation()),
                });
            }
            pad *= 2;
        }
    }
}

fn poly(f: &mut fmt::Formatter<'_>, coeffs: &[Rational]) -> fmt::Result {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| **c != Rational::ZERO)
        .map(|(k, c)| {
            let c = format_rational_short(c);
            match k {
                0 => c,
                1 => format!("{c}·t"),
                _ => format!("{c}·t^{k}"),
            }
        })
        .collect();
    if terms.is_empty() {
        f.write_str("0")
    } else {
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Form(n) => write!(f, "{n}"),
            Expr::Const(r) => f.write_str(&format_rational_short(r)),
            Expr::I => f.write_str("i"),
            Expr::Monomial(r) => write!(f, "q^({})", format_rational_short(r)),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}·{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Scale(r, a) => write!(f, "{}·{a}", format_rational_short(r)),
            Expr::PowInt(a, n) => write!(f, "{a}^{n}"),
            Expr::Pow { base, exponent, .. } => {
                write!(f, "{base}^({})", format_rational_short(exponent))
            }
            Expr::Subst(a, k) => write!(f, "{a}({k}τ)"),
            Expr::Schwarz(a) => write!(f, "{{{a}, τ}}/2π²"),
            Expr::Rational { t, p, q } => {
                f.write_str("[")?;
                poly(f, p)?;
                f.write_str("]/[")?;
                poly(f, q)?;
                write!(f, "] at t = {t}")
            }
            Expr::Chop(a) => write!(f, "{a}"),
        }
    }
}
