//! The normalized Schwarzian `{h, τ}/(2π²) = g² − 2Dg` with `g = D²h/Dh`,
//! and the weight-4 fit against `θ₂⁸` and `(θ₃θ₄)⁴`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{form, FormName};
use crate::qseries::{AnyLogSeries, AnySeries, LogSeries, MismatchReport, Series};
use crate::scalar::{
    format_rational, rat, rational_root, Backend, Complex, Rational, Scalar, Tolerance,
};

/// Schwarzian computed from `Dh`.
pub fn schwarzian_from_derivative<C: Scalar>(dh: &Series<C>) -> Result<Series<C>> {
    if dh.is_zero() {
        return Err(Error::LocallyConstant);
    }
    let g = dh.theta().div(dh)?;
    g.mul(&g)?.sub(&g.theta().scale_rat(&Rational::from(2)))
}

pub fn schwarzian_norm<C: Scalar>(h: &Series<C>) -> Result<Series<C>> {
    schwarzian_from_derivative(&h.theta())
}

pub fn schwarzian_norm_log<C: Scalar>(h: &LogSeries<C>) -> Result<Series<C>> {
    schwarzian_from_derivative(&h.theta()?)
}

pub fn schwarzian_any(h: &AnySeries) -> Result<AnySeries> {
    Ok(match h {
        AnySeries::Rational(s) => AnySeries::Rational(schwarzian_norm(s)?),
        AnySeries::Complex(s) => AnySeries::Complex(schwarzian_norm(s)?),
    })
}

pub fn schwarzian_any_log(h: &AnyLogSeries) -> Result<AnySeries> {
    Ok(match h {
        AnyLogSeries::Rational(s) => AnySeries::Rational(schwarzian_norm_log(s)?),
        AnyLogSeries::Complex(s) => AnySeries::Complex(schwarzian_norm_log(s)?),
    })
}

/// `(a h + b)/(c h + d)` for an invertible matrix `[[a, b], [c, d]]`.
pub fn mobius_apply<C: Scalar>(h: &Series<C>, m: [&C; 4]) -> Result<Series<C>> {
    let [a, b, c, d] = m;
    if a.mul(d).sub(&b.mul(c)).is_zero() {
        return Err(Error::InvalidArgument("Möbius matrix is singular".into()));
    }
    let num = h.scale(a).add_scalar(b);
    let den = h.scale(c).add_scalar(d);
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    num.div(&den)
}

pub fn mobius_apply_rational(h: &AnySeries, m: [Rational; 4]) -> Result<AnySeries> {
    Ok(match h {
        AnySeries::Rational(s) => {
            AnySeries::Rational(mobius_apply(s, [&m[0], &m[1], &m[2], &m[3]])?)
        }
        AnySeries::Complex(s) => {
            let p = s.ctx();
            let c: Vec<Complex> = m.iter().map(|r| Complex::from_rational(r, p)).collect();
            AnySeries::Complex(mobius_apply(s, [&c[0], &c[1], &c[2], &c[3]])?)
        }
    })
}

/// A fitted coefficient: exact in the rational backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(Rational),
    Approx(Complex),
}

impl Coefficient {
    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Coefficient::Exact(r) => Some(r),
            Coefficient::Approx(_) => None,
        }
    }

    /// `|self − r|` as a double.
    pub fn distance_to(&self, r: &Rational) -> f64 {
        match self {
            Coefficient::Exact(x) => (x - r).to_f64().value().abs(),
            Coefficient::Approx(z) => z.sub(&Complex::from_rational(r, z.precision())).magnitude(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Coefficient::Exact(r) => Value::String(format_rational(r)),
            Coefficient::Approx(z) => {
                let (re, im) = z.to_decimal_pair();
                json!([re, im])
            }
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(r) => f.write_str(&format_rational(r)),
            Coefficient::Approx(z) => write!(f, "{z}"),
        }
    }
}

/// Square roots of the fitted coefficients: the cusp exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct Squares {
    /// `√coeff_phi4`, the exponent at the cusp ∞.
    pub n1_over_m1: Rational,
    /// `√coeff_theta2_8`, the exponent at the cusp 0.
    pub n2_over_m2: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub coeff_theta2_8: Coefficient,
    pub coeff_phi4: Coefficient,
    pub squares: Option<Squares>,
    pub residual_ok: bool,
    pub order: i64,
    pub first_mismatch: Option<MismatchReport>,
    pub max_residual: f64,
}

impl FitResult {
    pub fn to_json(&self) -> Value {
        let squares = match &self.squares {
            Some(s) => json!({
                "n1_over_m1": format_rational(&s.n1_over_m1),
                "n2_over_m2": format_rational(&s.n2_over_m2),
            }),
            None => Value::Null,
        };
        json!({
            "coeff_theta2_8": self.coeff_theta2_8.to_json(),
            "coeff_phi4": self.coeff_phi4.to_json(),
            "squares": squares,
            "residual_ok": self.residual_ok,
            "order": self.order,
            "first_mismatch": self.first_mismatch.as_ref().map(|m| json!({
                "exponent": m.exponent, "lhs": m.lhs, "rhs": m.rhs,
            })),
        })
    }
}

impl fmt::Display for FitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "coeff_theta2_8: {}", self.coeff_theta2_8)?;
        writeln!(f, "coeff_phi4: {}", self.coeff_phi4)?;
        match &self.squares {
            Some(s) => {
                writeln!(f, "n1/m1 (cusp ∞): {}", format_rational(&s.n1_over_m1))?;
                writeln!(f, "n2/m2 (cusp 0): {}", format_rational(&s.n2_over_m2))?;
            }
            None => writeln!(f, "squares: none")?,
        }
        write!(
            f,
            "residual_ok: {} (order {})",
            self.residual_ok, self.order
        )?;
        if let Some(m) = &self.first_mismatch {
            write!(
                f,
                "\nfirst mismatch at q^{}: {} vs {}",
                m.exponent, m.lhs, m.rhs
            )?;
        }
        Ok(())
    }
}

/// Fit `S = a·θ₂⁸ + b·(θ₃θ₄)⁴` from the `q⁰` and `q¹` coefficients, then
/// check the remaining coefficients below `q^checked_order`.
pub fn fit_weight4(
    s: &AnySeries,
    checked_order: i64,
    tol: Option<&Tolerance>,
) -> Result<FitResult> {
    let lead = s.lead_exp();
    if !s.is_zero() && lead < Rational::ZERO {
        return Err(Error::NotHolomorphic(format_rational(&lead)));
    }
    let m = Rational::from(checked_order);
    if s.truncation() < m || checked_order < 2 {
        return Err(Error::InsufficientPrecision {
            requested: checked_order.max(2).to_string(),
            available: format_rational(&s.truncation()),
        });
    }
    let backend = s.backend();
    let theta8 = form(FormName::Theta2_8, checked_order, backend)?;
    let phi4 = form(FormName::Phi4, checked_order, backend)?;
    let default_tol;
    let tol = match (backend, tol) {
        (Backend::Complex { precision }, None) => {
            default_tol = Tolerance::for_precision(precision);
            Some(&default_tol)
        }
        (_, t) => t,
    };
    let (a, b, model) = match s {
        AnySeries::Rational(x) => {
            let s0 = x.coeff_at(&Rational::ZERO).expect("checked order");
            let s1 = x.coeff_at(&Rational::ONE).expect("checked order");
            let b = s0.clone();
            let a = (s1 + Rational::from(16) * s0) / Rational::from(256);
            let model = theta8.scale_rat(&a).add(&phi4.scale_rat(&b))?;
            (Coefficient::Exact(a), Coefficient::Exact(b), model)
        }
        AnySeries::Complex(x) => {
            let s0 = x.coeff_at(&Rational::ZERO).expect("checked order");
            let s1 = x.coeff_at(&Rational::ONE).expect("checked order");
            let b = s0.clone();
            let a = s1
                .add(&s0.mul_rat(&Rational::from(16)))
                .mul_rat(&rat(1, 256));
            let t8 = theta8.as_complex().expect("same backend").scale(&a);
            let p4 = phi4.as_complex().expect("same backend").scale(&b);
            let model = AnySeries::Complex(t8.add(&p4)?);
            (Coefficient::Approx(a), Coefficient::Approx(b), model)
        }
    };
    let cmp = s.eq_to_order(&model, &m, tol)?;
    let squares = match (&a, &b) {
        (Coefficient::Exact(a), Coefficient::Exact(b)) => {
            match (rational_root(b, 2), rational_root(a, 2)) {
                (Some(n1), Some(n2)) => Some(Squares {
                    n1_over_m1: n1,
                    n2_over_m2: n2,
                }),
                _ => None,
            }
        }
        _ => None,
    };
    Ok(FitResult {
        coeff_theta2_8: a,
        coeff_phi4: b,
        squares,
        residual_ok: cmp.equal(),
        order: checked_order,
        max_residual: cmp.max_deviation,
        first_mismatch: cmp.first_mismatch,
    })
}
