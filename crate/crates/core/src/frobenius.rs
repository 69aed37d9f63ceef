//! Series solutions of `y'' + (F/2) y = 0` at the cusp ∞ and the
//! reconstruction of `h` from `Dh = y₁⁻²`.
//!
//! With `D = q d/dq` and `S = F/(2π²)` the equation reads `D²y = (S/4) y`.
//! The indicial exponents are `±r/2` where `S(0) = r²`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{form, FormName};
use crate::qseries::{ComparisonReport, LogSeries, Series};
use crate::scalar::{format_rational, is_integer, rat, rational_root, Backend, Rational};
use crate::schwarz::schwarzian_norm_log;

/// A normalized weight-4 target `S` with its indicial exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusTarget {
    s: Series<Rational>,
    r: Rational,
}

impl FrobeniusTarget {
    /// Read off `r` from the constant term. The zero series is the trivial
    /// equation `D²y = 0` and gets `r = 0`.
    pub fn new(s: Series<Rational>) -> Result<FrobeniusTarget> {
        if s.is_zero() {
            return Ok(FrobeniusTarget {
                s,
                r: Rational::ZERO,
            });
        }
        let r = indicial(&s)?;
        Ok(FrobeniusTarget { s, r })
    }

    /// `S = a·(θ₃θ₄)⁴ + b·θ₂⁸`: `a` is the squared exponent at ∞, `b` at 0.
    pub fn from_coefficients(a: &Rational, b: &Rational, order: i64) -> Result<FrobeniusTarget> {
        let phi4 = form(FormName::Phi4, order, Backend::Rational)?;
        let theta8 = form(FormName::Theta2_8, order, Backend::Rational)?;
        let s = phi4.scale_rat(a).add(&theta8.scale_rat(b))?;
        FrobeniusTarget::new(s.as_rational().expect("rational backend").clone())
    }

    pub fn series(&self) -> &Series<Rational> {
        &self.s
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }
}

/// Positive root `r` of `S(0) = r²`.
pub fn indicial(s: &Series<Rational>) -> Result<Rational> {
    if !s.is_zero() && s.lead_exp() < Rational::ZERO {
        return Err(Error::NotHolomorphic(format_rational(&s.lead_exp())));
    }
    let s0 = s
        .coeff_at(&Rational::ZERO)
        .ok_or_else(|| Error::InsufficientPrecision {
            requested: "1".into(),
            available: format_rational(&s.truncation()),
        })?;
    if s0 == Rational::ZERO {
        return Err(Error::VanishesAtCusp);
    }
    if s0 < Rational::ZERO {
        return Err(Error::NonSquareIndicial(format_rational(&s0)));
    }
    rational_root(&s0, 2).ok_or_else(|| Error::NonSquareIndicial(format_rational(&s0)))
}

fn integer_coeffs(s: &Series<Rational>, n: usize) -> Result<Vec<Rational>> {
    if !s.has_integer_exponents() {
        return Err(Error::Domain("S must have integer exponents".into()));
    }
    Ok((0..n as i64)
        .map(|k| s.coeff_at(&Rational::from(k)).unwrap_or(Rational::ZERO))
        .collect())
}

/// `y₁ = q^(r/2) Σ αₙ qⁿ` with `α₀ = 1` and
/// `n(n + r) αₙ = Σ_{j=1..n} (S_j/4) α_{n−j}`.
pub fn solve_y1(target: &FrobeniusTarget, order: i64) -> Result<Series<Rational>> {
    let n = order.min(integer_trunc(&target.s)).max(1) as usize;
    let sj = integer_coeffs(&target.s, n)?;
    let quarter = rat(1, 4);
    let mut alpha: Vec<Rational> = Vec::with_capacity(n);
    alpha.push(Rational::ONE);
    for k in 1..n {
        let mut acc = Rational::ZERO;
        for j in 1..=k {
            if sj[j] != Rational::ZERO && alpha[k - j] != Rational::ZERO {
                acc += &sj[j] * &alpha[k - j];
            }
        }
        let kk = Rational::from(k as i64);
        let denom = &kk * (&kk + &target.r);
        alpha.push(acc * &quarter / denom);
    }
    Series::from_power_series(alpha, n as i64, ()).mul_monomial(&(&target.r / Rational::from(2)))
}

fn integer_trunc(s: &Series<Rational>) -> i64 {
    let t = s.truncation();
    let num = i64::try_from(t.numerator().clone()).unwrap_or(i64::MAX);
    let den = i64::try_from(dashu_int::IBig::from(t.denominator().clone())).unwrap_or(1);
    num.div_euclid(den)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusSolution {
    pub r: Rational,
    pub y1: Series<Rational>,
    pub h: LogSeries<Rational>,
    pub logarithmic: bool,
}

/// `h` as the termwise antiderivative of `y₁⁻²`: `q^s ↦ q^s/s`, `q⁰ ↦ log q`.
pub fn solve_h(target: &FrobeniusTarget, order: i64) -> Result<FrobeniusSolution> {
    let y1 = solve_y1(target, order)?;
    let dh = y1.pow_int(-2)?;
    let h = dh.integrate()?;
    let logarithmic = is_integer(&target.r) && h.is_logarithmic();
    Ok(FrobeniusSolution {
        r: target.r.clone(),
        y1,
        h,
        logarithmic,
    })
}

/// `D²y₁ − (S/4)y₁`, which vanishes to the truncation of `y₁`.
pub fn ode_residual(target: &FrobeniusTarget, y1: &Series<Rational>) -> Result<Series<Rational>> {
    let lhs = y1.theta().theta();
    let rhs = target.s.scale_rat(&rat(1, 4)).mul(y1)?;
    lhs.sub(&rhs)
}

#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub solution: FrobeniusSolution,
    pub comparison: ComparisonReport,
    pub order: i64,
}

impl RoundTrip {
    pub fn ok(&self) -> bool {
        self.comparison.equal()
    }

    pub fn to_json(&self) -> Value {
        let sol = &self.solution;
        json!({
            "r": format_rational(&sol.r),
            "logarithmic": sol.logarithmic,
            "log_coeff": format_rational(&sol.h.log_coeff),
            "h_lead_exp": format_rational(&sol.h.body.lead_exp()),
            "h_lead_coeff": sol.h.body.leading_coeff().map(format_rational),
            "y1_lead_exp": format_rational(&sol.y1.lead_exp()),
            "roundtrip_ok": self.ok(),
            "order": self.order,
            "first_mismatch": self.comparison.first_mismatch.as_ref().map(|m| json!({
                "exponent": m.exponent, "lhs": m.lhs, "rhs": m.rhs,
            })),
        })
    }
}

/// Solve for `h` and check `schwarzian_norm(h) = S` below `q^order`.
pub fn round_trip(target: &FrobeniusTarget, order: i64) -> Result<RoundTrip> {
    let solution = solve_h(target, order)?;
    let s_back = schwarzian_norm_log(&solution.h)?;
    let m = Rational::from(order);
    let cmp = s_back.eq_to_order(&target.s, &m, None)?;
    let comparison = ComparisonReport {
        first_mismatch: cmp.first_mismatch.map(|mm| crate::qseries::MismatchReport {
            exponent: format_rational(&mm.exponent),
            lhs: format_rational(&mm.lhs),
            rhs: format_rational(&mm.rhs),
        }),
        max_deviation: cmp.max_deviation,
    };
    Ok(RoundTrip {
        solution,
        comparison,
        order,
    })
}
