//! Named classical modular forms and functions as memoized q-expansions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use dashu_int::IBig;

use crate::error::{Error, Result};
use crate::qseries::{AnySeries, Series};
use crate::scalar::{rat, Backend, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormName {
    /// `η(kτ)` for `k = 1, 2, 3, 4, 6`.
    Eta1,
    Eta2,
    Eta3,
    Eta4,
    Eta6,
    Theta2,
    Theta3,
    Theta4,
    E4,
    E6,
    Delta,
    Lambda,
    OneMinusLambda,
    Omega2,
    THaupt,
    /// `θ₂⁸`
    Theta2_8,
    /// `(θ₃θ₄)⁴`
    Phi4,
    /// `θ₄⁸`
    Theta4_8,
    /// `(θ₂θ₃)⁴`
    Theta2Theta3_4,
    /// `(λ − 2)/λ`
    LamOver,
}

impl FormName {
    pub const ALL: [FormName; 20] = [
        FormName::Eta1,
        FormName::Eta2,
        FormName::Eta3,
        FormName::Eta4,
        FormName::Eta6,
        FormName::Theta2,
        FormName::Theta3,
        FormName::Theta4,
        FormName::E4,
        FormName::E6,
        FormName::Delta,
        FormName::Lambda,
        FormName::OneMinusLambda,
        FormName::Omega2,
        FormName::THaupt,
        FormName::Theta2_8,
        FormName::Phi4,
        FormName::Theta4_8,
        FormName::Theta2Theta3_4,
        FormName::LamOver,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormName::Eta1 => "eta_1",
            FormName::Eta2 => "eta_2",
            FormName::Eta3 => "eta_3",
            FormName::Eta4 => "eta_4",
            FormName::Eta6 => "eta_6",
            FormName::Theta2 => "theta2",
            FormName::Theta3 => "theta3",
            FormName::Theta4 => "theta4",
            FormName::E4 => "E4",
            FormName::E6 => "E6",
            FormName::Delta => "Delta",
            FormName::Lambda => "lambda",
            FormName::OneMinusLambda => "one_minus_lambda",
            FormName::Omega2 => "omega2",
            FormName::THaupt => "t_haupt",
            FormName::Theta2_8 => "theta2_8",
            FormName::Phi4 => "phi4",
            FormName::Theta4_8 => "theta4_8",
            FormName::Theta2Theta3_4 => "theta2theta3_4",
            FormName::LamOver => "lam_over",
        }
    }
}

impl fmt::Display for FormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormName {
    type Err = Error;

    fn from_str(s: &str) -> Result<FormName> {
        FormName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownForm(s.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Integer q-products

/// One family of factors `∏_{n≥1} (1 + sign·x^(step·n − offset))^power`.
#[derive(Clone, Copy)]
struct Factor {
    step: usize,
    offset: usize,
    sign: i64,
    power: i64,
}

const fn factor(step: usize, offset: usize, sign: i64, power: i64) -> Factor {
    Factor {
        step,
        offset,
        sign,
        power,
    }
}

/// Coefficients of `x^0 .. x^(len-1)` of a product of factor families.
fn qproduct(len: usize, factors: &[Factor]) -> Vec<IBig> {
    let mut a = vec![IBig::ZERO; len];
    a[0] = IBig::ONE;
    for f in factors {
        let mut n = 1;
        loop {
            let e = f.step * n - f.offset;
            if e >= len {
                break;
            }
            if f.power >= 0 {
                for _ in 0..f.power {
                    // multiply by (1 + sign x^e)
                    for i in (e..len).rev() {
                        let t = &a[i - e] * f.sign;
                        a[i] += t;
                    }
                }
            } else {
                for _ in 0..-f.power {
                    // divide by (1 + sign x^e)
                    for i in e..len {
                        let t = &a[i - e] * f.sign;
                        a[i] -= t;
                    }
                }
            }
            n += 1;
        }
    }
    a
}

/// `scale · x^lead · product` on the grid `x = q^(1/den)`, known to `len` slots.
fn product_series(
    den: u64,
    lead: i64,
    scale: i64,
    len: usize,
    factors: &[Factor],
) -> Series<Rational> {
    let coeffs = qproduct(len, factors)
        .into_iter()
        .map(|c| Rational::from(c * scale))
        .collect();
    Series::new(den, lead, coeffs, len as i64, ())
}

fn divisor_power_sum(n: u64, k: u32) -> IBig {
    let mut s = IBig::ZERO;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += IBig::from(d).pow(k as usize);
            let e = n / d;
            if e != d {
                s += IBig::from(e).pow(k as usize);
            }
        }
        d += 1;
    }
    s
}

fn eisenstein(len: usize, scale: i64, k: u32) -> Series<Rational> {
    let coeffs = (0..len)
        .map(|n| {
            if n == 0 {
                Rational::ONE
            } else {
                Rational::from(divisor_power_sum(n as u64, k) * scale)
            }
        })
        .collect();
    Series::from_power_series(coeffs, len as i64, ())
}

fn eta(k: usize, len: usize) -> Result<Series<Rational>> {
    product_series(1, 0, 1, len, &[factor(k, 0, -1, 1)]).mul_monomial(&rat(k as i64, 24))
}

/// Expansion computed with `len` integer q-slots of working room.
fn compute(name: FormName, len: usize) -> Result<Series<Rational>> {
    let s_len = 2 * len;
    Ok(match name {
        FormName::Eta1 => eta(1, len)?,
        FormName::Eta2 => eta(2, len)?,
        FormName::Eta3 => eta(3, len)?,
        FormName::Eta4 => eta(4, len)?,
        FormName::Eta6 => eta(6, len)?,
        FormName::Theta2 => {
            product_series(1, 0, 2, len, &[factor(1, 0, -1, 1), factor(1, 0, 1, 2)])
                .mul_monomial(&rat(1, 8))?
        }
        // θ₃ and θ₄ live on the grid s = q^(1/2).
        FormName::Theta3 => {
            product_series(2, 0, 1, s_len, &[factor(2, 0, -1, 1), factor(2, 1, 1, 2)])
        }
        FormName::Theta4 => {
            product_series(2, 0, 1, s_len, &[factor(2, 0, -1, 1), factor(2, 1, -1, 2)])
        }
        FormName::E4 => eisenstein(len, 240, 3),
        FormName::E6 => eisenstein(len, -504, 5),
        FormName::Delta => product_series(1, 1, 1, len, &[factor(1, 0, -1, 24)]),
        FormName::Lambda => {
            let t2 = compute(FormName::Theta2, len)?.pow_int(4)?;
            let t3 = compute(FormName::Theta3, len)?.pow_int(4)?;
            t2.div(&t3)?
        }
        FormName::OneMinusLambda => {
            let t4 = compute(FormName::Theta4, len)?.pow_int(4)?;
            let t3 = compute(FormName::Theta3, len)?.pow_int(4)?;
            t4.div(&t3)?
        }
        FormName::Omega2 => product_series(1, 1, 4096, len, &[factor(1, 0, 1, 24)]),
        FormName::THaupt => product_series(
            1,
            0,
            1,
            len,
            &[
                factor(2, 0, -1, 1),
                factor(3, 0, -1, 3),
                factor(1, 0, -1, -1),
                factor(6, 0, -1, -3),
            ],
        )
        .mul_monomial(&rat(-1, 3))?,
        FormName::Theta2_8 => {
            product_series(1, 1, 256, len, &[factor(1, 0, -1, 8), factor(1, 0, 1, 16)])
        }
        // θ₃θ₄ = ∏(1 − qⁿ)²(1 − q^(2n−1))²
        FormName::Phi4 => product_series(1, 0, 1, len, &[factor(1, 0, -1, 8), factor(2, 1, -1, 8)]),
        FormName::Theta4_8 => compute(FormName::Theta4, len)?.pow_int(8)?,
        FormName::Theta2Theta3_4 => compute(FormName::Theta2, len)?
            .mul(&compute(FormName::Theta3, len)?)?
            .pow_int(4)?,
        FormName::LamOver => {
            let lam = compute(FormName::Lambda, len)?;
            let two = Series::constant(rat(2, 1), len as i64, ());
            lam.sub(&two)?.div(&lam)?
        }
    })
}

/// Exact expansion known modulo `O(q^order)`.
pub fn rational_form(name: FormName, order: i64) -> Result<Series<Rational>> {
    if order < 1 {
        return Err(Error::InvalidArgument(format!(
            "order must be at least 1, got {order}"
        )));
    }
    let target = Rational::from(order);
    let mut pad = 4;
    loop {
        let s = compute(name, order as usize + pad)?;
        if s.truncation() >= target {
            return Ok(s.truncate(&target));
        }
        pad *= 2;
    }
}

type Cache = RwLock<HashMap<(FormName, Backend), Arc<AnySeries>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized expansion of `name` known modulo `O(q^order)` in `backend`.
///
/// A cached entry of higher order is reused by truncation.
pub fn form(name: FormName, order: i64, backend: Backend) -> Result<AnySeries> {
    let target = Rational::from(order);
    if order >= 1 {
        let guard = cache().read().unwrap_or_else(|e| e.into_inner());
        if let Some(hit) = guard.get(&(name, backend)) {
            if hit.truncation() >= target {
                return Ok(hit.truncate(&target));
            }
        }
    }
    let exact = rational_form(name, order)?;
    let series = AnySeries::from_rational(exact, backend);
    let mut guard = cache().write().unwrap_or_else(|e| e.into_inner());
    let entry = guard
        .entry((name, backend))
        .or_insert_with(|| Arc::new(series.clone()));
    if entry.truncation() < target {
        *entry = Arc::new(series.clone());
    }
    Ok(series)
}

/// `base^exponent`, optionally rescaling the leading coefficient to one first.
/// Returns the power and the dropped constant, if any.
pub fn frac_power(
    base: &AnySeries,
    exponent: &Rational,
    normalize_leading: bool,
) -> Result<(AnySeries, Option<String>)> {
    base.powf(exponent, normalize_leading)
}

/// `P(t)/Q(t)` for coefficient lists in increasing degree.
pub fn rational_eval(p: &[Rational], q: &[Rational], t: &AnySeries) -> Result<AnySeries> {
    let num = t.eval_poly(p)?;
    let den = t.eval_poly(q)?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    num.div(&den)
}

/// Degree of a coefficient list, ignoring trailing zeros.
pub fn poly_degree(coeffs: &[Rational]) -> usize {
    coeffs
        .iter()
        .rposition(|c| *c != Rational::ZERO)
        .unwrap_or(0)
}
