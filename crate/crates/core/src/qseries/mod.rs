//! Truncated Puiseux series in `q`, with the derivation `D = q d/dq`.
//!
//! A [`Series`] lives in `t = q^(1/den)`: it stores the dense coefficient
//! run `c_lead, c_lead+1, ...` and is known modulo `O(t^trunc)`. The branch
//! denominator is kept minimal and truncation bookkeeping is pessimistic:
//! binary operations never claim more than their operands know.

mod analytic;
mod any;
mod compare;
mod display;
mod log;

use std::cmp::{max, min};

use dashu_int::{IBig, UBig};

use crate::error::{Error, Result};
use crate::scalar::{Backend, Rational, Scalar, Tolerance};

pub use analytic::PowOutcome;
pub use any::{AnyLogSeries, AnySeries, ComparisonReport, MismatchReport, SeriesJson};
pub use compare::{Comparison, Mismatch};
pub use log::LogSeries;

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Split a rational into machine-sized numerator and positive denominator.
pub(crate) fn small_parts(r: &Rational) -> Result<(i64, u64)> {
    let p = i64::try_from(r.numerator().clone())
        .map_err(|_| Error::InvalidArgument(format!("exponent {r} out of range")))?;
    let q = u64::try_from(r.denominator().clone())
        .map_err(|_| Error::InvalidArgument(format!("exponent {r} out of range")))?;
    Ok((p, q))
}

pub(crate) fn exponent(k: i64, den: u64) -> Rational {
    Rational::from_parts(IBig::from(k), UBig::from(den))
}

/// Truncated Puiseux series with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C: Scalar> {
    den: u64,
    lead: i64,
    coeffs: Vec<C>,
    trunc: i64,
    ctx: C::Ctx,
}

impl<C: Scalar> Series<C> {
    /// Series `Σ coeffs[i] t^(lead+i) + O(t^(lead+order))` with `t = q^(1/den)`.
    /// Coefficients past `order` are discarded; missing ones are zero.
    pub fn new(den: u64, lead: i64, mut coeffs: Vec<C>, order: i64, ctx: C::Ctx) -> Series<C> {
        assert!(den > 0, "branch denominator must be positive");
        let order = max(order, 0);
        coeffs.truncate(order as usize);
        coeffs.resize(order as usize, C::zero(ctx));
        let mut s = Series {
            den,
            lead,
            coeffs,
            trunc: lead + order,
            ctx,
        };
        s.normalize();
        s
    }

    /// Series with integer exponents `Σ coeffs[i] q^i + O(q^order)`.
    pub fn from_power_series(coeffs: Vec<C>, order: i64, ctx: C::Ctx) -> Series<C> {
        Series::new(1, 0, coeffs, order, ctx)
    }

    /// The zero series known modulo `O(q^truncation)`.
    pub fn zero(truncation: &Rational, ctx: C::Ctx) -> Result<Series<C>> {
        let (p, q) = small_parts(truncation)?;
        Ok(Series {
            den: q,
            lead: p,
            coeffs: Vec::new(),
            trunc: p,
            ctx,
        }
        .normalized())
    }

    /// `c q^exp + O(q^(exp + order/den))`, with `den` the denominator of `exp`.
    pub fn monomial(c: C, exp: &Rational, order: i64, ctx: C::Ctx) -> Result<Series<C>> {
        let (p, q) = small_parts(exp)?;
        Ok(Series::new(q, p, vec![c], order, ctx))
    }

    /// A constant known modulo `O(q^order)`.
    pub fn constant(c: C, order: i64, ctx: C::Ctx) -> Series<C> {
        Series::new(1, 0, vec![c], order, ctx)
    }

    pub fn one(order: i64, ctx: C::Ctx) -> Series<C> {
        Series::constant(C::one(ctx), order, ctx)
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn backend(&self) -> Backend {
        C::backend(self.ctx)
    }

    /// Branch denominator `N`: the series lives in `q^(1/N)`.
    pub fn branch_den(&self) -> u64 {
        self.den
    }

    /// Lowest exponent in units of `1/N` (equals the truncation for zero).
    pub fn lead_units(&self) -> i64 {
        self.lead
    }

    pub fn lead_exp(&self) -> Rational {
        exponent(self.lead, self.den)
    }

    /// Number of known coefficient slots past the lead, in units of `1/N`.
    pub fn order(&self) -> i64 {
        self.trunc - self.lead
    }

    pub fn trunc_units(&self) -> i64 {
        self.trunc
    }

    /// Absolute truncation exponent: the series is known modulo `O(q^this)`.
    pub fn truncation(&self) -> Rational {
        exponent(self.trunc, self.den)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.first()
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (exponent(self.lead + i as i64, self.den), c))
    }

    /// Coefficient of `q^exp`; `None` past the truncation.
    pub fn coeff_at(&self, exp: &Rational) -> Option<C> {
        let (p, q) = small_parts(exp).ok()?;
        if !self.den.is_multiple_of(q) {
            // Off our grid: zero if still inside the known window.
            let scaled = exp * Rational::from(self.den);
            return (scaled < Rational::from(self.trunc)).then(|| C::zero(self.ctx));
        }
        let k = p * (self.den / q) as i64;
        self.coeff_units(k)
    }

    fn coeff_units(&self, k: i64) -> Option<C> {
        if k >= self.trunc {
            return None;
        }
        if k < self.lead {
            return Some(C::zero(self.ctx));
        }
        Some(self.coeffs[(k - self.lead) as usize].clone())
    }

    fn check_backend(&self, other: &Series<C>) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::BackendMismatch {
                left: self.backend(),
                right: other.backend(),
            });
        }
        Ok(())
    }

    fn normalized(mut self) -> Series<C> {
        self.normalize();
        self
    }

    /// Strip leading zeros and reduce the branch denominator to its minimum.
    fn normalize(&mut self) {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if skip == self.coeffs.len() {
            self.coeffs.clear();
            self.lead = self.trunc;
        } else if skip > 0 {
            self.coeffs.drain(..skip);
            self.lead += skip as i64;
        }
        let mut g = self.den;
        for (i, c) in self.coeffs.iter().enumerate() {
            if g == 1 {
                break;
            }
            if !c.is_zero() {
                g = gcd(g, (self.lead + i as i64).unsigned_abs());
            }
        }
        if self.coeffs.is_empty() {
            g = gcd(self.den, self.trunc.unsigned_abs());
        }
        if g > 1 {
            self.reduce_den(g);
        }
    }

    /// Divide the branch denominator by `g`; every nonzero exponent must be
    /// divisible by `g`. The truncation is rounded down.
    fn reduce_den(&mut self, g: u64) {
        let gi = g as i64;
        let new_trunc = div_floor(self.trunc, gi);
        if self.coeffs.is_empty() {
            self.den /= g;
            self.trunc = new_trunc;
            self.lead = new_trunc;
            return;
        }
        let new_lead = self.lead / gi;
        let coeffs = (new_lead..new_trunc)
            .map(|k| self.coeffs[(k * gi - self.lead) as usize].clone())
            .collect();
        self.den /= g;
        self.lead = new_lead;
        self.trunc = new_trunc;
        self.coeffs = coeffs;
    }

    /// The same series on the finer grid `q^(1/den)`; `den` must be a multiple.
    fn refine(&self, den: u64) -> Series<C> {
        debug_assert_eq!(den % self.den, 0);
        let f = (den / self.den) as i64;
        if f == 1 {
            return self.clone();
        }
        let zero = C::zero(self.ctx);
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * f as usize);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                for _ in 1..f {
                    coeffs.push(zero.clone());
                }
            }
            coeffs.push(c.clone());
        }
        let lead = self.lead * f;
        let trunc = self.trunc * f;
        if !coeffs.is_empty() {
            coeffs.resize((trunc - lead) as usize, zero);
        }
        let lead = if coeffs.is_empty() { trunc } else { lead };
        Series {
            den,
            lead,
            coeffs,
            trunc,
            ctx: self.ctx,
        }
    }

    fn align(&self, other: &Series<C>) -> Result<(Series<C>, Series<C>)> {
        self.check_backend(other)?;
        let den = lcm(self.den, other.den);
        Ok((self.refine(den), other.refine(den)))
    }

    fn combine(&self, other: &Series<C>, negate: bool) -> Result<Series<C>> {
        let (a, b) = self.align(other)?;
        let trunc = min(a.trunc, b.trunc);
        let lead = min(a.lead, b.lead);
        let nonzero_leads = [&a, &b]
            .iter()
            .filter(|s| !s.is_zero())
            .map(|s| s.lead)
            .min();
        if let Some(l) = nonzero_leads {
            if trunc <= l {
                return Err(Error::EmptyWindow);
            }
        }
        let lead = min(lead, trunc);
        let coeffs = (lead..trunc)
            .map(|k| {
                let x = a.coeff_units(k).expect("inside window");
                let y = b.coeff_units(k).expect("inside window");
                if negate {
                    x.sub(&y)
                } else {
                    x.add(&y)
                }
            })
            .collect();
        Ok(Series {
            den: a.den,
            lead,
            coeffs,
            trunc,
            ctx: a.ctx,
        }
        .normalized())
    }

    pub fn add(&self, other: &Series<C>) -> Result<Series<C>> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Series<C>) -> Result<Series<C>> {
        self.combine(other, true)
    }

    /// Add the exact constant `c`; absorbed when the constant term is unknown.
    pub fn add_scalar(&self, c: &C) -> Series<C> {
        if self.trunc <= 0 || c.is_zero() {
            return self.clone();
        }
        let one = Series::new(1, 0, vec![c.clone()], 1, self.ctx);
        let mut constant = one.refine(self.den);
        constant.trunc = self.trunc;
        constant
            .coeffs
            .resize(self.trunc as usize, C::zero(self.ctx));
        self.add(&constant)
            .expect("constant fits inside the window")
    }

    pub fn neg(&self) -> Series<C> {
        Series {
            coeffs: self.coeffs.iter().map(C::neg).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &C) -> Series<C> {
        Series {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            ..self.clone()
        }
        .normalized()
    }

    pub fn scale_rat(&self, r: &Rational) -> Series<C> {
        Series {
            coeffs: self.coeffs.iter().map(|x| x.mul_rat(r)).collect(),
            ..self.clone()
        }
        .normalized()
    }

    /// Direct convolution; the relative order is the smaller of the two.
    pub fn mul(&self, other: &Series<C>) -> Result<Series<C>> {
        let (a, b) = self.align(other)?;
        let order = min(a.order(), b.order());
        let lead = a.lead + b.lead;
        let n = order as usize;
        let zero = C::zero(a.ctx);
        let mut coeffs = vec![zero; n];
        if !a.is_zero() && !b.is_zero() {
            let bnz: Vec<(usize, &C)> = b
                .coeffs
                .iter()
                .enumerate()
                .take(n)
                .filter(|(_, c)| !c.is_zero())
                .collect();
            for (i, x) in a.coeffs.iter().enumerate().take(n) {
                if x.is_zero() {
                    continue;
                }
                for &(j, y) in &bnz {
                    if i + j >= n {
                        break;
                    }
                    coeffs[i + j] = coeffs[i + j].add(&x.mul(y));
                }
            }
        }
        Ok(Series {
            den: a.den,
            lead,
            coeffs,
            trunc: lead + order,
            ctx: a.ctx,
        }
        .normalized())
    }

    /// Multiplicative inverse by leading-term normalization and the
    /// geometric-series recurrence.
    pub fn inv(&self) -> Result<Series<C>> {
        let Some(a0) = self.leading_coeff() else {
            return Err(Error::DivisionByZero);
        };
        let n = self.coeffs.len();
        let inv0 = C::one(self.ctx).div(a0);
        let nz: Vec<(usize, &C)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut out: Vec<C> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = C::zero(self.ctx);
            for &(j, aj) in &nz {
                if j > k {
                    break;
                }
                let b = &out[k - j];
                if !b.is_zero() {
                    acc = acc.add(&aj.mul(b));
                }
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(Series {
            den: self.den,
            lead: -self.lead,
            coeffs: out,
            trunc: -self.lead + n as i64,
            ctx: self.ctx,
        }
        .normalized())
    }

    pub fn div(&self, other: &Series<C>) -> Result<Series<C>> {
        self.check_backend(other)?;
        self.mul(&other.inv()?)
    }

    /// `D = q d/dq`: multiplies the coefficient of `q^(k/N)` by `k/N`.
    pub fn theta(&self) -> Series<C> {
        let den = Rational::from(self.den);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.is_zero() {
                    c.clone()
                } else {
                    c.mul_rat(&(Rational::from(self.lead + i as i64) / &den))
                }
            })
            .collect();
        Series {
            coeffs,
            ..self.clone()
        }
        .normalized()
    }

    /// `q ↦ q^k`, realizing `f(kτ)` from `f(τ)`.
    pub fn substitute_power(&self, k: u64) -> Series<C> {
        assert!(k > 0, "substitution power must be positive");
        let g = gcd(k, self.den);
        let den = self.den / g;
        let f = (k / g) as i64;
        // Exponents e/den_old become e*k/den_old = e*f/den.
        let zero = C::zero(self.ctx);
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                for _ in 1..f {
                    coeffs.push(zero.clone());
                }
            }
            coeffs.push(c.clone());
        }
        let lead = self.lead * f;
        let trunc = self.trunc * f;
        if !coeffs.is_empty() {
            coeffs.resize((trunc - lead) as usize, zero);
        }
        Series {
            den,
            lead: if coeffs.is_empty() { trunc } else { lead },
            coeffs,
            trunc,
            ctx: self.ctx,
        }
        .normalized()
    }

    /// Multiply by `q^r`.
    pub fn mul_monomial(&self, r: &Rational) -> Result<Series<C>> {
        let (p, q) = small_parts(r)?;
        let den = lcm(self.den, q);
        let mut s = self.refine(den);
        let shift = p * (den / q) as i64;
        s.lead += shift;
        s.trunc += shift;
        Ok(s.normalized())
    }

    /// Forget every term at or beyond `q^exp`.
    pub fn truncate(&self, exp: &Rational) -> Series<C> {
        let scaled = exp * Rational::from(self.den);
        let t = ceil_rational(&scaled);
        if t >= self.trunc {
            return self.clone();
        }
        let keep = max(t - self.lead, 0) as usize;
        let mut s = self.clone();
        s.coeffs.truncate(keep);
        s.trunc = t;
        if s.coeffs.is_empty() {
            s.lead = t;
        }
        s.normalized()
    }

    /// Keep only `order` slots past the lead.
    pub fn with_order(&self, order: i64) -> Series<C> {
        if order >= self.order() {
            return self.clone();
        }
        let t = self.lead + max(order, 0);
        self.truncate(&exponent(t, self.den))
    }

    pub fn pow_int(&self, n: i64) -> Result<Series<C>> {
        if n < 0 {
            return self.inv()?.pow_int(-n);
        }
        if n == 0 {
            if self.is_zero() {
                return Err(Error::Domain("0^0 of a truncated zero series".into()));
            }
            return Ok(Series::one(self.order(), self.ctx).with_den_order(self));
        }
        let mut base = self.clone();
        let mut acc: Option<Series<C>> = None;
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base)?,
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.expect("n > 0"))
    }

    // `1` carrying the relative order of `like`, measured on its grid.
    fn with_den_order(&self, like: &Series<C>) -> Series<C> {
        Series::new(like.den, 0, vec![C::one(self.ctx)], like.order(), self.ctx)
    }

    /// Set coefficients of magnitude at most `tol` to exactly zero.
    pub fn chop(&self, tol: &Tolerance) -> Series<C> {
        let zero = C::zero(self.ctx);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                if c.within(&zero, Some(tol)).unwrap_or(false) {
                    zero.clone()
                } else {
                    c.clone()
                }
            })
            .collect();
        Series {
            coeffs,
            ..self.clone()
        }
        .normalized()
    }

    /// Convert coefficients into another backend.
    pub fn map_scalar<D: Scalar>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            den: self.den,
            lead: self.lead,
            coeffs: self.coeffs.iter().map(f).collect(),
            trunc: self.trunc,
            ctx,
        }
        .normalized()
    }

    /// True when every nonzero exponent is an integer.
    pub fn has_integer_exponents(&self) -> bool {
        self.den == 1
    }

    /// Coefficients whose exponent is not an integer, as `(exponent, coeff)`.
    pub fn fractional_terms(&self) -> Vec<(Rational, C)> {
        self.terms()
            .filter(|(e, _)| !crate::scalar::is_integer(e))
            .map(|(e, c)| (e, c.clone()))
            .collect()
    }

    /// Evaluate the polynomial `Σ coeffs[i] x^i` at this series (Horner).
    pub fn eval_poly(&self, coeffs: &[C]) -> Result<Series<C>> {
        // Constants are exact; give them enough room never to bind.
        let order = max(max(self.order(), self.trunc), 1);
        let constant = |c: &C| Series::new(self.den, 0, vec![c.clone()], order, self.ctx);
        let Some((top, rest)) = coeffs.split_last() else {
            return Ok(Series::new(self.den, 0, Vec::new(), order, self.ctx));
        };
        let mut acc = constant(top);
        for c in rest.iter().rev() {
            acc = acc.mul(self)?.add(&constant(c))?;
        }
        Ok(acc)
    }
}

fn ceil_rational(r: &Rational) -> i64 {
    let num = i64::try_from(r.numerator().clone()).expect("exponent fits in i64");
    let den = i64::try_from(IBig::from(r.denominator().clone())).expect("denominator fits");
    div_ceil(num, den)
}

impl<C: Scalar> Series<C> {
    /// Build from `(exponent, coefficient)` pairs, known modulo `O(q^truncation)`.
    pub fn from_terms(
        terms: &[(Rational, C)],
        truncation: &Rational,
        ctx: C::Ctx,
    ) -> Result<Series<C>> {
        let mut den = small_parts(truncation)?.1;
        for (e, _) in terms {
            den = lcm(den, small_parts(e)?.1);
        }
        let units = |r: &Rational| -> Result<i64> {
            let (p, q) = small_parts(r)?;
            Ok(p * (den / q) as i64)
        };
        let trunc = units(truncation)?;
        let mut lead = trunc;
        for (e, c) in terms {
            if !c.is_zero() {
                lead = min(lead, units(e)?);
            }
        }
        let mut coeffs = vec![C::zero(ctx); (trunc - lead) as usize];
        for (e, c) in terms {
            let k = units(e)?;
            if k < trunc && !c.is_zero() {
                let slot = &mut coeffs[(k - lead) as usize];
                *slot = slot.add(c);
            }
        }
        Ok(Series {
            den,
            lead,
            coeffs,
            trunc,
            ctx,
        }
        .normalized())
    }
}
