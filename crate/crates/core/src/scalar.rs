//! Coefficient fields for q-series.
//!
//! Two backends exist: exact rationals and fixed-precision binary complex
//! numbers. A series is generic over its coefficient type, so mixing backends
//! inside one typed computation is impossible; the runtime-tagged
//! [`AnySeries`](crate::qseries::AnySeries) reports it as an error instead.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use dashu_base::{Abs, Sign, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = RBig;
pub type Float = FBig<HalfEven, 2>;

/// Smallest precision accepted by the complex backend.
pub const MIN_PRECISION: u32 = 64;

/// Backend tag carried by every series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backend {
    Rational,
    Complex { precision: u32 },
}

impl Backend {
    pub fn complex(precision: u32) -> Result<Backend> {
        if precision < MIN_PRECISION {
            return Err(Error::InvalidArgument(format!(
                "complex precision must be at least {MIN_PRECISION} bits, got {precision}"
            )));
        }
        Ok(Backend::Complex { precision })
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => f.write_str("rational"),
            Backend::Complex { precision } => write!(f, "complex{precision}"),
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "rational" {
            return Ok(Backend::Rational);
        }
        if let Some(bits) = s.strip_prefix("complex") {
            let precision = bits
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad backend tag `{s}`")))?;
            return Backend::complex(precision);
        }
        Err(Error::Parse(format!("bad backend tag `{s}`")))
    }
}

/// Absolute tolerance for complex comparisons.
#[derive(Debug, Clone)]
pub struct Tolerance {
    bound: Float,
}

impl Tolerance {
    /// `2^-bits`.
    pub fn from_bits(bits: u32) -> Tolerance {
        let bound = Float::from_parts(IBig::ONE, -(bits as isize));
        Tolerance { bound }
    }

    pub fn from_f64(value: f64) -> Tolerance {
        let bound = Float::try_from(value.abs()).unwrap_or(Float::ZERO);
        Tolerance { bound }
    }

    /// The tolerance used for a complex backend of the given precision.
    pub fn for_precision(precision: u32) -> Tolerance {
        Tolerance::from_bits(precision / 2)
    }

    pub fn bound(&self) -> &Float {
        &self.bound
    }

    pub fn as_f64(&self) -> f64 {
        self.bound.to_f64().value()
    }
}

/// Operations every coefficient type supports.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// Construction context (precision for complex, nothing for rationals).
    type Ctx: Copy + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    fn backend(ctx: Self::Ctx) -> Backend;
    fn ctx_of(backend: Backend) -> Option<Self::Ctx>;
    fn ctx(&self) -> Self::Ctx;

    fn from_rational(r: &Rational, ctx: Self::Ctx) -> Self;
    fn imaginary_unit(ctx: Self::Ctx) -> Option<Self>;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_rational(&Rational::ZERO, ctx)
    }
    fn one(ctx: Self::Ctx) -> Self {
        Self::from_rational(&Rational::ONE, ctx)
    }
    fn from_int(n: i64, ctx: Self::Ctx) -> Self {
        Self::from_rational(&Rational::from(n), ctx)
    }

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Caller guarantees `rhs` is nonzero.
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_rat(&self, r: &Rational) -> Self;

    /// `n`-th root: exact for rationals (None when not a perfect power),
    /// principal branch for complex numbers.
    fn root(&self, n: u64) -> Option<Self>;

    /// `|self - other| <= tol`; exact equality for rationals.
    fn within(&self, other: &Self, tol: Option<&Tolerance>) -> Result<bool>;

    /// Approximate magnitude, used for reporting only.
    fn magnitude(&self) -> f64;

    fn to_rational(&self) -> Option<Rational>;

    fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| base.div(&base))
    }
}

// ---------------------------------------------------------------------------
// Rationals

impl Scalar for Rational {
    type Ctx = ();

    fn backend(_: ()) -> Backend {
        Backend::Rational
    }

    fn ctx_of(backend: Backend) -> Option<()> {
        matches!(backend, Backend::Rational).then_some(())
    }

    fn ctx(&self) {}

    fn from_rational(r: &Rational, _: ()) -> Self {
        r.clone()
    }

    fn imaginary_unit(_: ()) -> Option<Self> {
        None
    }

    fn is_zero(&self) -> bool {
        RBig::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn neg(&self) -> Self {
        -self.clone()
    }

    fn mul_rat(&self, r: &Rational) -> Self {
        self * r
    }

    fn root(&self, n: u64) -> Option<Self> {
        rational_root(self, n)
    }

    fn within(&self, other: &Self, _tol: Option<&Tolerance>) -> Result<bool> {
        Ok(self == other)
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().value().abs()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Build `p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
    RBig::from_parts(IBig::from(p), UBig::from(q as u64))
}

/// Format as `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numerator(), r.denominator())
}

/// Format as `p` when integral, otherwise `p/q`.
pub fn format_rational_short(r: &Rational) -> String {
    if *r.denominator() == UBig::ONE {
        r.numerator().to_string()
    } else {
        format_rational(r)
    }
}

/// Parse `"p/q"` or `"p"`; signs may appear on either part.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = IBig::from_str(num).map_err(|_| bad())?;
    let den = IBig::from_str(den).map_err(|_| bad())?;
    if den == IBig::ZERO {
        return Err(bad());
    }
    let (sign, mag) = den.into_parts();
    let num = if sign == Sign::Negative { -num } else { num };
    Ok(RBig::from_parts(num, mag))
}

/// Exact `n`-th root of a rational, if one exists.
pub fn rational_root(r: &Rational, n: u64) -> Option<Rational> {
    if n == 0 {
        return None;
    }
    if n == 1 || r.is_zero() {
        return Some(r.clone());
    }
    let negative = r.numerator() < &IBig::ZERO;
    if negative && n.is_multiple_of(2) {
        return None;
    }
    let num = r.numerator().clone().into_parts().1;
    let den = r.denominator().clone();
    let root_num = exact_uroot(&num, n)?;
    let root_den = exact_uroot(&den, n)?;
    let root_num = if negative {
        -IBig::from(root_num)
    } else {
        IBig::from(root_num)
    };
    Some(RBig::from_parts(root_num, root_den))
}

fn exact_uroot(u: &UBig, n: u64) -> Option<UBig> {
    let root = u.nth_root(n as usize);
    (root.pow(n as usize) == *u).then_some(root)
}

/// `p/q` as machine integers, when they fit.
pub fn rational_parts(r: &Rational) -> Option<(i64, i64)> {
    let p = i64::try_from(r.numerator().clone()).ok()?;
    let q = i64::try_from(IBig::from(r.denominator().clone())).ok()?;
    Some((p, q))
}

pub fn is_integer(r: &Rational) -> bool {
    *r.denominator() == UBig::ONE
}

// ---------------------------------------------------------------------------
// Complex numbers

/// Complex number with `precision` bits in each of its two binary floats.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    re: Float,
    im: Float,
    precision: u32,
}

fn float_zero(precision: u32) -> Float {
    Float::ZERO.with_precision(precision as usize).value()
}

fn float_from_rational(r: &Rational, precision: u32) -> Float {
    if r.is_zero() {
        return float_zero(precision);
    }
    r.to_float::<HalfEven, 2>(precision as usize).value()
}

fn float_from_f64(x: f64, precision: u32) -> Float {
    Float::try_from(x)
        .unwrap_or(Float::ZERO)
        .with_precision(precision as usize)
        .value()
}

impl Complex {
    pub fn new(re: Float, im: Float, precision: u32) -> Complex {
        let p = precision as usize;
        Complex {
            re: re.with_precision(p).value(),
            im: im.with_precision(p).value(),
            precision,
        }
    }

    pub fn from_rationals(re: &Rational, im: &Rational, precision: u32) -> Complex {
        Complex {
            re: float_from_rational(re, precision),
            im: float_from_rational(im, precision),
            precision,
        }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn norm_sqr(&self) -> Float {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Float {
        let n = self.norm_sqr();
        if n == Float::ZERO {
            return float_zero(self.precision);
        }
        n.sqrt()
    }

    fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }

    fn principal_sqrt(&self) -> Complex {
        let p = self.precision;
        if self.is_zero() {
            return self.clone();
        }
        let two = Float::from(2).with_precision(p as usize).value();
        let r = self.abs();
        if self.re >= Float::ZERO {
            let u = ((&r + &self.re) / &two).sqrt();
            let v = &self.im / (&two * &u);
            Complex::new(u, v, p)
        } else {
            let v = ((&r - &self.re) / &two).sqrt();
            let u = self.im.clone().abs() / (&two * &v);
            let v = if self.im < Float::ZERO { -v } else { v };
            Complex::new(u, v, p)
        }
    }

    /// Principal `n`-th root by Newton iteration seeded from a double
    /// precision estimate of the principal root.
    fn principal_root(&self, n: u64) -> Complex {
        let p = self.precision;
        if self.is_zero() || n == 1 {
            return self.clone();
        }
        if n == 2 {
            return self.principal_sqrt();
        }
        let (x, y) = self.to_f64_pair();
        let modulus = x.hypot(y).powf(1.0 / n as f64);
        let arg = y.atan2(x) / n as f64;
        let mut w = Complex::new(
            float_from_f64(modulus * arg.cos(), p),
            float_from_f64(modulus * arg.sin(), p),
            p,
        );
        let n_scalar = Complex::from_rationals(&Rational::from(n), &Rational::ZERO, p);
        let n_minus_one = Complex::from_rationals(&Rational::from(n - 1), &Rational::ZERO, p);
        let mut iterations = 4;
        let mut bits = 40u32;
        while bits < p {
            bits *= 2;
            iterations += 1;
        }
        for _ in 0..iterations {
            let w_pow = Scalar::pow(&w, n - 1);
            let next = n_minus_one.mul(&w).add(&self.div(&w_pow)).div(&n_scalar);
            w = next;
        }
        w
    }

    /// Decimal rendering of one float with `digits` significant digits.
    pub fn format_float(x: &Float, digits: usize) -> String {
        if *x == Float::ZERO {
            return "0".to_string();
        }
        let dec = x.clone().with_base_and_precision::<10>(digits).value();
        dec.to_string()
    }

    fn decimal_digits(&self) -> usize {
        (self.precision as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }

    pub fn to_decimal_pair(&self) -> (String, String) {
        let digits = self.decimal_digits();
        (
            Complex::format_float(&self.re, digits),
            Complex::format_float(&self.im, digits),
        )
    }

    pub fn parse_pair(re: &str, im: &str, precision: u32) -> Result<Complex> {
        let parse = |s: &str| -> Result<Float> {
            let dec = FBig::<HalfEven, 10>::from_str(s.trim())
                .map_err(|_| Error::Parse(format!("not a decimal float: `{s}`")))?;
            Ok(dec.with_base_and_precision::<2>(precision as usize).value())
        };
        Ok(Complex::new(parse(re)?, parse(im)?, precision))
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let re = Complex::format_float(&self.re, digits);
        let im_abs = Complex::format_float(&self.im.clone().abs(), digits);
        if self.im == Float::ZERO {
            write!(f, "{re}")
        } else if self.re == Float::ZERO {
            let sign = if self.im < Float::ZERO { "-" } else { "" };
            write!(f, "{sign}{im_abs}i")
        } else {
            let sign = if self.im < Float::ZERO { '-' } else { '+' };
            write!(f, "({re} {sign} {im_abs}i)")
        }
    }
}

impl Scalar for Complex {
    type Ctx = u32;

    fn backend(precision: u32) -> Backend {
        Backend::Complex { precision }
    }

    fn ctx_of(backend: Backend) -> Option<u32> {
        match backend {
            Backend::Complex { precision } => Some(precision),
            Backend::Rational => None,
        }
    }

    fn ctx(&self) -> u32 {
        self.precision
    }

    fn from_rational(r: &Rational, precision: u32) -> Self {
        Complex::from_rationals(r, &Rational::ZERO, precision)
    }

    fn imaginary_unit(precision: u32) -> Option<Self> {
        Some(Complex::from_rationals(
            &Rational::ZERO,
            &Rational::ONE,
            precision,
        ))
    }

    fn is_zero(&self) -> bool {
        self.re == Float::ZERO && self.im == Float::ZERO
    }

    fn add(&self, rhs: &Self) -> Self {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im, self.precision)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im, self.precision)
    }

    fn mul(&self, rhs: &Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Complex::new(re, im, self.precision)
    }

    fn div(&self, rhs: &Self) -> Self {
        let den = rhs.norm_sqr();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &den;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &den;
        Complex::new(re, im, self.precision)
    }

    fn neg(&self) -> Self {
        Complex::new(-self.re.clone(), -self.im.clone(), self.precision)
    }

    fn mul_rat(&self, r: &Rational) -> Self {
        let s = float_from_rational(r, self.precision);
        Complex::new(&self.re * &s, &self.im * &s, self.precision)
    }

    fn root(&self, n: u64) -> Option<Self> {
        (n > 0).then(|| self.principal_root(n))
    }

    fn within(&self, other: &Self, tol: Option<&Tolerance>) -> Result<bool> {
        let tol = tol.ok_or(Error::MissingTolerance)?;
        let d = self.sub(other).norm_sqr();
        Ok(d <= tol.bound() * tol.bound())
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().value()
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rational("12/-8").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&rat(5, 1)), "5/1");
        assert_eq!(format_rational_short(&rat(5, 1)), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn exact_roots() {
        assert_eq!(rational_root(&rat(4096, 1), 3), Some(rat(16, 1)));
        assert_eq!(rational_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_root(&rat(-4, 1), 2), None);
        assert_eq!(rational_root(&rat(2, 1), 2), None);
        assert_eq!(rational_root(&rat(9, 16), 2), Some(rat(3, 4)));
    }

    #[test]
    fn complex_roots_are_principal() {
        let p = 256;
        let tol = Tolerance::for_precision(p);
        let minus_three = Complex::from_int(-3, p);
        let r = minus_three.root(2).unwrap();
        assert!(r.re().clone().abs() <= *tol.bound());
        assert!(r.im() > &Float::ZERO);
        assert!(r.mul(&r).within(&minus_three, Some(&tol)).unwrap());

        let z = Complex::from_rationals(&rat(-5, 7), &rat(3, 2), p);
        for n in [2u64, 3, 5] {
            let w = z.root(n).unwrap();
            assert!(w.pow(n).within(&z, Some(&tol)).unwrap(), "root {n}");
            assert!(w.re() > &Float::ZERO);
        }
    }

    #[test]
    fn complex_needs_tolerance() {
        let a = Complex::from_int(1, 128);
        assert_eq!(a.within(&a, None), Err(Error::MissingTolerance));
    }

    #[test]
    fn backend_tags_round_trip() {
        for b in [Backend::Rational, Backend::Complex { precision: 128 }] {
            assert_eq!(b.to_string().parse::<Backend>().unwrap(), b);
        }
        assert!("complex32".parse::<Backend>().is_err());
    }

    #[test]
    fn decimal_pairs_round_trip() {
        let z = Complex::from_rationals(&rat(1, 3), &rat(-2, 7), 256);
        let (re, im) = z.to_decimal_pair();
        let back = Complex::parse_pair(&re, &im, 256).unwrap();
        assert!(back.within(&z, Some(&Tolerance::from_bits(250))).unwrap());
    }
}
