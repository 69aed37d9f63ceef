//! Powers, roots, `log(1 + ·)` and `exp(·)` of truncated series.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{format_rational_short, Rational, Scalar};

use super::{exponent, small_parts, Series};

/// Result of a fractional power. When the leading coefficient was rescaled
/// to one first, `dropped` records the discarded factor `base^exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowOutcome<C: Scalar> {
    pub series: Series<C>,
    pub dropped: Option<DroppedConstant<C>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DroppedConstant<C: Scalar> {
    pub base: C,
    pub exponent: Rational,
    /// `base^exponent`, when it exists in the backend.
    pub value: Option<C>,
}

impl<C: Scalar> fmt::Display for DroppedConstant<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Some(v) => write!(f, "{v}"),
            None => write!(
                f,
                "({})^({})",
                self.base,
                format_rational_short(&self.exponent)
            ),
        }
    }
}

fn scalar_pow_rat<C: Scalar>(c: &C, alpha: &Rational) -> Option<C> {
    let (p, q) = small_parts(alpha).ok()?;
    let one = C::one(c.ctx());
    if c == &one {
        return Some(one);
    }
    let root = c.root(q)?;
    let powered = root.pow(p.unsigned_abs());
    Some(if p < 0 { one.div(&powered) } else { powered })
}

impl<C: Scalar> Series<C> {
    /// The series divided by its leading term: `1 + f_1 t + f_2 t^2 + ...`.
    fn unit_part(&self) -> Result<Vec<C>> {
        let a0 = self.leading_coeff().ok_or(Error::DivisionByZero)?;
        let inv = C::one(self.ctx()).div(a0);
        Ok(self.coeffs().iter().map(|c| c.mul(&inv)).collect())
    }

    /// `self^alpha` for rational `alpha`, principal branch.
    ///
    /// With `normalize_leading` the leading coefficient is rescaled to one
    /// first and the discarded constant is reported.
    pub fn powf(&self, alpha: &Rational, normalize_leading: bool) -> Result<PowOutcome<C>> {
        if self.is_zero() {
            return Err(Error::Domain("fractional power of a zero series".into()));
        }
        let ctx = self.ctx();
        let f = self.unit_part()?;
        let n = f.len();
        let mut g: Vec<C> = Vec::with_capacity(n);
        g.push(C::one(ctx));
        let alpha1 = alpha + Rational::ONE;
        let nz: Vec<(usize, &C)> = f
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for k in 1..n {
            let mut acc = C::zero(ctx);
            for &(j, fj) in &nz {
                if j > k {
                    break;
                }
                let gk = &g[k - j];
                if gk.is_zero() {
                    continue;
                }
                let w = &alpha1 * Rational::from(j as i64) - Rational::from(k as i64);
                if w != Rational::ZERO {
                    acc = acc.add(&fj.mul(gk).mul_rat(&w));
                }
            }
            g.push(acc.mul_rat(&(Rational::ONE / Rational::from(k as i64))));
        }
        let unit = Series::new(self.branch_den(), 0, g, n as i64, ctx);
        let lead = self.lead_exp() * alpha;
        let shifted = unit.mul_monomial(&lead)?;

        let c = self.leading_coeff().expect("nonzero").clone();
        if normalize_leading {
            let value = scalar_pow_rat(&c, alpha);
            let dropped = DroppedConstant {
                base: c,
                exponent: alpha.clone(),
                value,
            };
            return Ok(PowOutcome {
                series: shifted,
                dropped: Some(dropped),
            });
        }
        let q = small_parts(alpha)?.1;
        let factor = scalar_pow_rat(&c, alpha).ok_or(Error::NotExactRoot { n: q })?;
        Ok(PowOutcome {
            series: shifted.scale(&factor),
            dropped: None,
        })
    }

    /// `n`-th root with the principal branch and no rescaling.
    pub fn nth_root(&self, n: u64) -> Result<Series<C>> {
        let alpha = exponent(1, n);
        Ok(self.powf(&alpha, false)?.series)
    }

    /// `log(h)` for `h = 1 + O(t)`.
    pub fn log1(&self) -> Result<Series<C>> {
        let ctx = self.ctx();
        if self.is_zero() || self.lead_units() != 0 || self.coeffs()[0] != C::one(ctx) {
            return Err(Error::Domain(
                "log1 needs a series of the form 1 + O(t)".into(),
            ));
        }
        let f = self.coeffs();
        let n = f.len();
        let mut l: Vec<C> = vec![C::zero(ctx); n];
        for k in 1..n {
            let mut acc = f[k].mul_rat(&Rational::from(k as i64));
            for j in 1..k {
                if l[j].is_zero() || f[k - j].is_zero() {
                    continue;
                }
                acc = acc.sub(&l[j].mul(&f[k - j]).mul_rat(&Rational::from(j as i64)));
            }
            l[k] = acc.mul_rat(&(Rational::ONE / Rational::from(k as i64)));
        }
        Ok(Series::new(self.branch_den(), 0, l, n as i64, ctx))
    }

    /// `exp(h)` for `h = O(t)`.
    pub fn exp0(&self) -> Result<Series<C>> {
        let ctx = self.ctx();
        if !self.is_zero() && self.lead_units() <= 0 {
            return Err(Error::Domain("exp0 needs a series of the form O(t)".into()));
        }
        let trunc = self.trunc_units();
        if trunc <= 0 {
            return Err(Error::EmptyWindow);
        }
        let n = trunc as usize;
        let f: Vec<C> = (0..n as i64)
            .map(|k| self.coeff_units(k).expect("inside window"))
            .collect();
        let mut e: Vec<C> = Vec::with_capacity(n);
        e.push(C::one(ctx));
        for k in 1..n {
            let mut acc = C::zero(ctx);
            for j in 1..=k {
                if f[j].is_zero() || e[k - j].is_zero() {
                    continue;
                }
                acc = acc.add(&f[j].mul(&e[k - j]).mul_rat(&Rational::from(j as i64)));
            }
            e.push(acc.mul_rat(&(Rational::ONE / Rational::from(k as i64))));
        }
        Ok(Series::new(self.branch_den(), 0, e, n as i64, ctx))
    }
}
