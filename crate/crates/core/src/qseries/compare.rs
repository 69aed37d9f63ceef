use crate::error::{Error, Result};
use crate::scalar::{Backend, Rational, Scalar, Tolerance};

use super::{exponent, lcm, small_parts, Series};

/// First coefficient where two series disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch<C: Scalar> {
    pub exponent: Rational,
    pub lhs: C,
    pub rhs: C,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison<C: Scalar> {
    pub first_mismatch: Option<Mismatch<C>>,
    /// Largest coefficient deviation seen (exact backends report 0 or the
    /// magnitude of the first difference).
    pub max_deviation: f64,
}

impl<C: Scalar> Comparison<C> {
    pub fn equal(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl<C: Scalar> Series<C> {
    /// Compare all coefficients of exponent `< m`. The complex backend needs
    /// a tolerance; rationals compare exactly.
    pub fn eq_to_order(
        &self,
        other: &Series<C>,
        m: &Rational,
        tol: Option<&Tolerance>,
    ) -> Result<Comparison<C>> {
        self.check_backend(other)?;
        if C::backend(self.ctx()) != Backend::Rational && tol.is_none() {
            return Err(Error::MissingTolerance);
        }
        let available = self.truncation().min(other.truncation());
        if *m > available {
            return Err(Error::InsufficientPrecision {
                requested: crate::scalar::format_rational_short(m),
                available: crate::scalar::format_rational_short(&available),
            });
        }
        let (p, q) = small_parts(m)?;
        let den = lcm(lcm(self.branch_den(), other.branch_den()), q);
        let a = self.refine(den);
        let b = other.refine(den);
        let end = p * (den / q) as i64;
        let start = a.lead.min(b.lead);
        let mut first_mismatch = None;
        let mut max_deviation = 0.0f64;
        for k in start..end {
            let x = a.coeff_units(k).expect("inside window");
            let y = b.coeff_units(k).expect("inside window");
            let dev = x.sub(&y).magnitude();
            if dev > max_deviation {
                max_deviation = dev;
            }
            if first_mismatch.is_none() && !x.within(&y, tol)? {
                first_mismatch = Some(Mismatch {
                    exponent: exponent(k, den),
                    lhs: x,
                    rhs: y,
                });
            }
        }
        Ok(Comparison {
            first_mismatch,
            max_deviation,
        })
    }
}
