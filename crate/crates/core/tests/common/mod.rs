//! Strategies and property bodies shared by the property suite and the
//! acceptance harness.
#![allow(dead_code)]

use proptest::prelude::*;
use schwarz_core::forms::{form, FormName};
use schwarz_core::scalar::rat;
use schwarz_core::schwarz::{mobius_apply, schwarzian_norm};
use schwarz_core::{Backend, Rational, Series};

pub type S = Series<Rational>;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(p, q, neg)| rat(if neg { -p } else { p }, q))
}

/// A Puiseux series with branch denominator up to 3.
pub fn series() -> impl Strategy<Value = S> {
    (
        1u64..=3,
        -2i64..=3,
        prop::collection::vec(small_rational(), 4..14),
    )
        .prop_map(|(den, lead, coeffs)| {
            let n = coeffs.len() as i64;
            Series::new(den, lead, coeffs, n, ())
        })
}

/// `c q^r (1 + Σ uᵢ qⁱ)` with `r ≠ 0`, hence `Dh ≠ 0`.
pub fn univalent(terms: usize) -> impl Strategy<Value = S> {
    (
        nonzero_rational(),
        (1i64..=4, 1i64..=4, any::<bool>()),
        prop::collection::vec(small_rational(), terms),
    )
        .prop_map(|(c, (p, q, neg), tail)| {
            let r = rat(if neg { -p } else { p }, q);
            let mut coeffs = vec![c.clone()];
            coeffs.extend(tail.into_iter().map(|u| &u * &c));
            let n = coeffs.len() as i64;
            Series::new(1, 0, coeffs, n, ()).mul_monomial(&r).unwrap()
        })
}

/// An invertible rational 2×2 matrix.
pub fn mobius_matrix() -> impl Strategy<Value = [Rational; 4]> {
    [
        small_rational(),
        small_rational(),
        small_rational(),
        small_rational(),
    ]
    .prop_filter("singular", |[a, b, c, d]| a * d != b * c)
}

/// `a = b` to the smaller of the two truncations.
pub fn same(a: &S, b: &S) -> Result<(), String> {
    let d = a.sub(b).map_err(|e| e.to_string())?;
    if d.is_zero() {
        Ok(())
    } else {
        Err(format!("differ: {a}  vs  {b}"))
    }
}

pub fn ring_axioms(a: &S, b: &S, c: &S) -> Result<(), String> {
    let m = |x: &S, y: &S| x.mul(y).unwrap();
    let p = |x: &S, y: &S| x.add(y).unwrap();
    same(&m(&m(a, b), c), &m(a, &m(b, c)))?;
    same(&m(a, b), &m(b, a))?;
    same(&p(a, b), &p(b, a))?;
    same(&m(a, &p(b, c)), &p(&m(a, b), &m(a, c)))
}

pub fn derivation(a: &S, b: &S) -> Result<(), String> {
    let lhs = a.mul(b).unwrap().theta();
    let rhs = a
        .theta()
        .mul(b)
        .unwrap()
        .add(&a.mul(&b.theta()).unwrap())
        .unwrap();
    same(&lhs, &rhs)
}

pub fn mobius_invariance(h: &S, m: &[Rational; 4], min_order: i64) -> Result<(), String> {
    let g = mobius_apply(h, [&m[0], &m[1], &m[2], &m[3]]).map_err(|e| e.to_string())?;
    let s1 = schwarzian_norm(h).map_err(|e| e.to_string())?;
    let s2 = schwarzian_norm(&g).map_err(|e| e.to_string())?;
    let known = s1.truncation().min(s2.truncation());
    if known < Rational::from(min_order) {
        return Err(format!("only known to O(q^{known})"));
    }
    same(&s1, &s2)
}

/// `{h(kτ), τ} = k² {h, τ}(kτ)` in normalized units.
pub fn cocycle(h: &S, k: u64) -> Result<(), String> {
    let lhs = schwarzian_norm(&h.substitute_power(k)).map_err(|e| e.to_string())?;
    let rhs = schwarzian_norm(h)
        .map_err(|e| e.to_string())?
        .substitute_power(k)
        .scale_rat(&Rational::from((k * k) as i64));
    same(&lhs, &rhs)
}

/// Every fractional-exponent coefficient of `{(1−λ)^{1/n}, τ}` vanishes.
pub fn half_integer_cancellation(n: i64, order: i64) -> Result<(), String> {
    let base =
        form(FormName::OneMinusLambda, order, Backend::Rational).map_err(|e| e.to_string())?;
    let h = base.powf(&rat(1, n), false).map_err(|e| e.to_string())?.0;
    let h = h.as_rational().ok_or("rational backend expected")?.clone();
    if h.has_integer_exponents() {
        return Err("(1-λ)^(1/n) should carry half-integer exponents".into());
    }
    let s = schwarzian_norm(&h).map_err(|e| e.to_string())?;
    let frac = s.fractional_terms();
    if frac.is_empty() {
        Ok(())
    } else {
        Err(format!(
            "{} fractional terms survive, first at q^{}",
            frac.len(),
            frac[0].0
        ))
    }
}
