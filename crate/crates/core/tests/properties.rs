mod common;

use common::*;
use proptest::prelude::*;
use schwarz_core::forms::{form, rational_form, FormName};
use schwarz_core::frobenius::{ode_residual, round_trip, solve_h, solve_y1, FrobeniusTarget};
use schwarz_core::groups::{
    classify, coset_enumerate, covering_degree, genus, kernel_descriptor, ClassificationInput,
    GroupId, Presentation, Variant, Word,
};
use schwarz_core::scalar::rat;
use schwarz_core::schwarz::{fit_weight4, schwarzian_norm};
use schwarz_core::{Backend, Rational, Series};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as i64, b as i64) as u64 * b
}

/// The branch denominator is the least one that expresses every exponent.
fn minimal_den(s: &S) -> Result<(), String> {
    if s.is_zero() {
        return Ok(());
    }
    let need = s
        .terms()
        .map(|(e, _)| u64::try_from(e.denominator().clone()).unwrap())
        .fold(1, lcm);
    if need == s.branch_den() {
        Ok(())
    } else {
        Err(format!(
            "branch_den {} but exponents need {need}",
            s.branch_den()
        ))
    }
}

fn check(r: Result<(), String>) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms_hold(a in series(), b in series(), c in series()) {
        check(ring_axioms(&a, &b, &c))?;
    }

    #[test]
    fn d_is_a_derivation(a in series(), b in series()) {
        check(derivation(&a, &b))?;
    }

    #[test]
    fn schwarzian_is_mobius_invariant(h in univalent(39), m in mobius_matrix()) {
        check(mobius_invariance(&h, &m, 30))?;
    }

    #[test]
    fn schwarzian_cocycle_under_substitution(h in univalent(20), k in 2u64..=3) {
        check(cocycle(&h, k))?;
    }

    #[test]
    fn nth_root_then_power(g in univalent(12), n in 2i64..=4) {
        let h = g.pow_int(n).unwrap();
        let root = h.nth_root(n as u64).unwrap();
        check(same(&root.pow_int(n).unwrap(), &h))?;
    }

    #[test]
    fn exp_of_log_is_identity(den in 1u64..=3, tail in prop::collection::vec(small_rational(), 3..12)) {
        let mut coeffs = vec![Rational::ONE];
        coeffs.extend(tail);
        let n = coeffs.len() as i64;
        let h = Series::new(den, 0, coeffs, n, ());
        check(same(&h.log1().unwrap().exp0().unwrap(), &h))?;
    }

    #[test]
    fn substitutions_compose(h in series(), j in 1u64..=4, k in 1u64..=4) {
        let lhs = h.substitute_power(j).substitute_power(k);
        prop_assert_eq!(lhs, h.substitute_power(j * k));
    }

    #[test]
    fn branch_denominator_stays_minimal(a in series(), b in series()) {
        for s in [a.add(&b).unwrap(), a.sub(&b).unwrap(), a.mul(&b).unwrap(), a.theta(), a.substitute_power(2)] {
            check(minimal_den(&s))?;
        }
    }
}

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=12, 2i64..=12).prop_filter("coprime", |(n, m)| gcd(*n, *m) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn frobenius_round_trip((n, m) in coprime_pair(), bn in 0i64..=20, bd in 1i64..=12) {
        let r = rat(n, m);
        let target = FrobeniusTarget::from_coefficients(&(&r * &r), &rat(bn, bd), 40).unwrap();
        let rt = round_trip(&target, 40).unwrap();
        prop_assert!(rt.ok(), "{:?}", rt.comparison.first_mismatch);
        prop_assert!(!rt.solution.logarithmic);
    }

    #[test]
    fn frobenius_solves_the_ode((n, m) in coprime_pair(), bn in -10i64..=10, bd in 1i64..=6) {
        let r = rat(n, m);
        let target = FrobeniusTarget::from_coefficients(&(&r * &r), &rat(bn, bd), 30).unwrap();
        let y1 = solve_y1(&target, 30).unwrap();
        prop_assert!(ode_residual(&target, &y1).unwrap().is_zero());
    }

    #[test]
    fn wronskian_is_constant((n, m) in coprime_pair(), bn in 0i64..=10, bd in 1i64..=6) {
        let r = rat(n, m);
        let target = FrobeniusTarget::from_coefficients(&(&r * &r), &rat(bn, bd), 30).unwrap();
        let sol = solve_h(&target, 30).unwrap();
        let y1 = &sol.y1;
        let y2 = y1.mul(&sol.h.body).unwrap();
        let w = y1.mul(&y2.theta()).unwrap().sub(&y2.mul(&y1.theta()).unwrap()).unwrap();
        prop_assert!(w.theta().is_zero());
        prop_assert_eq!(w.coeff_at(&Rational::ZERO), Some(Rational::ONE));
    }
}

#[test]
fn half_integer_coefficients_cancel() {
    for n in [2, 3, 5, 7] {
        half_integer_cancellation(n, 40).unwrap();
    }
}

#[test]
fn logarithmic_exactly_at_positive_integers() {
    let b = rat(1, 7);
    for r in [
        rat(1, 5),
        rat(1, 2),
        rat(2, 3),
        rat(1, 1),
        rat(2, 1),
        rat(3, 1),
    ] {
        let target = FrobeniusTarget::from_coefficients(&(&r * &r), &b, 40).unwrap();
        let rt = round_trip(&target, 40).unwrap();
        assert!(rt.ok(), "r = {r}");
        let integral = r.denominator() == &1u8.into();
        assert_eq!(rt.solution.logarithmic, integral, "r = {r}");
    }
}

#[test]
fn degree_closed_forms() {
    let a4 = genus(12, 3, 6);
    for n1 in 1..=20u32 {
        for n2 in 1..=20u32 {
            let d = covering_degree(&a4, 12, 3, 6, n1, n2).unwrap();
            assert_eq!(d, 2 * (n1 + n2) as i64 - 3);
            for n in 1..=12u32 {
                // D2n Fricke kernel: widths (2, 2n), genus 0
                let g = genus(2 * n as u64, 2, 2 * n);
                assert_eq!(g, Rational::ZERO);
                let closed = rat(n as i64 * (n1 as i64 - 1), 2) + Rational::from(n2);
                match covering_degree(&g, 2 * n as u64, 2, 2 * n, n1, n2) {
                    Ok(d) => assert_eq!(Rational::from(d), closed),
                    Err(_) => assert!(closed.denominator() != &1u8.into()),
                }
            }
        }
    }
}

#[test]
fn kernel_index_equals_group_order() {
    let mut groups = vec![
        GroupId::A4,
        GroupId::S4(Variant::Primary),
        GroupId::S4(Variant::Fricke),
        GroupId::A5(Variant::Primary),
        GroupId::A5(Variant::Fricke),
    ];
    for n in 1..=12 {
        groups.push(GroupId::D2n(n, Variant::Primary));
        groups.push(GroupId::D2n(n, Variant::Fricke));
    }
    for n in 1..=8 {
        groups.push(GroupId::cyclic(2 * n, Variant::Primary).unwrap());
        if n % 2 == 1 {
            groups.push(GroupId::cyclic(2 * n, Variant::Fricke).unwrap());
        }
    }
    for g in groups {
        let d = kernel_descriptor(&g).unwrap();
        assert_eq!(d.index, g.order(), "{g}");
        let words: Vec<Word> = d.ab_words.iter().map(|w| w.parse().unwrap()).collect();
        let mut p = Presentation::new(words);
        if !d.normal_closure {
            // the kernel also contains the commutator subgroup
            p = Presentation::new(
                p.relators()
                    .iter()
                    .cloned()
                    .chain(["[a,b]".parse().unwrap()]),
            );
        }
        assert_eq!(
            coset_enumerate(&p, 100_000).unwrap() as u64,
            g.order(),
            "{g}"
        );
    }
}

#[test]
fn classify_agrees_with_fit_and_frobenius() {
    // a = b = 1: S = E4, widths (1, 1)
    let input = ClassificationInput::from_squares(&Rational::ONE, &Rational::ONE).unwrap();
    assert!(!classify(input).unwrap().exists);
    let target = FrobeniusTarget::from_coefficients(&Rational::ONE, &Rational::ONE, 30).unwrap();
    assert!(solve_h(&target, 30).unwrap().logarithmic);

    // the Schwarzians of explicit solutions land in admissible cases
    let t = rational_form(FormName::THaupt, 40).unwrap();
    let lam = form(FormName::OneMinusLambda, 40, Backend::Rational).unwrap();
    let mut hs = vec![t];
    for n in [2, 3, 5] {
        hs.push(
            lam.powf(&rat(1, n), false)
                .unwrap()
                .0
                .as_rational()
                .unwrap()
                .clone(),
        );
    }
    for h in hs {
        let s = schwarzian_norm(&h).unwrap();
        let fit = fit_weight4(&s.into(), 20, None).unwrap();
        let (a, b) = (
            fit.coeff_phi4.as_exact().unwrap(),
            fit.coeff_theta2_8.as_exact().unwrap(),
        );
        let result = classify(ClassificationInput::from_squares(a, b).unwrap()).unwrap();
        assert!(result.exists, "{result}");
    }
}
