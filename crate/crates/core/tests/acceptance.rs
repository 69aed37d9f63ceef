//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestCaseError, TestRunner};
use schwarz_core::forms::{form, poly_degree, rational_eval, FormName};
use schwarz_core::frobenius::{round_trip, FrobeniusTarget};
use schwarz_core::groups::{
    classify, coset_enumerate, covering_degree, genus, summary_table, ClassificationInput, GroupId,
    Presentation, Rationale, Variant,
};
use schwarz_core::scalar::rat;
use schwarz_core::schwarz::{fit_weight4, schwarzian_any};
use schwarz_core::verify::{find, run_identity, Check, Status, Verdict};
use schwarz_core::{AnySeries, Backend, Error, Rational, Series};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: &str, order: i64) -> Result<Verdict, String> {
    let rec = find(id).ok_or_else(|| format!("record {id} missing"))?;
    let v = run_identity(&rec, order);
    ensure(v.status == Status::Pass, || format!("{v}"))?;
    Ok(v)
}

fn sq(x: &Rational) -> Rational {
    x * x
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn rational(s: &AnySeries) -> Result<&Series<Rational>, String> {
    s.as_rational()
        .ok_or_else(|| "expected a rational series".to_string())
}

/// `1 + 240 Σ σ₃(n) qⁿ` from divisor sums.
fn e4_oracle(order: usize) -> Vec<Rational> {
    (0..order)
        .map(|n| {
            if n == 0 {
                return Rational::ONE;
            }
            let s: i64 = (1..=n as i64)
                .filter(|d| n as i64 % d == 0)
                .map(|d| d * d * d)
                .sum();
            Rational::from(240 * s)
        })
        .collect()
}

/// `Σ_{n∈ℤ} (±1)ⁿ q^{(n+shift)²/2}` as exponent/coefficient pairs below `q^order`.
fn theta_oracle(shift: Rational, alternating: bool, order: i64) -> Vec<(Rational, Rational)> {
    let mut terms: Vec<(Rational, Rational)> = Vec::new();
    let bound = Rational::from(order);
    for n in -60i64..=60 {
        let x = Rational::from(n) + &shift;
        let e = &x * &x / Rational::from(2);
        if e >= bound {
            continue;
        }
        let c = if alternating && n % 2 != 0 {
            -Rational::ONE
        } else {
            Rational::ONE
        };
        match terms.iter_mut().find(|(f, _)| *f == e) {
            Some((_, acc)) => *acc += c,
            None => terms.push((e, c)),
        }
    }
    terms
}

fn matches_oracle(
    name: FormName,
    terms: &[(Rational, Rational)],
    order: i64,
) -> Result<(), String> {
    let s = form(name, order, Backend::Rational).map_err(|e| e.to_string())?;
    let s = rational(&s)?;
    let oracle =
        Series::from_terms(terms, &Rational::from(order), ()).map_err(|e| e.to_string())?;
    ensure(s.sub(&oracle).map_err(|e| e.to_string())?.is_zero(), || {
        format!("{name} disagrees with its lattice sum")
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let e4 = form(FormName::E4, 50, Backend::Rational).map_err(|e| e.to_string())?;
    let oracle = Series::from_power_series(e4_oracle(50), 50, ());
    ensure(rational(&e4)?.sub(&oracle).unwrap().is_zero(), || {
        "E4 ≠ 1 + 240Σσ₃(n)qⁿ".into()
    })?;
    matches_oracle(FormName::Theta2, &theta_oracle(rat(1, 2), false, 50), 50)?;
    matches_oracle(
        FormName::Theta3,
        &theta_oracle(Rational::ZERO, false, 50),
        50,
    )?;
    matches_oracle(
        FormName::Theta4,
        &theta_oracle(Rational::ZERO, true, 50),
        50,
    )?;

    let ids = [
        "theta-jacobi",
        "e4-theta",
        "lambda-schwarz",
        "t-schwarz",
        "dihedral-pow",
        "dihedral-2tau",
        "omega2-lambda",
        "hyperelliptic",
        "gamma04-haupt",
        "schwarz-power-rule",
    ];
    for id in ids {
        let v = run(id, 50)?;
        ensure(v.backend == Backend::Rational, || {
            format!("{id} ran on {}", v.backend)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} records pass at order 50 in {:.1?}",
        ids.len(),
        elapsed
    ))
}

fn criterion_2() -> Outcome {
    run("tetra-table", 30)?;
    let rec = find("tetra-table").unwrap();
    let t = form(FormName::THaupt, 40, Backend::Rational).map_err(|e| e.to_string())?;
    let g = genus(12, 3, 6);
    let mut orientations = Vec::new();
    for check in &rec.checks {
        let Check::TableRow {
            p,
            q,
            ramification: (n_inf, n_zero),
            degree,
            group,
            ..
        } = check
        else {
            return Err("tetra-table holds a non-table check".into());
        };
        ensure(*group == GroupId::A4, || {
            format!("row {degree} tagged {group}")
        })?;
        // row labels (n1, n2) as printed: n1 at the cusp 0, n2 at ∞
        let (n1, n2) = (*n_zero as i64, *n_inf as i64);
        let h = rational_eval(p, q, &t).map_err(|e| e.to_string())?;
        let s = schwarzian_any(&h).map_err(|e| e.to_string())?;
        let fit = fit_weight4(&s, 30, None).map_err(|e| e.to_string())?;
        ensure(fit.residual_ok, || {
            format!("row d={degree}: residual {}", fit)
        })?;
        let got = (
            fit.coeff_theta2_8.as_exact().unwrap().clone(),
            fit.coeff_phi4.as_exact().unwrap().clone(),
        );
        let pattern = [sq(&rat(n1, 3)), sq(&rat(n2, 6))];
        let relabeled = [sq(&rat(n2, 3)), sq(&rat(n1, 6))];
        let as_set = |x: &[Rational; 2]| {
            (got.0 == x[0] && got.1 == x[1]) || (got.0 == x[1] && got.1 == x[0])
        };
        let orientation = if as_set(&pattern) {
            "as printed"
        } else if as_set(&relabeled) {
            "n1↔n2"
        } else {
            return Err(format!(
                "row ({n1},{n2},{degree}): fitted ({}, {})",
                got.0, got.1
            ));
        };
        orientations.push(format!(
            "({n1},{n2},{degree}) θ2^8={} Φ4={} [{orientation}]",
            got.0, got.1
        ));
        let deg = poly_degree(p).max(poly_degree(q)) as i64;
        ensure(deg == *degree, || {
            format!("max(deg P, deg Q) = {deg} ≠ {degree}")
        })?;
        let cd = covering_degree(&g, 12, 3, 6, *n_inf, *n_zero).map_err(|e| e.to_string())?;
        ensure(cd == *degree && cd == 2 * (n1 + n2) - 3, || {
            format!("covering degree {cd} ≠ {degree}")
        })?;
    }
    ensure(orientations.len() == 5, || {
        format!("{} rows", orientations.len())
    })?;
    Ok(orientations.join("; "))
}

fn criterion_3() -> Outcome {
    for id in ["dihedral-pow", "dihedral-2tau", "dihedral-table"] {
        run(id, 30)?;
    }
    let rec = find("dihedral-table").unwrap();
    let mut rows = Vec::new();
    for check in &rec.checks {
        let Check::TableRow {
            p,
            q,
            ramification: (n1, n2),
            degree,
            group,
            ..
        } = check
        else {
            return Err("dihedral-table holds a non-table check".into());
        };
        let GroupId::D2n(n, Variant::Fricke) = *group else {
            return Err(format!("row tagged {group}"));
        };
        let closed = rat(n as i64 * (*n1 as i64 - 1), 2) + Rational::from(*n2);
        ensure(closed == Rational::from(*degree), || {
            format!("(n/2)(n1-1)+n2 = {closed} ≠ {degree}")
        })?;
        let g = genus(2 * n as u64, 2, 2 * n);
        let cd =
            covering_degree(&g, 2 * n as u64, 2, 2 * n, *n1, *n2).map_err(|e| e.to_string())?;
        ensure(cd == *degree, || format!("covering degree {cd} ≠ {degree}"))?;
        let deg = poly_degree(p).max(poly_degree(q)) as i64;
        ensure(deg == *degree, || {
            format!("max(deg P, deg Q) = {deg} ≠ {degree}")
        })?;
        rows.push(format!("({n},{n1},{n2},{degree})"));
    }
    Ok(format!("rows {}", rows.join(" ")))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for id in ["octa-x-relation", "octa-schwarz"] {
        let v = run(id, 30)?;
        ensure(v.backend == Backend::Complex { precision: 256 }, || {
            format!("{id} on {}", v.backend)
        })?;
        for c in &v.checks {
            ensure(c.max_residual < 1e-40, || {
                format!("{id}/{}: residual {:e}", c.label, c.max_residual)
            })?;
            worst = worst.max(c.max_residual);
        }
    }
    Ok(format!(
        "x-relation, h-·h+ = 1 and fit (1/36, 1/16) at 256 bits; max residual {worst:.1e}"
    ))
}

fn criterion_5() -> Outcome {
    let ratios = |range: std::ops::RangeInclusive<i64>| {
        let mut v = Vec::new();
        for m in range {
            for n in 1..=3 {
                if gcd(n, m) == 1 {
                    v.push(rat(n, m));
                }
            }
        }
        v
    };
    let (inf, zero) = (ratios(2..=6), ratios(2..=10));
    let mut count = 0;
    for r1 in &inf {
        for r2 in &zero {
            let target = FrobeniusTarget::from_coefficients(&sq(r1), &sq(r2), 40)
                .map_err(|e| e.to_string())?;
            let rt = round_trip(&target, 40).map_err(|e| e.to_string())?;
            ensure(rt.ok(), || {
                format!("({r1}, {r2}): {:?}", rt.comparison.first_mismatch)
            })?;
            ensure(!rt.solution.logarithmic, || {
                format!("({r1}, {r2}) flagged logarithmic")
            })?;
            count += 1;
        }
    }
    ensure(count == 190, || format!("{count} pairs"))?;
    for r in 1..=3i64 {
        let target = FrobeniusTarget::from_coefficients(&Rational::from(r * r), &rat(1, 7), 40)
            .map_err(|e| e.to_string())?;
        let rt = round_trip(&target, 40).map_err(|e| e.to_string())?;
        ensure(rt.ok() && rt.solution.logarithmic, || {
            format!("r = {r}: log flag not raised")
        })?;
    }
    match FrobeniusTarget::from_coefficients(&Rational::ZERO, &Rational::ONE, 40) {
        Err(Error::VanishesAtCusp) => {}
        other => return Err(format!("θ2^8 alone accepted: {other:?}")),
    }
    Ok(format!(
        "{count} pairs round-trip at order 40; log flag at r = 1, 2, 3; θ2^8-only rejected"
    ))
}

/// The published kernel table as `(kernel, m1, m2, genus)`.
fn published_table(n_max: u32) -> Vec<(String, u32, u32, Rational)> {
    let pw = |x: &str, k: u32| {
        if k == 1 {
            x.to_string()
        } else {
            format!("{x}^{k}")
        }
    };
    let mut rows = vec![
        ("Γ0(2)∩Γ(3)".to_string(), 3, 6, Rational::ZERO),
        ("N(T^4,R^3)".into(), 4, 6, Rational::ZERO),
        ("N(T^3,R^4)".into(), 3, 8, Rational::ZERO),
        ("N(T^5,R^3)".into(), 5, 6, Rational::ZERO),
        ("N(T^3,R^5)".into(), 3, 10, Rational::ZERO),
    ];
    for n in 1..=n_max {
        rows.push((format!("N({},R^2)", pw("T", n)), n, 4, Rational::ZERO));
        rows.push((format!("N(T^2,{})", pw("R", n)), 2, 2 * n, Rational::ZERO));
    }
    for n in 1..=n_max {
        if n % 2 == 0 {
            let k = format!("<T^{},R^{},T^{}R^-1,[T,R]>", 2 * n, 2 * n, n + 1);
            rows.push((k, 2 * n, 4 * n, rat(n as i64, 2)));
        } else {
            let g = rat(n as i64 - 1, 2);
            let k = format!("<{},R^{},R^{}T^-1,[T,R]>", pw("T", n), 2 * n, n + 1);
            rows.push((k, n, 4 * n, g.clone()));
            let k = format!("<T^{},{},T^{}R^-1,[T,R]>", 2 * n, pw("R", n), n + 1);
            rows.push((k, 2 * n, 2 * n, g));
        }
    }
    rows
}

fn criterion_6() -> Outcome {
    let order = |rel: &str| -> Result<usize, String> {
        let p: Presentation = rel.parse().map_err(|e: Error| e.to_string())?;
        coset_enumerate(&p, 1_000_000).map_err(|e| e.to_string())
    };
    for (rel, want) in [("a^3,(ba)^3", 12), ("a^4,(ba)^3", 24), ("a^5,(ba)^3", 60)] {
        let got = order(rel)?;
        ensure(got == want, || format!("{rel}: {got} ≠ {want}"))?;
    }
    for n in 1..=12 {
        for rel in [format!("a^{n},(ba)^2"), format!("a^2,(ba)^{n}")] {
            let got = order(&rel)?;
            ensure(got == 2 * n, || format!("{rel}: {got} ≠ {}", 2 * n))?;
        }
    }
    let table = summary_table(12).map_err(|e| e.to_string())?;
    let published = published_table(12);
    ensure(table.len() == published.len(), || {
        format!("{} rows vs {}", table.len(), published.len())
    })?;
    let canon = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
    for (row, (kernel, m1, m2, g)) in table.iter().zip(&published) {
        let d = &row.descriptor;
        ensure(canon(&d.name) == *kernel, || {
            format!("kernel {} ≠ {kernel}", d.name)
        })?;
        ensure(d.widths == (*m1, *m2), || {
            format!("{kernel}: widths {:?}", d.widths)
        })?;
        ensure(row.genus == *g, || {
            format!("{kernel}: genus {} ≠ {g}", row.genus)
        })?;
    }
    Ok(format!(
        "orders 12/24/60, dihedral 2n for n ≤ 12, {} table rows match",
        table.len()
    ))
}

fn criterion_7() -> Outcome {
    let verdict = |n1: u32, m1: u32, n2: u32, m2: u32| {
        ClassificationInput::new(n1, m1, n2, m2)
            .and_then(classify)
            .map_err(|e| e.to_string())
    };
    let a4 = verdict(1, 3, 1, 6)?;
    ensure(a4.exists && a4.group == Some(GroupId::A4), || {
        format!("(3,6): {a4}")
    })?;
    ensure(a4.genus == Some(Rational::ZERO), || "(3,6) genus".into())?;
    for ((m1, m2), g) in [
        ((4, 6), GroupId::S4(Variant::Primary)),
        ((3, 8), GroupId::S4(Variant::Fricke)),
        ((5, 6), GroupId::A5(Variant::Primary)),
        ((3, 10), GroupId::A5(Variant::Fricke)),
    ] {
        let r = verdict(1, m1, 1, m2)?;
        ensure(r.exists && r.group == Some(g), || {
            format!("({m1},{m2}): {r}")
        })?;
    }
    for n in 1..=12u32 {
        let r = verdict(1, n, 3, 4)?;
        ensure(
            r.exists && matches!(r.group, Some(GroupId::D2n(..))),
            || format!("({n},4): {r}"),
        )?;
        let r = verdict(3, 2, 1, 2 * n)?;
        ensure(
            r.exists && matches!(r.group, Some(GroupId::D2n(..))),
            || format!("(2,{}): {r}", 2 * n),
        )?;
    }
    for (n1, m1, n2, m2) in [(1, 7, 1, 6), (1, 5, 2, 5), (2, 5, 1, 5)] {
        let r = verdict(n1, m1, n2, m2)?;
        ensure(!r.exists, || format!("({m1},{m2}) with a ≠ b accepted"))?;
    }
    for m in 2..=5u32 {
        let r = verdict(1, m, 1, m)?;
        ensure(
            r.exists
                && r.rationale == Rationale::EqualCoefficients
                && r.invariance_group == Some(format!("Γ({m})")),
            || format!("a = b, m = {m}: {r}"),
        )?;
    }
    let r = verdict(1, 6, 1, 6)?;
    ensure(!r.exists, || "a = b, m = 6 accepted".into())?;
    for (a, b) in [(Rational::ZERO, rat(1, 36)), (rat(1, 9), Rational::ZERO)] {
        let r = ClassificationInput::from_squares(&a, &b)
            .and_then(classify)
            .map_err(|e| e.to_string())?;
        ensure(
            !r.exists && r.rationale == Rationale::VanishesAtCusp,
            || format!("zero coefficient: {r}"),
        )?;
    }
    Ok("polyhedral, dihedral, Γ(m), and rejection goldens".into())
}

fn fail<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e}")
}

fn criterion_8() -> Outcome {
    use common::*;
    let cfg = Config {
        cases: 30,
        failure_persistence: None,
        ..Config::default()
    };
    let lift = |r: Result<(), String>| r.map_err(TestCaseError::fail);
    let mut runner = TestRunner::new(cfg.clone());
    runner
        .run(&(series(), series(), series()), |(a, b, c)| {
            lift(ring_axioms(&a, &b, &c))
        })
        .map_err(|e| fail("ring axioms", e))?;
    let mut runner = TestRunner::new(cfg.clone());
    runner
        .run(&(series(), series()), |(a, b)| lift(derivation(&a, &b)))
        .map_err(|e| fail("derivation", e))?;
    let mut runner = TestRunner::new(cfg.clone());
    runner
        .run(&(univalent(39), mobius_matrix()), |(h, m)| {
            lift(mobius_invariance(&h, &m, 30))
        })
        .map_err(|e| fail("Möbius invariance", e))?;
    for k in [2, 3] {
        let mut runner = TestRunner::new(cfg.clone());
        runner
            .run(&univalent(20), |h| lift(cocycle(&h, k)))
            .map_err(|e| fail("cocycle", e))?;
    }
    for n in [2, 3, 5] {
        half_integer_cancellation(n, 40).map_err(|e| format!("(1-λ)^(1/{n}): {e}"))?;
    }
    Ok("ring, derivation, Möbius, cocycle k=2,3 (30 cases each); (1-λ)^(1/n) n=2,3,5".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact identity suite", criterion_1),
        ("tetrahedral table", criterion_2),
        ("dihedral suite", criterion_3),
        ("octahedral", criterion_4),
        ("Frobenius sweep", criterion_5),
        ("group layer", criterion_6),
        ("classifier goldens", criterion_7),
        ("property suites", criterion_8),
    ];
    let results: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                scope.spawn(move || {
                    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
                        let msg = p
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panic".into());
                        Err(format!("panicked: {msg}"))
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), outcome)) in criteria.iter().zip(&results).enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
