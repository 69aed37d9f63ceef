//! The identity catalog.

use super::expr::{c, f, Expr};
use super::{Check, IdentityRecord, Pair, Warning};
use crate::forms::FormName::{self, *};
use crate::groups::{GroupId, Variant};
use crate::scalar::{rat, Backend, Rational};

fn r(p: i64, q: i64) -> Rational {
    rat(p, q)
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&k| Rational::from(k)).collect()
}

fn monic_power(k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::ZERO; k + 1];
    v[k] = Rational::ONE;
    v
}

fn equal(label: &str, lhs: Expr, rhs: Expr) -> Check {
    Check::Equal {
        label: label.to_string(),
        lhs,
        rhs,
    }
}

fn fit(label: &str, h: Expr, expected: Vec<Pair>) -> Check {
    Check::Fit {
        label: label.to_string(),
        h,
        expected,
    }
}

fn sq(x: &Rational) -> Rational {
    x * x
}

fn record(
    id: &'static str,
    anchor: &'static str,
    default_order: i64,
    checks: Vec<Check>,
) -> IdentityRecord {
    IdentityRecord {
        id,
        anchor,
        backend: Backend::Rational,
        default_order,
        max_residual: None,
        warnings: Vec::new(),
        checks,
    }
}

fn warn(mut rec: IdentityRecord, code: &'static str, message: &str) -> IdentityRecord {
    rec.warnings.push(Warning {
        code,
        message: message.to_string(),
    });
    rec
}

fn eta(name: FormName) -> Expr {
    f(name)
}

fn theta_eta() -> IdentityRecord {
    let rec = record(
        "theta-eta-quotients",
        "θ2 = 2η(4τ)²/η(2τ), θ3 = η(2τ)⁵/(η(τ)²η(4τ)²), θ4 = η(τ)²/η(2τ)",
        50,
        vec![
            equal(
                "theta2(2τ) = 2 eta(4τ)^2/eta(2τ)",
                f(Theta2).subst(2),
                eta(Eta4).pow_int(2).div(eta(Eta2)).scale(r(2, 1)),
            ),
            equal(
                "theta3(2τ) = eta(2τ)^5/(eta(τ)^2 eta(4τ)^2)",
                f(Theta3).subst(2),
                eta(Eta2)
                    .pow_int(5)
                    .div(eta(Eta1).pow_int(2).mul(eta(Eta4).pow_int(2))),
            ),
            equal(
                "theta4(2τ) = eta(τ)^2/eta(2τ)",
                f(Theta4).subst(2),
                eta(Eta1).pow_int(2).div(eta(Eta2)),
            ),
        ],
    );
    warn(
        rec,
        "eta-quotient-argument",
        "with q = e^{2πiτ} the η-quotients equal θ2, θ3, θ4 evaluated at 2τ, not at τ",
    )
}

/// `(n₁ at the cusp 0, n₂ at ∞, d, P, Q)`.
type TetraRow = (u32, u32, i64, Vec<i64>, Vec<i64>);

fn tetra_table() -> IdentityRecord {
    let rows: [TetraRow; 5] = [
        (1, 2, 3, vec![0, 1], vec![-2, 1, 0, 1]),
        (1, 4, 7, vec![0, -14, 0, 0, 14, 0, 0, 1], vec![-2, 0, 0, 7]),
        (
            5,
            1,
            9,
            vec![0, 0, 0, 0, 0, 16, 0, 0, 1],
            vec![-256, 0, 0, 384, 0, 0, 240, 0, 0, 5],
        ),
        (
            1,
            5,
            9,
            vec![0, -1, 0, 0, 2],
            vec![10, 0, 0, -60, 0, 0, 12, 0, 0, 1],
        ),
        (
            5,
            2,
            11,
            vec![256, 0, 0, 0, 0, 0, 528, 0, 0, 55],
            vec![0, 0, 0, 0, 0, 352, 0, 0, 110, 0, 0, 1],
        ),
    ];
    let checks = rows
        .into_iter()
        .map(|(n1, n2, d, p, q)| {
            let at_zero = |n: u32| sq(&r(n as i64, 6));
            let at_inf = |n: u32| sq(&r(n as i64, 3));
            Check::TableRow {
                label: format!("(n1, n2, d) = ({n1}, {n2}, {d})"),
                t: f(THaupt),
                p: ints(&p),
                q: ints(&q),
                expected: vec![(at_zero(n1), at_inf(n2)), (at_zero(n2), at_inf(n1))],
                group: GroupId::A4,
                ramification: (n2, n1),
                degree: d,
            }
        })
        .collect();
    record(
        "tetra-table",
        "(n1, n2, d) = (1,2,3), (1,4,7), (5,1,9), (1,5,9), (5,2,11) with h a rational function of t",
        30,
        checks,
    )
}

fn dihedral_table() -> IdentityRecord {
    let t = |n: i64| f(OneMinusLambda).pow(r(1, n));
    let row =
        |n: u32, n1: u32, n2: u32, d: i64, p: Vec<Rational>, q: Vec<Rational>| Check::TableRow {
            label: format!("(n, n1, n2, d) = ({n}, {n1}, {n2}, {d})"),
            t: t(n as i64),
            p,
            q,
            expected: vec![(sq(&r(n2 as i64, 2 * n as i64)), sq(&r(n1 as i64, 2)))],
            group: GroupId::D2n(n, Variant::Fricke),
            ramification: (n1, n2),
            degree: d,
        };
    let mut checks = vec![
        row(2, 3, 1, 3, ints(&[-1, 3, -3, 1]), ints(&[1, 0, 3])),
        row(3, 3, 1, 4, ints(&[-1, 2, 0, -2, 1]), ints(&[1, 0, 0, 2])),
    ];
    for (n, n2) in [(2u32, 1u32), (3, 1), (3, 2), (4, 3), (5, 2), (5, 3)] {
        checks.push(row(
            n,
            1,
            n2,
            n2 as i64,
            monic_power(n2 as usize),
            ints(&[1]),
        ));
    }
    record(
        "dihedral-table",
        "(n, n1, n2, d) = (2,3,1,3), (3,3,1,4), (n,1,n2,n2) with t = (1−λ)^{1/n}",
        30,
        checks,
    )
}

/// `h±` with `x = (1 − λ)^{1/3}`.
fn octa_h(sign: i64) -> Expr {
    let x = || f(OneMinusLambda).pow(r(1, 3));
    let sqrt3 = || c(r(3, 1)).pow(r(1, 2));
    let s = c(Rational::ONE).add(x()).add(x().pow_int(2)).pow(r(1, 2));
    let num = sqrt3()
        .mul(Expr::I)
        .mul(x().add(c(Rational::ONE)))
        .add(Expr::I.mul(s).scale(r(2 * sign, 1)))
        .chop();
    let den = x().sub(c(Rational::ONE)).chop();
    num.div(den).pow(r(1, 2))
}

fn octa_relation(h: Expr) -> Expr {
    let two_i_sqrt3 = || Expr::I.mul(c(r(3, 1)).pow(r(1, 2))).scale(r(2, 1));
    let h2 = || h.clone().pow_int(2);
    let h4 = || h.clone().pow_int(4);
    let num = h4().add(two_i_sqrt3().mul(h2())).add(c(Rational::ONE));
    let den = h4().sub(two_i_sqrt3().mul(h2())).add(c(Rational::ONE));
    num.div(den)
}

fn octahedral(id: &'static str, anchor: &'static str, checks: Vec<Check>) -> IdentityRecord {
    IdentityRecord {
        id,
        anchor,
        backend: Backend::Complex { precision: 256 },
        default_order: 30,
        max_residual: Some(1e-40),
        warnings: Vec::new(),
        checks,
    }
}

pub fn catalog() -> Vec<IdentityRecord> {
    let one = || c(Rational::ONE);
    let lambda = || f(Lambda);
    let mut v = vec![
        record(
            "theta-jacobi",
            "θ3^4 = θ2^4 + θ4^4",
            50,
            vec![equal(
                "theta3^4 = theta2^4 + theta4^4",
                f(Theta3).pow_int(4),
                f(Theta2).pow_int(4).add(f(Theta4).pow_int(4)),
            )],
        ),
        record(
            "e4-theta",
            "E4 = θ2^8 + (θ3θ4)^4",
            50,
            vec![equal(
                "E4 = theta2^8 + (theta3 theta4)^4",
                f(E4),
                f(Theta2)
                    .pow_int(8)
                    .add(f(Theta3).mul(f(Theta4)).pow_int(4)),
            )],
        ),
        theta_eta(),
        record(
            "lambda-schwarz",
            "{λ, τ} = π²/2 E4",
            50,
            vec![equal(
                "{lambda}/2π² = E4/4",
                lambda().schwarz(),
                f(E4).scale(r(1, 4)),
            )],
        ),
        record(
            "t-schwarz",
            "{t, τ} = 2π²(1/6)² θ2^8 + 2π²(1/3)² (θ3θ4)^4",
            50,
            vec![fit(
                "t = eta(2τ)eta(3τ)^3/(eta(τ)eta(6τ)^3)",
                f(THaupt),
                vec![(r(1, 36), r(1, 9))],
            )],
        ),
        tetra_table(),
        record(
            "dihedral-pow",
            "{(1−λ)^r, τ} = π²/2 (θ3θ4)^4 + π²/2 r² (θ2^8)",
            50,
            [r(1, 2), r(1, 3), r(2, 5), r(3, 4)]
                .iter()
                .map(|e| {
                    fit(
                        &format!("(1 - lambda)^({e})"),
                        f(OneMinusLambda).pow(e.clone()),
                        vec![(sq(e) / Rational::from(4), r(1, 4))],
                    )
                })
                .collect(),
        ),
        record(
            "dihedral-lambda",
            "{λ^r, τ} = π²/2 (θ2θ3)^4 + π²/2 r² (θ4^8)",
            50,
            [r(1, 2), r(1, 3)]
                .iter()
                .map(|e| {
                    equal(
                        &format!("{{lambda^({e})}}/2π² = (theta2 theta3)^4/4 + r²/4 theta4^8"),
                        lambda().pow_normalized(e.clone()).schwarz(),
                        f(Theta2Theta3_4)
                            .scale(r(1, 4))
                            .add(f(Theta4_8).scale(sq(e) / Rational::from(4))),
                    )
                })
                .collect(),
        ),
        record(
            "dihedral-2tau",
            "{λ(2τ)^r, τ} = 2π² r² (θ3θ4)^4 + π²/8 θ2^8",
            50,
            [r(1, 2), r(1, 3)]
                .iter()
                .map(|e| {
                    equal(
                        &format!("{{lambda(2τ)^({e})}}/2π² = r² phi4 + theta2^8/16"),
                        lambda().subst(2).pow_normalized(e.clone()).schwarz(),
                        f(Phi4).scale(sq(e)).add(f(Theta2_8).scale(r(1, 16))),
                    )
                })
                .collect(),
        ),
        dihedral_table(),
        octahedral(
            "octa-x-relation",
            "x = (h^4 + 2i√3 h^2 + 1)/(h^4 − 2i√3 h^2 + 1), h− = 1/h+",
            vec![
                equal(
                    "x = R(h+)",
                    f(OneMinusLambda).pow(r(1, 3)),
                    octa_relation(octa_h(1)),
                ),
                equal(
                    "x = R(h-)",
                    f(OneMinusLambda).pow(r(1, 3)),
                    octa_relation(octa_h(-1)),
                ),
                equal("h- h+ = 1", octa_h(-1).mul(octa_h(1)), one()),
            ],
        ),
        octahedral(
            "octa-schwarz",
            "h± = √((√3 i(x+1) ± 2i√(1+x+x²))/(x−1)) are hauptmoduln for N(T^4, R^3)",
            vec![
                fit("h+", octa_h(1), vec![(r(1, 36), r(1, 16))]),
                fit("h-", octa_h(-1), vec![(r(1, 36), r(1, 16))]),
            ],
        ),
        warn(
            record(
                "omega2-lambda",
                "ω2 = 16 λ²/(λ−1)",
                50,
                vec![equal(
                    "omega2 = 16 lambda^2/(1 - lambda)",
                    f(Omega2),
                    lambda().pow_int(2).scale(r(16, 1)).div(f(OneMinusLambda)),
                )],
            ),
            "sign-convention",
            "the identity holds as ω2 = 16λ²/(1−λ); the printed denominator λ−1 flips the sign",
        ),
        record(
            "hyperelliptic",
            "y² = x + 64 x^{n+1} (n even), y² = 1 + 64 x^n (n odd)",
            50,
            vec![equal(
                "((lambda - 2)/lambda)^2 = 1 + 64/omega2",
                f(LamOver).pow_int(2),
                one().add(c(r(64, 1)).div(f(Omega2))),
            )],
        ),
        record(
            "gamma04-haupt",
            "{(λ−2)/λ · ω2^{1/2}, τ} = 2π² (θ3θ4)^4 + 2π² 1/16 (θ2)^8",
            50,
            vec![fit(
                "(lambda - 2)/lambda omega2^(1/2)",
                f(LamOver).mul(f(Omega2).pow_normalized(r(1, 2))),
                vec![(r(1, 16), Rational::ONE)],
            )],
        ),
        warn(
            record(
                "schwarz-power-rule",
                "{q, τ} = 4π²",
                50,
                [r(1, 5), r(1, 2), r(1, 1), r(3, 1)]
                    .iter()
                    .map(|e| {
                        equal(
                            &format!("{{q^({e})}}/2π² = r²"),
                            Expr::Monomial(e.clone()).schwarz(),
                            c(sq(e)),
                        )
                    })
                    .collect(),
            ),
            "schwarzian-constant",
            "with q = e^{2πiτ}, {q, τ} = 2π² (not 4π²); the normalized value of {q^r, τ} is r²",
        ),
        record(
            "frobenius-roundtrip",
            "h is a linear fractional transformation of q^{n1/m1} Σ a_i q^i",
            40,
            [
                (1, 3, 1, 6),
                (1, 2, 1, 2),
                (2, 5, 1, 4),
                (1, 4, 3, 10),
                (1, 1, 1, 2),
                (3, 2, 1, 4),
            ]
            .iter()
            .map(|&(n1, m1, n2, m2)| Check::Frobenius {
                phi4: sq(&r(n1, m1)),
                theta2_8: sq(&r(n2, m2)),
            })
            .collect(),
        ),
    ];
    v.sort_by_key(|rec| rec.id);
    v
}
