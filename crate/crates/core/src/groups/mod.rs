//! Finite quotients of `Γ̄₀(2) ≅ ℤ ∗ ℤ₂`, their kernels, genera and the
//! covering degree of solutions.

mod classify;
mod coset;

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

pub use classify::{classify, ClassificationInput, ClassificationResult, Rationale};
pub use coset::{
    coset_enumerate, enumerate, CosetTable, Letter, Presentation, Word, DEFAULT_MAX_COSETS,
};

use crate::error::{Error, Result};
use crate::scalar::{format_rational_short, is_integer, Rational};

/// Which of the two kernels related by the Fricke involution.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Primary,
    Fricke,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Primary => "primary",
            Variant::Fricke => "fricke",
        })
    }
}

/// Image of a projective representation with torsion-free kernel.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupId {
    A4,
    S4(Variant),
    A5(Variant),
    D2n(u32, Variant),
    C2n(u32, Variant),
}

impl GroupId {
    /// The cyclic image of the given order. Odd orders would force the
    /// elliptic element `RT⁻¹` into the kernel.
    pub fn cyclic(order: u32, variant: Variant) -> Result<GroupId> {
        if order == 0 || order % 2 == 1 {
            return Err(Error::NoTorsionFreeKernel(format!(
                "C{order}: the order-2 element RT^-1 would lie in the kernel"
            )));
        }
        Ok(GroupId::C2n(order / 2, variant))
    }

    pub fn order(&self) -> u64 {
        match *self {
            GroupId::A4 => 12,
            GroupId::S4(_) => 24,
            GroupId::A5(_) => 60,
            GroupId::D2n(n, _) | GroupId::C2n(n, _) => 2 * n as u64,
        }
    }

    pub fn variant(&self) -> Variant {
        match *self {
            GroupId::A4 => Variant::Primary,
            GroupId::S4(v) | GroupId::A5(v) | GroupId::D2n(_, v) | GroupId::C2n(_, v) => v,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            GroupId::A4 => "A4",
            GroupId::S4(_) => "S4",
            GroupId::A5(_) => "A5",
            GroupId::D2n(..) => "D2n",
            GroupId::C2n(..) => "C2n",
        }
    }

    pub fn n(&self) -> Option<u32> {
        match *self {
            GroupId::D2n(n, _) | GroupId::C2n(n, _) => Some(n),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family(),
            "n": self.n(),
            "variant": self.variant().to_string(),
            "order": self.order(),
        })
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupId::A4 => f.write_str("A4"),
            GroupId::S4(v) => write!(f, "S4 ({v})"),
            GroupId::A5(v) => write!(f, "A5 ({v})"),
            GroupId::D2n(n, v) => write!(f, "D{} ({v})", 2 * n),
            GroupId::C2n(n, v) => write!(f, "C{} ({v})", 2 * n),
        }
    }
}

impl FromStr for GroupId {
    type Err = Error;

    /// `A4`, `S4`, `S4'`, `D10`, `D10'`, `C6`, ... where a trailing `'`
    /// selects the Fricke variant.
    fn from_str(s: &str) -> Result<GroupId> {
        let s = s.trim();
        let (body, variant) = match s.strip_suffix('\'') {
            Some(b) => (b, Variant::Fricke),
            None => (s, Variant::Primary),
        };
        let bad = || Error::Parse(format!("unknown group {s:?}"));
        let order = |t: &str| t.parse::<u32>().map_err(|_| bad());
        match body {
            "A4" if variant == Variant::Primary => Ok(GroupId::A4),
            "S4" => Ok(GroupId::S4(variant)),
            "A5" => Ok(GroupId::A5(variant)),
            _ if body.starts_with('D') => {
                let k = order(&body[1..])?;
                if k == 0 || k % 2 == 1 {
                    return Err(bad());
                }
                Ok(GroupId::D2n(k / 2, variant))
            }
            _ if body.starts_with('C') => GroupId::cyclic(order(&body[1..])?, variant),
            _ => Err(bad()),
        }
    }
}

/// Generators of a kernel, checked by enumerating the quotient.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelDescriptor {
    pub group: GroupId,
    /// Human-readable name of the kernel.
    pub name: String,
    /// Generators as words in `T, R`.
    pub generators: Vec<String>,
    /// The same generators in `a, b`.
    pub ab_words: Vec<String>,
    /// Normal closure of `generators` (otherwise the listed words together
    /// with the commutator subgroup already generate a normal subgroup).
    pub normal_closure: bool,
    /// Cusp widths at ∞ and at 0.
    pub widths: (u32, u32),
    /// Index in `Γ̄₀(2)`, from the enumeration.
    pub index: u64,
}

impl KernelDescriptor {
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.to_json(),
            "kernel": self.name,
            "generators": self.generators,
            "ab_words": self.ab_words,
            "normal_closure": self.normal_closure,
            "widths": [self.widths.0, self.widths.1],
            "index": self.index,
        })
    }
}

fn tr_power(g: char, k: u32) -> String {
    if k == 1 {
        g.to_string()
    } else {
        format!("{g}^{k}")
    }
}

fn generators(g: &GroupId) -> Result<(Vec<String>, bool, String)> {
    let pair = |i: u32, j: u32| {
        let gens = vec![tr_power('T', i), tr_power('R', j)];
        let name = format!("N({}, {})", gens[0], gens[1]);
        (gens, true, name)
    };
    let cyc = |gens: Vec<String>| {
        let name = format!("<{}, [T,R]>", gens.join(", "));
        let mut all = gens;
        all.push("[T,R]".to_string());
        (all, false, name)
    };
    Ok(match *g {
        GroupId::A4 => {
            let (gens, nc, _) = pair(3, 3);
            (gens, nc, "Γ0(2) ∩ Γ(3)".to_string())
        }
        GroupId::S4(Variant::Primary) => pair(4, 3),
        GroupId::S4(Variant::Fricke) => pair(3, 4),
        GroupId::A5(Variant::Primary) => pair(5, 3),
        GroupId::A5(Variant::Fricke) => pair(3, 5),
        GroupId::D2n(0, _) | GroupId::C2n(0, _) => {
            return Err(Error::InvalidArgument("n must be at least 1".into()))
        }
        GroupId::D2n(n, Variant::Primary) => pair(n, 2),
        GroupId::D2n(n, Variant::Fricke) => pair(2, n),
        GroupId::C2n(n, v) if n % 2 == 0 => {
            if v == Variant::Fricke {
                return Err(Error::InvalidArgument(format!(
                    "C{} with n even has a single kernel",
                    2 * n
                )));
            }
            cyc(vec![
                tr_power('T', 2 * n),
                tr_power('R', 2 * n),
                format!("{} R^-1", tr_power('T', n + 1)),
            ])
        }
        GroupId::C2n(n, Variant::Primary) => cyc(vec![
            tr_power('T', n),
            tr_power('R', 2 * n),
            format!("{} T^-1", tr_power('R', n + 1)),
        ]),
        GroupId::C2n(n, Variant::Fricke) => cyc(vec![
            tr_power('T', 2 * n),
            tr_power('R', n),
            format!("{} R^-1", tr_power('T', n + 1)),
        ]),
    })
}

/// Kernel generators and cusp widths. The widths are read off the
/// enumerated quotient: `m₁` is the order of `T`, `m₂` twice the order of `R`.
pub fn kernel_descriptor(g: &GroupId) -> Result<KernelDescriptor> {
    let (gens, normal_closure, name) = generators(g)?;
    let words = gens
        .iter()
        .map(|w| w.parse::<Word>())
        .collect::<Result<Vec<_>>>()?;
    let table = enumerate(
        &Presentation::new(words.iter().cloned()),
        DEFAULT_MAX_COSETS,
    )?;
    if table.is_trivial(&Word::b()) {
        return Err(Error::NoTorsionFreeKernel(format!(
            "{g}: RT^-1 lies in {name}"
        )));
    }
    let m1 = table.element_order(&Word::t()) as u32;
    let m2 = 2 * table.element_order(&Word::r()) as u32;
    Ok(KernelDescriptor {
        group: *g,
        name,
        generators: gens,
        ab_words: words.iter().map(|w| w.to_string()).collect(),
        normal_closure,
        widths: (m1, m2),
        index: table.order() as u64,
    })
}

/// `g = 1 + |G| (1/4 − 1/(2m₁) − 1/m₂)`.
pub fn genus(group_order: u64, m1: u32, m2: u32) -> Rational {
    let g = Rational::from(group_order);
    let term = Rational::from_parts(1.into(), 4u8.into())
        - Rational::from_parts(1.into(), (2 * m1 as u64).into())
        - Rational::from_parts(1.into(), (m2 as u64).into());
    Rational::ONE + g * term
}

/// Riemann–Hurwitz for `h : X(Γ) → ℙ¹` with ramification `n₁` over the
/// cusps above ∞ and `n₂` over those above 0:
/// `d = 1 − g + (μ/2m₁)(n₁ − 1) + (μ/m₂)(n₂ − 1)`, `μ = [Γ̄₀(2) : Γ]`.
pub fn covering_degree(
    genus: &Rational,
    group_order: u64,
    m1: u32,
    m2: u32,
    n1: u32,
    n2: u32,
) -> Result<i64> {
    let mu = Rational::from(group_order);
    let d = Rational::ONE - genus
        + &mu / Rational::from(2 * m1 as u64) * Rational::from(n1 as i64 - 1)
        + &mu / Rational::from(m2 as u64) * Rational::from(n2 as i64 - 1);
    if !is_integer(&d) || d < Rational::ONE {
        return Err(Error::InconsistentRamification(format!(
            "degree {} for |G| = {group_order}, widths ({m1},{m2}), ramification ({n1},{n2})",
            format_rational_short(&d)
        )));
    }
    Ok(i64::try_from(d.numerator().clone()).expect("degree fits in i64"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub descriptor: KernelDescriptor,
    pub genus: Rational,
}

impl TableRow {
    pub fn to_json(&self) -> Value {
        let mut v = self.descriptor.to_json();
        v["genus"] = Value::String(format_rational_short(&self.genus));
        v
    }
}

/// Every kernel in the classification, with `n` running up to `n_max` for
/// the dihedral and cyclic families.
pub fn summary_table(n_max: u32) -> Result<Vec<TableRow>> {
    let mut groups = vec![
        GroupId::A4,
        GroupId::S4(Variant::Primary),
        GroupId::S4(Variant::Fricke),
        GroupId::A5(Variant::Primary),
        GroupId::A5(Variant::Fricke),
    ];
    for n in 1..=n_max {
        groups.push(GroupId::D2n(n, Variant::Primary));
        groups.push(GroupId::D2n(n, Variant::Fricke));
    }
    for n in 1..=n_max {
        groups.push(GroupId::C2n(n, Variant::Primary));
        if n % 2 == 1 {
            groups.push(GroupId::C2n(n, Variant::Fricke));
        }
    }
    groups
        .iter()
        .map(|g| {
            let descriptor = kernel_descriptor(g)?;
            let genus = genus(descriptor.index, descriptor.widths.0, descriptor.widths.1);
            Ok(TableRow { descriptor, genus })
        })
        .collect()
}

pub fn format_table(rows: &[TableRow]) -> String {
    let mut out = format!(
        "{:<14} {:<40} {:>10} {:>6}\n",
        "G", "kernel", "(m1,m2)", "genus"
    );
    for row in rows {
        let d = &row.descriptor;
        out.push_str(&format!(
            "{:<14} {:<40} {:>10} {:>6}\n",
            d.group.to_string(),
            d.name,
            format!("({},{})", d.widths.0, d.widths.1),
            format_rational_short(&row.genus)
        ));
    }
    out
}
