//! Which `S = (n₁/m₁)²·(θ₃θ₄)⁴ + (n₂/m₂)²·θ₂⁸` admit modular solutions.
//!
//! `m₁` is the cusp width at ∞ and `m₂` the width at 0.

use std::fmt;

use serde_json::{json, Value};

use super::{covering_degree, genus, kernel_descriptor, GroupId, Variant};
use crate::error::{Error, Result};
use crate::scalar::{format_rational_short, rational_parts, rational_root, Rational};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exponent data at the two cusps. A zero numerator marks a vanishing
/// coefficient.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ClassificationInput {
    pub n1: u32,
    pub m1: u32,
    pub n2: u32,
    pub m2: u32,
}

impl ClassificationInput {
    /// Reduces `n/m` to lowest terms.
    pub fn new(n1: u32, m1: u32, n2: u32, m2: u32) -> Result<ClassificationInput> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::InvalidArgument(
                "cusp denominators must be positive".into(),
            ));
        }
        let reduce = |n: u32, m: u32| {
            if n == 0 {
                (0, 1)
            } else {
                let g = gcd(n, m);
                (n / g, m / g)
            }
        };
        let (n1, m1) = reduce(n1, m1);
        let (n2, m2) = reduce(n2, m2);
        Ok(ClassificationInput { n1, m1, n2, m2 })
    }

    /// From `n₁/m₁` and `n₂/m₂` given as nonnegative rationals.
    pub fn from_ratios(at_infinity: &Rational, at_zero: &Rational) -> Result<ClassificationInput> {
        let parts = |r: &Rational| -> Result<(u32, u32)> {
            if *r < Rational::ZERO {
                return Err(Error::InvalidArgument(format!(
                    "cusp exponent {} must be nonnegative",
                    format_rational_short(r)
                )));
            }
            rational_parts(r)
                .and_then(|(n, d)| Some((u32::try_from(n).ok()?, u32::try_from(d).ok()?)))
                .ok_or_else(|| Error::InvalidArgument("cusp exponent too large".into()))
        };
        let (n1, m1) = parts(at_infinity)?;
        let (n2, m2) = parts(at_zero)?;
        ClassificationInput::new(n1, m1, n2, m2)
    }

    /// From the normalized coefficients `(n₁/m₁)²` on `(θ₃θ₄)⁴` and
    /// `(n₂/m₂)²` on `θ₂⁸`.
    pub fn from_squares(
        coeff_phi4: &Rational,
        coeff_theta2_8: &Rational,
    ) -> Result<ClassificationInput> {
        let root = |c: &Rational| {
            if *c < Rational::ZERO {
                return Err(Error::NonSquareIndicial(format_rational_short(c)));
            }
            rational_root(c, 2).ok_or_else(|| Error::NonSquareIndicial(format_rational_short(c)))
        };
        ClassificationInput::from_ratios(&root(coeff_phi4)?, &root(coeff_theta2_8)?)
    }

    pub fn has_zero_coefficient(&self) -> bool {
        self.n1 == 0 || self.n2 == 0
    }

    pub fn widths(&self) -> (u32, u32) {
        (self.m1, self.m2)
    }
}

impl fmt::Display for ClassificationInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n1/m1 = {}/{}, n2/m2 = {}/{}",
            self.n1, self.m1, self.n2, self.m2
        )
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Rationale {
    /// `a = b`, `m ∈ {2,3,4,5}`: solutions are modular for `Γ(m)`.
    EqualCoefficients,
    /// Widths `(n, 4)` or `(2, 2n)`.
    DihedralWidths,
    /// One of `(3,6), (4,6), (3,8), (5,6), (3,10)`.
    PolyhedralWidths,
    VanishesAtCusp,
    /// Widths of a cyclic kernel `C₂ₙ` with `n > 1`.
    CyclicImage,
    WidthsNotAdmissible,
}

impl Rationale {
    pub fn tag(&self) -> &'static str {
        match self {
            Rationale::EqualCoefficients => "equal_coefficients",
            Rationale::DihedralWidths => "dihedral_widths",
            Rationale::PolyhedralWidths => "polyhedral_widths",
            Rationale::VanishesAtCusp => "vanishes_at_cusp",
            Rationale::CyclicImage => "cyclic_image",
            Rationale::WidthsNotAdmissible => "widths_not_admissible",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Rationale::EqualCoefficients => "a = b with m1 = m2 in {2,3,4,5}",
            Rationale::DihedralWidths => "(m1, m2) = (n, 4) or (2, 2n)",
            Rationale::PolyhedralWidths => "(m1, m2) in {(3,6), (4,6), (3,8), (5,6), (3,10)}",
            Rationale::VanishesAtCusp => "F vanishes at a cusp",
            Rationale::CyclicImage => "cyclic image admits no solution, n > 1",
            Rationale::WidthsNotAdmissible => "width pair not admissible",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationResult {
    pub input: ClassificationInput,
    pub exists: bool,
    pub group: Option<GroupId>,
    /// Name of the invariance group of the solutions.
    pub invariance_group: Option<String>,
    pub kernel_generators: Option<Vec<String>>,
    pub cusp_widths: (u32, u32),
    pub genus: Option<Rational>,
    pub degree: Option<i64>,
    pub rationale: Rationale,
}

impl ClassificationResult {
    fn rejected(input: ClassificationInput, rationale: Rationale, group: Option<GroupId>) -> Self {
        ClassificationResult {
            input,
            exists: false,
            group,
            invariance_group: None,
            kernel_generators: None,
            cusp_widths: input.widths(),
            genus: None,
            degree: None,
            rationale,
        }
    }

    pub fn to_json(&self) -> Value {
        let i = &self.input;
        json!({
            "input": {"n1": i.n1, "m1": i.m1, "n2": i.n2, "m2": i.m2},
            "exists": self.exists,
            "group": self.group.map(|g| g.to_json()),
            "invariance_group": self.invariance_group,
            "kernel_generators": self.kernel_generators,
            "cusp_widths": [self.cusp_widths.0, self.cusp_widths.1],
            "genus": self.genus.as_ref().map(format_rational_short),
            "degree": self.degree,
            "rationale": self.rationale.tag(),
            "reason": self.rationale.describe(),
        })
    }
}

impl fmt::Display for ClassificationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input: {}", self.input)?;
        writeln!(
            f,
            "widths (m1, m2): ({}, {})",
            self.cusp_widths.0, self.cusp_widths.1
        )?;
        if !self.exists {
            write!(f, "no modular solution: {}", self.rationale.describe())?;
            if let Some(g) = self.group {
                write!(f, " (image {g})")?;
            }
            return writeln!(f);
        }
        writeln!(f, "modular solution exists: {}", self.rationale.describe())?;
        if let Some(g) = self.group {
            writeln!(f, "image: {g}")?;
        }
        if let Some(name) = &self.invariance_group {
            writeln!(f, "invariance group: {name}")?;
        }
        if let Some(gens) = &self.kernel_generators {
            writeln!(f, "kernel generators: {}", gens.join(", "))?;
        }
        if let Some(g) = &self.genus {
            writeln!(f, "genus: {}", format_rational_short(g))?;
        }
        if let Some(d) = self.degree {
            writeln!(f, "degree: {d}")?;
        }
        Ok(())
    }
}

/// Order of `PSL₂(ℤ/m)`.
fn psl2_order(m: u32) -> u64 {
    if m == 2 {
        return 6;
    }
    let m = m as u64;
    let mut num = m * m * m;
    let mut den = 2;
    let mut k = m;
    let mut p = 2;
    while k > 1 {
        if k.is_multiple_of(p) {
            num *= p * p - 1;
            den *= p * p;
            while k.is_multiple_of(p) {
                k /= p;
            }
        }
        p += 1;
    }
    num / den
}

fn principal_level_image(m: u32) -> GroupId {
    match m {
        2 => GroupId::D2n(3, Variant::Primary),
        3 => GroupId::A4,
        4 => GroupId::S4(Variant::Primary),
        _ => GroupId::A5(Variant::Primary),
    }
}

fn equal_coefficient_case(input: ClassificationInput) -> ClassificationResult {
    let m = input.m1;
    let mu = Rational::from(psl2_order(m));
    let cusps = &mu / Rational::from(m);
    let two = Rational::from(2);
    let g = Rational::ONE + &mu / Rational::from(12) - &cusps / &two;
    let d = Rational::ONE - &g + &cusps / &two * Rational::from(input.n1 as i64 - 1);
    ClassificationResult {
        input,
        exists: true,
        group: Some(principal_level_image(m)),
        invariance_group: Some(format!("Γ({m})")),
        kernel_generators: None,
        cusp_widths: (m, m),
        degree: i64::try_from(d.numerator().clone()).ok(),
        genus: Some(g),
        rationale: Rationale::EqualCoefficients,
    }
}

fn matching_group(m1: u32, m2: u32) -> Option<(GroupId, Rationale)> {
    let poly = match (m1, m2) {
        (3, 6) => Some(GroupId::A4),
        (4, 6) => Some(GroupId::S4(Variant::Primary)),
        (3, 8) => Some(GroupId::S4(Variant::Fricke)),
        (5, 6) => Some(GroupId::A5(Variant::Primary)),
        (3, 10) => Some(GroupId::A5(Variant::Fricke)),
        _ => None,
    };
    if let Some(g) = poly {
        return Some((g, Rationale::PolyhedralWidths));
    }
    if m2 == 4 {
        return Some((
            GroupId::D2n(m1, Variant::Primary),
            Rationale::DihedralWidths,
        ));
    }
    if m1 == 2 && m2.is_multiple_of(2) {
        return Some((
            GroupId::D2n(m2 / 2, Variant::Fricke),
            Rationale::DihedralWidths,
        ));
    }
    None
}

fn cyclic_group(m1: u32, m2: u32) -> Option<GroupId> {
    if m2 == 2 * m1 && m1.is_multiple_of(4) {
        return Some(GroupId::C2n(m1 / 2, Variant::Primary));
    }
    if m2 == 4 * m1 && m1 % 2 == 1 {
        return Some(GroupId::C2n(m1, Variant::Primary));
    }
    if m1 == m2 && m1 % 4 == 2 {
        return Some(GroupId::C2n(m1 / 2, Variant::Fricke));
    }
    None
}

/// Decide whether solutions are modular, and for which group.
pub fn classify(input: ClassificationInput) -> Result<ClassificationResult> {
    if input.has_zero_coefficient() {
        return Ok(ClassificationResult::rejected(
            input,
            Rationale::VanishesAtCusp,
            None,
        ));
    }
    let (m1, m2) = input.widths();
    if input.n1 == input.n2 && m1 == m2 && (2..=5).contains(&m1) {
        return Ok(equal_coefficient_case(input));
    }
    if let Some((group, rationale)) = matching_group(m1, m2) {
        let kd = kernel_descriptor(&group)?;
        debug_assert_eq!(kd.widths, (m1, m2));
        let g = genus(kd.index, m1, m2);
        let d = covering_degree(&g, kd.index, m1, m2, input.n1, input.n2)?;
        return Ok(ClassificationResult {
            input,
            exists: true,
            group: Some(group),
            invariance_group: Some(kd.name),
            kernel_generators: Some(kd.generators),
            cusp_widths: (m1, m2),
            genus: Some(g),
            degree: Some(d),
            rationale,
        });
    }
    if let Some(c) = cyclic_group(m1, m2) {
        return Ok(ClassificationResult::rejected(
            input,
            Rationale::CyclicImage,
            Some(c),
        ));
    }
    Ok(ClassificationResult::rejected(
        input,
        Rationale::WidthsNotAdmissible,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn run(n1: u32, m1: u32, n2: u32, m2: u32) -> ClassificationResult {
        classify(ClassificationInput::new(n1, m1, n2, m2).unwrap()).unwrap()
    }

    #[test]
    fn tetrahedral() {
        let r = run(1, 3, 1, 6);
        assert!(r.exists);
        assert_eq!(r.group, Some(GroupId::A4));
        assert_eq!(r.genus, Some(Rational::ZERO));
        assert_eq!(r.degree, Some(1));
        assert_eq!(run(2, 3, 5, 6).degree, Some(11));
    }

    #[test]
    fn rejections() {
        let r = run(1, 7, 1, 6);
        assert!(!r.exists);
        assert_eq!(r.rationale, Rationale::WidthsNotAdmissible);
        let r = run(0, 1, 1, 6);
        assert_eq!(r.rationale, Rationale::VanishesAtCusp);
        assert_eq!(r.rationale.describe(), "F vanishes at a cusp");
        let r = run(1, 1, 1, 1);
        assert!(!r.exists);
        let r = run(1, 6, 1, 6);
        assert_eq!(r.rationale, Rationale::CyclicImage);
        assert_eq!(r.group, Some(GroupId::C2n(3, Variant::Fricke)));
        assert_eq!(run(1, 4, 1, 8).rationale, Rationale::CyclicImage);
    }

    #[test]
    fn equal_coefficients() {
        let r = run(1, 2, 1, 2);
        assert_eq!(r.rationale, Rationale::EqualCoefficients);
        assert_eq!(r.invariance_group.as_deref(), Some("Γ(2)"));
        assert_eq!((r.genus, r.degree), (Some(Rational::ZERO), Some(1)));
        for m in 2..=5 {
            assert_eq!(run(1, m, 1, m).genus, Some(Rational::ZERO));
        }
        // different numerators fall through to the width cases
        assert_eq!(run(1, 2, 3, 2).rationale, Rationale::DihedralWidths);
    }

    #[test]
    fn dihedral() {
        let r = run(3, 2, 1, 6);
        assert_eq!(r.group, Some(GroupId::D2n(3, Variant::Fricke)));
        assert_eq!(r.degree, Some(4));
        let r = run(1, 5, 1, 4);
        assert_eq!(r.group, Some(GroupId::D2n(5, Variant::Primary)));
    }

    #[test]
    fn input_from_squares() {
        let i = ClassificationInput::from_squares(&rat(1, 9), &rat(1, 36)).unwrap();
        assert_eq!(i, ClassificationInput::new(1, 3, 1, 6).unwrap());
        assert!(ClassificationInput::from_squares(&rat(1, 2), &rat(1, 4)).is_err());
        assert_eq!(
            ClassificationInput::new(2, 4, 0, 5).unwrap(),
            ClassificationInput {
                n1: 1,
                m1: 2,
                n2: 0,
                m2: 1
            }
        );
    }
}
