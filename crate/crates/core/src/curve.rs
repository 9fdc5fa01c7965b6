//! Curves with an abelian group action: branch data, the group of invariant
//! divisors modulo linear equivalence, and line-bundle cohomology on the
//! curve to the extent it is decidable from that data.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, FinAbGroup, GroupElement, PresentedGroup, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("group acting on a curve must be finite")]
    InfiniteGroup,
    #[error("orbit {label}: stabilizer generator {generator} is not an element of the group")]
    NotAnElement { label: String, generator: String },
    #[error("orbit {label} has trivial stabilizer; free orbits are carried by the fiber class")]
    TrivialStabilizer { label: String },
    #[error("Riemann–Hurwitz fails: 2g−2 = {lhs} but the branch data gives {rhs}")]
    RiemannHurwitz { lhs: i64, rhs: i64 },
    #[error("stabilizer generators sum to {sum}, not the identity")]
    GeneratorSum { sum: String },
    #[error("stabilizer generators span a subgroup of order {spanned}, not the whole group of order {order}")]
    NotGenerating { spanned: usize, order: u64 },
    #[error("quotient by a subgroup of order {subgroup_order} has non-integral or negative genus")]
    InconsistentQuotient { subgroup_order: usize },
    #[error("expected a genus-0 quotient, found genus {0}")]
    QuotientNotRational(u64),
    #[error("coefficient vector has length {found}, at most {expected} allowed")]
    TooManyCoefficients { expected: usize, found: usize },
}

/// A `G`-orbit of points with nontrivial stabilizer `⟨stabilizer_generator⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub label: String,
    pub stabilizer_generator: GroupElement,
    /// Number of points, `|G| / |⟨stabilizer_generator⟩|`.
    pub degree: u64,
    pub stabilizer_order: u64,
}

/// A smooth curve with a `G`-action, described by its branch data over the
/// quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveWithAction {
    genus: u64,
    group: FinAbGroup,
    orbits: Vec<Orbit>,
    quotient_genus: u64,
}

impl CurveWithAction {
    /// Validates Riemann–Hurwitz and, for a rational quotient, the spherical
    /// generating-vector conditions.
    pub fn new(
        genus: u64,
        group: FinAbGroup,
        quotient_genus: u64,
        stabilizers: Vec<(String, GroupElement)>,
    ) -> Result<Self, CurveError> {
        let order = group.order().ok_or(CurveError::InfiniteGroup)?;
        let mut orbits = Vec::with_capacity(stabilizers.len());
        for (label, generator) in stabilizers {
            if !group.contains(&generator) {
                return Err(CurveError::NotAnElement {
                    label,
                    generator: generator.to_string(),
                });
            }
            let stabilizer_order = group.element_order(&generator)?;
            if stabilizer_order == 1 {
                return Err(CurveError::TrivialStabilizer { label });
            }
            orbits.push(Orbit {
                label,
                degree: order / stabilizer_order,
                stabilizer_generator: generator,
                stabilizer_order,
            });
        }

        let lhs = 2 * genus as i64 - 2;
        let ramification: i64 = orbits
            .iter()
            .map(|o| (o.degree * (o.stabilizer_order - 1)) as i64)
            .sum();
        let rhs = order as i64 * (2 * quotient_genus as i64 - 2) + ramification;
        if lhs != rhs {
            return Err(CurveError::RiemannHurwitz { lhs, rhs });
        }

        let sum = orbits.iter().fold(group.identity(), |acc, o| {
            group.add(&acc, &o.stabilizer_generator)
        });
        if !group.is_identity(&sum) {
            return Err(CurveError::GeneratorSum {
                sum: sum.to_string(),
            });
        }
        if quotient_genus == 0 {
            let gens: Vec<GroupElement> = orbits
                .iter()
                .map(|o| o.stabilizer_generator.clone())
                .collect();
            let spanned = group.generated_by(&gens)?.order();
            if spanned as u64 != order {
                return Err(CurveError::NotGenerating { spanned, order });
            }
        }

        Ok(CurveWithAction {
            genus,
            group,
            orbits,
            quotient_genus,
        })
    }

    /// Convenience constructor: rational quotient, orbits labelled
    /// `{prefix}1, {prefix}2, …`.
    pub fn over_line(
        genus: u64,
        group: FinAbGroup,
        prefix: &str,
        stabilizers: &[&[i64]],
    ) -> Result<Self, CurveError> {
        let mut labelled = Vec::with_capacity(stabilizers.len());
        for (i, coords) in stabilizers.iter().enumerate() {
            labelled.push((format!("{prefix}{}", i + 1), group.element(coords)?));
        }
        CurveWithAction::new(genus, group, 0, labelled)
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn quotient_genus(&self) -> u64 {
        self.quotient_genus
    }

    pub fn group_order(&self) -> u64 {
        self.group
            .order()
            .expect("validated finite at construction")
    }

    /// Stabilizer subgroup of each orbit.
    pub fn stabilizers(&self) -> Result<Vec<Subgroup>, CurveError> {
        self.orbits
            .iter()
            .map(|o| {
                Ok(self
                    .group
                    .generated_by(std::slice::from_ref(&o.stabilizer_generator))?)
            })
            .collect()
    }
}

/// Genus of `C/H` for a subgroup `H ≤ G`, from Riemann–Hurwitz for the
/// intermediate cover.
pub fn riemann_hurwitz_quotient_genus(
    curve: &CurveWithAction,
    h: &Subgroup,
) -> Result<u64, CurveError> {
    let order = curve.group_order() as i64;
    let h_order = h.order() as i64;
    let mut ramification: i64 = 0;
    for s in curve.stabilizers()? {
        let meet = s.intersection_order(h) as i64;
        ramification += (order / s.order() as i64) * (meet - 1);
    }
    let numerator = 2 * curve.genus as i64 - 2 - ramification;
    if numerator % h_order != 0 {
        return Err(CurveError::InconsistentQuotient {
            subgroup_order: h.order(),
        });
    }
    let twice = numerator / h_order + 2;
    if twice < 0 || twice % 2 != 0 {
        return Err(CurveError::InconsistentQuotient {
            subgroup_order: h.order(),
        });
    }
    Ok((twice / 2) as u64)
}

/// Where a relation row of the class group comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelationSource {
    /// `|S_i| · E_i ∼ π*(pt)`, the fiber of `C → C/G ≅ P¹`.
    FullQuotient { orbit: String },
    /// Both orbits are single unramified fibers of `C → C/H ≅ P¹`.
    IntermediateQuotient {
        subgroup: Vec<GroupElement>,
        first: String,
        second: String,
    },
}

/// `Div(C)^G / ∼` presented over the orbit generators `E_1, …, E_k` plus one
/// generator `P` for a free orbit (a general fiber of `C → P¹`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClassGroup {
    presented: PresentedGroup,
    labels: Vec<String>,
    degree_map: Vec<i64>,
    relation_sources: Vec<RelationSource>,
    genus: u64,
    canonical: DivisorClass,
}

/// An invariant divisor class. Equality is equality in the quotient.
#[derive(Debug, Clone, Eq, Serialize, Deserialize)]
pub struct DivisorClass {
    /// Representative over the generators (orbits, then the fiber `P`).
    pub coefficients: Vec<i64>,
    pub normal_form: Vec<i64>,
    pub degree: i64,
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        self.normal_form == other.normal_form
    }
}

impl std::hash::Hash for DivisorClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.normal_form.hash(state);
    }
}

/// Builds the class group from the two pullback relation families: the full
/// quotient, and every intermediate quotient `C/H` of genus 0 in which an
/// orbit is a single unramified fiber.
pub fn build_class_group(curve: &CurveWithAction) -> Result<DivisorClassGroup, CurveError> {
    if curve.quotient_genus != 0 {
        return Err(CurveError::QuotientNotRational(curve.quotient_genus));
    }
    let order = curve.group_order();
    let k = curve.orbits.len();
    let fiber = k;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut sources = Vec::new();

    for (i, o) in curve.orbits.iter().enumerate() {
        let mut row = vec![0; k + 1];
        row[i] = o.stabilizer_order as i64;
        row[fiber] = -1;
        rows.push(row);
        sources.push(RelationSource::FullQuotient {
            orbit: o.label.clone(),
        });
    }

    let stabilizers = curve.stabilizers()?;
    for h in curve.group.subgroups()? {
        if riemann_hurwitz_quotient_genus(curve, &h)? != 0 {
            continue;
        }
        let single_fibers: Vec<usize> = stabilizers
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                s.intersection_order(&h) == 1 && (s.order() * h.order()) as u64 == order
            })
            .map(|(i, _)| i)
            .collect();
        for pair in single_fibers.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let mut row = vec![0; k + 1];
            row[a] = 1;
            row[b] = -1;
            rows.push(row);
            sources.push(RelationSource::IntermediateQuotient {
                subgroup: h.elements().to_vec(),
                first: curve.orbits[a].label.clone(),
                second: curve.orbits[b].label.clone(),
            });
        }
    }

    let mut degree_map: Vec<i64> = curve.orbits.iter().map(|o| o.degree as i64).collect();
    degree_map.push(order as i64);
    for row in &rows {
        let d: i64 = row.iter().zip(&degree_map).map(|(a, b)| a * b).sum();
        assert_eq!(d, 0, "relation of nonzero degree");
    }

    let presented = PresentedGroup::from_relations(k + 1, &rows)?;
    let mut labels: Vec<String> = curve.orbits.iter().map(|o| o.label.clone()).collect();
    labels.push("P".to_string());

    // K_C = π*K_{P¹} + R = −2P + Σ (|S_i| − 1) E_i
    let mut canonical_coeffs: Vec<i64> = curve
        .orbits
        .iter()
        .map(|o| o.stabilizer_order as i64 - 1)
        .collect();
    canonical_coeffs.push(-2);

    let mut group = DivisorClassGroup {
        presented,
        labels,
        degree_map,
        relation_sources: sources,
        genus: curve.genus,
        canonical: DivisorClass {
            coefficients: Vec::new(),
            normal_form: Vec::new(),
            degree: 0,
        },
    };
    group.canonical = group.class(&canonical_coeffs)?;
    debug_assert_eq!(group.canonical.degree, 2 * curve.genus as i64 - 2);
    Ok(group)
}

impl DivisorClassGroup {
    pub fn presented(&self) -> &PresentedGroup {
        &self.presented
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree_map(&self) -> &[i64] {
        &self.degree_map
    }

    pub fn relation_sources(&self) -> &[RelationSource] {
        &self.relation_sources
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn orbit_count(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    /// Class of a generator-space vector; shorter vectors are zero-padded.
    pub fn class(&self, coefficients: &[i64]) -> Result<DivisorClass, CurveError> {
        let n = self.generator_count();
        if coefficients.len() > n {
            return Err(CurveError::TooManyCoefficients {
                expected: n,
                found: coefficients.len(),
            });
        }
        let mut coeffs = coefficients.to_vec();
        coeffs.resize(n, 0);
        let degree = coeffs
            .iter()
            .zip(&self.degree_map)
            .map(|(a, b)| a * b)
            .sum();
        let normal_form = self.presented.reduce(&coeffs)?;
        Ok(DivisorClass {
            coefficients: coeffs,
            normal_form,
            degree,
        })
    }

    pub fn zero(&self) -> DivisorClass {
        self.class(&[]).expect("zero class")
    }

    pub fn orbit_class(&self, i: usize) -> DivisorClass {
        let mut c = vec![0; self.generator_count()];
        c[i] = 1;
        self.class(&c).expect("orbit class")
    }

    /// `π*(pt)` for `π: C → C/G`.
    pub fn fiber_class(&self) -> DivisorClass {
        self.orbit_class(self.orbit_count())
    }

    pub fn canonical_class(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn add(&self, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
        self.combine(a, b, 1)
    }

    pub fn sub(&self, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
        self.combine(a, b, -1)
    }

    pub fn neg(&self, a: &DivisorClass) -> DivisorClass {
        self.scale(a, -1)
    }

    pub fn scale(&self, a: &DivisorClass, k: i64) -> DivisorClass {
        let coeffs: Vec<i64> = a.coefficients.iter().map(|x| x * k).collect();
        self.class(&coeffs).expect("scaled class")
    }

    fn combine(&self, a: &DivisorClass, b: &DivisorClass, sign: i64) -> DivisorClass {
        let coeffs: Vec<i64> = a
            .coefficients
            .iter()
            .zip(&b.coefficients)
            .map(|(x, y)| x + sign * y)
            .collect();
        self.class(&coeffs).expect("combined class")
    }

    pub fn is_zero(&self, a: &DivisorClass) -> bool {
        a.normal_form.iter().all(|&v| v == 0)
    }

    /// Order of the class, `None` for infinite order.
    pub fn order_of(&self, a: &DivisorClass) -> Option<u64> {
        self.presented
            .order_of(&a.coefficients)
            .expect("class in group")
    }

    /// Human-readable representative such as `2E1 - E2`.
    pub fn format(&self, a: &DivisorClass) -> String {
        format_combination(&a.coefficients, &self.labels)
    }
}

pub(crate) fn format_combination(coeffs: &[i64], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in coeffs.iter().zip(labels) {
        if *c == 0 {
            continue;
        }
        let sign = if *c < 0 { "-" } else { "+" };
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if *c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if mag != 1 {
            out.push_str(&mag.to_string());
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A nonnegative combination of orbits and free fibers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveWitness {
    pub coefficients: Vec<u64>,
}

/// Decides whether `class` contains a `G`-invariant effective divisor, i.e.
/// equals some `Σ a_i E_i + m·P` with all coefficients nonnegative.
pub fn is_effective_class(
    group: &DivisorClassGroup,
    class: &DivisorClass,
) -> Option<EffectiveWitness> {
    if class.degree < 0 {
        return None;
    }
    let mut current = vec![0i64; group.generator_count()];
    find_effective(group, class, 0, class.degree, &mut current).map(|c| EffectiveWitness {
        coefficients: c.into_iter().map(|x| x as u64).collect(),
    })
}

fn find_effective(
    group: &DivisorClassGroup,
    target: &DivisorClass,
    index: usize,
    remaining: i64,
    current: &mut Vec<i64>,
) -> Option<Vec<i64>> {
    if index == group.generator_count() {
        if remaining != 0 {
            return None;
        }
        let c = group.class(current).ok()?;
        return (c == *target).then(|| current.clone());
    }
    let d = group.degree_map[index];
    let mut a = 0;
    while a * d <= remaining {
        current[index] = a;
        if let Some(found) = find_effective(group, target, index + 1, remaining - a * d, current) {
            current[index] = 0;
            return Some(found);
        }
        a += 1;
    }
    current[index] = 0;
    None
}

/// Every effective class of the given degree, with one witness each, in the
/// order the witnesses are first met (lexicographically largest first).
pub fn effective_classes_of_degree(
    group: &DivisorClassGroup,
    degree: i64,
) -> Vec<(DivisorClass, EffectiveWitness)> {
    let mut found: Vec<(DivisorClass, EffectiveWitness)> = Vec::new();
    let mut current = vec![0i64; group.generator_count()];
    collect_effective(group, 0, degree, &mut current, &mut found);
    found
}

fn collect_effective(
    group: &DivisorClassGroup,
    index: usize,
    remaining: i64,
    current: &mut Vec<i64>,
    found: &mut Vec<(DivisorClass, EffectiveWitness)>,
) {
    if index == group.generator_count() {
        if remaining == 0 {
            let c = group.class(current).expect("class");
            if !found.iter().any(|(x, _)| *x == c) {
                found.push((
                    c,
                    EffectiveWitness {
                        coefficients: current.iter().map(|&x| x as u64).collect(),
                    },
                ));
            }
        }
        return;
    }
    // Largest coefficient first, so that witnesses favor earlier generators.
    let d = group.degree_map[index];
    let mut a = remaining / d;
    while a >= 0 {
        current[index] = a;
        collect_effective(group, index + 1, remaining - a * d, current, found);
        a -= 1;
    }
    current[index] = 0;
}

/// `K_C = −2·π*(pt) + Σ (|S_i| − 1)·E_i`.
pub fn canonical_class(group: &DivisorClassGroup) -> DivisorClass {
    group.canonical.clone()
}

/// A cohomology dimension: known exactly or only up to a closed range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CohStatus {
    Exact { value: u64 },
    Range { lo: u64, hi: u64 },
}

impl CohStatus {
    pub fn exact(value: u64) -> Self {
        CohStatus::Exact { value }
    }

    pub fn range(lo: u64, hi: u64) -> Self {
        assert!(lo <= hi, "empty cohomology range");
        if lo == hi {
            CohStatus::Exact { value: lo }
        } else {
            CohStatus::Range { lo, hi }
        }
    }

    pub fn lo(&self) -> u64 {
        match *self {
            CohStatus::Exact { value } => value,
            CohStatus::Range { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u64 {
        match *self {
            CohStatus::Exact { value } => value,
            CohStatus::Range { hi, .. } => hi,
        }
    }

    pub fn exact_value(&self) -> Option<u64> {
        match *self {
            CohStatus::Exact { value } => Some(value),
            CohStatus::Range { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exact_value() == Some(0)
    }

    pub fn add(&self, other: &CohStatus) -> CohStatus {
        CohStatus::range(self.lo() + other.lo(), self.hi() + other.hi())
    }

    pub fn mul(&self, other: &CohStatus) -> CohStatus {
        CohStatus::range(self.lo() * other.lo(), self.hi() * other.hi())
    }
}

impl fmt::Display for CohStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CohStatus::Exact { value } => write!(f, "{value}"),
            CohStatus::Range { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// Which of the fixed-order rules decided a curve cohomology computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveRule {
    NegativeDegree,
    NonSpecial,
    Trivial,
    Canonical,
    DegreeZeroNontrivial,
    CanonicalDegreeNotCanonical,
    NotEffective,
    Clifford,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveCohomology {
    pub h0: CohStatus,
    pub h1: CohStatus,
    pub rule: CurveRule,
}

/// `(h⁰, h¹)` of `O_C(D)` for an invariant class `D`.
///
/// Rules are tried in order; the first match wins. Rule 7 is the
/// eigensection argument: `G` acts on `H⁰(O_C(D))`, so a nonzero section
/// would give an eigensection `f` with `D + (f)` invariant and effective.
pub fn curve_cohomology(group: &DivisorClassGroup, class: &DivisorClass) -> CurveCohomology {
    let g = group.genus as i64;
    let deg = class.degree;
    let canonical_degree = 2 * g - 2;
    let exact = |h0: i64, h1: i64, rule| CurveCohomology {
        h0: CohStatus::exact(h0 as u64),
        h1: CohStatus::exact(h1 as u64),
        rule,
    };

    if deg < 0 {
        return exact(0, g - 1 - deg, CurveRule::NegativeDegree);
    }
    if deg > canonical_degree {
        return exact(deg + 1 - g, 0, CurveRule::NonSpecial);
    }
    if group.is_zero(class) {
        return exact(1, g, CurveRule::Trivial);
    }
    if *class == group.canonical {
        return exact(g, 1, CurveRule::Canonical);
    }
    if deg == 0 {
        return exact(0, g - 1, CurveRule::DegreeZeroNontrivial);
    }
    if deg == canonical_degree {
        return exact(g - 1, 0, CurveRule::CanonicalDegreeNotCanonical);
    }
    if is_effective_class(group, class).is_none() {
        return exact(0, g - 1 - deg, CurveRule::NotEffective);
    }
    let chi = deg + 1 - g;
    let h0_lo = chi.max(1);
    let h0_hi = deg / 2 + 1;
    CurveCohomology {
        h0: CohStatus::range(h0_lo as u64, h0_hi as u64),
        h1: CohStatus::range((h0_lo - chi) as u64, (h0_hi - chi) as u64),
        rule: CurveRule::Clifford,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset_c() -> CurveWithAction {
        let g = FinAbGroup::elementary(3, 2);
        CurveWithAction::over_line(4, g, "E", &[&[1, 0], &[0, 1], &[2, 0], &[0, 2]]).unwrap()
    }

    #[test]
    fn preset_orbits() {
        let c = preset_c();
        assert_eq!(c.orbits().len(), 4);
        assert!(c
            .orbits()
            .iter()
            .all(|o| o.degree == 3 && o.stabilizer_order == 3));
    }

    #[test]
    fn rejects_bad_branch_data() {
        let g = FinAbGroup::elementary(3, 2);
        let err =
            CurveWithAction::over_line(5, g.clone(), "E", &[&[1, 0], &[0, 1], &[2, 0], &[0, 2]]);
        assert!(matches!(err, Err(CurveError::RiemannHurwitz { .. })));
        let err =
            CurveWithAction::over_line(4, g.clone(), "E", &[&[1, 0], &[0, 1], &[1, 0], &[0, 2]]);
        assert!(matches!(err, Err(CurveError::GeneratorSum { .. })));
        let err =
            CurveWithAction::over_line(4, g.clone(), "E", &[&[1, 0], &[2, 0], &[1, 0], &[2, 0]]);
        assert!(matches!(err, Err(CurveError::NotGenerating { .. })));
        let err = CurveWithAction::over_line(4, g, "E", &[&[0, 0]]);
        assert!(matches!(err, Err(CurveError::TrivialStabilizer { .. })));
    }

    #[test]
    fn quotient_genera() {
        let c = preset_c();
        let g = c.group().clone();
        let whole = g.generated_by(&[g.basis(0), g.basis(1)]).unwrap();
        assert_eq!(riemann_hurwitz_quotient_genus(&c, &whole).unwrap(), 0);
        let trivial = g.generated_by(&[]).unwrap();
        assert_eq!(riemann_hurwitz_quotient_genus(&c, &trivial).unwrap(), 4);
        let diag = g.generated_by(&[g.element(&[1, 1]).unwrap()]).unwrap();
        assert_eq!(riemann_hurwitz_quotient_genus(&c, &diag).unwrap(), 2);
        let line = g.generated_by(&[g.basis(0)]).unwrap();
        assert_eq!(riemann_hurwitz_quotient_genus(&c, &line).unwrap(), 0);
    }

    #[test]
    fn preset_class_group() {
        let cg = build_class_group(&preset_c()).unwrap();
        assert_eq!(cg.presented().free_rank(), 1);
        assert_eq!(cg.presented().torsion(), vec![3]);
        let e: Vec<DivisorClass> = (0..4).map(|i| cg.orbit_class(i)).collect();
        assert_eq!(e[0], e[2]);
        assert_eq!(e[1], e[3]);
        assert_ne!(e[0], e[1]);
        assert_eq!(cg.order_of(&cg.sub(&e[0], &e[1])), Some(3));
        let two_e1_minus_e2 = cg.class(&[2, -1]).unwrap();
        assert_eq!(two_e1_minus_e2.degree, 3);
        assert_ne!(two_e1_minus_e2, e[0]);
        assert_ne!(two_e1_minus_e2, e[1]);
        // E1∼E3 comes from H = ⟨e2⟩ and E2∼E4 from H = ⟨e1⟩
        let intermediate = cg
            .relation_sources()
            .iter()
            .filter(|s| matches!(s, RelationSource::IntermediateQuotient { .. }))
            .count();
        assert_eq!(intermediate, 2);
    }

    #[test]
    fn trivial_action_on_the_line() {
        let c = CurveWithAction::new(0, FinAbGroup::trivial(), 0, Vec::new()).unwrap();
        let cg = build_class_group(&c).unwrap();
        assert_eq!(cg.presented().free_rank(), 1);
        assert!(cg.presented().torsion().is_empty());
        assert_eq!(cg.fiber_class().degree, 1);
        // K = −2·fiber, degree 2g − 2 = −2
        assert_eq!(*cg.canonical_class(), cg.scale(&cg.fiber_class(), -2));
        assert_eq!(cg.canonical_class().degree, -2);
    }

    #[test]
    fn canonical_is_e1_plus_e2() {
        let cg = build_class_group(&preset_c()).unwrap();
        let k = canonical_class(&cg);
        assert_eq!(k.degree, 6);
        assert_eq!(k, cg.class(&[1, 1]).unwrap());
    }

    #[test]
    fn effective_degree_three() {
        let cg = build_class_group(&preset_c()).unwrap();
        let eff = effective_classes_of_degree(&cg, 3);
        let classes: Vec<DivisorClass> = eff.into_iter().map(|(c, _)| c).collect();
        assert_eq!(classes.len(), 2);
        assert!(classes.contains(&cg.orbit_class(0)));
        assert!(classes.contains(&cg.orbit_class(1)));
        assert!(is_effective_class(&cg, &cg.class(&[2, -1]).unwrap()).is_none());
        let w = is_effective_class(&cg, &cg.zero()).unwrap();
        assert!(w.coefficients.iter().all(|&c| c == 0));
    }

    #[test]
    fn degree_three_values() {
        let cg = build_class_group(&preset_c()).unwrap();
        let a = curve_cohomology(&cg, &cg.class(&[2, -1]).unwrap());
        assert_eq!((a.h0, a.h1), (CohStatus::exact(0), CohStatus::exact(0)));
        assert_eq!(a.rule, CurveRule::NotEffective);
        let b = curve_cohomology(&cg, &cg.class(&[-2, 1]).unwrap());
        assert_eq!((b.h0, b.h1), (CohStatus::exact(0), CohStatus::exact(6)));
        let o = curve_cohomology(&cg, &cg.zero());
        assert_eq!((o.h0, o.h1), (CohStatus::exact(1), CohStatus::exact(4)));
        let k = curve_cohomology(&cg, cg.canonical_class());
        assert_eq!((k.h0, k.h1), (CohStatus::exact(4), CohStatus::exact(1)));
    }

    #[test]
    fn clifford_range_for_effective_orbit() {
        let cg = build_class_group(&preset_c()).unwrap();
        let e1 = curve_cohomology(&cg, &cg.orbit_class(0));
        assert_eq!(e1.rule, CurveRule::Clifford);
        assert_eq!(e1.h0, CohStatus::range(1, 2));
        assert_eq!(e1.h1, CohStatus::range(1, 2));
    }

    #[test]
    fn format_representatives() {
        let cg = build_class_group(&preset_c()).unwrap();
        assert_eq!(cg.format(&cg.class(&[-2, 1]).unwrap()), "-2E1 + E2");
        assert_eq!(cg.format(&cg.zero()), "0");
    }
}
