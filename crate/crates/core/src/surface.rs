//! The product `X = C × D`, the free quotient `S = X/G`, and the numerical
//! invariants of `S`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AbelianGroupDescriptor, FinAbGroup, GroupElement};
use crate::curve::{build_class_group, CurveError, CurveWithAction, DivisorClassGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("C and D carry actions of different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("|G| = {order} but (g_C − 1)(g_D − 1) = {expected}")]
    OrderMismatch { order: u64, expected: u64 },
    #[error("action on C × D is not free: {witness} fixes points on both curves")]
    NotFree { witness: String },
    #[error("intersection number {numerator}/{denominator} is not an integer; the class does not descend")]
    NonIntegral { numerator: i64, denominator: i64 },
    #[error("b_2 = {0} is negative")]
    NegativeBetti(i64),
    #[error("unknown preset {0:?}; expected one of z2^3, z2^4, z3^2, z5^2")]
    UnknownPreset(String),
}

/// The four abelian groups admitting unmixed surfaces with `p_g = q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "z2^3")]
    Z2Cubed,
    #[serde(rename = "z2^4")]
    Z2Fourth,
    #[serde(rename = "z3^2")]
    Z3Squared,
    #[serde(rename = "z5^2")]
    Z5Squared,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Z2Cubed,
        Preset::Z2Fourth,
        Preset::Z3Squared,
        Preset::Z5Squared,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Preset::Z2Cubed => "z2^3",
            Preset::Z2Fourth => "z2^4",
            Preset::Z3Squared => "z3^2",
            Preset::Z5Squared => "z5^2",
        }
    }

    pub fn group(&self) -> FinAbGroup {
        match self {
            Preset::Z2Cubed => FinAbGroup::elementary(2, 3),
            Preset::Z2Fourth => FinAbGroup::elementary(2, 4),
            Preset::Z3Squared => FinAbGroup::elementary(3, 2),
            Preset::Z5Squared => FinAbGroup::elementary(5, 2),
        }
    }

    /// Genera and stabilizer generators of the branch orbits on `C` and `D`.
    #[allow(clippy::type_complexity)]
    fn branch_data(&self) -> ((u64, Vec<Vec<i64>>), (u64, Vec<Vec<i64>>)) {
        let v = |rows: &[&[i64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        match self {
            Preset::Z2Cubed => (
                (
                    3,
                    v(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]),
                ),
                (
                    5,
                    v(&[
                        &[0, 1, 1],
                        &[0, 1, 1],
                        &[1, 0, 1],
                        &[1, 0, 1],
                        &[1, 1, 1],
                        &[1, 1, 1],
                    ]),
                ),
            ),
            Preset::Z2Fourth => (
                (
                    5,
                    v(&[
                        &[1, 0, 0, 0],
                        &[0, 1, 0, 0],
                        &[0, 0, 1, 0],
                        &[0, 0, 0, 1],
                        &[1, 1, 1, 1],
                    ]),
                ),
                (
                    5,
                    v(&[
                        &[0, 0, 1, 1],
                        &[0, 1, 0, 1],
                        &[0, 1, 1, 1],
                        &[1, 0, 1, 0],
                        &[1, 0, 1, 1],
                    ]),
                ),
            ),
            Preset::Z3Squared => (
                (4, v(&[&[1, 0], &[0, 1], &[2, 0], &[0, 2]])),
                (4, v(&[&[1, 1], &[1, 2], &[2, 2], &[2, 1]])),
            ),
            Preset::Z5Squared => (
                (6, v(&[&[1, 0], &[0, 1], &[4, 4]])),
                (6, v(&[&[1, 2], &[3, 4], &[1, 4]])),
            ),
        }
    }

    /// `H_1(S, Z)`, quoted from the published homology computations.
    pub fn first_homology(&self) -> AbelianGroupDescriptor {
        match self {
            Preset::Z2Cubed => AbelianGroupDescriptor::new(0, vec![2, 2, 2, 2, 4, 4]),
            Preset::Z2Fourth => AbelianGroupDescriptor::new(0, vec![4, 4, 4, 4]),
            Preset::Z3Squared => AbelianGroupDescriptor::new(0, vec![3; 5]),
            Preset::Z5Squared => AbelianGroupDescriptor::new(0, vec![5; 3]),
        }
    }

    /// Dimension of the connected component of the moduli space, for
    /// reports only.
    pub fn moduli_dimension(&self) -> u32 {
        match self {
            Preset::Z2Cubed => 5,
            Preset::Z2Fourth => 4,
            Preset::Z3Squared => 2,
            Preset::Z5Squared => 0,
        }
    }

    pub fn surface(&self) -> Result<ProductQuotientSurface, SurfaceError> {
        let group = self.group();
        let ((gc, c_stabs), (gd, d_stabs)) = self.branch_data();
        let c_rows: Vec<&[i64]> = c_stabs.iter().map(Vec::as_slice).collect();
        let d_rows: Vec<&[i64]> = d_stabs.iter().map(Vec::as_slice).collect();
        let c = CurveWithAction::over_line(gc, group.clone(), "E", &c_rows)?;
        let d = CurveWithAction::over_line(gd, group, "F", &d_rows)?;
        ProductQuotientSurface::new(c, d)
    }

    /// Same group and the same branch data, orbit for orbit.
    fn matches(&self, c: &CurveWithAction, d: &CurveWithAction) -> bool {
        let ((gc, cs), (gd, ds)) = self.branch_data();
        let same = |curve: &CurveWithAction, genus: u64, stabs: &[Vec<i64>]| {
            curve.genus() == genus
                && curve.orbits().len() == stabs.len()
                && curve
                    .orbits()
                    .iter()
                    .zip(stabs)
                    .all(|(o, s)| o.stabilizer_generator.coords() == s.as_slice())
        };
        *c.group() == self.group() && same(c, gc, &cs) && same(d, gd, &ds)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Preset {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| SurfaceError::UnknownPreset(s.to_string()))
    }
}

/// Degrees `(a, b)` of the `C`- and `D`-parts of a pullback class on `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub c: i64,
    pub d: i64,
}

impl Bidegree {
    pub fn new(c: i64, d: i64) -> Self {
        Bidegree { c, d }
    }

    /// Intersection on `X`: `(a, b)·(a′, b′) = a·b′ + a′·b`.
    pub fn dot(&self, other: &Bidegree) -> i64 {
        self.c * other.d + other.c * self.d
    }

    pub fn scale(&self, k: i64) -> Bidegree {
        Bidegree::new(self.c * k, self.d * k)
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.c + o.c, self.d + o.d)
    }
}

impl std::ops::Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.c - o.c, self.d - o.d)
    }
}

impl std::ops::Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.c, -self.d)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c, self.d)
    }
}

/// Intersection number on `S` of two classes pulled back to `X`:
/// the intersection on `X` divided by `|G|`.
pub fn intersection_on_s(
    l1: Bidegree,
    l2: Bidegree,
    group_order: u64,
) -> Result<i64, SurfaceError> {
    let numerator = l1.dot(&l2);
    let denominator = group_order as i64;
    if numerator % denominator != 0 {
        return Err(SurfaceError::NonIntegral {
            numerator,
            denominator,
        });
    }
    Ok(numerator / denominator)
}

/// Riemann–Roch on `S`: `χ(L) = χ(O_S) + ½·(L·L − L·K_S)` with `χ(O_S) = 1`.
pub fn rr_surface_chi(
    l: Bidegree,
    canonical: Bidegree,
    group_order: u64,
) -> Result<i64, SurfaceError> {
    let ll = intersection_on_s(l, l, group_order)?;
    let lk = intersection_on_s(l, canonical, group_order)?;
    let twice = ll - lk;
    if twice % 2 != 0 {
        return Err(SurfaceError::NonIntegral {
            numerator: twice,
            denominator: 2,
        });
    }
    Ok(1 + twice / 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessCheck {
    pub free: bool,
    pub witness: Option<GroupElement>,
}

/// `G` acts freely on `C × D` iff no non-identity element fixes a point on
/// both curves, i.e. the unions of stabilizers meet only in the identity.
pub fn freeness_check(
    c: &CurveWithAction,
    d: &CurveWithAction,
) -> Result<FreenessCheck, SurfaceError> {
    let group = c.group();
    let d_stabs = d.stabilizers()?;
    for orbit in c.orbits() {
        for k in 1..orbit.stabilizer_order as i64 {
            let g = group.scale(&orbit.stabilizer_generator, k);
            if d_stabs.iter().any(|s| s.contains(&g)) {
                return Ok(FreenessCheck {
                    free: false,
                    witness: Some(g),
                });
            }
        }
    }
    Ok(FreenessCheck {
        free: true,
        witness: None,
    })
}

/// `S = (C × D)/G` with both class groups precomputed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductQuotientSurface {
    c: CurveWithAction,
    d: CurveWithAction,
    c_classes: DivisorClassGroup,
    d_classes: DivisorClassGroup,
    preset: Option<Preset>,
}

impl ProductQuotientSurface {
    pub fn new(c: CurveWithAction, d: CurveWithAction) -> Result<Self, SurfaceError> {
        if c.group() != d.group() {
            return Err(SurfaceError::GroupMismatch(
                c.group().to_string(),
                d.group().to_string(),
            ));
        }
        let order = c.group_order();
        let expected = (c.genus().saturating_sub(1)) * (d.genus().saturating_sub(1));
        if order != expected {
            return Err(SurfaceError::OrderMismatch { order, expected });
        }
        let free = freeness_check(&c, &d)?;
        if let Some(w) = free.witness {
            return Err(SurfaceError::NotFree {
                witness: w.to_string(),
            });
        }
        let c_classes = build_class_group(&c)?;
        let d_classes = build_class_group(&d)?;
        let preset = Preset::ALL.into_iter().find(|p| p.matches(&c, &d));
        Ok(ProductQuotientSurface {
            c,
            d,
            c_classes,
            d_classes,
            preset,
        })
    }

    pub fn c(&self) -> &CurveWithAction {
        &self.c
    }

    pub fn d(&self) -> &CurveWithAction {
        &self.d
    }

    pub fn c_classes(&self) -> &DivisorClassGroup {
        &self.c_classes
    }

    pub fn d_classes(&self) -> &DivisorClassGroup {
        &self.d_classes
    }

    pub fn group(&self) -> &FinAbGroup {
        self.c.group()
    }

    pub fn group_order(&self) -> u64 {
        self.c.group_order()
    }

    pub fn preset(&self) -> Option<Preset> {
        self.preset
    }

    /// `K_X = K_C ⊠ K_D`, bidegree `(2g_C − 2, 2g_D − 2)`.
    pub fn canonical_bidegree(&self) -> Bidegree {
        Bidegree::new(2 * self.c.genus() as i64 - 2, 2 * self.d.genus() as i64 - 2)
    }

    pub fn k_squared(&self) -> Result<i64, SurfaceError> {
        let k = self.canonical_bidegree();
        intersection_on_s(k, k, self.group_order())
    }

    pub fn chi(&self, l: Bidegree) -> Result<i64, SurfaceError> {
        rr_surface_chi(l, self.canonical_bidegree(), self.group_order())
    }

    pub fn invariants(&self) -> Result<SurfaceInvariants, SurfaceError> {
        noether_invariants(self.k_squared()?, self.preset)
    }

    /// Free rank of `K(S)`, i.e. the maximal length of an exceptional
    /// sequence.
    pub fn k_group_rank(&self) -> Result<usize, SurfaceError> {
        Ok(self.invariants()?.k_group.free_rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub chi_o: i64,
    pub k_squared: i64,
    pub chi_top: i64,
    pub b2: i64,
    /// `None` when the surface is not one of the four presets.
    pub first_homology: Option<AbelianGroupDescriptor>,
    pub pic: AbelianGroupDescriptor,
    pub k_group: AbelianGroupDescriptor,
    /// Set when the inputs do not match a known preset (e.g. `K² ≠ 8`).
    pub non_preset: bool,
}

/// Noether's formula `12·χ(O_S) = K² + χ_top` with `χ(O_S) = 1` and
/// `b_1 = b_3 = 0`, then `Pic ≅ H²(S, Z)` and `K(S) ≅ Z² ⊕ Pic`.
pub fn noether_invariants(
    k_squared: i64,
    preset: Option<Preset>,
) -> Result<SurfaceInvariants, SurfaceError> {
    let chi_o = 1;
    let chi_top = 12 * chi_o - k_squared;
    let b2 = chi_top - 2;
    if b2 < 0 {
        return Err(SurfaceError::NegativeBetti(b2));
    }
    let non_preset = preset.is_none() || k_squared != 8;
    let first_homology = preset.filter(|_| !non_preset).map(|p| p.first_homology());
    let torsion = first_homology
        .as_ref()
        .map(|h| h.torsion.clone())
        .unwrap_or_default();
    let pic = AbelianGroupDescriptor::new(b2 as usize, torsion);
    let k_group = pic.with_free_rank(pic.free_rank + 2);
    Ok(SurfaceInvariants {
        chi_o,
        k_squared,
        chi_top,
        b2,
        first_homology,
        pic,
        k_group,
        non_preset,
    })
}

/// `Pic(S)` and `K(S)` for a preset group label. By universal coefficients
/// the torsion of `H²(S, Z)` is the torsion of `H_1(S, Z)`.
pub fn picard_and_k_group(
    label: &str,
) -> Result<(AbelianGroupDescriptor, AbelianGroupDescriptor), SurfaceError> {
    let preset: Preset = label.parse()?;
    let inv = noether_invariants(8, Some(preset))?;
    Ok((inv.pic, inv.k_group))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_construct() {
        for p in Preset::ALL {
            let s = p.surface().unwrap_or_else(|e| panic!("{p}: {e}"));
            assert_eq!(s.k_squared().unwrap(), 8, "{p}");
            let inv = s.invariants().unwrap();
            assert_eq!((inv.chi_top, inv.b2), (4, 2), "{p}");
            assert_eq!(s.k_group_rank().unwrap(), 4, "{p}");
        }
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(
            intersection_on_s(Bidegree::new(6, 6), Bidegree::new(6, 6), 9).unwrap(),
            8
        );
        assert_eq!(
            intersection_on_s(Bidegree::new(0, 0), Bidegree::new(5, 7), 9).unwrap(),
            0
        );
        assert_eq!(
            intersection_on_s(Bidegree::new(-3, -3), Bidegree::new(-3, -3), 9).unwrap(),
            2
        );
        assert!(matches!(
            intersection_on_s(Bidegree::new(1, 1), Bidegree::new(1, 1), 9),
            Err(SurfaceError::NonIntegral { .. })
        ));
    }

    #[test]
    fn riemann_roch_examples() {
        let s = Preset::Z3Squared.surface().unwrap();
        assert_eq!(s.chi(Bidegree::new(-3, -3)).unwrap(), 4);
        assert_eq!(s.chi(Bidegree::new(0, 0)).unwrap(), 1);
        assert_eq!(s.chi(Bidegree::new(12, 12)).unwrap(), 9);
        assert_eq!(s.chi(Bidegree::new(-3, 0)).unwrap(), 2);
    }

    #[test]
    fn noether_formula_exercises() {
        let inv = noether_invariants(9, None).unwrap();
        assert_eq!((inv.chi_top, inv.b2), (3, 1));
        assert!(inv.non_preset);
        assert!(matches!(
            noether_invariants(11, None),
            Err(SurfaceError::NegativeBetti(-1))
        ));
    }

    #[test]
    fn picard_tables() {
        let (pic, k) = picard_and_k_group("z3^2").unwrap();
        assert_eq!(pic, AbelianGroupDescriptor::new(2, vec![3; 5]));
        assert_eq!(k, AbelianGroupDescriptor::new(4, vec![3; 5]));
        let (pic, _) = picard_and_k_group("z5^2").unwrap();
        assert_eq!(pic, AbelianGroupDescriptor::new(2, vec![5; 3]));
        let (pic, _) = picard_and_k_group("z2^4").unwrap();
        assert_eq!(pic, AbelianGroupDescriptor::new(2, vec![4; 4]));
        let (pic, _) = picard_and_k_group("z2^3").unwrap();
        assert_eq!(pic.to_string(), "Z^2 ⊕ (Z/2)^4 ⊕ (Z/4)^2");
        assert!(matches!(
            picard_and_k_group("z7^2"),
            Err(SurfaceError::UnknownPreset(_))
        ));
    }

    #[test]
    fn freeness() {
        let s = Preset::Z3Squared.surface().unwrap();
        assert!(freeness_check(s.c(), s.d()).unwrap().free);
        let copy = CurveWithAction::over_line(
            4,
            Preset::Z3Squared.group(),
            "F",
            &[&[1, 0], &[0, 1], &[2, 0], &[0, 2]],
        )
        .unwrap();
        let check = freeness_check(s.c(), &copy).unwrap();
        assert!(!check.free);
        assert_eq!(check.witness, Some(s.group().basis(0)));
        assert!(matches!(
            ProductQuotientSurface::new(s.c().clone(), copy),
            Err(SurfaceError::NotFree { .. })
        ));
        let line = CurveWithAction::new(0, FinAbGroup::trivial(), 0, Vec::new()).unwrap();
        assert!(freeness_check(&line, &line).unwrap().free);
    }

    #[test]
    fn beauville_class_group_is_free_cyclic() {
        let s = Preset::Z5Squared.surface().unwrap();
        for cg in [s.c_classes(), s.d_classes()] {
            assert_eq!(cg.presented().free_rank(), 1);
            assert!(cg.presented().torsion().is_empty());
        }
    }

    #[test]
    fn intersection_is_symmetric_and_bilinear() {
        let samples: Vec<Bidegree> = (-20..=20)
            .step_by(5)
            .flat_map(|a| (-20..=20).step_by(7).map(move |b| Bidegree::new(a, b)))
            .collect();
        for x in &samples {
            for y in &samples {
                assert_eq!(x.dot(y), y.dot(x));
                for z in samples.iter().step_by(3) {
                    assert_eq!((*x + *y).dot(z), x.dot(z) + y.dot(z));
                }
            }
        }
    }
}
