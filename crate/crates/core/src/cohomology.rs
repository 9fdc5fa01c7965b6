//! Künneth cohomology of equivariant line bundles on `X = C × D` and the
//! invariant parts that compute cohomology on `S`.
//!
//! Invariant dimensions are only ever inferred by three rules: a total that
//! vanishes forces the invariant part to vanish, a single undetermined
//! degree is pinned by Riemann–Roch on `S`, and anything else is bounded by
//! the total. The structure sheaf is the one exception, where `p_g = q = 0`
//! supplies the values directly.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Character;
use crate::curve::{
    curve_cohomology, format_combination, CohStatus, CurveCohomology, CurveError, DivisorClass,
};
use crate::surface::{Bidegree, ProductQuotientSurface, SurfaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("character has {found} weights, the group has rank {expected}")]
    CharacterRank { expected: usize, found: usize },
    #[error("Riemann–Roch pins H^{degree} to {value}, outside [0, {total}]")]
    InconsistentPin {
        degree: usize,
        value: i64,
        total: u64,
    },
}

/// A line bundle on `S`: invariant classes on both curves and a character
/// twisting the linearization.
///
/// Ext groups pick up the *difference* of characters: `Ext(L_i, L_j)` is
/// computed from `(c_j − c_i, d_j − d_i, χ_j · χ_i^{-1})`. No certificate
/// depends on this orientation, since they either quantify over all
/// characters or only read totals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquivariantLineBundle {
    pub c: DivisorClass,
    pub d: DivisorClass,
    pub character: Character,
}

impl EquivariantLineBundle {
    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.c.degree, self.d.degree)
    }

    fn key(&self) -> (Vec<i64>, Vec<i64>, Character) {
        (
            self.c.normal_form.clone(),
            self.d.normal_form.clone(),
            self.character.clone(),
        )
    }
}

impl ProductQuotientSurface {
    /// `O_X(Σ a_i E_i ⊠ Σ b_j F_j)(χ)`; coefficient lists are zero-padded.
    pub fn bundle(
        &self,
        c: &[i64],
        d: &[i64],
        character: &[i64],
    ) -> Result<EquivariantLineBundle, CohomologyError> {
        let rank = self.group().rank();
        if character.len() != rank {
            return Err(CohomologyError::CharacterRank {
                expected: rank,
                found: character.len(),
            });
        }
        Ok(EquivariantLineBundle {
            c: self.c_classes().class(c)?,
            d: self.d_classes().class(d)?,
            character: self.group().character(character).expect("rank checked"),
        })
    }

    pub fn structure_sheaf(&self) -> EquivariantLineBundle {
        EquivariantLineBundle {
            c: self.c_classes().zero(),
            d: self.d_classes().zero(),
            character: self.group().trivial_character(),
        }
    }

    /// `ω_S` as `K_C ⊠ K_D` with the trivial character.
    pub fn canonical_bundle(&self) -> EquivariantLineBundle {
        EquivariantLineBundle {
            c: self.c_classes().canonical_class().clone(),
            d: self.d_classes().canonical_class().clone(),
            character: self.group().trivial_character(),
        }
    }

    pub fn tensor(
        &self,
        a: &EquivariantLineBundle,
        b: &EquivariantLineBundle,
    ) -> EquivariantLineBundle {
        EquivariantLineBundle {
            c: self.c_classes().add(&a.c, &b.c),
            d: self.d_classes().add(&a.d, &b.d),
            character: self.group().character_mul(&a.character, &b.character),
        }
    }

    pub fn dual(&self, a: &EquivariantLineBundle) -> EquivariantLineBundle {
        EquivariantLineBundle {
            c: self.c_classes().neg(&a.c),
            d: self.d_classes().neg(&a.d),
            character: self.group().character_inverse(&a.character),
        }
    }

    /// `L_from^∨ ⊗ L_to`, whose cohomology is `Ext^•(L_from, L_to)`.
    pub fn hom_bundle(
        &self,
        from: &EquivariantLineBundle,
        to: &EquivariantLineBundle,
    ) -> EquivariantLineBundle {
        self.tensor(&self.dual(from), to)
    }

    /// `L ⊗ ω_S^{-1}`.
    pub fn anticanonical_twist(&self, a: &EquivariantLineBundle) -> EquivariantLineBundle {
        self.tensor(a, &self.dual(&self.canonical_bundle()))
    }

    pub fn is_structure_sheaf(&self, a: &EquivariantLineBundle) -> bool {
        self.is_numerically_trivial(a)
            && self
                .group()
                .is_identity(&self.group().element(a.character.weights()).expect("rank"))
    }

    /// Both curve classes are zero (the bundle is a pure character twist).
    pub fn is_numerically_trivial(&self, a: &EquivariantLineBundle) -> bool {
        self.c_classes().is_zero(&a.c) && self.d_classes().is_zero(&a.d)
    }

    pub fn format_bundle(&self, a: &EquivariantLineBundle) -> String {
        let c = format_combination(&a.c.coefficients, self.c_classes().labels());
        let d = format_combination(&a.d.coefficients, self.d_classes().labels());
        let divisor = match (c.as_str(), d.as_str()) {
            ("0", "0") => String::new(),
            ("0", d) => d.to_string(),
            (c, "0") => c.to_string(),
            (c, d) if d.starts_with('-') => format!("{c} - {}", &d[1..]),
            (c, d) => format!("{c} + {d}"),
        };
        if divisor.is_empty() {
            format!("O_X({})", a.character)
        } else {
            format!("O_X({divisor})({})", a.character)
        }
    }
}

/// Künneth for `L_C ⊠ L_D` on a product of curves.
pub fn kunneth(pc: (CohStatus, CohStatus), pd: (CohStatus, CohStatus)) -> [CohStatus; 3] {
    let (a0, a1) = pc;
    let (b0, b1) = pd;
    [a0.mul(&b0), a0.mul(&b1).add(&a1.mul(&b0)), a1.mul(&b1)]
}

/// What is known about `dim H^k(X, L)^G = dim H^k(S, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum InvariantStatus {
    /// Read off from `p_g = q = 0` or from the constants in `H⁰(O_X)`.
    Known {
        value: u64,
    },
    /// The total `H^k(X, L)` vanishes.
    ZeroByTotal,
    /// The only undetermined degree, fixed by `χ(S, L)`.
    Pinned {
        value: u64,
    },
    Bounded {
        lo: u64,
        hi: u64,
    },
}

impl InvariantStatus {
    pub fn exact_value(&self) -> Option<u64> {
        match *self {
            InvariantStatus::Known { value } | InvariantStatus::Pinned { value } => Some(value),
            InvariantStatus::ZeroByTotal => Some(0),
            InvariantStatus::Bounded { .. } => None,
        }
    }

    pub fn lo(&self) -> u64 {
        match *self {
            InvariantStatus::Bounded { lo, .. } => lo,
            _ => self.exact_value().expect("exact"),
        }
    }

    pub fn hi(&self) -> u64 {
        match *self {
            InvariantStatus::Bounded { hi, .. } => hi,
            _ => self.exact_value().expect("exact"),
        }
    }

    pub fn is_provably_zero(&self) -> bool {
        self.exact_value() == Some(0)
    }

    pub fn is_provably_nonzero(&self) -> bool {
        self.lo() > 0
    }
}

impl fmt::Display for InvariantStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InvariantStatus::Known { value } => write!(f, "{value}"),
            InvariantStatus::ZeroByTotal => write!(f, "0"),
            InvariantStatus::Pinned { value } => write!(f, "{value}*"),
            InvariantStatus::Bounded { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// Cohomology of one equivariant line bundle: totals on `X` and invariant
/// parts on `S`, with the curve-level inputs kept as evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub bidegree: Bidegree,
    pub chi_s: i64,
    pub curve_c: CurveCohomology,
    pub curve_d: CurveCohomology,
    pub total: [CohStatus; 3],
    pub invariant: [InvariantStatus; 3],
}

impl CohomologyProfile {
    pub fn is_invariant_zero(&self) -> bool {
        self.invariant.iter().all(InvariantStatus::is_provably_zero)
    }

    pub fn total_is_zero(&self) -> bool {
        self.total.iter().all(CohStatus::is_zero)
    }

    /// Alternating sum of the totals, when all are exact.
    pub fn total_euler(&self) -> Option<i64> {
        let v: Option<Vec<u64>> = self.total.iter().map(CohStatus::exact_value).collect();
        v.map(|v| v[0] as i64 - v[1] as i64 + v[2] as i64)
    }

    /// Alternating sum of the invariant parts, when all are exact.
    pub fn invariant_euler(&self) -> Option<i64> {
        let v: Option<Vec<u64>> = self
            .invariant
            .iter()
            .map(InvariantStatus::exact_value)
            .collect();
        v.map(|v| v[0] as i64 - v[1] as i64 + v[2] as i64)
    }
}

/// Computes the cohomology profile of `L` on `S`.
pub fn invariant_profile(
    bundle: &EquivariantLineBundle,
    surface: &ProductQuotientSurface,
) -> Result<CohomologyProfile, CohomologyError> {
    let curve_c = curve_cohomology(surface.c_classes(), &bundle.c);
    let curve_d = curve_cohomology(surface.d_classes(), &bundle.d);
    let total = kunneth((curve_c.h0, curve_c.h1), (curve_d.h0, curve_d.h1));
    let bidegree = bundle.bidegree();
    let chi_s = surface.chi(bidegree)?;

    let mut invariant: [Option<InvariantStatus>; 3] = [None; 3];
    for k in 0..3 {
        if total[k].is_zero() {
            invariant[k] = Some(InvariantStatus::ZeroByTotal);
        }
    }
    if surface.is_numerically_trivial(bundle) {
        // H⁰(O_X) is the constants, on which G acts trivially
        let trivial = surface.is_structure_sheaf(bundle);
        invariant[0] = Some(InvariantStatus::Known {
            value: u64::from(trivial),
        });
        if trivial {
            // q = p_g = 0
            invariant[1] = Some(InvariantStatus::Known { value: 0 });
            invariant[2] = Some(InvariantStatus::Known { value: 0 });
        }
    }

    let undetermined: Vec<usize> = (0..3).filter(|&k| invariant[k].is_none()).collect();
    if let [k] = undetermined[..] {
        let sign = |i: usize| if i.is_multiple_of(2) { 1 } else { -1 };
        let known: i64 = (0..3)
            .filter(|&i| i != k)
            .map(|i| {
                sign(i)
                    * invariant[i]
                        .and_then(|s| s.exact_value())
                        .expect("determined") as i64
            })
            .sum();
        let value = sign(k) * (chi_s - known);
        if value < 0 || value as u64 > total[k].hi() {
            return Err(CohomologyError::InconsistentPin {
                degree: k,
                value,
                total: total[k].hi(),
            });
        }
        invariant[k] = Some(InvariantStatus::Pinned {
            value: value as u64,
        });
    }
    let invariant = [0, 1, 2].map(|k| {
        invariant[k].unwrap_or(InvariantStatus::Bounded {
            lo: 0,
            hi: total[k].hi(),
        })
    });

    Ok(CohomologyProfile {
        bidegree,
        chi_s,
        curve_c,
        curve_d,
        total,
        invariant,
    })
}

/// Lower bound on the number of characters `χ` for which the
/// `χ`-isotypic part of an `n`-dimensional representation vanishes: the
/// multiplicities sum to `n`, so at most `n` characters occur.
pub fn pigeonhole_zero_character(total_dim: u64, character_count: u64) -> u64 {
    character_count.saturating_sub(total_dim)
}

/// `Ext^•_S(L_i, L_j)` for every ordered pair of a collection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub entries: Vec<Vec<CohomologyProfile>>,
}

impl ExtTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &CohomologyProfile {
        &self.entries[i][j]
    }
}

pub fn ext_table(
    collection: &[EquivariantLineBundle],
    surface: &ProductQuotientSurface,
) -> Result<ExtTable, CohomologyError> {
    let mut cache = ProfileCache::default();
    let entries = collection
        .iter()
        .map(|from| {
            collection
                .iter()
                .map(|to| cache.ext(surface, from, to))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtTable { entries })
}

/// Memoizes profiles by the normal form of the bundle; searches evaluate the
/// same differences many times over.
#[derive(Debug, Default)]
pub struct ProfileCache {
    profiles: HashMap<(Vec<i64>, Vec<i64>, crate::algebra::Character), CohomologyProfile>,
}

impl ProfileCache {
    pub fn profile(
        &mut self,
        surface: &ProductQuotientSurface,
        bundle: &EquivariantLineBundle,
    ) -> Result<CohomologyProfile, CohomologyError> {
        let key = bundle.key();
        if let Some(p) = self.profiles.get(&key) {
            return Ok(p.clone());
        }
        let p = invariant_profile(bundle, surface)?;
        self.profiles.insert(key, p.clone());
        Ok(p)
    }

    /// Profile of `Ext^•(from, to)`.
    pub fn ext(
        &mut self,
        surface: &ProductQuotientSurface,
        from: &EquivariantLineBundle,
        to: &EquivariantLineBundle,
    ) -> Result<CohomologyProfile, CohomologyError> {
        self.profile(surface, &surface.hom_bundle(from, to))
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Preset;

    fn e(v: u64) -> CohStatus {
        CohStatus::exact(v)
    }

    #[test]
    fn kunneth_examples() {
        assert_eq!(kunneth((e(0), e(6)), (e(1), e(4))), [e(0), e(6), e(24)]);
        assert_eq!(kunneth((e(0), e(6)), (e(0), e(6))), [e(0), e(0), e(36)]);
        assert_eq!(kunneth((e(0), e(0)), (e(3), e(5))), [e(0), e(0), e(0)]);
        assert_eq!(kunneth((e(1), e(4)), (e(1), e(4))), [e(1), e(8), e(16)]);
    }

    #[test]
    fn kunneth_propagates_ranges() {
        let r = CohStatus::range(1, 2);
        assert_eq!(kunneth((r, r), (e(0), e(0))), [e(0), e(0), e(0)]);
        assert_eq!(kunneth((r, r), (e(1), e(0)))[0], r);
    }

    #[test]
    fn profiles_from_the_construction() {
        let s = Preset::Z3Squared.surface().unwrap();
        for chi in s.group().characters().unwrap() {
            let w = chi.weights();
            let p = invariant_profile(&s.bundle(&[-2, 1], &[-2, 1], w).unwrap(), &s).unwrap();
            assert_eq!(
                p.invariant,
                [
                    InvariantStatus::ZeroByTotal,
                    InvariantStatus::ZeroByTotal,
                    InvariantStatus::Pinned { value: 4 }
                ]
            );
            let z = invariant_profile(&s.bundle(&[2, -1], &[], w).unwrap(), &s).unwrap();
            assert!(z.total_is_zero() && z.is_invariant_zero());
        }
    }

    #[test]
    fn structure_sheaf_and_torsion_twists() {
        let s = Preset::Z3Squared.surface().unwrap();
        let o = invariant_profile(&s.structure_sheaf(), &s).unwrap();
        assert_eq!(o.total, [e(1), e(8), e(16)]);
        assert_eq!(
            o.invariant.map(|x| x.exact_value()),
            [Some(1), Some(0), Some(0)]
        );
        let tau = invariant_profile(&s.bundle(&[], &[], &[1, 0]).unwrap(), &s).unwrap();
        assert_eq!(tau.invariant[0], InvariantStatus::Known { value: 0 });
        assert!(matches!(tau.invariant[1], InvariantStatus::Bounded { .. }));
    }

    #[test]
    fn one_factor_bundle_stays_bounded() {
        let s = Preset::Z3Squared.surface().unwrap();
        let p = invariant_profile(&s.bundle(&[-2, 1], &[], &[1, 2]).unwrap(), &s).unwrap();
        assert_eq!(p.total, [e(0), e(6), e(24)]);
        assert_eq!(p.invariant[1], InvariantStatus::Bounded { lo: 0, hi: 6 });
        assert_eq!(p.invariant[2], InvariantStatus::Bounded { lo: 0, hi: 24 });
        assert_eq!(p.chi_s, 2);
    }

    #[test]
    fn anticanonical_profile_pins_nine() {
        let s = Preset::Z3Squared.surface().unwrap();
        let minus_k = s.dual(&s.canonical_bundle());
        let p = invariant_profile(&minus_k, &s).unwrap();
        assert_eq!(p.total, [e(0), e(0), e(81)]);
        assert_eq!(p.invariant[2], InvariantStatus::Pinned { value: 9 });
    }

    #[test]
    fn pigeonhole() {
        assert_eq!(pigeonhole_zero_character(6, 9), 3);
        assert_eq!(pigeonhole_zero_character(0, 9), 9);
        assert_eq!(pigeonhole_zero_character(36, 9), 0);
    }

    #[test]
    fn ext_table_entries() {
        let s = Preset::Z3Squared.surface().unwrap();
        let t = [0, 0];
        let coll = vec![
            s.bundle(&[], &[], &t).unwrap(),
            s.bundle(&[-2, 1], &[], &t).unwrap(),
            s.bundle(&[], &[-2, 1], &t).unwrap(),
            s.bundle(&[-2, 1], &[-2, 1], &t).unwrap(),
        ];
        let table = ext_table(&coll, &s).unwrap();
        assert!(table.get(3, 0).total_is_zero());
        for i in 0..4 {
            assert_eq!(
                table.get(i, i).invariant.map(|x| x.exact_value()),
                [Some(1), Some(0), Some(0)]
            );
        }
        assert_eq!(
            table.get(0, 3).invariant[2],
            InvariantStatus::Pinned { value: 4 }
        );
    }

    #[test]
    fn bundle_formatting() {
        let s = Preset::Z3Squared.surface().unwrap();
        let b = s.bundle(&[-2, 1], &[-2, 1], &[0, 1]).unwrap();
        assert_eq!(s.format_bundle(&b), "O_X(-2E1 + E2 - 2F1 + F2)(χ[0,1])");
        assert_eq!(s.format_bundle(&s.structure_sheaf()), "O_X(χ[0,0])");
    }
}
