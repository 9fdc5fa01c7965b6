//! Heights, pseudoheights and Hochschild bookkeeping for exceptional
//! sequences of line bundles.
//!
//! Relative heights are interval valued. The lower end is the first degree
//! whose invariant Ext is not provably zero; the upper end is the first
//! degree provably nonzero, or, when the Euler characteristic rules out total
//! vanishing, the last degree that could still be nonzero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::algebra::AbelianGroupDescriptor;
use crate::cohomology::{CohomologyProfile, EquivariantLineBundle, InvariantStatus, ProfileCache};
use crate::exceptional::{ExceptionalCertificate, ExceptionalError, Verdict};
use crate::surface::{ProductQuotientSurface, SurfaceInvariants};

/// An integer or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendedInteger {
    Finite(i64),
    Infinity,
}

impl ExtendedInteger {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedInteger::Finite(_))
    }

    pub fn finite(&self) -> Option<i64> {
        match *self {
            ExtendedInteger::Finite(v) => Some(v),
            ExtendedInteger::Infinity => None,
        }
    }
}

impl From<i64> for ExtendedInteger {
    fn from(v: i64) -> Self {
        ExtendedInteger::Finite(v)
    }
}

impl Ord for ExtendedInteger {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedInteger::Finite(a), ExtendedInteger::Finite(b)) => a.cmp(b),
            (ExtendedInteger::Finite(_), ExtendedInteger::Infinity) => Ordering::Less,
            (ExtendedInteger::Infinity, ExtendedInteger::Finite(_)) => Ordering::Greater,
            (ExtendedInteger::Infinity, ExtendedInteger::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtendedInteger {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtendedInteger {
    type Output = ExtendedInteger;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedInteger::Finite(a), ExtendedInteger::Finite(b)) => {
                ExtendedInteger::Finite(a + b)
            }
            _ => ExtendedInteger::Infinity,
        }
    }
}

impl fmt::Display for ExtendedInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedInteger::Finite(v) => write!(f, "{v}"),
            ExtendedInteger::Infinity => write!(f, "∞"),
        }
    }
}

/// A closed interval `[lo, hi]` in the extended integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeightInterval {
    pub lo: ExtendedInteger,
    pub hi: ExtendedInteger,
}

impl HeightInterval {
    pub fn exact(v: ExtendedInteger) -> Self {
        HeightInterval { lo: v, hi: v }
    }

    pub fn infinite() -> Self {
        HeightInterval::exact(ExtendedInteger::Infinity)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<ExtendedInteger> {
        self.is_exact().then_some(self.lo)
    }

    pub fn shift(&self, k: i64) -> Self {
        HeightInterval {
            lo: self.lo + k.into(),
            hi: self.hi + k.into(),
        }
    }

    /// Pointwise minimum, the interval of `min(x, y)`.
    pub fn min(&self, other: &Self) -> Self {
        HeightInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
}

impl Add for HeightInterval {
    type Output = HeightInterval;

    fn add(self, rhs: Self) -> Self {
        HeightInterval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl fmt::Display for HeightInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// `e` from a profile of `Ext^•(E, E')`.
pub fn height_from_profile(profile: &CohomologyProfile) -> HeightInterval {
    let inv = &profile.invariant;
    let lo = (0..3).find(|&k| !inv[k].is_provably_zero());
    let Some(lo) = lo else {
        return HeightInterval::infinite();
    };
    let hi = match (0..3).find(|&k| inv[k].is_provably_nonzero()) {
        Some(k) => ExtendedInteger::Finite(k as i64),
        None if profile.chi_s != 0 => {
            let last = (0..3)
                .rev()
                .find(|&k| !inv[k].is_provably_zero())
                .expect("lo exists");
            ExtendedInteger::Finite(last as i64)
        }
        None => ExtendedInteger::Infinity,
    };
    HeightInterval {
        lo: ExtendedInteger::Finite(lo as i64),
        hi,
    }
}

/// `e(L1, L2) = min { k : Ext^k(L1, L2) ≠ 0 }`.
pub fn relative_height(
    l1: &EquivariantLineBundle,
    l2: &EquivariantLineBundle,
    surface: &ProductQuotientSurface,
) -> Result<HeightInterval, ExceptionalError> {
    Ok(height_from_profile(
        &ProfileCache::default().ext(surface, l1, l2)?,
    ))
}

/// `e(L, S^{-1}(L′)) = 2 + e(L, L′ ⊗ ω_S^{-1})`.
pub fn serre_wraparound_height(
    l: &EquivariantLineBundle,
    l_prime: &EquivariantLineBundle,
    surface: &ProductQuotientSurface,
) -> Result<HeightInterval, ExceptionalError> {
    wraparound(l, l_prime, surface, &mut ProfileCache::default())
}

fn wraparound(
    l: &EquivariantLineBundle,
    l_prime: &EquivariantLineBundle,
    surface: &ProductQuotientSurface,
    cache: &mut ProfileCache,
) -> Result<HeightInterval, ExceptionalError> {
    let twisted = surface.anticanonical_twist(l_prime);
    Ok(height_from_profile(&cache.ext(surface, l, &twisted)?).shift(2))
}

/// One chain `a_0 < ⋯ < a_p` with its height interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainHeight {
    pub chain: Vec<usize>,
    pub value: HeightInterval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pseudoheight {
    pub value: HeightInterval,
    /// Chains attaining the lower and upper ends of `value`.
    pub lower_witness: Option<ChainHeight>,
    pub upper_witness: Option<ChainHeight>,
    pub chains_considered: usize,
    pub chains_skipped_infinite: usize,
}

/// Minimum over increasing chains of link heights plus wraparound minus `p`.
pub fn pseudoheight(
    collection: &[EquivariantLineBundle],
    surface: &ProductQuotientSurface,
) -> Result<Pseudoheight, ExceptionalError> {
    if collection.is_empty() {
        return Err(ExceptionalError::Empty);
    }
    let mut cache = ProfileCache::default();
    let n = collection.len();
    let mut links = vec![vec![HeightInterval::infinite(); n]; n];
    let mut wraps = vec![vec![HeightInterval::infinite(); n]; n];
    for i in 0..n {
        for j in i..n {
            if i < j {
                links[i][j] =
                    height_from_profile(&cache.ext(surface, &collection[i], &collection[j])?);
            }
            // wraparound from the last member a_p = j back to a_0 = i
            wraps[i][j] = wraparound(&collection[j], &collection[i], surface, &mut cache)?;
        }
    }

    let mut result = Pseudoheight {
        value: HeightInterval::infinite(),
        lower_witness: None,
        upper_witness: None,
        chains_considered: 0,
        chains_skipped_infinite: 0,
    };
    for mask in 1u32..(1 << n) {
        let chain: Vec<usize> = (0..n).filter(|&k| mask & (1 << k) != 0).collect();
        result.chains_considered += 1;
        let p = chain.len() as i64 - 1;
        let mut total = wraps[chain[0]][chain[chain.len() - 1]];
        for w in chain.windows(2) {
            total = total + links[w[0]][w[1]];
        }
        if total.lo == ExtendedInteger::Infinity {
            result.chains_skipped_infinite += 1;
            continue;
        }
        let total = total.shift(-p);
        let witness = ChainHeight {
            chain: chain.clone(),
            value: total,
        };
        if total.lo < result.value.lo {
            result.lower_witness = Some(witness.clone());
        }
        if total.hi < result.value.hi {
            result.upper_witness = Some(witness);
        }
        result.value = result.value.min(&total);
    }
    Ok(result)
}

/// The collection followed by its twists by `ω_S^{-1}`.
pub fn anticanonically_extended(
    collection: &[EquivariantLineBundle],
    surface: &ProductQuotientSurface,
) -> Vec<EquivariantLineBundle> {
    let mut out = collection.to_vec();
    out.extend(collection.iter().map(|b| surface.anticanonical_twist(b)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomEvidence {
    pub from: usize,
    pub to: usize,
    /// Bidegree of `E_to − E_from`.
    pub bidegree: (i64, i64),
    pub h0: InvariantStatus,
    /// One of the curve degrees is negative, so `H⁰` vanishes on `X`.
    pub negative_factor: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomFreeCheck {
    pub hom_free: bool,
    pub evidence: Vec<HomEvidence>,
    /// Pairs whose `Ext⁰` is not provably zero.
    pub failures: Vec<(usize, usize)>,
}

/// `Ext⁰(E_i, E_j) = 0` for `i < j ≤ i + n` on the extended collection.
/// Negative Ext vanishes between sheaves, so only degree 0 is checked.
pub fn hom_free_check(
    collection: &[EquivariantLineBundle],
    surface: &ProductQuotientSurface,
) -> Result<HomFreeCheck, ExceptionalError> {
    let mut cache = ProfileCache::default();
    let n = collection.len();
    let extended = anticanonically_extended(collection, surface);
    let mut evidence = Vec::new();
    let mut failures = Vec::new();
    for i in 0..extended.len() {
        for j in i + 1..=(i + n).min(extended.len() - 1) {
            let profile = cache.ext(surface, &extended[i], &extended[j])?;
            let h0 = profile.invariant[0];
            if !h0.is_provably_zero() {
                failures.push((i, j));
            }
            evidence.push(HomEvidence {
                from: i,
                to: j,
                bidegree: (profile.bidegree.c, profile.bidegree.d),
                h0,
                negative_factor: profile.bidegree.c < 0 || profile.bidegree.d < 0,
            });
        }
    }
    Ok(HomFreeCheck {
        hom_free: failures.is_empty(),
        evidence,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CyclicVerdict {
    /// A chain with provably nonzero `Ext¹` links closes up.
    Connected,
    /// No chain of possibly nonzero links closes up.
    NotConnected,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WraparoundEvidence {
    pub first: usize,
    pub last: usize,
    /// `Ext¹(E_last, E_first ⊗ ω^{-1})`, invariant and total.
    pub ext1: InvariantStatus,
    pub ext1_total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicExt1Check {
    pub verdict: CyclicVerdict,
    /// Every wraparound `Ext¹` is provably zero.
    pub negative_certificate: bool,
    pub wraparounds: Vec<WraparoundEvidence>,
    pub chain: Option<Vec<usize>>,
}

/// Searches for a chain `a_0 < ⋯ < a_p` with nonzero `Ext¹` links and a
/// nonzero `Ext¹(E_{a_p}, E_{a_0} ⊗ ω^{-1})`; `p = 0` is allowed.
pub fn cyclic_ext1_check(
    collection: &[EquivariantLineBundle],
    surface: &ProductQuotientSurface,
) -> Result<CyclicExt1Check, ExceptionalError> {
    let mut cache = ProfileCache::default();
    let n = collection.len();
    let mut link = vec![vec![InvariantStatus::ZeroByTotal; n]; n];
    let mut wrap = vec![vec![InvariantStatus::ZeroByTotal; n]; n];
    let mut wraparounds = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i < j {
                link[i][j] = cache
                    .ext(surface, &collection[i], &collection[j])?
                    .invariant[1];
            }
            let twisted = surface.anticanonical_twist(&collection[i]);
            let profile = cache.ext(surface, &collection[j], &twisted)?;
            wrap[i][j] = profile.invariant[1];
            wraparounds.push(WraparoundEvidence {
                first: i,
                last: j,
                ext1: profile.invariant[1],
                ext1_total: profile.total[1].hi(),
            });
        }
    }
    let negative_certificate = wraparounds.iter().all(|w| w.ext1.is_provably_zero());

    let reach = |keep: &dyn Fn(&InvariantStatus) -> bool| -> Option<Vec<usize>> {
        for start in 0..n {
            // paths from `start` along kept links, tracked with predecessors
            let mut pred: Vec<Option<usize>> = vec![None; n];
            let mut reached = vec![false; n];
            reached[start] = true;
            for j in start..n {
                if !reached[j] {
                    continue;
                }
                if keep(&wrap[start][j]) {
                    let mut chain = vec![j];
                    let mut k = j;
                    while let Some(p) = pred[k] {
                        chain.push(p);
                        k = p;
                    }
                    chain.reverse();
                    return Some(chain);
                }
                for m in j + 1..n {
                    if !reached[m] && keep(&link[j][m]) {
                        reached[m] = true;
                        pred[m] = Some(j);
                    }
                }
            }
        }
        None
    };

    let certain = reach(&|s: &InvariantStatus| s.is_provably_nonzero());
    let possible = reach(&|s: &InvariantStatus| !s.is_provably_zero());
    let (verdict, chain) = match (certain, possible) {
        (Some(c), _) => (CyclicVerdict::Connected, Some(c)),
        (None, None) => (CyclicVerdict::NotConnected, None),
        (None, Some(c)) => (CyclicVerdict::Undetermined, Some(c)),
    };
    Ok(CyclicExt1Check {
        verdict,
        negative_certificate,
        wraparounds,
        chain,
    })
}

/// `h⁰(S, 2K_S) > 0`, equivalent by Serre duality to `H²(S, ω^{-1}) ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub h0_2k: InvariantStatus,
    pub holds: bool,
}

pub fn anticanonical_hypothesis(
    surface: &ProductQuotientSurface,
) -> Result<HypothesisCheck, ExceptionalError> {
    let k = surface.canonical_bundle();
    let profile = ProfileCache::default().profile(surface, &surface.tensor(&k, &k))?;
    let h0 = profile.invariant[0];
    Ok(HypothesisCheck {
        h0_2k: h0,
        holds: h0.is_provably_nonzero(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightReport {
    pub relative_heights: Vec<Vec<HeightInterval>>,
    pub hom_free: HomFreeCheck,
    pub cyclic: CyclicExt1Check,
    pub chain_pseudoheight: Pseudoheight,
    pub hypothesis: HypothesisCheck,
    /// Lower bound from Hom-freeness and the failure of cyclic connectivity.
    pub structural_lower_bound: Option<i64>,
    /// Upper bound `4` for line bundles when the hypothesis holds.
    pub structural_upper_bound: Option<i64>,
    pub pseudoheight: HeightInterval,
    pub height: HeightInterval,
    /// Chain enumeration agrees with the structural bounds.
    pub consistent: bool,
}

/// Combines the pieces: Hom-free gives `ph ≥ 3`, adding non-connectivity
/// gives `ph ≥ 4`, the hypothesis gives `ph ≤ 4`, and `ph = 4` forces
/// `h = 4`. Otherwise only `h ≥ ph` is known.
pub fn height_conclusion(
    relative_heights: Vec<Vec<HeightInterval>>,
    hom_free: HomFreeCheck,
    cyclic: CyclicExt1Check,
    chain_pseudoheight: Pseudoheight,
    hypothesis: HypothesisCheck,
) -> HeightReport {
    const DIM: i64 = 2;
    let structural_lower_bound = match (hom_free.hom_free, cyclic.verdict) {
        (true, CyclicVerdict::NotConnected) => Some(2 + DIM),
        (true, _) => Some(1 + DIM),
        (false, _) => None,
    };
    let structural_upper_bound = hypothesis.holds.then_some(4);

    let mut ph = chain_pseudoheight.value;
    if let Some(lb) = structural_lower_bound {
        ph.lo = ph.lo.max(lb.into());
    }
    if let Some(ub) = structural_upper_bound {
        ph.hi = ph.hi.min(ub.into());
    }
    let consistent = ph.lo <= ph.hi;

    let height = if hypothesis.holds && ph.exact_value() == Some(ExtendedInteger::Finite(4)) {
        HeightInterval::exact(4.into())
    } else {
        HeightInterval {
            lo: ph.lo,
            hi: ExtendedInteger::Infinity,
        }
    };
    HeightReport {
        relative_heights,
        hom_free,
        cyclic,
        chain_pseudoheight,
        hypothesis,
        structural_lower_bound,
        structural_upper_bound,
        pseudoheight: ph,
        height,
        consistent,
    }
}

/// Runs every height computation for a collection.
pub fn height_report(
    collection: &[EquivariantLineBundle],
    surface: &ProductQuotientSurface,
) -> Result<HeightReport, ExceptionalError> {
    let mut cache = ProfileCache::default();
    let mut relative = Vec::with_capacity(collection.len());
    for a in collection {
        let mut row = Vec::with_capacity(collection.len());
        for b in collection {
            row.push(height_from_profile(&cache.ext(surface, a, b)?));
        }
        relative.push(row);
    }
    Ok(height_conclusion(
        relative,
        hom_free_check(collection, surface)?,
        cyclic_ext1_check(collection, surface)?,
        pseudoheight(collection, surface)?,
        anticanonical_hypothesis(surface)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    Isomorphism,
    Monomorphism,
    Unknown,
}

/// Behaviour of `HH^k(S) → HH^k(A)` for `k = 0..=4` given the height.
pub fn hh_restriction_verdict(height: ExtendedInteger) -> Vec<(u32, Restriction)> {
    (0..=4u32)
        .map(|k| {
            let verdict = match height {
                ExtendedInteger::Infinity => Restriction::Isomorphism,
                ExtendedInteger::Finite(h) if (k as i64) <= h - 2 => Restriction::Isomorphism,
                ExtendedInteger::Finite(h) if k as i64 == h - 1 => Restriction::Monomorphism,
                ExtendedInteger::Finite(_) => Restriction::Unknown,
            };
            (k, verdict)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkrHomology {
    /// `h^{p,q} = dim H^q(Ω^p)`, indexed `[p][q]`.
    pub hodge: [[u64; 3]; 3],
    /// `(t, dim HH_t)` for `t = -2..=2`.
    pub dims: Vec<(i64, u64)>,
    pub total: u64,
    pub non_preset: bool,
}

/// `HH_t(S) = ⊕_p H^{t+p}(S, Ω^p)` with the Hodge diamond of a surface with
/// `p_g = q = 0`: only `h^{0,0} = h^{2,2} = 1` and `h^{1,1} = b_2`.
pub fn hkr_homology(invariants: &SurfaceInvariants) -> HkrHomology {
    let b2 = invariants.b2.max(0) as u64;
    let mut hodge = [[0u64; 3]; 3];
    hodge[0][0] = 1;
    hodge[1][1] = b2;
    hodge[2][2] = 1;
    let dims: Vec<(i64, u64)> = (-2..=2i64)
        .map(|t| {
            let dim = (0..=2i64)
                .filter_map(|p| {
                    let q = t + p;
                    (0..=2).contains(&q).then(|| hodge[p as usize][q as usize])
                })
                .sum();
            (t, dim)
        })
        .collect();
    let total = dims.iter().map(|&(_, d)| d).sum();
    HkrHomology {
        hodge,
        dims,
        total,
        non_preset: invariants.non_preset,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HochschildReport {
    pub surface: HkrHomology,
    /// Each exceptional object contributes `C` in degree 0.
    pub exceptional_contribution: u64,
    /// `(t, dim HH_t(A))` for the orthogonal complement.
    pub complement: Vec<(i64, u64)>,
    pub complement_k_group: AbelianGroupDescriptor,
    pub quasiphantom: bool,
    pub phantom: bool,
    pub additivity_holds: bool,
}

/// Complement invariants for an exceptional sequence of the given length,
/// by additivity of `K` and `HH_*` over the semiorthogonal decomposition.
pub fn complement_invariants(
    surface: &ProductQuotientSurface,
    length: usize,
) -> Result<HochschildReport, ExceptionalError> {
    let invariants = surface.invariants()?;
    let hh = hkr_homology(&invariants);
    let length = length as u64;
    let complement: Vec<(i64, u64)> = hh
        .dims
        .iter()
        .map(|&(t, d)| (t, if t == 0 { d.saturating_sub(length) } else { d }))
        .collect();
    let k_free = invariants.k_group.free_rank.saturating_sub(length as usize);
    let complement_k_group = invariants.k_group.with_free_rank(k_free);
    let complement_total: u64 = complement.iter().map(|&(_, d)| d).sum();
    let quasiphantom = complement_total == 0 && complement_k_group.is_finite();
    Ok(HochschildReport {
        additivity_holds: hh.total == length + complement_total,
        surface: hh,
        exceptional_contribution: length,
        phantom: quasiphantom && complement_k_group.torsion_order() == 1,
        complement,
        complement_k_group,
        quasiphantom,
    })
}

/// Hochschild homology and `K` of the complement of a valid sequence.
pub fn quasiphantom_verdict(
    certificate: &ExceptionalCertificate,
    surface: &ProductQuotientSurface,
) -> Result<Option<HochschildReport>, ExceptionalError> {
    if certificate.verdict != Verdict::Valid {
        return Ok(None);
    }
    complement_invariants(surface, certificate.length).map(Some)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhantomPairing {
    pub torsion_a: u64,
    pub torsion_b: u64,
    pub gcd: u64,
    /// Coprime torsion orders make the product of the complements a phantom.
    pub phantom: bool,
}

pub fn phantom_pairing(torsion_a: u64, torsion_b: u64) -> PhantomPairing {
    let gcd = num_integer::gcd(torsion_a, torsion_b);
    PhantomPairing {
        torsion_a,
        torsion_b,
        gcd,
        phantom: gcd == 1,
    }
}
