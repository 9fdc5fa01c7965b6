use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// A finitely generated abelian group presented as `Z/n_1 × ⋯ × Z/n_k`.
///
/// An order of `0` stands for a free factor `Z`. Everything downstream only
/// ever needs the finite case, but the presentation is kept general so the
/// same type can describe quotient groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    cyclic_orders: Vec<u64>,
}

/// Coordinate vector of a group element, each coordinate reduced modulo its
/// cyclic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<i64>,
}

/// A character `G → C^*`, stored by its weight vector. The value on `g` is
/// `exp(2πi · Σ w_i g_i / n_i)`, kept exactly as a [`RootOfUnity`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character {
    weights: Vec<i64>,
}

/// `exp(2πi · numerator / order)` in lowest terms; the trivial value is `0/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub numerator: u64,
    pub order: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity {
        numerator: 0,
        order: 1,
    };

    pub fn new(numerator: i64, order: u64) -> Self {
        assert!(order > 0, "root of unity with order 0");
        let n = numerator.rem_euclid(order as i64) as u64;
        let g = n.gcd(&order);
        RootOfUnity {
            numerator: n / g,
            order: order / g,
        }
    }

    pub fn is_one(&self) -> bool {
        self.numerator == 0
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let l = self.order.lcm(&other.order);
        let a = self.numerator * (l / self.order) + other.numerator * (l / other.order);
        RootOfUnity::new(a as i64, l)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            write!(f, "1")
        } else {
            write!(f, "ζ_{}^{}", self.order, self.numerator)
        }
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Character {
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ[")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "]")
    }
}

fn reduce(value: i64, order: u64) -> i64 {
    if order == 0 {
        value
    } else {
        value.rem_euclid(order as i64)
    }
}

impl FinAbGroup {
    pub fn new(cyclic_orders: Vec<u64>) -> Self {
        FinAbGroup { cyclic_orders }
    }

    /// `(Z/n)^k`.
    pub fn elementary(n: u64, k: usize) -> Self {
        FinAbGroup::new(vec![n; k])
    }

    pub fn trivial() -> Self {
        FinAbGroup::new(Vec::new())
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn is_finite(&self) -> bool {
        self.cyclic_orders.iter().all(|&n| n > 0)
    }

    /// Group order, `None` when a free factor is present.
    pub fn order(&self) -> Option<u64> {
        if self.is_finite() {
            Some(self.cyclic_orders.iter().product())
        } else {
            None
        }
    }

    fn finite_order(&self) -> Result<u64, AlgebraError> {
        self.order().ok_or(AlgebraError::InfiniteGroup)
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, AlgebraError> {
        if coords.len() != self.rank() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.rank(),
                found: coords.len(),
            });
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.cyclic_orders)
                .map(|(&c, &n)| reduce(c, n))
                .collect(),
        })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// The i-th standard generator `e_{i+1}`.
    pub fn basis(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = reduce(1, self.cyclic_orders[i]);
        GroupElement { coords }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.cyclic_orders)
                .map(|((&x, &y), &n)| reduce(x + y, n))
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.scale(a, -1)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.cyclic_orders)
                .map(|(&x, &n)| reduce(x * k, n))
                .collect(),
        }
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        a.coords.iter().all(|&c| c == 0)
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.coords.len() == self.rank()
            && a.coords
                .iter()
                .zip(&self.cyclic_orders)
                .all(|(&c, &n)| n == 0 || (0..n as i64).contains(&c))
    }

    /// All elements in lexicographic coordinate order (identity first).
    pub fn elements(&self) -> Result<Vec<GroupElement>, AlgebraError> {
        self.finite_order()?;
        Ok(lattice_box(&self.cyclic_orders)
            .into_iter()
            .map(|coords| GroupElement { coords })
            .collect())
    }

    pub fn element_order(&self, a: &GroupElement) -> Result<u64, AlgebraError> {
        self.finite_order()?;
        Ok(a.coords
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(&c, &n)| n / (c as u64).gcd(&n))
            .fold(1, |acc, k| acc.lcm(&k)))
    }

    /// The cyclic subgroup `⟨g⟩`, listed as `0, g, 2g, …`.
    pub fn subgroup_generated(&self, g: &GroupElement) -> Result<Vec<GroupElement>, AlgebraError> {
        let n = self.element_order(g)?;
        Ok((0..n as i64).map(|k| self.scale(g, k)).collect())
    }

    /// Subgroup generated by an arbitrary list of elements, sorted.
    pub fn generated_by(&self, gens: &[GroupElement]) -> Result<Subgroup, AlgebraError> {
        self.finite_order()?;
        let mut set: BTreeSet<GroupElement> = BTreeSet::new();
        set.insert(self.identity());
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Ok(Subgroup {
            elements: set.into_iter().collect(),
        })
    }

    /// Every subgroup, ordered by size and then by element list.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>, AlgebraError> {
        let elements = self.elements()?;
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        for g in &elements {
            found.insert(self.generated_by(std::slice::from_ref(g))?);
        }
        loop {
            let current: Vec<Subgroup> = found.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    let gens: Vec<GroupElement> =
                        a.elements.iter().chain(&b.elements).cloned().collect();
                    if found.insert(self.generated_by(&gens)?) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    pub fn character(&self, weights: &[i64]) -> Result<Character, AlgebraError> {
        let e = self.element(weights)?;
        Ok(Character { weights: e.coords })
    }

    pub fn trivial_character(&self) -> Character {
        Character {
            weights: vec![0; self.rank()],
        }
    }

    /// The dual group `Ĝ`, trivial character first.
    pub fn characters(&self) -> Result<Vec<Character>, AlgebraError> {
        Ok(self
            .elements()?
            .into_iter()
            .map(|e| Character { weights: e.coords })
            .collect())
    }

    /// `χ(g)` as an exact root of unity.
    pub fn evaluate(&self, chi: &Character, g: &GroupElement) -> Result<RootOfUnity, AlgebraError> {
        self.finite_order()?;
        let l = self.cyclic_orders.iter().fold(1u64, |acc, n| acc.lcm(n));
        let mut num: i64 = 0;
        for ((&w, &x), &n) in chi.weights.iter().zip(&g.coords).zip(&self.cyclic_orders) {
            num = (num + w * x * (l / n) as i64).rem_euclid(l as i64);
        }
        Ok(RootOfUnity::new(num, l))
    }

    pub fn character_mul(&self, a: &Character, b: &Character) -> Character {
        Character {
            weights: self
                .add(
                    &GroupElement {
                        coords: a.weights.clone(),
                    },
                    &GroupElement {
                        coords: b.weights.clone(),
                    },
                )
                .coords,
        }
    }

    pub fn character_inverse(&self, a: &Character) -> Character {
        Character {
            weights: self
                .neg(&GroupElement {
                    coords: a.weights.clone(),
                })
                .coords,
        }
    }

    /// `a · b^{-1}`.
    pub fn character_div(&self, a: &Character, b: &Character) -> Character {
        self.character_mul(a, &self.character_inverse(b))
    }

    pub fn character_order(&self, a: &Character) -> Result<u64, AlgebraError> {
        self.element_order(&GroupElement {
            coords: a.weights.clone(),
        })
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cyclic_orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .cyclic_orders
            .iter()
            .map(|&n| {
                if n == 0 {
                    "Z".to_string()
                } else {
                    format!("Z/{n}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" × "))
    }
}

/// A subgroup as a sorted list of its elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn intersection_order(&self, other: &Subgroup) -> usize {
        self.elements.iter().filter(|g| other.contains(g)).count()
    }
}

/// All vectors `v` with `0 ≤ v_i < n_i`, lexicographic.
fn lattice_box(orders: &[u64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &n in orders {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n as i64).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3sq() -> FinAbGroup {
        FinAbGroup::elementary(3, 2)
    }

    #[test]
    fn nine_characters_identity_first() {
        let g = z3sq();
        let chars = g.characters().unwrap();
        assert_eq!(chars.len(), 9);
        assert_eq!(chars[0], g.trivial_character());
    }

    #[test]
    fn trivial_group_has_only_trivial_character() {
        let g = FinAbGroup::trivial();
        let chars = g.characters().unwrap();
        assert_eq!(chars, vec![g.trivial_character()]);
        assert_eq!(g.order(), Some(1));
    }

    #[test]
    fn characters_reject_free_factor() {
        let g = FinAbGroup::new(vec![3, 0]);
        assert_eq!(g.characters(), Err(AlgebraError::InfiniteGroup));
    }

    /// Brute-force enumeration of homomorphisms (Z/2)^3 → μ_2: every map
    /// from basis vectors to {±1} extends uniquely, so there are 8 and each
    /// squares to the trivial character.
    #[test]
    fn z2_cubed_dual_by_homomorphism_enumeration() {
        let g = FinAbGroup::elementary(2, 3);
        let elements = g.elements().unwrap();
        let mut homs: Vec<Vec<RootOfUnity>> = Vec::new();
        for images in 0..8u32 {
            let table: Vec<RootOfUnity> = elements
                .iter()
                .map(|e| {
                    let mut acc = RootOfUnity::ONE;
                    for i in 0..3 {
                        if e.coords()[i] == 1 && images & (1 << i) != 0 {
                            acc = acc.mul(&RootOfUnity::new(1, 2));
                        }
                    }
                    acc
                })
                .collect();
            homs.push(table);
        }
        let chars = g.characters().unwrap();
        assert_eq!(chars.len(), 8);
        for chi in &chars {
            assert!(g.character_order(chi).unwrap() <= 2);
            let table: Vec<RootOfUnity> = elements
                .iter()
                .map(|e| g.evaluate(chi, e).unwrap())
                .collect();
            assert!(homs.contains(&table));
        }
    }

    #[test]
    fn cyclic_subgroups() {
        let g = z3sq();
        let e1 = g.basis(0);
        let h = g.subgroup_generated(&e1).unwrap();
        assert_eq!(h, vec![g.identity(), e1.clone(), g.scale(&e1, 2)]);
        assert_eq!(
            g.subgroup_generated(&g.identity()).unwrap(),
            vec![g.identity()]
        );
        let d = g.add(&g.basis(0), &g.basis(1));
        assert_eq!(g.subgroup_generated(&d).unwrap().len(), 3);
    }

    #[test]
    fn subgroup_lattice_of_z3_squared() {
        // trivial, four lines, whole group
        let subs = z3sq().subgroups().unwrap();
        let sizes: Vec<usize> = subs.iter().map(Subgroup::order).collect();
        assert_eq!(sizes, vec![1, 3, 3, 3, 3, 9]);
    }

    #[test]
    fn pairing_is_bilinear_exhaustively() {
        let g = z3sq();
        let elements = g.elements().unwrap();
        for chi in g.characters().unwrap() {
            for a in &elements {
                for b in &elements {
                    let lhs = g.evaluate(&chi, &g.add(a, b)).unwrap();
                    let rhs = g
                        .evaluate(&chi, a)
                        .unwrap()
                        .mul(&g.evaluate(&chi, b).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    /// Σ_g χ(g) = 0 for χ ≠ 1: the values are equidistributed over the
    /// |im χ|-th roots of unity.
    #[test]
    fn character_orthogonality() {
        let g = z3sq();
        let elements = g.elements().unwrap();
        for chi in g.characters().unwrap().into_iter().skip(1) {
            let k = g.character_order(&chi).unwrap();
            let mut counts = std::collections::BTreeMap::new();
            for e in &elements {
                let v = g.evaluate(&chi, e).unwrap();
                let rescaled = v.numerator * (k / v.order);
                *counts.entry(rescaled).or_insert(0usize) += 1;
            }
            assert_eq!(counts.len() as u64, k);
            assert!(counts.values().all(|&c| c == elements.len() / k as usize));
        }
    }

    #[test]
    fn character_group_closed() {
        let g = z3sq();
        let chars = g.characters().unwrap();
        for a in &chars {
            assert!(chars.contains(&g.character_inverse(a)));
            for b in &chars {
                assert!(chars.contains(&g.character_mul(a, b)));
            }
        }
    }
}
