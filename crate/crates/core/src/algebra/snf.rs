use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Dense row-major integer matrix. Row count may be zero while the column
/// count is still meaningful (a presentation with no relations).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self, AlgebraError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(AlgebraError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    acc = checked_add(acc, checked_mul(self.get(i, k), other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[i64]) -> Result<Vec<i64>, AlgebraError> {
        if v.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![0i64; self.cols];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = checked_add(*o, checked_mul(x, self.get(i, j))?)?;
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: i64) -> Result<(), AlgebraError> {
        for j in 0..self.cols {
            let v = checked_add(self.get(dst, j), checked_mul(k, self.get(src, j))?)?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// col[dst] += k · col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: i64) -> Result<(), AlgebraError> {
        for i in 0..self.rows {
            let v = checked_add(self.get(i, dst), checked_mul(k, self.get(i, src))?)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), AlgebraError> {
        for j in 0..self.cols {
            let v = self.get(i, j).checked_neg().ok_or(AlgebraError::Overflow)?;
            self.set(i, j, v);
        }
        Ok(())
    }
}

fn checked_add(a: i64, b: i64) -> Result<i64, AlgebraError> {
    a.checked_add(b).ok_or(AlgebraError::Overflow)
}

fn checked_mul(a: i64, b: i64) -> Result<i64, AlgebraError> {
    a.checked_mul(b).ok_or(AlgebraError::Overflow)
}

/// Result of [`smith_normal_form`]: `left · M · right = diag(invariants)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    /// Diagonal entries `d_1 | d_2 | ⋯`, nonnegative, length `min(rows, cols)`.
    pub diagonal: Vec<i64>,
    pub rank: usize,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
}

impl SmithForm {
    /// Invariant factors greater than one (the torsion part of the cokernel).
    pub fn torsion(&self) -> Vec<u64> {
        self.diagonal
            .iter()
            .filter(|&&d| d > 1)
            .map(|&d| d as u64)
            .collect()
    }

    /// Free rank of `Z^cols / rowspace(M)`.
    pub fn free_rank(&self) -> usize {
        self.right.cols() - self.rank
    }
}

/// Smith normal form over the integers with unimodular transforms.
///
/// Row operations act on `left`, column operations on `right`, and the
/// inverse of every column operation is applied to `right_inverse` so that
/// normal-form coordinates can be lifted back to generator space.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm, AlgebraError> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut right_inverse = IntMatrix::identity(cols);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = smallest_nonzero(&a, t) {
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);
            right_inverse.swap_rows(t, pj);

            let pivot = a.get(t, t);
            let mut clean = true;
            for i in t + 1..rows {
                let q = a.get(i, t) / pivot;
                if q != 0 {
                    a.add_row_multiple(i, t, -q)?;
                    left.add_row_multiple(i, t, -q)?;
                }
                clean &= a.get(i, t) == 0;
            }
            for j in t + 1..cols {
                let q = a.get(t, j) / pivot;
                if q != 0 {
                    a.add_col_multiple(j, t, -q)?;
                    right.add_col_multiple(j, t, -q)?;
                    right_inverse.add_row_multiple(t, j, q)?;
                }
                clean &= a.get(t, j) == 0;
            }
            if !clean {
                continue;
            }

            // the pivot must divide the whole remaining block
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a.get(i, j) % pivot != 0);
            match offender {
                Some((i, _)) => {
                    a.add_row_multiple(t, i, 1)?;
                    left.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if a.get(t, t) == 0 {
            break;
        }
        if a.get(t, t) < 0 {
            a.negate_row(t)?;
            left.negate_row(t)?;
        }
        rank += 1;
    }

    let diagonal = (0..rows.min(cols)).map(|i| a.get(i, i)).collect();
    Ok(SmithForm {
        diagonal,
        rank,
        left,
        right,
        right_inverse,
    })
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j).unsigned_abs() as i64;
            if v != 0 && best.is_none_or(|(_, _, b)| v < b) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// `Z^n / rowspace(relations)` together with its Smith normal form.
///
/// Elements are written as generator-space row vectors; [`reduce`] maps them
/// to a canonical coordinate vector so that equality in the quotient is plain
/// vector equality.
///
/// [`reduce`]: PresentedGroup::reduce
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedGroup {
    generator_count: usize,
    relations: IntMatrix,
    smith: SmithForm,
}

impl PresentedGroup {
    pub fn new(relations: IntMatrix) -> Result<Self, AlgebraError> {
        let smith = smith_normal_form(&relations)?;
        Ok(PresentedGroup {
            generator_count: relations.cols(),
            relations,
            smith,
        })
    }

    pub fn from_relations(generator_count: usize, rows: &[Vec<i64>]) -> Result<Self, AlgebraError> {
        PresentedGroup::new(IntMatrix::from_rows(generator_count, rows)?)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn free_rank(&self) -> usize {
        self.smith.free_rank()
    }

    pub fn torsion(&self) -> Vec<u64> {
        self.smith.torsion()
    }

    pub fn descriptor(&self) -> AbelianGroupDescriptor {
        AbelianGroupDescriptor::new(self.free_rank(), self.torsion())
    }

    /// Modulus of normal-form coordinate `i`: `d_i` inside the rank, `0`
    /// (free) beyond it.
    fn modulus(&self, i: usize) -> i64 {
        if i < self.smith.rank {
            self.smith.diagonal[i]
        } else {
            0
        }
    }

    /// Canonical coordinates of `x` in the quotient.
    pub fn reduce(&self, x: &[i64]) -> Result<Vec<i64>, AlgebraError> {
        let y = self.smith.right.apply_row(x)?;
        Ok(y.into_iter()
            .enumerate()
            .map(|(i, v)| match self.modulus(i) {
                0 => v,
                d => v.rem_euclid(d),
            })
            .collect())
    }

    /// A generator-space representative of normal-form coordinates.
    pub fn lift(&self, normal_form: &[i64]) -> Result<Vec<i64>, AlgebraError> {
        self.smith.right_inverse.apply_row(normal_form)
    }

    pub fn is_zero(&self, x: &[i64]) -> Result<bool, AlgebraError> {
        Ok(self.reduce(x)?.iter().all(|&v| v == 0))
    }

    pub fn equal(&self, x: &[i64], y: &[i64]) -> Result<bool, AlgebraError> {
        let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero(&diff)
    }

    /// Order of the class of `x`; `None` if it has infinite order.
    pub fn order_of(&self, x: &[i64]) -> Result<Option<u64>, AlgebraError> {
        let nf = self.reduce(x)?;
        let mut order: u64 = 1;
        for (i, &v) in nf.iter().enumerate() {
            if v == 0 {
                continue;
            }
            match self.modulus(i) {
                0 => return Ok(None),
                d => {
                    let k = (d / num_integer::gcd(v, d)) as u64;
                    order = num_integer::lcm(order, k);
                }
            }
        }
        Ok(Some(order))
    }
}

/// `Z^free_rank ⊕ Z/t_1 ⊕ ⋯`, as reported in tables and certificates.
///
/// Equality compares the isomorphism class (free rank plus elementary
/// divisors), so `Z/6` equals `Z/2 ⊕ Z/3`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbelianGroupDescriptor {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroupDescriptor {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Self {
        AbelianGroupDescriptor {
            free_rank,
            torsion: torsion.into_iter().filter(|&t| t != 1).collect(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupDescriptor::new(rank, Vec::new())
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    /// Prime-power decomposition of the torsion, sorted.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &t in &self.torsion {
            let mut n = t;
            let mut p = 2;
            while n > 1 {
                if n % p == 0 {
                    let mut q = 1;
                    while n % p == 0 {
                        n /= p;
                        q *= p;
                    }
                    out.push(q);
                }
                p += 1;
            }
        }
        out.sort_unstable();
        out
    }

    /// Direct sum with `Z^k`.
    pub fn with_free_rank(&self, free_rank: usize) -> Self {
        AbelianGroupDescriptor::new(free_rank, self.torsion.clone())
    }
}

impl PartialEq for AbelianGroupDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank
            && self.elementary_divisors() == other.elementary_divisors()
    }
}

impl Eq for AbelianGroupDescriptor {}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for &t in &self.torsion {
            *counts.entry(t).or_default() += 1;
        }
        for (t, k) in counts {
            if k == 1 {
                parts.push(format!("Z/{t}"));
            } else {
                parts.push(format!("(Z/{t})^{k}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_transforms(m: &IntMatrix, s: &SmithForm) {
        let product = s.left.mul(m).unwrap().mul(&s.right).unwrap();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let expected = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(product.get(i, j), expected, "U·M·V not diagonal");
            }
        }
        let id = s.right.mul(&s.right_inverse).unwrap();
        assert_eq!(id, IntMatrix::identity(m.cols()));
    }

    #[test]
    fn orbit_relations_give_z_plus_z3() {
        // generators E1..E4; E1−E3, E2−E4, 3E1−3E2
        let g = PresentedGroup::from_relations(
            4,
            &[vec![1, 0, -1, 0], vec![0, 1, 0, -1], vec![3, -3, 0, 0]],
        )
        .unwrap();
        assert_eq!(g.descriptor(), AbelianGroupDescriptor::new(1, vec![3]));
        check_transforms(g.relations(), g.smith());
        // E1 − E2 has order 3, E1 infinite order
        assert_eq!(g.order_of(&[1, -1, 0, 0]).unwrap(), Some(3));
        assert_eq!(g.order_of(&[1, 0, 0, 0]).unwrap(), None);
        assert!(g.equal(&[1, 0, 0, 0], &[0, 0, 1, 0]).unwrap());
        assert!(!g.equal(&[1, 0, 0, 0], &[0, 1, 0, 0]).unwrap());
    }

    #[test]
    fn no_relations_is_free() {
        let g = PresentedGroup::from_relations(2, &[]).unwrap();
        assert_eq!(g.descriptor(), AbelianGroupDescriptor::free(2));
        assert_eq!(g.reduce(&[5, -7]).unwrap(), vec![5, -7]);
    }

    #[test]
    fn diag_2_3_is_cyclic_of_order_6() {
        let m = IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]).unwrap();
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, vec![1, 6]);
        check_transforms(&m, &s);
    }

    #[test]
    fn lift_round_trips() {
        let g = PresentedGroup::from_relations(3, &[vec![2, 4, 4], vec![-6, 6, 12]]).unwrap();
        for x in [[1, 2, 3], [-4, 0, 7], [0, 0, 0]] {
            let nf = g.reduce(&x).unwrap();
            let back = g.lift(&nf).unwrap();
            assert!(g.equal(&x, &back).unwrap());
        }
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2 + 1;
        let m = IntMatrix::from_rows(2, &[vec![big, 3], vec![big - 1, big]]).unwrap();
        assert_eq!(smith_normal_form(&m).unwrap_err(), AlgebraError::Overflow);
    }

    #[test]
    fn descriptor_display_and_equality() {
        let d = AbelianGroupDescriptor::new(2, vec![2, 2, 2, 2, 4, 4]);
        assert_eq!(d.to_string(), "Z^2 ⊕ (Z/2)^4 ⊕ (Z/4)^2");
        assert_eq!(
            AbelianGroupDescriptor::new(0, vec![6]),
            AbelianGroupDescriptor::new(0, vec![3, 2])
        );
        assert_ne!(
            AbelianGroupDescriptor::new(0, vec![4]),
            AbelianGroupDescriptor::new(0, vec![2, 2])
        );
        assert_eq!(AbelianGroupDescriptor::free(0).to_string(), "0");
    }
}
