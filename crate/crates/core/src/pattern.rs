//! Bit-packed Boolean vectors and square matrices over the Boolean semiring.
//!
//! Every primitivity question in this crate depends only on zero patterns, so
//! these two types carry all of the state the propagation engine touches.
//! Indices are 0-based; `Display` renders them 1-based.

use std::fmt;
use std::ops::Mul;

use fixedbitset::FixedBitSet;

/// Support of a nonnegative `n`-vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternVector {
    bits: FixedBitSet,
}

impl PatternVector {
    pub fn empty(dim: usize) -> Self {
        PatternVector {
            bits: FixedBitSet::with_capacity(dim),
        }
    }

    pub fn full(dim: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(dim);
        bits.insert_range(..);
        PatternVector { bits }
    }

    /// Support of the standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::empty(dim);
        v.insert(index);
        v
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(dim: usize, indices: I) -> Self {
        let mut v = Self::empty(dim);
        for i in indices {
            v.insert(i);
        }
        v
    }

    pub(crate) fn from_bits(bits: FixedBitSet) -> Self {
        PatternVector { bits }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    /// Panics if `i >= dim`.
    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.bits.insert(i);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn is_subset(&self, other: &PatternVector) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &PatternVector) {
        self.bits.union_with(&other.bits);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub(crate) fn bits(&self) -> &FixedBitSet {
        &self.bits
    }
}

impl fmt::Display for PatternVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PatternVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternVector({}; {})", self.dim(), self)
    }
}

/// Square Boolean matrix stored as bit-packed rows. Entry `(i, j)` set means
/// "positive".
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternMatrix {
    dim: usize,
    rows: Vec<FixedBitSet>,
}

impl PatternMatrix {
    pub fn zeros(dim: usize) -> Self {
        PatternMatrix {
            dim,
            rows: vec![FixedBitSet::with_capacity(dim); dim],
        }
    }

    pub fn ones(dim: usize) -> Self {
        let mut row = FixedBitSet::with_capacity(dim);
        row.insert_range(..);
        PatternMatrix {
            dim,
            rows: vec![row; dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i);
        }
        m
    }

    /// Panics if any index is out of range.
    pub fn from_entries<I: IntoIterator<Item = (usize, usize)>>(dim: usize, entries: I) -> Self {
        let mut m = Self::zeros(dim);
        for (i, j) in entries {
            m.set(i, j);
        }
        m
    }

    /// Builds the matrix whose column `j` is `columns[j]`.
    pub fn from_columns(columns: &[PatternVector]) -> Self {
        let dim = columns.len();
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.dim(), dim, "column {j} has wrong dimension");
            for i in col.iter() {
                m.rows[i].insert(j);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i].insert(j);
    }

    pub fn row(&self, i: usize) -> PatternVector {
        PatternVector::from_bits(self.rows[i].clone())
    }

    pub fn column(&self, j: usize) -> PatternVector {
        let mut v = PatternVector::empty(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            if row.contains(j) {
                v.insert(i);
            }
        }
        v
    }

    /// All columns, in index order.
    pub fn columns(&self) -> Vec<PatternVector> {
        let t = self.transpose();
        t.rows.into_iter().map(PatternVector::from_bits).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                t.rows[j].insert(i);
            }
        }
        t
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Entrywise positive.
    pub fn is_positive(&self) -> bool {
        self.rows.iter().all(|r| r.is_full())
    }

    pub fn column_is_full(&self, j: usize) -> bool {
        self.rows.iter().all(|r| r.contains(j))
    }

    /// Positive entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.ones().map(move |j| (i, j)))
    }

    /// Boolean product: row `i` of the result is the union of rows `k` of
    /// `rhs` over the positive entries `(i, k)` of `self`.
    pub fn bool_mul(&self, rhs: &PatternMatrix) -> PatternMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in Boolean product");
        let mut out = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            let acc = &mut out.rows[i];
            for k in row.ones() {
                acc.union_with(&rhs.rows[k]);
            }
        }
        out
    }

    /// Boolean power `self^r`; `r = 0` gives the identity.
    pub fn bool_pow(&self, r: u32) -> PatternMatrix {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut e = r;
        while e > 0 {
            if e & 1 == 1 {
                result = result.bool_mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.bool_mul(&base);
            }
        }
        result
    }
}

impl Mul for &PatternMatrix {
    type Output = PatternMatrix;

    fn mul(self, rhs: &PatternMatrix) -> PatternMatrix {
        self.bool_mul(rhs)
    }
}

impl fmt::Display for PatternMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            for j in 0..self.dim {
                f.write_str(if row.contains(j) { "1" } else { "." })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PatternMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PatternMatrix({})", self.dim)?;
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_mul(a: &PatternMatrix, b: &PatternMatrix) -> PatternMatrix {
        let n = a.dim();
        let mut c = PatternMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if (0..n).any(|k| a.get(i, k) && b.get(k, j)) {
                    c.set(i, j);
                }
            }
        }
        c
    }

    #[test]
    fn product_matches_triple_loop() {
        let a = PatternMatrix::from_entries(4, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 2)]);
        let b = PatternMatrix::from_entries(4, [(0, 0), (1, 3), (2, 1), (3, 3)]);
        assert_eq!(a.bool_mul(&b), naive_mul(&a, &b));
        assert_eq!(&a * &PatternMatrix::identity(4), a);
    }

    #[test]
    fn power_of_cyclic_permutation_is_periodic() {
        let p = PatternMatrix::from_entries(3, [(1, 0), (2, 1), (0, 2)]);
        assert_eq!(p.bool_pow(3), PatternMatrix::identity(3));
        assert_eq!(p.bool_pow(4), p);
        assert_eq!(p.bool_pow(0), PatternMatrix::identity(3));
    }

    #[test]
    fn columns_round_trip() {
        let a = PatternMatrix::from_entries(3, [(0, 1), (2, 1), (1, 0)]);
        let cols = a.columns();
        assert_eq!(cols[1], PatternVector::from_indices(3, [0, 2]));
        assert_eq!(a.column(1), cols[1]);
        assert_eq!(PatternMatrix::from_columns(&cols), a);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn full_and_positive() {
        assert!(PatternMatrix::ones(5).is_positive());
        assert!(!PatternMatrix::identity(2).is_positive());
        assert!(PatternVector::full(70).is_full());
        assert_eq!(PatternVector::full(70).len(), 70);
        let m = PatternMatrix::from_entries(2, [(0, 1), (1, 1)]);
        assert!(m.column_is_full(1));
        assert!(!m.column_is_full(0));
    }

    #[test]
    fn display_is_one_based() {
        let v = PatternVector::from_indices(4, [0, 3]);
        assert_eq!(v.to_string(), "{1,4}");
        assert_eq!(PatternVector::empty(2).to_string(), "{}");
    }
}
