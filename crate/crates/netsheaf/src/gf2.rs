//! Dense exact linear algebra over the two-element field.
//!
//! Everything downstream (coboundary matrices, kernel and cokernel bases,
//! span tests) reduces to row operations on bit matrices. Addition is XOR,
//! storage is one `u64`-packed bit vector per row, and every operation is
//! deterministic: identical inputs give bit-identical outputs, which the
//! golden tests rely on.

use std::fmt;
use std::str::FromStr;

/// A bit vector over GF(2). Bit `i` lives in word `i / 64` at position `i % 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Vector {
    words: Vec<u64>,
    len: usize,
}

impl GF2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Standard basis vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// XOR-assign (addition in GF(2)). Lengths must agree.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in GF(2) addition");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Standard bilinear form: parity of the AND of the two vectors.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in GF(2) dot product");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Vector({self})")
    }
}

impl FromStr for GF2Vector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = GF2Vector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(format!("invalid bit character {other:?}")),
            }
        }
        Ok(v)
    }
}

/// A dense bit matrix with row-major semantics. Zero rows or columns are legal.
#[derive(Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: Vec<GF2Vector>,
    cols: usize,
}

/// Result of reduced row echelon form: the unique RREF, its pivot columns
/// (strictly increasing), and therefore the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: GF2Matrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: (0..rows).map(|_| GF2Vector::zeros(cols)).collect(),
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<GF2Vector>, cols: usize) -> Self {
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has length {}, expected {cols}", r.len());
        }
        Self { rows, cols }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &GF2Vector {
        &self.rows[r]
    }

    pub fn column(&self, c: usize) -> GF2Vector {
        GF2Vector::from_bits(self.rows.iter().map(|r| r.get(c)))
    }

    pub fn columns(&self) -> Vec<GF2Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.num_rows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix-vector product; `v.len()` must equal the column count.
    pub fn mul_vector(&self, v: &GF2Vector) -> GF2Vector {
        assert_eq!(v.len(), self.cols, "vector length mismatch in mul_vector");
        GF2Vector::from_bits(self.rows.iter().map(|r| r.dot(v)))
    }

    /// XOR `block` into this matrix with its top-left corner at (`r0`, `c0`).
    ///
    /// Overlapping placements accumulate, which is exactly what a coboundary
    /// block for a self-loop needs.
    pub fn xor_block(&mut self, r0: usize, c0: usize, block: &GF2Matrix) {
        assert!(r0 + block.num_rows() <= self.num_rows());
        assert!(c0 + block.num_cols() <= self.cols);
        for (i, row) in block.rows.iter().enumerate() {
            for j in row.ones() {
                self.rows[r0 + i].flip(c0 + j);
            }
        }
    }

    /// Reduced row echelon form via Gauss-Jordan elimination.
    ///
    /// The RREF of a matrix over a field is unique, so this is deterministic.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for c in 0..m.cols {
            if next_row == m.num_rows() {
                break;
            }
            let Some(p) = (next_row..m.num_rows()).find(|&i| m.rows[i].get(c)) else {
                continue;
            };
            m.rows.swap(next_row, p);
            let pivot_row = m.rows[next_row].clone();
            for (i, row) in m.rows.iter_mut().enumerate() {
                if i != next_row && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next_row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Canonical basis of the null space, one vector per RREF free column,
    /// ordered by free-column index. Size is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<GF2Vector> {
        let Echelon { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = GF2Vector::zeros(self.cols);
            v.set(f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if reduced.rows[row].get(f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Coset representatives completing a basis of the column space to a basis
    /// of the ambient space: the standard basis vectors at the non-pivot
    /// coordinates of `rref(Mᵀ)`. Size is `rows - rank`; none of them lies in
    /// the column space.
    pub fn cokernel_basis(&self) -> Vec<GF2Vector> {
        let ambient = self.num_rows();
        let pivots = self.transpose().rref().pivots;
        let mut is_pivot = vec![false; ambient];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..ambient)
            .filter(|&j| !is_pivot[j])
            .map(|j| GF2Vector::unit(ambient, j))
            .collect()
    }

    /// Canonical basis of the left null space: vectors `y` with `yᵀM = 0`.
    ///
    /// Each such vector is a linear dependency among the rows, i.e. a
    /// certificate that the matrix fails to have full row rank. Size is
    /// `rows - rank`.
    pub fn left_kernel_basis(&self) -> Vec<GF2Vector> {
        self.transpose().kernel_basis()
    }
}

impl fmt::Display for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Matrix({}x{})\n{}", self.num_rows(), self.cols, self)
    }
}

impl FromStr for GF2Matrix {
    type Err = String;

    /// Parses the debug dump format: one row of `0`/`1` characters per line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows: Vec<GF2Vector> = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(GF2Vector::from_str)
            .collect::<Result<_, _>>()?;
        let cols = rows.first().map_or(0, GF2Vector::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err("ragged rows".to_string());
        }
        Ok(Self::from_rows(rows, cols))
    }
}

/// True iff `target` is an XOR combination of `vectors`. All lengths must agree.
pub fn in_span(vectors: &[GF2Vector], target: &GF2Vector) -> bool {
    for v in vectors {
        assert_eq!(v.len(), target.len(), "length mismatch in in_span");
    }
    let m = GF2Matrix::from_rows(vectors.to_vec(), target.len());
    let Echelon { reduced, pivots } = m.rref();
    let mut residue = target.clone();
    for (row, &p) in pivots.iter().enumerate() {
        if residue.get(p) {
            residue.xor_assign(&reduced.rows[row]);
        }
    }
    residue.is_zero()
}

/// True iff the two lists of vectors span the same subspace.
pub fn same_span(a: &[GF2Vector], b: &[GF2Vector]) -> bool {
    a.iter().all(|v| in_span(b, v)) && b.iter().all(|v| in_span(a, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&str]) -> GF2Matrix {
        rows.join("\n").parse().unwrap()
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let m = GF2Matrix::identity(2);
        let e = m.rref();
        assert_eq!(e.reduced, m);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn rref_repeated_row_has_rank_one() {
        let m = mat(&["11", "11"]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_zero_matrix_is_standard_basis() {
        let m = GF2Matrix::zeros(2, 2);
        let k = m.kernel_basis();
        assert_eq!(k, vec![GF2Vector::unit(2, 0), GF2Vector::unit(2, 1)]);
    }

    #[test]
    fn kernel_of_full_rank_square_matrix_is_empty() {
        let m = mat(&["110", "010", "001"]);
        assert_eq!(m.rank(), 3);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn cokernel_of_surjective_map_is_empty() {
        let m = mat(&["100", "010"]);
        assert!(m.cokernel_basis().is_empty());
    }

    #[test]
    fn cokernel_representative_outside_column_space() {
        // rank 1, 2 rows: one representative, and the column space is {0, 11},
        // so brute force over all column-space elements confirms exclusion.
        let m = mat(&["11", "11"]);
        let reps = m.cokernel_basis();
        assert_eq!(reps.len(), 1);
        let colspace = [GF2Vector::zeros(2), "11".parse().unwrap()];
        assert!(colspace.iter().all(|c| c != &reps[0]));
        assert!(!in_span(&m.columns(), &reps[0]));
    }

    #[test]
    fn left_kernel_certifies_row_dependency() {
        let m = mat(&["11", "11"]);
        let lk = m.left_kernel_basis();
        assert_eq!(lk.len(), 1);
        assert_eq!(lk[0], "11".parse().unwrap());
        // yᵀM = 0
        assert!(m.transpose().mul_vector(&lk[0]).is_zero());
    }

    #[test]
    fn in_span_trivial_cases() {
        assert!(in_span(&[], &GF2Vector::zeros(3)));
        assert!(!in_span(
            &[GF2Vector::unit(2, 0)],
            &GF2Vector::unit(2, 1)
        ));
        assert!(in_span(
            &[GF2Vector::unit(2, 0), GF2Vector::unit(2, 1)],
            &"11".parse().unwrap()
        ));
    }

    #[test]
    fn display_round_trips() {
        let m = mat(&["1010", "0111"]);
        let back: GF2Matrix = m.to_string().parse().unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn empty_shapes_are_legal() {
        let m = GF2Matrix::zeros(0, 4);
        assert_eq!(m.kernel_basis().len(), 4);
        assert!(m.cokernel_basis().is_empty());
        let m = GF2Matrix::zeros(3, 0);
        assert!(m.kernel_basis().is_empty());
        assert_eq!(m.cokernel_basis().len(), 3);
        let m = GF2Matrix::zeros(0, 0);
        assert_eq!(m.rank(), 0);
        assert!(m.mul_vector(&GF2Vector::zeros(0)).is_empty());
    }

    prop_compose! {
        fn arb_matrix()(rows in 0usize..8, cols in 0usize..8)
            (bits in proptest::collection::vec(any::<bool>(), rows * cols),
             rows in Just(rows), cols in Just(cols))
            -> GF2Matrix
        {
            let mut m = GF2Matrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, bits[r * cols + c]);
                }
            }
            m
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let kernel = m.kernel_basis();
            prop_assert_eq!(m.rank() + kernel.len(), m.num_cols());
            for k in &kernel {
                prop_assert!(m.mul_vector(k).is_zero());
            }
        }

        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let e = m.rref();
            prop_assert_eq!(e.reduced.rref().reduced, e.reduced);
        }

        #[test]
        fn cokernel_completes_column_space(m in arb_matrix()) {
            let reps = m.cokernel_basis();
            prop_assert_eq!(m.rank() + reps.len(), m.num_rows());
            let columns = m.columns();
            for rep in &reps {
                prop_assert!(!in_span(&columns, rep));
            }
            let mut spanning = columns;
            spanning.extend(reps);
            for j in 0..m.num_rows() {
                prop_assert!(in_span(&spanning, &GF2Vector::unit(m.num_rows(), j)));
            }
        }

        #[test]
        fn left_kernel_annihilates_rows(m in arb_matrix()) {
            let lk = m.left_kernel_basis();
            prop_assert_eq!(lk.len(), m.num_rows() - m.rank());
            let t = m.transpose();
            for y in &lk {
                prop_assert!(t.mul_vector(y).is_zero());
            }
        }

        #[test]
        fn kernel_vectors_span_membership(m in arb_matrix()) {
            let kernel = m.kernel_basis();
            // any XOR combination of kernel vectors is again in the kernel
            if kernel.len() >= 2 {
                let combo = kernel[0].xor(&kernel[1]);
                prop_assert!(m.mul_vector(&combo).is_zero());
                prop_assert!(in_span(&kernel, &combo));
            }
        }
    }
}
