//! Dense exact linear algebra over [`Rational`].
//!
//! Everything here reduces to one canonical object: the reduced row-echelon
//! form. Subspaces are stored as their RREF basis, so equality of subspaces is
//! equality of bases.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("vector of length {got} in a space of dimension {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    /// Builds a matrix from rows, all of which must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::VectorLength { expected: cols, got: row.len() });
            }
            entries.extend(row);
        }
        Ok(RatMatrix { rows: nrows, cols, entries })
    }

    /// Small-integer convenience constructor, mostly for tests.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        Self::from_rows(cols, data).expect("ragged integer matrix")
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    fn zip_with(&self, rhs: &RatMatrix, f: impl Fn(&Rational, &Rational) -> Rational) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape");
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut red = RowReducer::new(self.cols);
        for i in 0..self.rows {
            red.push(self.row(i).to_vec());
        }
        red.rank()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form of `m`. Zero rows are kept at the bottom so the
/// shape is unchanged.
pub fn rref(m: &RatMatrix) -> RatMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut lead = 0;
    for c in 0..cols {
        if lead == rows {
            break;
        }
        let Some(p) = (lead..rows).find(|&r| !a[(r, c)].is_zero()) else {
            continue;
        };
        if p != lead {
            for j in 0..cols {
                a.entries.swap(p * cols + j, lead * cols + j);
            }
        }
        let inv = a[(lead, c)].recip();
        for j in c..cols {
            a[(lead, j)] *= &inv;
        }
        let pivot_row = a.row(lead).to_vec();
        for r in 0..rows {
            if r == lead {
                continue;
            }
            let f = a[(r, c)].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    a[(r, j)] = a[(r, j)].sub_mul(&f, &pivot_row[j]);
                }
            }
        }
        lead += 1;
    }
    a
}

/// Incremental Gauss-Jordan elimination.
///
/// Rows are pushed one at a time and reduced against the current basis, which
/// is kept fully reduced at all times. This never materializes the full
/// constraint matrix, and exact duplicates (up to scaling) are dropped before
/// any arithmetic happens.
#[derive(Clone)]
pub struct RowReducer {
    cols: usize,
    /// Fully reduced basis rows, each normalized to a leading 1 at `pivots[k]`.
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    /// `pivot_of[c]` is the index into `basis` whose pivot sits in column `c`.
    pivot_of: Vec<Option<usize>>,
    /// Sparse images of normalized rows already pushed.
    seen: HashSet<Vec<(usize, Rational)>>,
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            basis: Vec::new(),
            pivots: Vec::new(),
            pivot_of: vec![None; cols],
            seen: HashSet::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds a row; returns `true` when it increased the rank.
    pub fn push(&mut self, mut row: Vec<Rational>) -> bool {
        assert_eq!(row.len(), self.cols, "row length");
        let Some(first) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if !row[first].is_one() {
            let inv = row[first].recip();
            for x in row[first..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let key: Vec<(usize, Rational)> = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        if !self.seen.insert(key) {
            return false;
        }
        if self.basis.len() == self.cols {
            return false;
        }

        // Basis rows vanish on every pivot column but their own, so the
        // coefficients can be read off the unreduced row in a single pass.
        let hits: Vec<(usize, Rational)> = self
            .pivots
            .iter()
            .enumerate()
            .filter(|&(_, &p)| !row[p].is_zero())
            .map(|(k, &p)| (k, row[p].clone()))
            .collect();
        for (k, f) in hits {
            let b = &self.basis[k];
            for (x, y) in row.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.sub_mul(&f, y);
                }
            }
        }

        let Some(q) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[q].recip();
        for x in row[q..].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for b in self.basis.iter_mut() {
            let f = b[q].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in b.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x = x.sub_mul(&f, y);
                }
            }
        }
        self.pivot_of[q] = Some(self.basis.len());
        self.pivots.push(q);
        self.basis.push(row);
        true
    }

    /// The canonical RREF basis of the row space, sorted by pivot column.
    pub fn row_space(&self) -> SubspaceBasis {
        let mut order: Vec<usize> = (0..self.basis.len()).collect();
        order.sort_by_key(|&k| self.pivots[k]);
        SubspaceBasis {
            ambient_dim: self.cols,
            vectors: order.into_iter().map(|k| self.basis[k].clone()).collect(),
        }
    }

    /// Canonical basis of `{v : r·v = 0 for every pushed row r}`.
    pub fn null_space(&self) -> SubspaceBasis {
        let mut red = RowReducer::new(self.cols);
        for free in (0..self.cols).filter(|&c| self.pivot_of[c].is_none()) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (k, &p) in self.pivots.iter().enumerate() {
                let x = &self.basis[k][free];
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            red.push(v);
        }
        red.row_space()
    }
}

/// A linear subspace stored as its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Rational>>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, vectors: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, RatMatrix::identity(ambient_dim).row_vectors())
            .expect("identity rows have the right length")
    }

    /// Span of arbitrary vectors.
    pub fn span<I>(ambient_dim: usize, vectors: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let mut red = RowReducer::new(ambient_dim);
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::VectorLength { expected: ambient_dim, got: v.len() });
            }
            red.push(v);
        }
        Ok(red.row_space())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::VectorLength { expected: self.ambient_dim, got: v.len() });
        }
        let mut red = self.reducer();
        Ok(!red.push(v.to_vec()))
    }

    /// `span(self) ⊆ span(other)`.
    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> Result<bool, LinalgError> {
        check_ambient(self, other)?;
        let mut red = other.reducer();
        Ok(self.vectors.iter().all(|v| !red.push(v.clone())))
    }

    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis, LinalgError> {
        check_ambient(self, other)?;
        Self::span(self.ambient_dim, self.vectors.iter().chain(&other.vectors).cloned())
    }

    fn reducer(&self) -> RowReducer {
        let mut red = RowReducer::new(self.ambient_dim);
        for v in &self.vectors {
            red.push(v.clone());
        }
        red
    }
}

impl fmt::Debug for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubspaceBasis(dim {} in {}) ", self.dim(), self.ambient_dim)?;
        f.debug_list().entries(&self.vectors).finish()
    }
}

fn check_ambient(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<(), LinalgError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(LinalgError::AmbientMismatch { left: a.ambient_dim, right: b.ambient_dim });
    }
    Ok(())
}

/// Canonical basis of the kernel `{v : m·v = 0}`.
pub fn kernel_basis(m: &RatMatrix) -> SubspaceBasis {
    let mut red = RowReducer::new(m.cols());
    for i in 0..m.rows() {
        red.push(m.row(i).to_vec());
    }
    red.null_space()
}

/// Canonical basis of the column space of `m`.
pub fn column_space(m: &RatMatrix) -> SubspaceBasis {
    SubspaceBasis::span(m.rows(), (0..m.cols()).map(|j| m.column(j))).expect("column length")
}

pub fn subspace_equal(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<bool, LinalgError> {
    check_ambient(a, b)?;
    Ok(a.vectors == b.vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let id = RatMatrix::identity(2);
        assert_eq!(rref(&id), id);
        assert_eq!(rref(&RatMatrix::from_ints(&[&[2, 4]])), RatMatrix::from_ints(&[&[1, 2]]));
        assert_eq!(
            rref(&RatMatrix::from_ints(&[&[1, 1], &[1, 1]])),
            RatMatrix::from_ints(&[&[1, 1], &[0, 0]])
        );
        let empty = RatMatrix::zeros(0, 0);
        assert_eq!(rref(&empty), empty);
    }

    #[test]
    fn rref_fractions() {
        let m = RatMatrix::from_ints(&[&[0, 3, 1], &[2, 1, 0], &[2, 4, 1]]);
        let r = rref(&m);
        let expect = RatMatrix::from_rows(
            3,
            vec![
                vec![q(1), q(0), Rational::new(-1, 6)],
                vec![q(0), q(1), Rational::new(1, 3)],
                ints(&[0, 0, 0]),
            ],
        )
        .unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&RatMatrix::from_ints(&[&[1, 1]]));
        assert_eq!(k.vectors(), &[ints(&[1, -1])]);
        assert!(kernel_basis(&RatMatrix::identity(3)).is_zero());
        let k = kernel_basis(&RatMatrix::from_ints(&[&[0, 0]]));
        assert_eq!(k.dim(), 2);
        assert!(subspace_equal(&k, &SubspaceBasis::full(2)).unwrap());
    }

    #[test]
    fn subspace_comparisons() {
        let a = SubspaceBasis::span(2, vec![ints(&[1, 0]), ints(&[0, 1])]).unwrap();
        let b = SubspaceBasis::span(2, vec![ints(&[1, 1]), ints(&[1, -1])]).unwrap();
        assert!(subspace_equal(&a, &b).unwrap());
        let x = SubspaceBasis::span(2, vec![ints(&[1, 0])]).unwrap();
        let y = SubspaceBasis::span(2, vec![ints(&[0, 1])]).unwrap();
        assert!(!subspace_equal(&x, &y).unwrap());
        assert!(x.is_subspace_of(&a).unwrap());
        assert!(!a.is_subspace_of(&x).unwrap());
        assert_eq!(
            subspace_equal(&x, &SubspaceBasis::zero(3)),
            Err(LinalgError::AmbientMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn reducer_drops_scaled_duplicates() {
        let mut red = RowReducer::new(3);
        assert!(red.push(ints(&[1, 2, 3])));
        assert!(!red.push(ints(&[2, 4, 6])));
        assert!(!red.push(ints(&[0, 0, 0])));
        assert!(red.push(ints(&[0, 1, 1])));
        assert!(!red.push(ints(&[1, 3, 4])));
        assert_eq!(red.rank(), 2);
    }

    fn arb_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |v| {
                let e = v.into_iter().map(|(n, d)| Rational::new(n, d)).collect();
                RatMatrix::from_entries(r, c, e).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let r = rref(&m);
            prop_assert_eq!(rref(&r), r);
        }

        #[test]
        fn kernel_vectors_are_annihilated(m in arb_matrix()) {
            let k = kernel_basis(&m);
            for v in k.vectors() {
                prop_assert!(m.mul_vec(v).iter().all(Rational::is_zero));
            }
            prop_assert_eq!(m.rank() + k.dim(), m.cols());
        }

        #[test]
        fn rref_preserves_row_space(m in arb_matrix()) {
            let a = SubspaceBasis::span(m.cols(), m.row_vectors()).unwrap();
            let b = SubspaceBasis::span(m.cols(), rref(&m).row_vectors()).unwrap();
            prop_assert!(subspace_equal(&a, &b).unwrap());
            let nonzero: Vec<_> = rref(&m).row_vectors().into_iter()
                .filter(|r| r.iter().any(|x| !x.is_zero())).collect();
            prop_assert_eq!(a.vectors(), &nonzero[..]);
        }

        #[test]
        fn subspace_equal_is_basis_invariant(m in arb_matrix(), mix in arb_matrix()) {
            // Rows of mix·m span a subspace of the row space of m; when mix is
            // square and invertible they span all of it.
            let a = SubspaceBasis::span(m.cols(), m.row_vectors()).unwrap();
            prop_assert!(subspace_equal(&a, &a).unwrap());
            if mix.rows() == m.rows() && mix.cols() == m.rows() {
                let b = SubspaceBasis::span(m.cols(), mix.matmul(&m).row_vectors()).unwrap();
                prop_assert!(b.is_subspace_of(&a).unwrap());
                if mix.rank() == mix.rows() {
                    prop_assert!(subspace_equal(&a, &b).unwrap());
                    prop_assert!(subspace_equal(&b, &a).unwrap());
                }
            }
        }
    }
}
