use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Entries with magnitude at or below this are not stored.
pub const DEFAULT_DROP_TOL: f64 = 1e-14;

/// Square sparse complex matrix in canonical row-major coordinate form
/// (compressed rows, columns sorted within each row, no duplicates).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_triplets(diag.len(), diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    pub fn from_triplets(dim: usize, entries: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        Self::from_triplets_with_tol(dim, entries, DEFAULT_DROP_TOL)
    }

    /// Builds an operator from unsorted `(row, col, value)` triples; duplicates
    /// are summed and entries with `|v| <= drop_tol` after summation dropped.
    ///
    /// Panics if an index is out of range.
    pub fn from_triplets_with_tol(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, C64)>,
        drop_tol: f64,
    ) -> Self {
        let mut rows: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r},{c}) outside {dim}x{dim}");
            *rows[r].entry(c).or_insert(C64::new(0.0, 0.0)) += v;
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                if v.norm() > drop_tol {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        let n = m.nrows();
        Self::from_triplets(
            n,
            (0..n).flat_map(|r| (0..n).map(move |c| (r, c, m[(r, c)]))),
        )
    }

    pub fn from_real_dense(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Self::from_triplets(
            n,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, C64::new(v, 0.0)))),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    /// Canonically ordered `(row, col, value)` triples.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (r, c, v * s)))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn add_op(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self::from_triplets(self.dim, self.triplets().chain(other.triplets())))
    }

    pub fn mul_op(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = Vec::new();
        for r in 0..self.dim {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    out.push((r, c, a * b));
                }
            }
        }
        Ok(Self::from_triplets(self.dim, out))
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul_op(other)?.add_op(&other.mul_op(self)?.scale_real(-1.0))
    }

    /// Kronecker product `self ⊗ other` (self is the more significant factor).
    pub fn kron(&self, other: &Self) -> Self {
        let d = other.dim;
        let mut out = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.triplets() {
            for (r2, c2, v2) in other.triplets() {
                out.push((r1 * d + r2, c1 * d + c2, v1 * v2));
            }
        }
        Self::from_triplets(self.dim * d, out)
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yr = acc;
        }
    }

    /// `<x| self |x>`
    pub fn expectation(&self, x: &[C64]) -> C64 {
        let y = self.matvec(x);
        x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, C64::new(0.0, 0.0));
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// Largest entrywise deviation from `self = self†`.
    pub fn hermiticity_error(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let err = self.hermiticity_error();
        if err > tol {
            return Err(Error::NotHermitian(err));
        }
        Ok(())
    }

    pub fn is_real(&self) -> bool {
        self.vals.iter().all(|v| v.im == 0.0)
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.triplets()
            .map(|(r, c, v)| (v - other.get(r, c)).norm())
            .chain(other.triplets().map(|(r, c, v)| (v - self.get(r, c)).norm()))
            .fold(0.0, f64::max)
    }

    /// Induced 1-norm (max column sum).
    pub fn one_norm(&self) -> f64 {
        let mut col = vec![0.0; self.dim];
        for (_, c, v) in self.triplets() {
            col[c] += v.norm();
        }
        col.into_iter().fold(0.0, f64::max)
    }

    /// Sub-matrix on `indices` (rows and columns), which must be sorted.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.dim];
        for (k, &i) in indices.iter().enumerate() {
            pos[i] = k;
        }
        let mut out = Vec::new();
        for (k, &r) in indices.iter().enumerate() {
            for (c, v) in self.row(r) {
                if pos[c] != usize::MAX {
                    out.push((k, pos[c], v));
                }
            }
        }
        Self::from_triplets(indices.len(), out)
    }

    /// Partition of the basis into blocks that the operator never couples.
    /// Each block is sorted; blocks are ordered by their smallest index.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.dim).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (r, c, _) in self.triplets() {
            let (a, b) = (find(&mut parent, r), find(&mut parent, c));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.dim {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
        groups.into_values().collect()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl Add for &SparseOperator {
    type Output = SparseOperator;
    fn add(self, rhs: Self) -> SparseOperator {
        self.add_op(rhs).expect("dimension mismatch in operator sum")
    }
}

impl Sub for &SparseOperator {
    type Output = SparseOperator;
    fn sub(self, rhs: Self) -> SparseOperator {
        self.add_op(&rhs.scale_real(-1.0))
            .expect("dimension mismatch in operator difference")
    }
}

impl Mul for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: Self) -> SparseOperator {
        self.mul_op(rhs).expect("dimension mismatch in operator product")
    }
}

impl Mul<f64> for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: f64) -> SparseOperator {
        self.scale_real(rhs)
    }
}

impl Neg for &SparseOperator {
    type Output = SparseOperator;
    fn neg(self) -> SparseOperator {
        self.scale_real(-1.0)
    }
}

/// Sum of a list of operators of equal dimension.
pub fn sum_ops<'a>(dim: usize, ops: impl IntoIterator<Item = &'a SparseOperator>) -> SparseOperator {
    SparseOperator::from_triplets(dim, ops.into_iter().flat_map(|o| {
        assert_eq!(o.dim(), dim);
        o.triplets().collect::<Vec<_>>()
    }))
}
