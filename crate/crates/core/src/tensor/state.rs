use nalgebra::DMatrix;

use super::{HilbertSpace, SparseOperator};
use crate::error::{Error, Result};
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Pure state amplitudes in the global basis of a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { amps: vec![ZERO; dim] }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    /// Product basis state with the given per-subsystem digits.
    pub fn product(space: &HilbertSpace, digits: &[usize]) -> Result<Self> {
        Ok(Self::basis(space.dim(), space.index(digits)?))
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply(&self, op: &SparseOperator) -> Result<Self> {
        check_dim(op.dim(), self.dim())?;
        Ok(Self::new(op.matvec(&self.amps)))
    }

    pub fn expectation(&self, op: &SparseOperator) -> Result<f64> {
        check_dim(op.dim(), self.dim())?;
        Ok(op.expectation(&self.amps).re)
    }

    /// Applies `m` (acting on the listed subsystems, first most significant)
    /// in place.
    pub fn apply_local(&mut self, space: &HilbertSpace, subsystems: &[usize], m: &DMatrix<C64>) -> Result<()> {
        let plan = LocalPlan::new(space, subsystems, m)?;
        check_dim(space.dim(), self.dim())?;
        plan.apply(m, &mut self.amps, 0, 1);
        Ok(())
    }
}

/// Dense density matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Self {
        let dim = psi.dim();
        let a = psi.amplitudes();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(a[r] * a[c].conj());
            }
        }
        Self { dim, data }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Self { dim, data }
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let dim = m.nrows();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(m[(r, c)]);
            }
        }
        Self { dim, data }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                err = err.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        err
    }

    /// Smallest eigenvalue (dense Hermitian eigensolve).
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.to_dense();
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `<psi| rho |psi>`
    pub fn overlap_with(&self, psi: &StateVector) -> Result<f64> {
        check_dim(self.dim, psi.dim())?;
        let a = psi.amplitudes();
        let mut acc = ZERO;
        for r in 0..self.dim {
            if a[r] == ZERO {
                continue;
            }
            let row = &self.data[r * self.dim..(r + 1) * self.dim];
            let v: C64 = row.iter().zip(a).map(|(x, y)| x * y).sum();
            acc += a[r].conj() * v;
        }
        Ok(acc.re)
    }

    /// `Tr(rho O)`
    pub fn expectation(&self, op: &SparseOperator) -> Result<f64> {
        check_dim(op.dim(), self.dim)?;
        Ok(op.triplets().map(|(r, c, v)| v * self.get(c, r)).sum::<C64>().re)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `rho -> U rho U†` for a unitary on the listed subsystems.
    pub fn apply_unitary_local(&mut self, space: &HilbertSpace, subsystems: &[usize], u: &DMatrix<C64>) -> Result<()> {
        check_dim(space.dim(), self.dim)?;
        let plan = LocalPlan::new(space, subsystems, u)?;
        self.conjugate_with(&plan, u);
        Ok(())
    }

    /// `rho -> sum_k A_k rho A_k†` for operators on the listed subsystems.
    pub fn apply_kraus_local(&mut self, space: &HilbertSpace, subsystems: &[usize], ops: &[DMatrix<C64>]) -> Result<()> {
        check_dim(space.dim(), self.dim)?;
        let Some(first) = ops.first() else {
            return Err(Error::param("ops", "empty Kraus set"));
        };
        let plan = LocalPlan::new(space, subsystems, first)?;
        for a in ops {
            if a.nrows() != first.nrows() || a.ncols() != first.ncols() {
                return Err(Error::DimensionMismatch {
                    expected: first.nrows(),
                    found: a.nrows(),
                });
            }
        }
        let sup = superoperator(ops);
        let d = plan.local.len();
        let n = self.dim;
        let mut x = vec![ZERO; d * d];
        for &br in &plan.outer {
            for &bc in &plan.outer {
                for (i, &oi) in plan.local.iter().enumerate() {
                    for (j, &oj) in plan.local.iter().enumerate() {
                        x[i * d + j] = self.data[(br + oi) * n + bc + oj];
                    }
                }
                for (i, &oi) in plan.local.iter().enumerate() {
                    for (j, &oj) in plan.local.iter().enumerate() {
                        self.data[(br + oi) * n + bc + oj] = sup[i * d + j].iter().map(|&(k, v)| v * x[k]).sum();
                    }
                }
            }
        }
        Ok(())
    }

    /// Depolarizing on the joint space of `subsystems`:
    /// `rho -> (1-p) rho + p I/d ⊗ Tr_S(rho)`.
    pub fn depolarize_local(&mut self, space: &HilbertSpace, subsystems: &[usize], p: f64) -> Result<()> {
        check_dim(space.dim(), self.dim)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param("p", "must lie in [0, 1]"));
        }
        for s in subsystems {
            space.subsystem_dim(*s)?;
        }
        if p == 0.0 {
            return Ok(());
        }
        let local = space.local_offsets(subsystems);
        let outer = space.outer_bases(subsystems);
        let n = self.dim;
        let d = local.len() as f64;
        for &br in &outer {
            for &bc in &outer {
                let tr: C64 = local.iter().map(|&o| self.data[(br + o) * n + bc + o]).sum();
                for &oi in &local {
                    for &oj in &local {
                        self.data[(br + oi) * n + bc + oj] *= 1.0 - p;
                    }
                    self.data[(br + oi) * n + bc + oi] += tr * (p / d);
                }
            }
        }
        Ok(())
    }

    /// Full-space unitary conjugation with a sparse operator.
    pub fn conjugate_sparse(&mut self, u: &SparseOperator) -> Result<()> {
        check_dim(u.dim(), self.dim)?;
        let n = self.dim;
        // columns: U rho
        let mut tmp = vec![ZERO; n * n];
        let mut col = vec![ZERO; n];
        let mut out = vec![ZERO; n];
        for c in 0..n {
            for r in 0..n {
                col[r] = self.data[r * n + c];
            }
            u.matvec_into(&col, &mut out);
            for r in 0..n {
                tmp[r * n + c] = out[r];
            }
        }
        // rows: (U rho) U†
        let uc = SparseOperator::from_triplets(n, u.triplets().map(|(r, c, v)| (r, c, v.conj())));
        for r in 0..n {
            uc.matvec_into(&tmp[r * n..(r + 1) * n], &mut out);
            self.data[r * n..(r + 1) * n].copy_from_slice(&out);
        }
        Ok(())
    }

    fn conjugate_with(&mut self, plan: &LocalPlan, a: &DMatrix<C64>) {
        let n = self.dim;
        let rows = nonzero_rows(a);
        let d = plan.local.len();
        // A rho: each output row is a combination of whole, contiguous rows
        let mut block = vec![ZERO; d * n];
        for &b in &plan.outer {
            for (k, &o) in plan.local.iter().enumerate() {
                block[k * n..(k + 1) * n].copy_from_slice(&self.data[(b + o) * n..(b + o + 1) * n]);
            }
            for (r, entries) in rows.iter().enumerate() {
                let dst = &mut self.data[(b + plan.local[r]) * n..(b + plan.local[r] + 1) * n];
                dst.fill(ZERO);
                for &(c, v) in entries {
                    for (x, y) in dst.iter_mut().zip(&block[c * n..(c + 1) * n]) {
                        *x += v * y;
                    }
                }
            }
        }
        // (A rho) A†, row by row
        let conj_rows: Vec<Vec<(usize, C64)>> = rows
            .iter()
            .map(|e| e.iter().map(|&(c, v)| (c, v.conj())).collect())
            .collect();
        let mut v = vec![ZERO; d];
        for r in 0..n {
            let row = &mut self.data[r * n..(r + 1) * n];
            for &b in &plan.outer {
                for (k, &o) in plan.local.iter().enumerate() {
                    v[k] = row[b + o];
                }
                for (j, entries) in conj_rows.iter().enumerate() {
                    row[b + plan.local[j]] = entries.iter().map(|&(c, x)| x * v[c]).sum();
                }
            }
        }
    }
}

/// Precomputed index sets for applying a dense operator on a few subsystems.
pub(crate) struct LocalPlan {
    local: Vec<usize>,
    outer: Vec<usize>,
}

impl LocalPlan {
    pub(crate) fn new(space: &HilbertSpace, subsystems: &[usize], m: &DMatrix<C64>) -> Result<Self> {
        let mut ldim = 1;
        for (k, &s) in subsystems.iter().enumerate() {
            ldim *= space.subsystem_dim(s)?;
            if subsystems[..k].contains(&s) {
                return Err(Error::param("subsystems", format!("subsystem {s} listed twice")));
            }
        }
        if m.nrows() != ldim || m.ncols() != ldim {
            return Err(Error::DimensionMismatch {
                expected: ldim,
                found: m.nrows(),
            });
        }
        Ok(Self {
            local: space.local_offsets(subsystems),
            outer: space.outer_bases(subsystems),
        })
    }

    /// Applies `m` to the vector `data[offset + i*stride]`.
    pub(crate) fn apply(&self, m: &DMatrix<C64>, data: &mut [C64], offset: usize, stride: usize) {
        let d = self.local.len();
        let mut v = vec![ZERO; d];
        let mut w = vec![ZERO; d];
        for &b in &self.outer {
            for (k, &o) in self.local.iter().enumerate() {
                v[k] = data[offset + (b + o) * stride];
            }
            for (r, wr) in w.iter_mut().enumerate() {
                let mut acc = ZERO;
                for (c, vc) in v.iter().enumerate() {
                    acc += m[(r, c)] * vc;
                }
                *wr = acc;
            }
            for (k, &o) in self.local.iter().enumerate() {
                data[offset + (b + o) * stride] = w[k];
            }
        }
    }
}

/// Sparse rows of the local map `X -> sum_k A_k X A_k†` acting on the
/// row-major vectorization of `X`.
fn superoperator(ops: &[DMatrix<C64>]) -> Vec<Vec<(usize, C64)>> {
    let d = ops[0].nrows();
    let rows: Vec<Vec<Vec<(usize, C64)>>> = ops.iter().map(nonzero_rows).collect();
    let mut acc = vec![ZERO; d * d];
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            acc.fill(ZERO);
            for a in &rows {
                for &(k, u) in &a[i] {
                    for &(l, w) in &a[j] {
                        acc[k * d + l] += u * w.conj();
                    }
                }
            }
            out.push(acc.iter().enumerate().filter(|(_, v)| **v != ZERO).map(|(k, v)| (k, *v)).collect());
        }
    }
    out
}

/// Non-zero entries of each row of `m`.
fn nonzero_rows(m: &DMatrix<C64>) -> Vec<Vec<(usize, C64)>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).filter(|&c| m[(r, c)] != ZERO).map(|c| (c, m[(r, c)])).collect())
        .collect()
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{embed_single, pauli, PauliKind};

    #[test]
    fn local_application_matches_embedding() {
        let sp = HilbertSpace::new(2, vec![3]).unwrap();
        let mut psi = StateVector::new((0..sp.dim()).map(|i| C64::new(i as f64, 0.5 * i as f64)).collect());
        psi.normalize();
        let y = pauli(PauliKind::Y);
        let full = embed_single(&sp, 1, &y).unwrap();
        let expect = psi.apply(&full).unwrap();
        let mut got = psi.clone();
        got.apply_local(&sp, &[1], &y.to_dense()).unwrap();
        assert!(got.distance(&expect) < 1e-14);
    }

    #[test]
    fn two_subsystem_order_matters() {
        let sp = HilbertSpace::qubits(3);
        // |q0 q2> = |0 1> -> X on q2 only
        let mut m = DMatrix::from_element(4, 4, ZERO);
        // permutation swapping local |01> and |00>
        m[(0, 1)] = C64::new(1.0, 0.0);
        m[(1, 0)] = C64::new(1.0, 0.0);
        m[(2, 2)] = C64::new(1.0, 0.0);
        m[(3, 3)] = C64::new(1.0, 0.0);
        let mut psi = StateVector::basis(8, 0);
        psi.apply_local(&sp, &[0, 2], &m).unwrap();
        assert_eq!(psi.amplitudes()[1], C64::new(1.0, 0.0));
    }

    #[test]
    fn density_unitary_matches_pure() {
        let sp = HilbertSpace::new(1, vec![2]).unwrap();
        let psi = StateVector::new(vec![
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(0.5, 0.0),
            C64::new(-0.5, 0.0),
        ]);
        let h = pauli(PauliKind::X).to_dense();
        let mut phi = psi.clone();
        phi.apply_local(&sp, &[1], &h).unwrap();
        let mut rho = DensityMatrix::from_pure(&psi);
        rho.apply_unitary_local(&sp, &[1], &h).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::from_pure(&phi)) < 1e-15);
        assert!((rho.overlap_with(&phi).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sparse_conjugation_matches_local() {
        let sp = HilbertSpace::qubits(2);
        let psi = StateVector::new(vec![
            C64::new(0.6, 0.0),
            C64::new(0.0, 0.8),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        let y = pauli(PauliKind::Y);
        let mut a = DensityMatrix::from_pure(&psi);
        a.conjugate_sparse(&embed_single(&sp, 0, &y).unwrap()).unwrap();
        let mut b = DensityMatrix::from_pure(&psi);
        b.apply_unitary_local(&sp, &[0], &y.to_dense()).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }
}
