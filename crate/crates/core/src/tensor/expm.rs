use nalgebra::{DMatrix, DVector};

use super::{check_dim, SparseOperator, StateVector};
use crate::error::{Error, Result};
use crate::C64;

/// Blocks up to this dimension are diagonalised densely; larger ones fall
/// back to a scaled Taylor series.
pub const DENSE_BLOCK_LIMIT: usize = 4096;

const HERMITIAN_TOL: f64 = 1e-10;

enum Eigvecs {
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
}

enum Block {
    Dense {
        indices: Vec<usize>,
        energies: Vec<f64>,
        vecs: Eigvecs,
        coeffs: Vec<C64>,
    },
    Taylor {
        indices: Vec<usize>,
        h: SparseOperator,
        psi: Vec<C64>,
    },
}

/// Reusable `exp(-i H t) |psi0>` for many `t`.
///
/// Only the connected blocks of `H` that touch the support of `psi0` are
/// diagonalised.
pub struct Propagator {
    dim: usize,
    blocks: Vec<Block>,
}

impl Propagator {
    pub fn new(h: &SparseOperator, psi0: &StateVector) -> Result<Self> {
        check_dim(h.dim(), psi0.dim())?;
        h.ensure_hermitian(HERMITIAN_TOL)?;
        let amps = psi0.amplitudes();
        let mut blocks = Vec::new();
        for comp in h.connected_components() {
            if comp.iter().all(|&i| amps[i] == C64::new(0.0, 0.0)) {
                continue;
            }
            let sub = h.restrict(&comp);
            let local: Vec<C64> = comp.iter().map(|&i| amps[i]).collect();
            let dense = if comp.len() <= DENSE_BLOCK_LIMIT {
                dense_block(comp.clone(), &sub, &local)
            } else {
                None
            };
            blocks.push(dense.unwrap_or(Block::Taylor {
                indices: comp,
                h: sub,
                psi: local,
            }));
        }
        Ok(Self { dim: h.dim(), blocks })
    }

    pub fn evolve(&self, t: f64) -> Result<StateVector> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for b in &self.blocks {
            match b {
                Block::Dense {
                    indices,
                    energies,
                    vecs,
                    coeffs,
                } => {
                    let phased: Vec<C64> = energies
                        .iter()
                        .zip(coeffs)
                        .map(|(&e, &c)| c * C64::from_polar(1.0, -e * t))
                        .collect();
                    let local = match vecs {
                        Eigvecs::Real(v) => {
                            let mut y = vec![C64::new(0.0, 0.0); v.nrows()];
                            for (k, p) in phased.iter().enumerate() {
                                for (r, yr) in y.iter_mut().enumerate() {
                                    *yr += p * v[(r, k)];
                                }
                            }
                            y
                        }
                        Eigvecs::Complex(v) => (v * DVector::from_vec(phased)).as_slice().to_vec(),
                    };
                    for (&i, y) in indices.iter().zip(local) {
                        out[i] = y;
                    }
                }
                Block::Taylor { indices, h, psi } => {
                    let y = taylor_apply(h, psi, t)?;
                    for (&i, v) in indices.iter().zip(y) {
                        out[i] = v;
                    }
                }
            }
        }
        Ok(StateVector::new(out))
    }
}

/// Relative eigen-residual accepted before trying another route.
const EIGEN_RESIDUAL_TOL: f64 = 1e-9;

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn real_eigen(m: &DMatrix<f64>, shift: f64) -> Option<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let shifted = m + DMatrix::identity(n, n) * shift;
    let eig = shifted.clone().try_symmetric_eigen(f64::EPSILON, 0)?;
    let v = &eig.eigenvectors;
    let res = (&shifted * v - v * DMatrix::from_diagonal(&eig.eigenvalues)).amax();
    let scale = shifted.amax().max(1.0);
    (res <= EIGEN_RESIDUAL_TOL * scale && res.is_finite())
        .then(|| (eig.eigenvalues.iter().map(|e| e - shift).collect(), eig.eigenvectors))
}

fn complex_eigen(m: &DMatrix<C64>, shift: f64) -> Option<(Vec<f64>, DMatrix<C64>)> {
    let n = m.nrows();
    let shifted = m + DMatrix::<C64>::identity(n, n) * C64::new(shift, 0.0);
    let eig = shifted.clone().try_symmetric_eigen(f64::EPSILON, 0)?;
    let v = &eig.eigenvectors;
    let diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::new(e, 0.0)));
    let res = max_abs(&(&shifted * v - v * diag));
    let scale = max_abs(&shifted).max(1.0);
    (res <= EIGEN_RESIDUAL_TOL * scale && res.is_finite())
        .then(|| (eig.eigenvalues.iter().map(|e| e - shift).collect(), eig.eigenvectors))
}

/// Diagonal shifts tried in turn; the QR iteration occasionally stalls on a
/// wrong answer for strongly degenerate spectra and a shift breaks the tie.
fn shifts(scale: f64) -> [f64; 4] {
    let s = scale.max(1.0);
    [0.0, 0.137 * s, -0.291 * s, 0.613 * s]
}

/// Hermitian eigendecomposition whose residual has been checked.
pub(crate) fn hermitian_eigen(h: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    shifts(max_abs(&herm))
        .into_iter()
        .find_map(|s| complex_eigen(&herm, s))
        .ok_or_else(|| Error::Numerical("Hermitian eigendecomposition did not converge".into()))
}

fn dense_block(indices: Vec<usize>, h: &SparseOperator, psi: &[C64]) -> Option<Block> {
    let n = indices.len();
    if h.is_real() {
        let m = DMatrix::from_fn(n, n, |r, c| h.get(r, c).re);
        if let Some((energies, v)) = shifts(m.amax()).into_iter().find_map(|s| real_eigen(&m, s)) {
            let coeffs = (0..n).map(|k| (0..n).map(|r| psi[r] * v[(r, k)]).sum()).collect();
            return Some(Block::Dense {
                indices,
                energies,
                vecs: Eigvecs::Real(v),
                coeffs,
            });
        }
    }
    let (energies, v) = hermitian_eigen(&h.to_dense()).ok()?;
    let coeffs = (v.adjoint() * DVector::from_column_slice(psi)).as_slice().to_vec();
    Some(Block::Dense {
        indices,
        energies,
        vecs: Eigvecs::Complex(v),
        coeffs,
    })
}

/// `exp(-i H t) v` by a Taylor series with time-step scaling.
fn taylor_apply(h: &SparseOperator, v: &[C64], t: f64) -> Result<Vec<C64>> {
    let norm = h.one_norm() * t.abs();
    let steps = norm.ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let factor = C64::new(0.0, -dt);
    let mut y = v.to_vec();
    let mut term = vec![C64::new(0.0, 0.0); v.len()];
    for _ in 0..steps {
        let mut acc = y.clone();
        let mut cur = y.clone();
        let mut converged = false;
        for k in 1..=60 {
            h.matvec_into(&cur, &mut term);
            let scale = factor / k as f64;
            let mut size = 0.0f64;
            for (c, x) in cur.iter_mut().zip(&term) {
                *c = x * scale;
                size = size.max(c.norm());
            }
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += c;
            }
            if size < 1e-17 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numerical("Taylor series did not converge".into()));
        }
        y = acc;
    }
    Ok(y)
}

/// `exp(-i H t) |psi>` for Hermitian `H`.
pub fn expm_apply(h: &SparseOperator, psi: &StateVector, t: f64) -> Result<StateVector> {
    Propagator::new(h, psi)?.evolve(t)
}

/// Sorted eigenvalues of a Hermitian operator, diagonalising each connected
/// block separately.
pub fn spectrum(h: &SparseOperator) -> Result<Vec<f64>> {
    h.ensure_hermitian(HERMITIAN_TOL)?;
    let mut out = Vec::with_capacity(h.dim());
    for comp in h.connected_components() {
        out.extend(block_eigenvalues(&h.restrict(&comp))?);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Checks the first two spectral moments, `sum e = tr H` and
/// `sum e^2 = |H|_F^2`, which catch a failed eigenvalue iteration without
/// needing eigenvectors.
fn moments_match(energies: &[f64], trace: f64, frob2: f64) -> bool {
    let s1: f64 = energies.iter().sum();
    let s2: f64 = energies.iter().map(|e| e * e).sum();
    let scale = frob2.max(1.0);
    (s1 - trace).abs() <= EIGEN_RESIDUAL_TOL * scale.sqrt() * energies.len() as f64
        && (s2 - frob2).abs() <= EIGEN_RESIDUAL_TOL * scale
}

fn block_eigenvalues(h: &SparseOperator) -> Result<Vec<f64>> {
    let n = h.dim();
    let trace: f64 = (0..n).map(|i| h.get(i, i).re).sum();
    let frob2: f64 = h.triplets().map(|(_, _, v)| v.norm_sqr()).sum();
    if h.is_real() {
        let m = DMatrix::from_fn(n, n, |r, c| h.get(r, c).re);
        let fast: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
        if moments_match(&fast, trace, frob2) {
            return Ok(fast);
        }
        if let Some((e, _)) = shifts(m.amax()).into_iter().find_map(|s| real_eigen(&m, s)) {
            return Ok(e);
        }
    }
    Ok(hermitian_eigen(&h.to_dense())?.0)
}

/// Dense `exp(-i H t)` for a small Hermitian matrix.
pub fn unitary_from_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let (energies, v) = hermitian_eigen(h).unwrap_or_else(|_| {
        let eig = ((h + h.adjoint()) * C64::new(0.5, 0.0)).symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    });
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        energies.len(),
        energies.iter().map(|e| C64::from_polar(1.0, -e * t)),
    ));
    &v * phases * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<C64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = DMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        (&m + m.adjoint()) * C64::new(0.5, 0.0)
    }

    #[test]
    fn taylor_agrees_with_eigen() {
        let h = random_hermitian(12, 3);
        let sp = SparseOperator::from_dense(&h);
        let psi: Vec<C64> = (0..12).map(|i| C64::new(1.0 / (1.0 + i as f64), 0.0)).collect();
        let a = taylor_apply(&sp, &psi, 2.5).unwrap();
        let b = &unitary_from_hermitian(&h, 2.5) * DVector::from_vec(psi);
        let err = a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn real_and_complex_paths_agree() {
        let h = random_hermitian(10, 9).map(|c| C64::new(c.re, 0.0));
        let sp = SparseOperator::from_dense(&h);
        let psi = StateVector::basis(10, 4);
        let a = expm_apply(&sp, &psi, 1.3).unwrap();
        let b = &unitary_from_hermitian(&h, 1.3) * DVector::from_column_slice(psi.amplitudes());
        let err = a.amplitudes().iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = SparseOperator::from_triplets(2, [(0, 1, C64::new(1.0, 0.0))]);
        assert!(matches!(expm_apply(&h, &StateVector::basis(2, 0), 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn untouched_blocks_stay_zero() {
        // two decoupled 2x2 blocks; start in the first
        let h = SparseOperator::from_real_dense(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 2.0],
            &[0.0, 0.0, 2.0, 1.0],
        ]);
        let out = expm_apply(&h, &StateVector::basis(4, 0), std::f64::consts::FRAC_PI_2).unwrap();
        let a = out.amplitudes();
        assert!(a[0].norm() < 1e-14 && (a[1] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert_eq!(a[2], C64::new(0.0, 0.0));
    }
}
