//! Single-subsystem operators and their embedding into a [`HilbertSpace`].
//!
//! Qubit convention: `|0>` is the `σ_z = +1` eigenstate, `σ⁺ = |0><1|` and
//! `σ⁻ = |1><0|`. A fermionic mode is occupied when its qubit is in `|0>`.

use serde::{Deserialize, Serialize};

use super::{HilbertSpace, SparseOperator};
use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderKind {
    Annihilate,
    Create,
    Number,
}

pub fn pauli(which: PauliKind) -> SparseOperator {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let m = match which {
        PauliKind::I => [[one, z], [z, one]],
        PauliKind::X => [[z, one], [one, z]],
        PauliKind::Y => [[z, -i], [i, z]],
        PauliKind::Z => [[one, z], [z, -one]],
        PauliKind::Plus => [[z, one], [z, z]],
        PauliKind::Minus => [[z, z], [one, z]],
    };
    SparseOperator::from_triplets(2, (0..2).flat_map(|r| (0..2).map(move |c| (r, c, m[r][c]))))
}

/// Truncated bosonic ladder operator on `n` levels: `a|m> = sqrt(m)|m-1>`.
pub fn ladder(n: usize, which: LadderKind) -> Result<SparseOperator> {
    if n < 2 {
        return Err(Error::TooFewLevels(n));
    }
    let entries: Vec<(usize, usize, C64)> = match which {
        LadderKind::Annihilate => (1..n).map(|m| (m - 1, m, C64::new((m as f64).sqrt(), 0.0))).collect(),
        LadderKind::Create => (1..n).map(|m| (m, m - 1, C64::new((m as f64).sqrt(), 0.0))).collect(),
        LadderKind::Number => (0..n).map(|m| (m, m, C64::new(m as f64, 0.0))).collect(),
    };
    Ok(SparseOperator::from_triplets(n, entries))
}

/// Position quadrature `a + a†` on `n` levels.
pub fn quadrature(n: usize) -> Result<SparseOperator> {
    Ok(&ladder(n, LadderKind::Annihilate)? + &ladder(n, LadderKind::Create)?)
}

/// `I ⊗ ... ⊗ local_op ⊗ ... ⊗ I` with `local_op` on `subsystem`.
pub fn embed_single(space: &HilbertSpace, subsystem: usize, local_op: &SparseOperator) -> Result<SparseOperator> {
    let d = space.subsystem_dim(subsystem)?;
    if local_op.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: local_op.dim(),
        });
    }
    let left: usize = space.dims()[..subsystem].iter().product();
    let right: usize = space.dims()[subsystem + 1..].iter().product();
    let mut out = Vec::with_capacity(left * right * local_op.nnz());
    for l in 0..left {
        for (r, c, v) in local_op.triplets() {
            for k in 0..right {
                out.push(((l * d + r) * right + k, (l * d + c) * right + k, v));
            }
        }
    }
    Ok(SparseOperator::from_triplets(space.dim(), out))
}

/// Product of single-subsystem operators on distinct subsystems.
pub fn embed_product(space: &HilbertSpace, factors: &[(usize, &SparseOperator)]) -> Result<SparseOperator> {
    let mut acc = SparseOperator::identity(space.dim());
    for (k, &(s, op)) in factors.iter().enumerate() {
        if factors[..k].iter().any(|&(t, _)| t == s) {
            return Err(Error::param("factors", format!("subsystem {s} listed twice")));
        }
        acc = &acc * &embed_single(space, s, op)?;
    }
    Ok(acc)
}

/// Pauli operator on qubit `q` of `space`.
pub fn qubit_op(space: &HilbertSpace, q: usize, which: PauliKind) -> Result<SparseOperator> {
    if q >= space.n_qubits() {
        return Err(Error::SubsystemOutOfRange {
            index: q,
            count: space.n_qubits(),
        });
    }
    embed_single(space, q, &pauli(which))
}

/// Ladder operator on bosonic mode `j` of `space`.
pub fn mode_op(space: &HilbertSpace, j: usize, which: LadderKind) -> Result<SparseOperator> {
    if j >= space.n_modes() {
        return Err(Error::SubsystemOutOfRange {
            index: j,
            count: space.n_modes(),
        });
    }
    let n = space.boson_truncations()[j];
    embed_single(space, space.mode_subsystem(j), &ladder(n, which)?)
}
