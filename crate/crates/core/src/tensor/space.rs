use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tensor-product layout of a hybrid register: `n_qubits` two-level systems
/// followed by bosonic modes truncated to `boson_truncations[j]` levels.
///
/// Subsystem 0 is the most significant digit of the global index, so the
/// ket `|q0, q1, ..., m0, m1, ...>` maps to
/// `sum_s digit_s * stride_s` with `stride_s = prod_{t > s} dim_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    n_qubits: usize,
    boson_truncations: Vec<usize>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl HilbertSpace {
    pub fn new(n_qubits: usize, boson_truncations: Vec<usize>) -> Result<Self> {
        if let Some(&n) = boson_truncations.iter().find(|&&n| n < 2) {
            return Err(Error::TooFewLevels(n));
        }
        let dims: Vec<usize> = std::iter::repeat_n(2, n_qubits)
            .chain(boson_truncations.iter().copied())
            .collect();
        let mut strides = vec![1; dims.len()];
        for s in (0..dims.len().saturating_sub(1)).rev() {
            strides[s] = strides[s + 1] * dims[s + 1];
        }
        let total = dims.iter().product();
        Ok(Self {
            n_qubits,
            boson_truncations,
            dims,
            strides,
            total,
        })
    }

    pub fn qubits(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("qubit-only space is always valid")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_modes(&self) -> usize {
        self.boson_truncations.len()
    }

    pub fn boson_truncations(&self) -> &[usize] {
        &self.boson_truncations
    }

    pub fn n_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.total
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Global subsystem index of bosonic mode `j`.
    pub fn mode_subsystem(&self, j: usize) -> usize {
        self.n_qubits + j
    }

    pub fn subsystem_dim(&self, s: usize) -> Result<usize> {
        self.check_subsystem(s)?;
        Ok(self.dims[s])
    }

    pub fn check_subsystem(&self, s: usize) -> Result<()> {
        if s >= self.dims.len() {
            return Err(Error::SubsystemOutOfRange {
                index: s,
                count: self.dims.len(),
            });
        }
        Ok(())
    }

    /// Dimension of the qubit block (`2^n_qubits`).
    pub fn qubit_dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Dimension of the bosonic block.
    pub fn mode_dim(&self) -> usize {
        self.boson_truncations.iter().product()
    }

    pub fn digit(&self, index: usize, s: usize) -> usize {
        (index / self.strides[s]) % self.dims[s]
    }

    /// Splits a global index into per-subsystem digits.
    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.dims.len()).map(|s| self.digit(index, s)).collect()
    }

    /// Inverse of [`digits`](Self::digits).
    pub fn index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                found: digits.len(),
            });
        }
        let mut idx = 0;
        for (s, (&d, &n)) in digits.iter().zip(&self.dims).enumerate() {
            if d >= n {
                return Err(Error::param(
                    "digits",
                    format!("digit {d} exceeds dimension {n} of subsystem {s}"),
                ));
            }
            idx += d * self.strides[s];
        }
        Ok(idx)
    }

    /// Offsets of all local basis states of `subsystems` (first listed is the
    /// most significant local digit).
    pub(crate) fn local_offsets(&self, subsystems: &[usize]) -> Vec<usize> {
        let mut offsets = vec![0usize];
        for &s in subsystems {
            let mut next = Vec::with_capacity(offsets.len() * self.dims[s]);
            for &o in &offsets {
                for d in 0..self.dims[s] {
                    next.push(o + d * self.strides[s]);
                }
            }
            offsets = next;
        }
        offsets
    }

    /// Global indices whose digits on `subsystems` are all zero.
    pub(crate) fn outer_bases(&self, subsystems: &[usize]) -> Vec<usize> {
        let rest: Vec<usize> = (0..self.dims.len())
            .filter(|s| !subsystems.contains(s))
            .collect();
        self.local_offsets(&rest)
    }
}
