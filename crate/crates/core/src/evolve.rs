//! Exact reference propagation.

use crate::error::{Error, Result};
use crate::tensor::{Propagator, SparseOperator, StateVector};

/// States sampled at strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S = StateVector> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn new(times: Vec<f64>, states: Vec<S>) -> Result<Self> {
        check_times(&times)?;
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: states.len(),
            });
        }
        Ok(Self { times, states })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(&self.states)
    }

    /// Applies `f` to every state.
    pub fn map<T>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<Vec<T>> {
        self.states.iter().map(&mut f).collect()
    }
}

/// Times must be finite, non-negative and strictly increasing.
pub fn check_times(times: &[f64]) -> Result<()> {
    let ok = times.iter().all(|t| t.is_finite() && *t >= 0.0) && times.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::UnsortedTimes)
    }
}

/// `n + 1` evenly spaced times from 0 to `t_final`.
pub fn uniform_times(t_final: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t_final * i as f64 / n as f64).collect()
}

/// `exp(-i H t) psi0` at each of `times`, sharing one eigendecomposition.
pub fn exact_trajectory(h: &SparseOperator, psi0: &StateVector, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let prop = Propagator::new(h, psi0)?;
    let states = times.iter().map(|&t| prop.evolve(t)).collect::<Result<Vec<_>>>()?;
    Trajectory::new(times.to_vec(), states)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted() {
        let h = SparseOperator::identity(2);
        let psi = StateVector::basis(2, 0);
        assert_eq!(exact_trajectory(&h, &psi, &[0.0, 2.0, 1.0]), Err(Error::UnsortedTimes));
        assert_eq!(exact_trajectory(&h, &psi, &[-1.0]), Err(Error::UnsortedTimes));
    }

    #[test]
    fn uniform_grid_endpoints() {
        let t = uniform_times(2.0, 4);
        assert_eq!(t, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }
}
