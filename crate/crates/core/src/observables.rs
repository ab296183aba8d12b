//! Fidelities, occupations and spectral analysis of time series.

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::{qubit_index, Spin};
use crate::tensor::{embed_product, mode_op, DensityMatrix, HilbertSpace, LadderKind, SparseOperator, StateVector};
use crate::C64;

/// Pure or mixed state that supports overlaps and expectation values.
pub trait QuantumState {
    fn dim(&self) -> usize;
    /// `|<psi|state>|^2` or `<psi|rho|psi>`.
    fn overlap(&self, psi: &StateVector) -> Result<f64>;
    fn expect(&self, op: &SparseOperator) -> Result<f64>;
}

impl QuantumState for StateVector {
    fn dim(&self) -> usize {
        StateVector::dim(self)
    }

    fn overlap(&self, psi: &StateVector) -> Result<f64> {
        Ok(psi.inner(self)?.norm_sqr())
    }

    fn expect(&self, op: &SparseOperator) -> Result<f64> {
        self.expectation(op)
    }
}

impl QuantumState for DensityMatrix {
    fn dim(&self) -> usize {
        DensityMatrix::dim(self)
    }

    fn overlap(&self, psi: &StateVector) -> Result<f64> {
        self.overlap_with(psi)
    }

    fn expect(&self, op: &SparseOperator) -> Result<f64> {
        self.expectation(op)
    }
}

/// State fidelity against a normalized pure reference.
pub fn fidelity<S: QuantumState>(reference: &StateVector, state: &S) -> Result<f64> {
    crate::tensor::check_dim(reference.dim(), state.dim())?;
    state.overlap(reference)
}

fn occupied_projector() -> SparseOperator {
    SparseOperator::from_triplets(2, [(0, 0, C64::new(1.0, 0.0))])
}

/// `n_{j↑} n_{j↓}` for site `site` (0-based): both qubits of the site in
/// the occupied state `|0>`.
pub fn double_occupation_operator(space: &HilbertSpace, site: usize) -> Result<SparseOperator> {
    let (up, down) = (qubit_index(site, Spin::Up), qubit_index(site, Spin::Down));
    if down >= space.n_qubits() {
        return Err(Error::SubsystemOutOfRange {
            index: site,
            count: space.n_qubits() / 2,
        });
    }
    let p = occupied_projector();
    embed_product(space, &[(up, &p), (down, &p)])
}

pub fn double_occupation<S: QuantumState>(state: &S, space: &HilbertSpace, site: usize) -> Result<f64> {
    state.expect(&double_occupation_operator(space, site)?)
}

/// `sum_j a_j† a_j` over every mode.
pub fn phonon_number_operator(space: &HilbertSpace) -> Result<SparseOperator> {
    let ops = (0..space.n_modes())
        .map(|j| mode_op(space, j, LadderKind::Number))
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::tensor::sum_ops(space.dim(), &ops))
}

pub fn phonon_number<S: QuantumState>(state: &S, space: &HilbertSpace) -> Result<f64> {
    state.expect(&phonon_number_operator(space)?)
}

/// Fewest samples accepted by [`dominant_frequency`].
pub const MIN_SPECTRAL_SAMPLES: usize = 64;

/// Angular frequency of the largest non-zero periodogram peak of a uniformly
/// sampled series, after removing its mean. Resolution is one bin,
/// `2π / (n dt)`.
pub fn dominant_frequency(times: &[f64], values: &[f64]) -> Result<f64> {
    let n = values.len();
    if times.len() != n {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: n,
        });
    }
    if n < MIN_SPECTRAL_SAMPLES {
        return Err(Error::InvalidTimeGrid {
            min: MIN_SPECTRAL_SAMPLES,
        });
    }
    let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
    let uniform = dt > 0.0 && times.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(1.0));
    if !uniform {
        return Err(Error::InvalidTimeGrid {
            min: MIN_SPECTRAL_SAMPLES,
        });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<C64> = values.iter().map(|v| C64::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let (k, peak) = (1..=n / 2)
        .map(|k| (k, buf[k].norm()))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if k == 0 || peak <= 1e-9 * scale.max(f64::MIN_POSITIVE) * n as f64 || scale < 1e-14 {
        return Err(Error::NoSpectralPeak);
    }
    Ok(2.0 * std::f64::consts::PI * k as f64 / (n as f64 * dt))
}

/// Mean peak-to-trough swing between consecutive turning points of a
/// series; 0 for a monotone series.
pub fn oscillation_amplitude(values: &[f64]) -> f64 {
    let turning: Vec<f64> = values
        .windows(3)
        .filter(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0)
        .map(|w| w[1])
        .collect();
    if turning.len() < 2 {
        return 0.0;
    }
    turning.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>() / (turning.len() - 1) as f64
}

/// Arithmetic mean (0 for an empty series).
pub fn time_average(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}
