//! Noise channels and density-matrix propagation of noisy schedules.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::Trajectory;
use crate::model::HHParams;
use crate::schedule::{schedule_compile, BlockOps, CompiledSchedule, Schedule};
use crate::tensor::{pauli, DensityMatrix, HilbertSpace, PauliKind, SparseOperator};
use crate::C64;

/// Relaxation times and block durations (ns) plus gate error probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub t1_qubit: f64,
    pub t1_resonator: f64,
    pub dur_analog: f64,
    pub dur_digital: f64,
    pub gate_error_1q: f64,
    pub gate_error_2q: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            t1_qubit: 80_000.0,
            t1_resonator: 80_000.0,
            dur_analog: 50.0,
            dur_digital: 200.0,
            gate_error_1q: 1e-3,
            gate_error_2q: 1e-2,
        }
    }
}

impl NoiseConfig {
    /// No damping and no gate errors.
    pub fn ideal() -> Self {
        Self {
            dur_analog: 0.0,
            dur_digital: 0.0,
            gate_error_1q: 0.0,
            gate_error_2q: 0.0,
            ..Self::default()
        }
    }

    /// Default relaxation with perfect gates: the amplitude-damping-only
    /// model of the noisy digital-analog runs.
    pub fn damping_only() -> Self {
        Self {
            gate_error_1q: 0.0,
            gate_error_2q: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("t1_qubit", self.t1_qubit), ("t1_resonator", self.t1_resonator)] {
            if v.is_nan() || v <= 0.0 {
                return Err(Error::param(name, "must be positive"));
            }
        }
        for (name, v) in [("dur_analog", self.dur_analog), ("dur_digital", self.dur_digital)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(name, "must be finite and non-negative"));
            }
        }
        for (name, v) in [("gate_error_1q", self.gate_error_1q), ("gate_error_2q", self.gate_error_2q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::param(name, "must lie in [0, 1]"));
            }
        }
        for (name, g) in [
            ("gamma_resonator", self.gamma_resonator()),
            ("gamma_qubit", self.gamma_qubit()),
            ("gamma_analog_qubit", self.gamma_analog_qubit()),
        ] {
            if g >= 1.0 {
                return Err(Error::param(name, "block duration must be shorter than T1"));
            }
        }
        Ok(())
    }

    /// Resonator damping per analog block, `dur_analog / t1_resonator`.
    pub fn gamma_resonator(&self) -> f64 {
        self.dur_analog / self.t1_resonator
    }

    /// Qubit damping per digital block, `dur_digital / t1_qubit`.
    pub fn gamma_qubit(&self) -> f64 {
        self.dur_digital / self.t1_qubit
    }

    /// Qubit damping per analog block, `dur_analog / t1_qubit`.
    pub fn gamma_analog_qubit(&self) -> f64 {
        self.dur_analog / self.t1_qubit
    }
}

/// Completely positive map `rho -> sum_k A_k rho A_k†` on one or a few
/// subsystems.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<SparseOperator>,
    dense: Vec<DMatrix<C64>>,
}

/// Completeness tolerance for every constructed channel.
pub const COMPLETENESS_TOL: f64 = 1e-12;

impl KrausChannel {
    /// Checks `sum_k A_k† A_k = I` to [`COMPLETENESS_TOL`].
    pub fn new(operators: Vec<SparseOperator>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::param("operators", "empty Kraus set"));
        };
        let d = first.dim();
        for op in &operators {
            crate::tensor::check_dim(d, op.dim())?;
        }
        let dense: Vec<DMatrix<C64>> = operators.iter().map(|a| a.to_dense()).collect();
        let ch = Self { operators, dense };
        let err = ch.completeness_error();
        if err > COMPLETENESS_TOL {
            return Err(Error::Numerical(format!("Kraus completeness violated by {err:e}")));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![SparseOperator::identity(dim)],
            dense: vec![DMatrix::identity(dim, dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dense[0].nrows()
    }

    pub fn operators(&self) -> &[SparseOperator] {
        &self.operators
    }

    pub fn dense_operators(&self) -> &[DMatrix<C64>] {
        &self.dense
    }

    /// `max |sum_k A_k† A_k - I|`
    pub fn completeness_error(&self) -> f64 {
        let d = self.dim();
        let mut s = DMatrix::<C64>::zeros(d, d);
        for a in &self.dense {
            s += a.adjoint() * a;
        }
        (s - DMatrix::identity(d, d)).camax()
    }

    /// Choi matrix `sum_k vec(A_k) vec(A_k)†` (column stacking).
    pub fn choi(&self) -> DMatrix<C64> {
        let d = self.dim();
        let mut out = DMatrix::<C64>::zeros(d * d, d * d);
        for a in &self.dense {
            let v = DMatrix::from_column_slice(d * d, 1, a.as_slice());
            out += &v * v.adjoint();
        }
        out
    }

    /// Conjugates every operator by `u`: `A_k -> u A_k u†`.
    pub fn conjugated(&self, u: &DMatrix<C64>) -> Result<Self> {
        let ops = self
            .dense
            .iter()
            .map(|a| SparseOperator::from_dense(&(u * a * u.adjoint())))
            .collect();
        Self::new(ops)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        crate::tensor::check_dim(self.dim(), next.dim())?;
        let mut ops = Vec::with_capacity(self.dense.len() * next.dense.len());
        for b in &next.dense {
            for a in &self.dense {
                let m = b * a;
                if m.camax() > 0.0 {
                    ops.push(SparseOperator::from_dense(&m));
                }
            }
        }
        Self::new(ops)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Zero-temperature ladder decay on `dim` levels, level `m` relaxing towards
/// level 0 with `p = 1 - exp(-γ)` per quantum:
/// `A_k = sum_m sqrt(C(m,k)) (1-p)^((m-k)/2) p^(k/2) |m-k><m|`.
pub fn amplitude_damping_channel(dim: usize, gamma: f64) -> Result<KrausChannel> {
    if dim < 2 {
        return Err(Error::TooFewLevels(dim));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param("gamma", "must lie in [0, 1)"));
    }
    if gamma == 0.0 {
        return Ok(KrausChannel::identity(dim));
    }
    let p = -(-gamma).exp_m1();
    let mut ops = Vec::with_capacity(dim);
    for k in 0..dim {
        let trip = (k..dim).map(|m| {
            let amp = binomial(m, k).sqrt() * (1.0 - p).powf((m - k) as f64 / 2.0) * p.powf(k as f64 / 2.0);
            (m - k, m, C64::new(amp, 0.0))
        });
        ops.push(SparseOperator::from_triplets(dim, trip));
    }
    KrausChannel::new(ops)
}

/// Qubit relaxation in the fermion encoding. `|0>` (σz = +1, occupied) is the
/// excited level and decays to `|1>`, so damping never adds fermions.
pub fn qubit_damping_channel(gamma: f64) -> Result<KrausChannel> {
    amplitude_damping_channel(2, gamma)?.conjugated(&pauli(PauliKind::X).to_dense())
}

/// Relaxation of bit `bit` (0 = least significant) of a mode stored in
/// binary on `log2(levels)` qubits: that register qubit decays `1 -> 0`.
pub fn register_bit_damping(levels: usize, bit: usize, gamma: f64) -> Result<KrausChannel> {
    if levels < 2 || !levels.is_power_of_two() || (1usize << bit) >= levels {
        return Err(Error::param("bit", format!("no bit {bit} in a {levels}-level register")));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param("gamma", "must lie in [0, 1)"));
    }
    let p = -(-gamma).exp_m1();
    let mask = 1usize << bit;
    let keep = (0..levels).map(|j| {
        let a = if j & mask == 0 { 1.0 } else { (1.0 - p).sqrt() };
        (j, j, C64::new(a, 0.0))
    });
    let drop = (0..levels)
        .filter(|j| j & mask != 0)
        .map(|j| (j ^ mask, j, C64::new(p.sqrt(), 0.0)));
    KrausChannel::new(vec![
        SparseOperator::from_triplets(levels, keep),
        SparseOperator::from_triplets(levels, drop),
    ])
}

/// Depolarizing map `rho -> (1-p) rho + p I/d ⊗ Tr_span(rho)` on `span`
/// qubits, written with Pauli Kraus operators.
pub fn depolarizing_channel(span: usize, p: f64) -> Result<KrausChannel> {
    if span == 0 || span > 2 {
        return Err(Error::SpanTooLarge(span));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", "must lie in [0, 1]"));
    }
    let d2 = (1usize << (2 * span)) as f64;
    let kinds = [PauliKind::I, PauliKind::X, PauliKind::Y, PauliKind::Z];
    let mut ops = Vec::new();
    for idx in 0..(1usize << (2 * span)) {
        let mut m = SparseOperator::identity(1);
        for j in (0..span).rev() {
            m = m.kron(&pauli(kinds[(idx >> (2 * j)) & 3]));
        }
        let w = if idx == 0 { 1.0 - p + p / d2 } else { p / d2 };
        if w > 0.0 {
            ops.push(m.scale_real(w.sqrt()));
        }
    }
    KrausChannel::new(ops)
}

/// Applies `channel` to one subsystem.
pub fn apply_channel(
    rho: &DensityMatrix,
    space: &HilbertSpace,
    channel: &KrausChannel,
    subsystem: usize,
) -> Result<DensityMatrix> {
    apply_channel_on(rho, space, channel, &[subsystem])
}

/// Applies `channel` to the joint space of `subsystems`.
pub fn apply_channel_on(
    rho: &DensityMatrix,
    space: &HilbertSpace,
    channel: &KrausChannel,
    subsystems: &[usize],
) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply_kraus_local(space, subsystems, channel.dense_operators())?;
    Ok(out)
}

/// Gate error on `span` (one or two qubits): depolarizing with the matching
/// gate error, then amplitude damping over `dur_digital` on each qubit.
pub fn depolarizing_thermal(
    rho: &DensityMatrix,
    space: &HilbertSpace,
    span: &[usize],
    config: &NoiseConfig,
) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    GateNoise::new(config)?.apply(&mut out, space, span)?;
    Ok(out)
}

/// Prebuilt channels for one noise configuration.
#[derive(Debug, Clone)]
struct GateNoise {
    depol_1q: KrausChannel,
    depol_2q: KrausChannel,
    damp_digital: KrausChannel,
}

impl GateNoise {
    fn new(config: &NoiseConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            depol_1q: depolarizing_channel(1, config.gate_error_1q)?,
            depol_2q: depolarizing_channel(2, config.gate_error_2q)?,
            damp_digital: qubit_damping_channel(config.gamma_qubit())?,
        })
    }

    fn apply(&self, rho: &mut DensityMatrix, space: &HilbertSpace, span: &[usize]) -> Result<()> {
        let depol = match span.len() {
            1 => &self.depol_1q,
            2 => &self.depol_2q,
            n => return Err(Error::SpanTooLarge(n)),
        };
        if span.iter().any(|&q| q >= space.n_qubits()) {
            return Err(Error::SubsystemOutOfRange {
                index: *span.iter().max().unwrap_or(&0),
                count: space.n_qubits(),
            });
        }
        apply_nontrivial(rho, space, span, depol)?;
        for &q in span {
            apply_nontrivial(rho, space, &[q], &self.damp_digital)?;
        }
        Ok(())
    }
}

fn apply_nontrivial(rho: &mut DensityMatrix, space: &HilbertSpace, subs: &[usize], ch: &KrausChannel) -> Result<()> {
    if ch.dense.len() == 1 && (&ch.dense[0] - DMatrix::identity(ch.dim(), ch.dim())).camax() == 0.0 {
        return Ok(());
    }
    rho.apply_kraus_local(space, subs, &ch.dense)
}

/// Runs `schedule` on a density matrix. Analog blocks are followed by
/// amplitude damping on every qubit and mode; each digital gate is followed
/// by [`depolarizing_thermal`] on the qubits it touches.
pub fn noisy_execute(schedule: &Schedule, rho0: &DensityMatrix, config: &NoiseConfig) -> Result<Trajectory<DensityMatrix>> {
    let compiled = CompiledSchedule::new(schedule)?;
    crate::tensor::check_dim(compiled.space.dim(), rho0.dim())?;
    let space = &compiled.space;
    let gates = GateNoise::new(config)?;
    let damp_q = qubit_damping_channel(config.gamma_analog_qubit())?;
    let damp_modes = space
        .boson_truncations()
        .iter()
        .map(|&n| amplitude_damping_channel(n, config.gamma_resonator()))
        .collect::<Result<Vec<_>>>()?;

    let apply_block = |rho: &mut DensityMatrix, block: &BlockOps| -> Result<()> {
        for op in &block.ops {
            rho.apply_unitary_local(space, &op.subsystems, &op.matrix)?;
            if !block.analog {
                gates.apply(rho, space, &op.subsystems)?;
            }
        }
        if block.analog {
            for q in 0..space.n_qubits() {
                apply_nontrivial(rho, space, &[q], &damp_q)?;
            }
            for (j, ch) in damp_modes.iter().enumerate() {
                apply_nontrivial(rho, space, &[space.mode_subsystem(j)], ch)?;
            }
        }
        Ok(())
    };

    let mut rho = rho0.clone();
    let mut times = vec![0.0];
    let mut states = vec![rho.clone()];
    for k in 1..=compiled.steps {
        for block in &compiled.blocks {
            apply_block(&mut rho, block)?;
        }
        if rho.trace().re.is_nan() {
            return Err(Error::Numerical("density matrix became NaN".into()));
        }
        times.push(compiled.dt * k as f64);
        states.push(rho.clone());
    }
    Trajectory::new(times, states)
}

/// Noisy digital-analog evolution to time `t` in `steps` Trotter steps.
pub fn noisy_daqc_evolve(
    params: &HHParams,
    rho0: &DensityMatrix,
    t: f64,
    steps: usize,
    config: &NoiseConfig,
) -> Result<Trajectory<DensityMatrix>> {
    if steps == 0 {
        return Err(Error::param("steps", "need at least one Trotter step"));
    }
    noisy_execute(&schedule_compile(params, t, steps)?, rho0, config)
}
