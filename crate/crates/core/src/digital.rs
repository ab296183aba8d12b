//! Fully digital Trotter baseline: every on-site and electron-phonon term
//! becomes its own gate, with bosonic modes stored in binary on
//! `log2(levels)` qubits.

use nalgebra::DMatrix;

use crate::channels::{qubit_damping_channel, register_bit_damping, KrausChannel, NoiseConfig};
use crate::error::{Error, Result};
use crate::evolve::Trajectory;
use crate::model::{qubit_index, BondKind, HHParams, SPINS};
use crate::pauli::PauliString;
use crate::schedule::LocalOp;
use crate::synthesis::{cnot_count, BosonicGate, BosonicGateKind, ResourceEstimate};
use crate::tensor::{
    ladder, pauli, quadrature, unitary_from_hermitian, DensityMatrix, HilbertSpace, LadderKind, PauliKind,
    StateVector,
};
use crate::C64;

/// One gate of the digital step with its cost in native gates.
#[derive(Debug, Clone)]
pub struct DigitalTerm {
    pub label: String,
    pub op: LocalOp,
    pub cnots: usize,
    pub one_qubit: usize,
}

fn check_binary(params: &HHParams) -> Result<()> {
    let n = params.boson_levels;
    if !n.is_power_of_two() {
        return Err(Error::param(
            "boson_levels",
            format!("{n} levels cannot be stored in binary; use a power of two"),
        ));
    }
    Ok(())
}

fn counts(kind: BosonicGateKind, levels: usize) -> Result<ResourceEstimate> {
    cnot_count(&BosonicGate::new(kind, levels, 0.3)?)
}

/// `exp(-i dt c P)` for a Pauli string, costed as a CNOT ladder.
fn string_term(label: String, p: &PauliString, coeff: f64, dt: f64) -> DigitalTerm {
    let support = p.support();
    let w = support.len();
    let gen = p.local_matrix(&support) * C64::new(coeff, 0.0);
    DigitalTerm {
        label,
        op: LocalOp {
            subsystems: support,
            matrix: unitary_from_hermitian(&gen, dt),
        },
        cnots: 2 * (w - 1),
        one_qubit: 2 * w + 1,
    }
}

/// Gates of one first-order Trotter step, in the same part order as the
/// digital-analog schedule: on-site terms, then horizontal and vertical
/// hopping strings.
pub fn digital_step(params: &HHParams, dt: f64) -> Result<Vec<DigitalTerm>> {
    params.validate()?;
    check_binary(params)?;
    let space = params.space()?;
    let lattice = params.lattice()?;
    let n = params.boson_levels;
    let cost_r = counts(BosonicGateKind::Rotation, n)?;
    let cost_cd = counts(BosonicGateKind::ControlledDisplacement, n)?;
    let rot = unitary_from_hermitian(&ladder(n, LadderKind::Number)?.to_dense(), dt * params.omega0);
    let z = pauli(PauliKind::Z).to_dense();
    let rz = unitary_from_hermitian(&z, dt * params.u_bar() / 4.0);
    let zz = unitary_from_hermitian(&z.kronecker(&z), dt * params.u / 4.0);
    let cd = unitary_from_hermitian(
        &z.kronecker(&quadrature(n)?.to_dense()),
        dt * params.g / 2.0,
    );

    let mut out = Vec::new();
    let term = |label: String, subsystems: Vec<usize>, matrix: &DMatrix<C64>, cnots, one_qubit| DigitalTerm {
        label,
        op: LocalOp {
            subsystems,
            matrix: matrix.clone(),
        },
        cnots,
        one_qubit,
    };
    for s in 0..params.n_sites() {
        let mode = space.mode_subsystem(s);
        let (ql, qr) = (qubit_index(s, SPINS[0]), qubit_index(s, SPINS[1]));
        out.push(term(format!("site{s}-cv_r"), vec![mode], &rot, cost_r.cnot_count, cost_r.one_qubit_count));
        out.push(term(format!("site{s}-rz-l"), vec![ql], &rz, 0, 1));
        out.push(term(format!("site{s}-rz-r"), vec![qr], &rz, 0, 1));
        out.push(term(format!("site{s}-zz"), vec![ql, qr], &zz, 2, 1));
        for (q, side) in [(ql, "l"), (qr, "r")] {
            out.push(term(
                format!("site{s}-cv_c_d-{side}"),
                vec![q, mode],
                &cd,
                cost_cd.cnot_count,
                cost_cd.one_qubit_count,
            ));
        }
    }
    for kind in [BondKind::Horizontal, BondKind::Vertical] {
        for letter in ['X', 'Y'] {
            for b in lattice.bonds().into_iter().filter(|b| b.kind == kind) {
                for spin in SPINS {
                    let (p, q) = (qubit_index(b.a, spin), qubit_index(b.b, spin));
                    let letters = format!("{letter}{}{letter}", "Z".repeat(q - p - 1));
                    let string = PauliString::from_letters(p, &letters)?;
                    out.push(string_term(format!("hop-{p}-{q}-{letter}"), &string, params.k / 2.0, dt));
                }
            }
        }
    }
    Ok(out)
}

/// CNOTs in one digital Trotter step.
pub fn digital_cnots_per_step(params: &HHParams) -> Result<usize> {
    Ok(digital_step(params, 0.0)?.iter().map(|t| t.cnots).sum())
}

fn step_count(steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::param("steps", "need at least one Trotter step"));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", "must be finite and non-negative"));
    }
    Ok(())
}

/// Ideal digital Trotter evolution to time `t` in `steps` steps.
pub fn digital_evolve(params: &HHParams, psi0: &StateVector, t: f64, steps: usize) -> Result<Trajectory> {
    step_count(steps)?;
    check_time(t)?;
    let dt = t / steps as f64;
    let terms = digital_step(params, dt)?;
    let space = params.space()?;
    crate::tensor::check_dim(space.dim(), psi0.dim())?;
    let mut psi = psi0.clone();
    let mut times = vec![0.0];
    let mut states = vec![psi.clone()];
    for k in 1..=steps {
        for term in &terms {
            psi.apply_local(&space, &term.op.subsystems, &term.op.matrix)?;
        }
        times.push(dt * k as f64);
        states.push(psi.clone());
    }
    Trajectory::new(times, states)
}

/// Per-gate noise for the digital baseline. Each gate is followed by
/// depolarizing of everything it touches, with the error probabilities of
/// its native gates compounded, and by relaxation over one digital block of
/// every touched qubit, including the qubits of a binary mode register.
struct DigitalNoise {
    config: NoiseConfig,
    qubit: KrausChannel,
    register: Vec<KrausChannel>,
}

impl DigitalNoise {
    fn new(config: &NoiseConfig, levels: usize) -> Result<Self> {
        config.validate()?;
        let gamma = config.gamma_qubit();
        let bits = levels.trailing_zeros() as usize;
        Ok(Self {
            config: *config,
            qubit: qubit_damping_channel(gamma)?,
            register: (0..bits)
                .map(|b| register_bit_damping(levels, b, gamma))
                .collect::<Result<_>>()?,
        })
    }

    fn apply(&self, rho: &mut DensityMatrix, space: &HilbertSpace, term: &DigitalTerm) -> Result<()> {
        let survive = (1.0 - self.config.gate_error_1q).powi(term.one_qubit as i32)
            * (1.0 - self.config.gate_error_2q).powi(term.cnots as i32);
        rho.depolarize_local(space, &term.op.subsystems, 1.0 - survive)?;
        if self.config.gamma_qubit() == 0.0 {
            return Ok(());
        }
        for &s in &term.op.subsystems {
            if s < space.n_qubits() {
                rho.apply_kraus_local(space, &[s], self.qubit.dense_operators())?;
            } else {
                for ch in &self.register {
                    rho.apply_kraus_local(space, &[s], ch.dense_operators())?;
                }
            }
        }
        Ok(())
    }
}

/// Digital Trotter evolution of a density matrix with per-gate noise.
pub fn noisy_digital_evolve(
    params: &HHParams,
    rho0: &DensityMatrix,
    t: f64,
    steps: usize,
    config: &NoiseConfig,
) -> Result<Trajectory<DensityMatrix>> {
    step_count(steps)?;
    check_time(t)?;
    let dt = t / steps as f64;
    let terms = digital_step(params, dt)?;
    let space = params.space()?;
    crate::tensor::check_dim(space.dim(), rho0.dim())?;
    let noise = DigitalNoise::new(config, params.boson_levels)?;
    let mut rho = rho0.clone();
    let mut times = vec![0.0];
    let mut states = vec![rho.clone()];
    for k in 1..=steps {
        for term in &terms {
            rho.apply_unitary_local(&space, &term.op.subsystems, &term.op.matrix)?;
            noise.apply(&mut rho, &space, term)?;
        }
        if rho.trace().re.is_nan() {
            return Err(Error::Numerical("density matrix became NaN".into()));
        }
        times.push(dt * k as f64);
        states.push(rho.clone());
    }
    Trajectory::new(times, states)
}
