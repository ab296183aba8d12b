use nalgebra::DMatrix;

use super::{schedule_compile, Block, Gate, Schedule};
use crate::error::{Error, Result};
use crate::evolve::Trajectory;
use crate::model::{qubit_index, HHParams, Spin};
use crate::tensor::{
    embed_product, embed_single, ladder, pauli, quadrature, unitary_from_hermitian, HilbertSpace, LadderKind,
    PauliKind, SparseOperator, StateVector,
};
use crate::C64;

/// Dense unitary on a few subsystems.
#[derive(Debug, Clone)]
pub struct LocalOp {
    pub subsystems: Vec<usize>,
    pub matrix: DMatrix<C64>,
}

/// Unitaries of one layer plus the qubits its gates touch.
#[derive(Debug, Clone)]
pub struct BlockOps {
    pub analog: bool,
    pub ops: Vec<LocalOp>,
    /// Qubits touched by single-qubit gates.
    pub single_qubit: Vec<usize>,
    /// Qubit pairs touched by two-qubit gates.
    pub two_qubit: Vec<(usize, usize)>,
}

/// A schedule with every layer turned into dense local unitaries.
#[derive(Debug, Clone)]
pub struct CompiledSchedule {
    pub space: HilbertSpace,
    pub blocks: Vec<BlockOps>,
    pub steps: usize,
    pub dt: f64,
}

fn hadamard() -> DMatrix<C64> {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    DMatrix::from_row_slice(2, 2, &[s, s, s, -s])
}

/// Site generator in the Hadamard frame on `(q_L, q_R, mode)`:
/// `ω0 a†a + (Ū/4)(X_L + X_R) + (U/4) X_L X_R + (g/2)(X_L + X_R)(a + a†)`.
pub fn star_generator(params: &HHParams) -> Result<DMatrix<C64>> {
    let sp = HilbertSpace::new(2, vec![params.boson_levels])?;
    let x = pauli(PauliKind::X);
    let xl = embed_single(&sp, 0, &x)?;
    let xr = embed_single(&sp, 1, &x)?;
    let xs = &xl + &xr;
    let num = embed_single(&sp, 2, &ladder(params.boson_levels, LadderKind::Number)?)?;
    let quad = embed_single(&sp, 2, &quadrature(params.boson_levels)?)?;
    let h = crate::tensor::sum_ops(
        sp.dim(),
        &[
            num.scale_real(params.omega0),
            xs.scale_real(params.u_bar() / 4.0),
            embed_product(&sp, &[(0, &x), (1, &x)])?.scale_real(params.u / 4.0),
            (&xs * &quad).scale_real(params.g / 2.0),
        ],
    );
    Ok(h.to_dense())
}

fn gate_generator(gate: &Gate) -> Result<DMatrix<C64>> {
    let d = 1usize << gate.qubits.len();
    let mut g = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for t in &gate.terms {
        if t.paulis.len() != gate.qubits.len() {
            return Err(Error::config("gate.terms", format!("term {} does not match qubits", t.paulis)));
        }
        let mut m = DMatrix::from_element(1, 1, C64::new(t.coeff, 0.0));
        for ch in t.paulis.chars() {
            let which = match ch {
                'I' => PauliKind::I,
                'X' => PauliKind::X,
                'Y' => PauliKind::Y,
                'Z' => PauliKind::Z,
                _ => return Err(Error::config("gate.terms", format!("unknown Pauli letter {ch:?}"))),
            };
            m = m.kronecker(&pauli(which).to_dense());
        }
        g += m;
    }
    Ok(g)
}

fn gate_ops(gates: &[Gate], time: f64, out: &mut BlockOps) -> Result<()> {
    for gate in gates {
        let u = unitary_from_hermitian(&gate_generator(gate)?, time);
        match gate.qubits.as_slice() {
            [q] => out.single_qubit.push(*q),
            [a, b] => out.two_qubit.push((*a, *b)),
            _ => return Err(Error::SpanTooLarge(gate.qubits.len())),
        }
        out.ops.push(LocalOp {
            subsystems: gate.qubits.clone(),
            matrix: u,
        });
    }
    Ok(())
}

/// Turns layers into local unitaries on `space`. Star blocks need the
/// bosonic modes of `params` to be present in `space`.
pub fn compile_blocks(space: &HilbertSpace, params: &HHParams, blocks: &[Block]) -> Result<Vec<BlockOps>> {
    let mut out = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut ops = BlockOps {
            analog: block.is_analog(),
            ops: Vec::new(),
            single_qubit: Vec::new(),
            two_qubit: Vec::new(),
        };
        match block {
            Block::HadamardAll { qubits } => {
                for q in 0..*qubits {
                    ops.single_qubit.push(q);
                    ops.ops.push(LocalOp {
                        subsystems: vec![q],
                        matrix: hadamard(),
                    });
                }
            }
            Block::AnalogStar { duration, .. } => {
                if space.n_modes() != params.n_sites() {
                    return Err(Error::param("space", "analog star blocks need one mode per site"));
                }
                let u = unitary_from_hermitian(&star_generator(params)?, *duration);
                for s in 0..params.n_sites() {
                    ops.ops.push(LocalOp {
                        subsystems: vec![
                            qubit_index(s, Spin::Up),
                            qubit_index(s, Spin::Down),
                            space.mode_subsystem(s),
                        ],
                        matrix: u.clone(),
                    });
                }
            }
            Block::TwoBodyRotation { angle, gates, .. } => gate_ops(gates, *angle, &mut ops)?,
            Block::AnalogCore { duration, gates, .. } => gate_ops(gates, *duration, &mut ops)?,
        }
        out.push(ops);
    }
    Ok(out)
}

/// Applies compiled layers in order.
pub fn apply_blocks(space: &HilbertSpace, blocks: &[BlockOps], psi: &mut StateVector) -> Result<()> {
    for b in blocks {
        for op in &b.ops {
            psi.apply_local(space, &op.subsystems, &op.matrix)?;
        }
    }
    Ok(())
}

impl CompiledSchedule {
    pub fn new(schedule: &Schedule) -> Result<Self> {
        let space = schedule.params.space()?;
        let blocks = compile_blocks(&space, &schedule.params, &schedule.step)?;
        Ok(Self {
            space,
            blocks,
            steps: schedule.trotter_steps,
            dt: schedule.dt(),
        })
    }

    pub fn apply_block(&self, block: &BlockOps, psi: &mut StateVector) -> Result<()> {
        for op in &block.ops {
            psi.apply_local(&self.space, &op.subsystems, &op.matrix)?;
        }
        Ok(())
    }

    pub fn apply_step(&self, psi: &mut StateVector) -> Result<()> {
        apply_blocks(&self.space, &self.blocks, psi)
    }

    /// Full unitary of one step (small registers only).
    pub fn step_unitary(&self) -> Result<SparseOperator> {
        let dim = self.space.dim();
        let mut cols = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut psi = StateVector::basis(dim, i);
            self.apply_step(&mut psi)?;
            cols.push(psi);
        }
        let m = DMatrix::from_fn(dim, dim, |r, c| cols[c].amplitudes()[r]);
        Ok(SparseOperator::from_dense(&m))
    }
}

/// Runs a schedule, recording the initial state and the state after every
/// Trotter step.
pub fn execute(schedule: &Schedule, psi0: &StateVector) -> Result<Trajectory> {
    let compiled = CompiledSchedule::new(schedule)?;
    crate::tensor::check_dim(compiled.space.dim(), psi0.dim())?;
    let dt = schedule.dt();
    let mut psi = psi0.clone();
    let mut times = vec![0.0];
    let mut states = vec![psi.clone()];
    for k in 1..=compiled.steps {
        compiled.apply_step(&mut psi)?;
        times.push(dt * k as f64);
        states.push(psi.clone());
    }
    Trajectory::new(times, states)
}

/// Ideal digital-analog evolution to time `t` in `steps` Trotter steps.
pub fn daqc_evolve(params: &HHParams, psi0: &StateVector, t: f64, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::param("steps", "need at least one Trotter step"));
    }
    execute(&schedule_compile(params, t, steps)?, psi0)
}
