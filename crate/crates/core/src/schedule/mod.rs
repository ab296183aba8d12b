//! Digital-analog schedules: compilation of the mapped Hamiltonian into
//! analog blocks and two-qubit rotation layers, and their execution.

mod compile;
mod execute;
pub mod presets;

use serde::{Deserialize, Serialize};

pub use compile::{schedule_compile, schedule_compile_with, CompileOptions, Part};
pub use execute::{apply_blocks, compile_blocks, daqc_evolve, execute, star_generator, BlockOps, CompiledSchedule, LocalOp};
pub use presets::Preset;

use crate::error::{Error, Result};
use crate::model::HHParams;

pub const SCHEDULE_VERSION: u32 = 1;

/// One signed Pauli term of a gate, letters listed in gate-qubit order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateTerm {
    pub coeff: f64,
    pub paulis: String,
}

/// Generator `sum_t coeff_t P_t` on one or two adjacent qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub qubits: Vec<usize>,
    pub terms: Vec<GateTerm>,
    /// Coupler setting when the generator is a single two-body term.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
}

/// One circuit layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Block {
    /// Hadamard on every qubit.
    HadamardAll { qubits: usize },
    /// Site-local analog evolution in the Hadamard frame.
    AnalogStar { duration: f64, preset: Preset },
    /// Digital layer `prod_g exp(-i angle G_g)` on disjoint qubit pairs.
    TwoBodyRotation { label: String, angle: f64, gates: Vec<Gate> },
    /// Analog layer `prod_g exp(-i duration G_g)`.
    AnalogCore { label: String, duration: f64, gates: Vec<Gate> },
}

impl Block {
    pub fn is_analog(&self) -> bool {
        matches!(self, Block::AnalogStar { .. } | Block::AnalogCore { .. })
    }

    pub fn name(&self) -> &str {
        match self {
            Block::HadamardAll { .. } => "hadamard",
            Block::AnalogStar { .. } => "star",
            Block::TwoBodyRotation { label, .. } | Block::AnalogCore { label, .. } => label,
        }
    }
}

/// `trotter_steps` repetitions of the same per-step block list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub version: u32,
    pub params: HHParams,
    pub total_time: f64,
    pub trotter_steps: usize,
    pub step: Vec<Block>,
}

impl Schedule {
    pub fn dt(&self) -> f64 {
        if self.trotter_steps == 0 {
            0.0
        } else {
            self.total_time / self.trotter_steps as f64
        }
    }

    /// Layers in one Trotter step.
    pub fn step_depth(&self) -> usize {
        self.step.len()
    }

    /// Layers in the whole schedule.
    pub fn depth(&self) -> usize {
        self.trotter_steps * self.step.len()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sched: Self = serde_json::from_str(s).map_err(|e| Error::config("schedule", e.to_string()))?;
        if sched.version != SCHEDULE_VERSION {
            return Err(Error::config(
                "schedule.version",
                format!("unsupported version {} (expected {SCHEDULE_VERSION})", sched.version),
            ));
        }
        Ok(sched)
    }
}

/// Layer counts for an `rows x cols` lattice and `steps` Trotter steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Depth {
    /// Layers per Trotter step: `9` for chains, `2l(2l+1) + 9` otherwise.
    pub per_step: usize,
    /// `steps * per_step`.
    pub total: usize,
    /// Closed form `2 N l (2l+1) + 9` quoted for N steps (`9` for chains).
    pub quoted_total: usize,
}

pub fn circuit_depth(rows: usize, cols: usize, steps: usize) -> Result<Depth> {
    crate::model::Lattice::new(rows, cols)?;
    let vertical = if rows == 1 { 0 } else { 2 * rows * (2 * rows + 1) };
    let per_step = vertical + 9;
    Ok(Depth {
        per_step,
        total: steps * per_step,
        quoted_total: steps * vertical + 9,
    })
}
