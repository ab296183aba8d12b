use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::presets::{coupler_preset, star_preset};
use super::{Block, Gate, GateTerm, Schedule, SCHEDULE_VERSION};
use crate::error::{Error, Result};
use crate::model::{BondKind, HHParams, Lattice, SPINS};
use crate::model::qubit_index;
use crate::pauli::PauliString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Star,
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileOptions {
    /// Trotter splitting order within one step.
    pub order: Vec<Part>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            order: vec![Part::Star, Part::Horizontal, Part::Vertical],
        }
    }
}

pub fn schedule_compile(params: &HHParams, t: f64, steps: usize) -> Result<Schedule> {
    schedule_compile_with(params, t, steps, &CompileOptions::default())
}

pub fn schedule_compile_with(params: &HHParams, t: f64, steps: usize, opts: &CompileOptions) -> Result<Schedule> {
    params.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", "must be finite and non-negative"));
    }
    let mut order = opts.order.clone();
    order.sort_by_key(|p| *p as u8);
    order.dedup();
    if order.len() != 3 || opts.order.len() != 3 {
        return Err(Error::param("order", "must list star, horizontal and vertical exactly once"));
    }
    let lattice = params.lattice()?;
    let dt = if steps == 0 { 0.0 } else { t / steps as f64 };
    let mut step = Vec::new();
    if steps > 0 {
        for part in &opts.order {
            match part {
                Part::Star => step.extend(star_blocks(params, dt)),
                Part::Horizontal => step.extend(horizontal_blocks(params, &lattice, dt)?),
                Part::Vertical => step.extend(vertical_blocks(params, &lattice, dt)?),
            }
        }
    }
    Ok(Schedule {
        version: SCHEDULE_VERSION,
        params: *params,
        total_time: t,
        trotter_steps: steps,
        step,
    })
}

fn star_blocks(params: &HHParams, dt: f64) -> Vec<Block> {
    let h = Block::HadamardAll {
        qubits: params.n_qubits(),
    };
    vec![
        h.clone(),
        Block::AnalogStar {
            duration: dt,
            preset: star_preset(),
        },
        h,
    ]
}

/// A π/4 rotation layer, each gate listed as Majorana pairs `(a, b)`
/// generating `exp(-i π/4 sum i γ_a γ_b)`.
type MoveLayer = Vec<Vec<(usize, usize)>>;

/// `X_p Z...Z X_q` (or the Y version) between qubits `p < q`.
fn hop_string(p: usize, q: usize, y: bool) -> Result<PauliString> {
    let end = if y { "Y" } else { "X" };
    let letters = format!("{end}{}{end}", "Z".repeat(q - p - 1));
    PauliString::from_letters(p, &letters)
}

fn horizontal_blocks(params: &HHParams, lattice: &Lattice, dt: f64) -> Result<Vec<Block>> {
    let bonds: Vec<_> = lattice
        .bonds()
        .into_iter()
        .filter(|b| b.kind == BondKind::Horizontal)
        .collect();
    if bonds.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for y in [false, true] {
        let mut terms = Vec::new();
        let mut layer = Vec::new();
        for b in &bonds {
            for spin in SPINS {
                let (p, q) = (qubit_index(b.a, spin), qubit_index(b.b, spin));
                terms.push((params.k / 2.0, hop_string(p, q, y)?));
            }
            // swap the down-spin start with the up-spin end across the
            // inter-site coupler
            let m = qubit_index(b.a, crate::model::Spin::Down);
            layer.push(vec![if y { (2 * m, 2 * m + 3) } else { (2 * m + 1, 2 * m + 2) }]);
        }
        let label = if y { "horizontal-y" } else { "horizontal-x" };
        out.extend(string_group(label, &terms, &[layer], dt)?);
    }
    Ok(out)
}

fn vertical_blocks(params: &HHParams, lattice: &Lattice, dt: f64) -> Result<Vec<Block>> {
    let l = lattice.rows();
    if l == 1 {
        return Ok(Vec::new());
    }
    let h = lattice.cols();
    let mut out = Vec::new();
    for r in 0..l {
        let base: Vec<usize> = (0..h).map(|c| 2 * lattice.site(r, c)).collect();
        for y in [false, true] {
            let mut terms = Vec::new();
            for c in 0..h - 1 {
                for spin in SPINS {
                    let p = base[c] + spin.offset();
                    terms.push((params.k / 2.0, hop_string(p, p + 2 * l, y)?));
                }
            }
            let mut moves: Vec<MoveLayer> = Vec::new();
            // first layer: every string end steps onto the neighbouring
            // qubit, pairing up- and down-spin ends on the same qubit
            moves.push(
                base.iter()
                    .map(|&b| vec![if y { (2 * b, 2 * b + 3) } else { (2 * b + 1, 2 * b + 2) }])
                    .collect(),
            );
            // then whole qubits move inwards, one per layer from each side
            for k in 2..=l {
                let mut layer = Vec::new();
                for c in 0..h - 1 {
                    let m = base[c] + k - 1;
                    layer.push(vec![(2 * m, 2 * m + 2), (2 * m + 1, 2 * m + 3)]);
                    let m = base[c + 1] - (k - 2);
                    layer.push(vec![(2 * m - 2, 2 * m), (2 * m - 1, 2 * m + 1)]);
                }
                moves.push(layer);
            }
            let label = format!("vertical-r{r}-{}", if y { "y" } else { "x" });
            out.extend(string_group(&label, &terms, &moves, dt)?);
        }
    }
    Ok(out)
}

fn adjacent_pair(support: &[usize]) -> bool {
    match support {
        [_] => true,
        [a, b] => b == &(a + 1),
        _ => false,
    }
}

fn gate_from_generators(qubits: Vec<usize>, gens: &[(f64, PauliString)]) -> Result<Gate> {
    let mut terms = Vec::new();
    for (c, p) in gens {
        let sign = p
            .sign()
            .ok_or_else(|| Error::Numerical(format!("generator {p} is not Hermitian")))?;
        if p.support().iter().any(|q| !qubits.contains(q)) {
            return Err(Error::Numerical(format!("generator {p} leaves gate qubits {qubits:?}")));
        }
        terms.push(GateTerm {
            coeff: c * sign,
            paulis: p.letters_on(&qubits),
        });
    }
    let preset = match terms.as_slice() {
        [t] if qubits.len() == 2 => coupler_preset(&t.paulis, t.coeff),
        _ => None,
    };
    Ok(Gate { qubits, terms, preset })
}

fn move_gate(pairs: &[(usize, usize)]) -> Result<(Vec<usize>, Vec<PauliString>)> {
    let mut qubits: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a / 2, b / 2]).collect();
    qubits.sort_unstable();
    qubits.dedup();
    if !adjacent_pair(&qubits) {
        return Err(Error::Numerical(format!("rotation on non-adjacent qubits {qubits:?}")));
    }
    let gens = pairs
        .iter()
        .map(|&(a, b)| PauliString::majorana_bilinear(a, b))
        .collect::<Result<Vec<_>>>()?;
    Ok((qubits, gens))
}

/// Conjugation ladder for mutually commuting strings: the move layers bring
/// every string onto at most two adjacent qubits, where a single analog
/// layer applies all of them, and the mirrored layers undo the moves.
fn string_group(label: &str, terms: &[(f64, PauliString)], moves: &[MoveLayer], dt: f64) -> Result<Vec<Block>> {
    let mut tracked: Vec<(f64, PauliString)> = terms.to_vec();
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for layer in moves {
        let mut used = Vec::new();
        let mut gates = Vec::new();
        let mut inverse = Vec::new();
        for pairs in layer {
            let (qubits, gens) = move_gate(pairs)?;
            if qubits.iter().any(|q| used.contains(q)) {
                return Err(Error::Numerical(format!("overlapping rotations in layer {label}")));
            }
            used.extend(qubits.iter().copied());
            for g in &gens {
                for (_, t) in tracked.iter_mut() {
                    *t = t.conjugate_quarter(g, true);
                }
            }
            let plus: Vec<(f64, PauliString)> = gens.iter().map(|g| (1.0, *g)).collect();
            let minus: Vec<(f64, PauliString)> = gens.iter().map(|g| (-1.0, *g)).collect();
            gates.push(gate_from_generators(qubits.clone(), &plus)?);
            inverse.push(gate_from_generators(qubits, &minus)?);
        }
        forward.push(Block::TwoBodyRotation {
            label: format!("{label}-move"),
            angle: FRAC_PI_4,
            gates,
        });
        backward.push(Block::TwoBodyRotation {
            label: format!("{label}-unmove"),
            angle: FRAC_PI_4,
            gates: inverse,
        });
    }

    let mut by_support: BTreeMap<Vec<usize>, Vec<(f64, PauliString)>> = BTreeMap::new();
    for (c, t) in tracked {
        let sup = t.support();
        if !adjacent_pair(&sup) {
            return Err(Error::Numerical(format!("string {t} still spans {sup:?} in {label}")));
        }
        by_support.entry(sup).or_default().push((c, t));
    }
    let mut used = Vec::new();
    let mut core = Vec::new();
    for (sup, gens) in by_support {
        if sup.iter().any(|q| used.contains(q)) {
            return Err(Error::Numerical(format!("overlapping core terms in {label}")));
        }
        used.extend(sup.iter().copied());
        core.push(gate_from_generators(sup, &gens)?);
    }

    let mut out = forward;
    out.push(Block::AnalogCore {
        label: format!("{label}-core"),
        duration: dt,
        gates: core,
    });
    out.extend(backward.into_iter().rev());
    Ok(out)
}
