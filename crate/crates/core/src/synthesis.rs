//! Gate synthesis for binary-encoded bosonic operations: quantum Shannon
//! decomposition into single-qubit gates and CNOTs, and CNOT resource counts.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{ladder, quadrature, unitary_from_hermitian, LadderKind};
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Below this sine the cosine-sine split rebuilds the lower-left factor
/// from an SVD instead of dividing by the sine.
const SMALL_SINE: f64 = 1e-5;

/// A gate of the synthesized circuit. Qubit 0 is the most significant bit
/// of the matrix index.
#[derive(Debug, Clone, PartialEq)]
pub enum CircuitGate {
    /// Arbitrary single-qubit unitary (a `U3` up to global phase).
    Single { qubit: usize, matrix: DMatrix<C64> },
    Cnot { control: usize, target: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<CircuitGate>,
}

impl Circuit {
    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, CircuitGate::Cnot { .. })).count()
    }

    pub fn one_qubit_count(&self) -> usize {
        self.gates.len() - self.cnot_count()
    }

    /// Product of all gates, first gate applied first.
    pub fn unitary(&self) -> DMatrix<C64> {
        let d = 1usize << self.n_qubits;
        let mut u = DMatrix::<C64>::identity(d, d);
        for g in &self.gates {
            match g {
                CircuitGate::Single { qubit, matrix } => {
                    let bit = 1usize << (self.n_qubits - 1 - qubit);
                    for c in 0..d {
                        for r in (0..d).filter(|r| r & bit == 0) {
                            let (a, b) = (u[(r, c)], u[(r | bit, c)]);
                            u[(r, c)] = matrix[(0, 0)] * a + matrix[(0, 1)] * b;
                            u[(r | bit, c)] = matrix[(1, 0)] * a + matrix[(1, 1)] * b;
                        }
                    }
                }
                CircuitGate::Cnot { control, target } => {
                    let cb = 1usize << (self.n_qubits - 1 - control);
                    let tb = 1usize << (self.n_qubits - 1 - target);
                    for c in 0..d {
                        for r in (0..d).filter(|r| r & cb != 0 && r & tb == 0) {
                            u.swap((r, c), (r | tb, c));
                        }
                    }
                }
            }
        }
        u
    }
}

#[derive(Debug, Clone, Copy)]
enum Axis {
    Y,
    Z,
}

fn rotation(axis: Axis, phi: f64) -> DMatrix<C64> {
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    match axis {
        Axis::Y => DMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)]),
        Axis::Z => DMatrix::from_row_slice(2, 2, &[C64::new(c, -s), ZERO, ZERO, C64::new(c, s)]),
    }
}

/// Uniformly controlled rotation: target rotated by `angles[s]` when the
/// controls (first control most significant) read `s`. Gray-code circuit
/// with `2^k` CNOTs for `k >= 1` controls.
fn multiplexed_rotation(axis: Axis, target: usize, controls: &[usize], angles: &[f64], out: &mut Vec<CircuitGate>) {
    let k = controls.len();
    if k == 0 {
        out.push(CircuitGate::Single {
            qubit: target,
            matrix: rotation(axis, angles[0]),
        });
        return;
    }
    let n = 1usize << k;
    let gray = |i: usize| i ^ (i >> 1);
    for i in 0..n {
        let g = gray(i);
        let phi: f64 = (0..n)
            .map(|s| if (s & g).count_ones() % 2 == 0 { angles[s] } else { -angles[s] })
            .sum::<f64>()
            / n as f64;
        out.push(CircuitGate::Single {
            qubit: target,
            matrix: rotation(axis, phi),
        });
        let bit = (gray(i) ^ gray((i + 1) % n)).trailing_zeros() as usize;
        out.push(CircuitGate::Cnot {
            control: controls[k - 1 - bit],
            target,
        });
    }
}

type Col = nalgebra::DVector<C64>;

/// Orthonormal completion of the given orthonormal columns to a unitary.
fn complete_basis(cols: &[Col], d: usize) -> Vec<Col> {
    let mut basis: Vec<Col> = Vec::with_capacity(d);
    let push = |w: &mut Col, basis: &mut Vec<Col>, min: f64| {
        for _ in 0..2 {
            for b in basis.iter() {
                let p = b.dotc(w);
                *w -= b * p;
            }
        }
        if w.norm() > min {
            basis.push(w.normalize());
        }
    };
    for v in cols {
        push(&mut v.clone(), &mut basis, 0.0);
    }
    for e in 0..d {
        if basis.len() == d {
            break;
        }
        let mut w = Col::zeros(d);
        w[e] = C64::new(1.0, 0.0);
        push(&mut w, &mut basis, 0.5);
    }
    basis
}

struct CosineSine {
    l0: DMatrix<C64>,
    l1: DMatrix<C64>,
    r0: DMatrix<C64>,
    r1: DMatrix<C64>,
    /// `Ry` angles, `cos(θ/2) = c_i`.
    angles: Vec<f64>,
}

/// Left factor of `z = L diag(norms) R0` from the columns of `z`. Columns
/// with tiny norms are fixed up by an SVD of the leftover block, which
/// rotates the matching rows of `r0` and columns of `partner` (whose norms
/// are 1 to within the square of the tiny ones).
fn left_factor(
    z: &DMatrix<C64>,
    norms: &mut [f64],
    r0: &mut DMatrix<C64>,
    partner: &mut DMatrix<C64>,
) -> Result<DMatrix<C64>> {
    let h = z.nrows();
    let (large, small): (Vec<usize>, Vec<usize>) = (0..h).partition(|&i| norms[i] > SMALL_SINE);
    let cols: Vec<Col> = large.iter().map(|&i| z.column(i) / C64::new(norms[i], 0.0)).collect();
    let basis = complete_basis(&cols, h);
    let mut l = DMatrix::<C64>::zeros(h, h);
    for (j, &i) in large.iter().enumerate() {
        l.set_column(i, &basis[j]);
    }
    if small.is_empty() {
        return Ok(l);
    }
    let q = DMatrix::from_columns(&basis[large.len()..]);
    let zs = DMatrix::from_columns(&small.iter().map(|&i| z.column(i).into_owned()).collect::<Vec<_>>());
    let svd = (q.adjoint() * zs).svd(true, true);
    let ua = svd.u.ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let vb = svd.v_t.ok_or_else(|| Error::Numerical("SVD failed".into()))?.adjoint();
    let qa = &q * &ua;
    let ps = DMatrix::from_columns(&small.iter().map(|&i| partner.column(i).into_owned()).collect::<Vec<_>>()) * &vb;
    let rs = vb.adjoint() * DMatrix::from_rows(&small.iter().map(|&i| r0.row(i).into_owned()).collect::<Vec<_>>());
    for (j, &i) in small.iter().enumerate() {
        l.set_column(i, &qa.column(j));
        partner.set_column(i, &ps.column(j));
        r0.set_row(i, &rs.row(j));
        norms[i] = svd.singular_values[j];
    }
    Ok(l)
}

/// `U = (L0 ⊕ L1) [[C, -S], [S, C]] (R0 ⊕ R1)`. The right factor comes from
/// a Hermitian eigensolve of `U10† U10`; both left factors are read off the
/// columns of `U00 R0†` and `U10 R0†`.
fn cosine_sine(u: &DMatrix<C64>) -> Result<CosineSine> {
    let h = u.nrows() / 2;
    let u00 = u.view((0, 0), (h, h)).into_owned();
    let u01 = u.view((0, h), (h, h)).into_owned();
    let u10 = u.view((h, 0), (h, h)).into_owned();
    let u11 = u.view((h, h), (h, h)).into_owned();
    let gram = u10.adjoint() * &u10;
    let v = ((&gram + gram.adjoint()) * C64::new(0.5, 0.0)).symmetric_eigen().eigenvectors;
    let mut r0 = v.adjoint();
    let x = &u10 * &v;
    let mut s: Vec<f64> = (0..h).map(|i| x.column(i).norm()).collect();
    // the upper-left factor is rebuilt below, so its rotation is discarded
    let mut scratch = DMatrix::<C64>::zeros(h, h);
    let mut l1 = left_factor(&x, &mut s, &mut r0, &mut scratch)?;
    let y = &u00 * r0.adjoint();
    let mut c: Vec<f64> = (0..h).map(|i| y.column(i).norm()).collect();
    let l0 = left_factor(&y, &mut c, &mut r0, &mut l1)?;
    let angles: Vec<f64> = c.iter().zip(&s).map(|(c, s)| 2.0 * s.atan2(*c)).collect();
    let diag = |f: fn(f64) -> f64| {
        DMatrix::from_diagonal(&Col::from_iterator(h, angles.iter().map(|&a| C64::new(f(a / 2.0), 0.0))))
    };
    let (cm, sm) = (diag(f64::cos), diag(f64::sin));
    let r1 = -(&sm * l0.adjoint() * u01) + &cm * l1.adjoint() * u11;
    Ok(CosineSine { l0, l1, r0, r1, angles })
}

/// Eigenvectors and eigenphases of a unitary. The Hermitian and
/// anti-Hermitian parts commute, so a generic real combination of them
/// shares the eigenvectors; a few mixing angles guard against accidental
/// degeneracies.
fn unitary_eigen(m: &DMatrix<C64>) -> Result<(DMatrix<C64>, Vec<f64>)> {
    let d = m.nrows();
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let anti = (m - m.adjoint()) * C64::new(0.0, -0.5);
    for mix in [1.0f64, 0.3, 2.2, 0.77] {
        let h = &herm * C64::new(mix.cos(), 0.0) + &anti * C64::new(mix.sin(), 0.0);
        let v = h.symmetric_eigen().eigenvectors;
        let t = v.adjoint() * m * &v;
        let off = (0..d)
            .flat_map(|r| (0..d).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .map(|(r, c)| t[(r, c)].norm())
            .fold(0.0, f64::max);
        if off < 1e-11 {
            return Ok((v, (0..d).map(|i| t[(i, i)].arg()).collect()));
        }
    }
    Err(Error::Numerical("unitary eigendecomposition failed".into()))
}

/// `A ⊕ B = (I ⊗ V)(D ⊕ D†)(I ⊗ W)` with `D` diagonal, returned as
/// `(V, Rz angles, W)`; `D_jj = exp(-i φ_j / 2)`.
fn demultiplex(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<(DMatrix<C64>, Vec<f64>, DMatrix<C64>)> {
    let (v, args) = unitary_eigen(&(a * b.adjoint()))?;
    let d = args.len();
    let dm = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        args.iter().map(|&p| C64::from_polar(1.0, p / 2.0)),
    ));
    let w = dm * v.adjoint() * b;
    Ok((v, args.iter().map(|p| -p).collect(), w))
}

fn qsd_into(u: &DMatrix<C64>, qubits: &[usize], out: &mut Vec<CircuitGate>) -> Result<()> {
    if qubits.len() == 1 {
        out.push(CircuitGate::Single {
            qubit: qubits[0],
            matrix: u.clone(),
        });
        return Ok(());
    }
    let cs = cosine_sine(u)?;
    multiplexor_into(&cs.r0, &cs.r1, qubits, out)?;
    multiplexed_rotation(Axis::Y, qubits[0], &qubits[1..], &cs.angles, out);
    multiplexor_into(&cs.l0, &cs.l1, qubits, out)
}

/// `A ⊕ B` selected by `qubits[0]`, acting on the remaining qubits.
fn multiplexor_into(a: &DMatrix<C64>, b: &DMatrix<C64>, qubits: &[usize], out: &mut Vec<CircuitGate>) -> Result<()> {
    let (v, phis, w) = demultiplex(a, b)?;
    qsd_into(&w, &qubits[1..], out)?;
    multiplexed_rotation(Axis::Z, qubits[0], &qubits[1..], &phis, out);
    qsd_into(&v, &qubits[1..], out)
}

fn n_qubits_of(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::param("dim", format!("{dim} is not a power of two >= 2")));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Quantum Shannon decomposition of a `2^m x 2^m` unitary.
pub fn qsd(u: &DMatrix<C64>) -> Result<Circuit> {
    let m = n_qubits_of(u.nrows())?;
    let qubits: Vec<usize> = (0..m).collect();
    let mut gates = Vec::new();
    qsd_into(u, &qubits, &mut gates)?;
    Ok(Circuit { n_qubits: m, gates })
}

/// Decomposes `A ⊕ B` selected by qubit 0 without the cosine-sine step.
pub fn qsd_multiplexor(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<Circuit> {
    let m = n_qubits_of(a.nrows())? + 1;
    let qubits: Vec<usize> = (0..m).collect();
    let mut gates = Vec::new();
    multiplexor_into(a, b, &qubits, &mut gates)?;
    Ok(Circuit { n_qubits: m, gates })
}

/// CNOTs of [`qsd`] on `m` qubits: `c(1) = 0`, `c(m) = 4 c(m-1) + 3 * 2^(m-1)`.
pub fn qsd_cnots(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        4 * qsd_cnots(m - 1) + 3 * (1 << (m - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BosonicGateKind {
    /// `exp(-iθ a†a)`
    Rotation,
    /// `exp(-iθ (a + a†))`
    Displacement,
    /// `exp(-iθ σz ⊗ (a + a†))`, control qubit first.
    ControlledDisplacement,
}

impl BosonicGateKind {
    pub const ALL: [BosonicGateKind; 3] = [Self::Rotation, Self::Displacement, Self::ControlledDisplacement];

    pub fn name(self) -> &'static str {
        match self {
            Self::Rotation => "cv_r",
            Self::Displacement => "cv_d",
            Self::ControlledDisplacement => "cv_c_d",
        }
    }
}

impl fmt::Display for BosonicGateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bosonic gate on a mode truncated to `levels` (a power of two), encoded
/// in binary on `log2(levels)` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BosonicGate {
    pub kind: BosonicGateKind,
    pub levels: usize,
    pub theta: f64,
}

impl BosonicGate {
    pub fn new(kind: BosonicGateKind, levels: usize, theta: f64) -> Result<Self> {
        n_qubits_of(levels).map_err(|_| Error::param("levels", format!("{levels} is not a power of two >= 2")))?;
        if !theta.is_finite() {
            return Err(Error::param("theta", "must be finite"));
        }
        Ok(Self { kind, levels, theta })
    }

    /// Qubits of the mode register.
    pub fn mode_qubits(&self) -> usize {
        self.levels.trailing_zeros() as usize
    }

    pub fn n_qubits(&self) -> usize {
        self.mode_qubits() + usize::from(self.kind == BosonicGateKind::ControlledDisplacement)
    }

    fn mode_unitary(&self, theta: f64) -> Result<DMatrix<C64>> {
        let h = match self.kind {
            BosonicGateKind::Rotation => ladder(self.levels, LadderKind::Number)?,
            _ => quadrature(self.levels)?,
        };
        Ok(unitary_from_hermitian(&h.to_dense(), theta))
    }

    /// The gate as a matrix on its qubits (binary Fock index, most
    /// significant bit first).
    pub fn target_unitary(&self) -> Result<DMatrix<C64>> {
        match self.kind {
            BosonicGateKind::ControlledDisplacement => {
                let plus = self.mode_unitary(self.theta)?;
                let minus = self.mode_unitary(-self.theta)?;
                let n = self.levels;
                let mut u = DMatrix::<C64>::zeros(2 * n, 2 * n);
                u.view_mut((0, 0), (n, n)).copy_from(&plus);
                u.view_mut((n, n), (n, n)).copy_from(&minus);
                Ok(u)
            }
            _ => self.mode_unitary(self.theta),
        }
    }

    /// Canonical circuit: full decomposition for the uncontrolled gates, one
    /// demultiplexing step on the σz control for the controlled one.
    pub fn synthesize(&self) -> Result<Circuit> {
        match self.kind {
            BosonicGateKind::ControlledDisplacement => {
                qsd_multiplexor(&self.mode_unitary(self.theta)?, &self.mode_unitary(-self.theta)?)
            }
            _ => qsd(&self.target_unitary()?),
        }
    }
}

/// Gate counts for one bosonic gate instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub kind: BosonicGateKind,
    pub levels: usize,
    pub cnot_count: usize,
    pub one_qubit_count: usize,
    /// Published reference count, when one exists.
    pub reference_cnots: Option<usize>,
}

impl ResourceEstimate {
    pub const CSV_HEADER: &'static str = "kind,n,cnots,one_qubit_gates,reference_cnots";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.kind,
            self.levels,
            self.cnot_count,
            self.one_qubit_count,
            self.reference_cnots.map(|c| c.to_string()).unwrap_or_default()
        )
    }
}

/// Published CNOT count for the controlled displacement at 8 levels.
pub const REFERENCE_CVCD_8: usize = 67;

/// Synthesizes `gate` and counts its gates.
pub fn cnot_count(gate: &BosonicGate) -> Result<ResourceEstimate> {
    let c = gate.synthesize()?;
    Ok(ResourceEstimate {
        kind: gate.kind,
        levels: gate.levels,
        cnot_count: c.cnot_count(),
        one_qubit_count: c.one_qubit_count(),
        reference_cnots: (gate.kind == BosonicGateKind::ControlledDisplacement && gate.levels == 8)
            .then_some(REFERENCE_CVCD_8),
    })
}

/// Counts for every gate kind and each truncation in `levels`.
pub fn resource_table(levels: &[usize], theta: f64) -> Result<Vec<ResourceEstimate>> {
    let mut out = Vec::new();
    for kind in BosonicGateKind::ALL {
        for &n in levels {
            out.push(cnot_count(&BosonicGate::new(kind, n, theta)?)?);
        }
    }
    Ok(out)
}

/// Largest entry of `|a - b|`.
pub fn max_deviation(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).camax()
}
