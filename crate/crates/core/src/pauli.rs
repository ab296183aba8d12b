//! Phase-tracked Pauli strings on up to 64 qubits and the Majorana
//! operators of the Jordan-Wigner chain.
//!
//! Letters follow the crate convention (`Z|0> = |0>`). Qubit 0 is the
//! first qubit of the register.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{embed_product, pauli, HilbertSpace, PauliKind, SparseOperator};
use crate::C64;

pub const MAX_QUBITS: usize = 64;

/// `i^phase * prod_q P_q`, with `P_q` given by the bits `(x_q, z_q)`:
/// `(1,0) = X`, `(1,1) = Y`, `(0,1) = Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: u64,
    z: u64,
    phase: u8,
}

fn letter(x: bool, z: bool) -> char {
    match (x, z) {
        (false, false) => 'I',
        (true, false) => 'X',
        (true, true) => 'Y',
        (false, true) => 'Z',
    }
}

/// Power of `i` picked up by the single-qubit product `a * b`.
fn letter_phase(a: (bool, bool), b: (bool, bool)) -> u8 {
    match (letter(a.0, a.1), letter(b.0, b.1)) {
        ('X', 'Y') | ('Y', 'Z') | ('Z', 'X') => 1,
        ('Y', 'X') | ('Z', 'Y') | ('X', 'Z') => 3,
        _ => 0,
    }
}

impl PauliString {
    pub fn identity() -> Self {
        Self { x: 0, z: 0, phase: 0 }
    }

    pub fn single(q: usize, which: PauliKind) -> Result<Self> {
        if q >= MAX_QUBITS {
            return Err(Error::param("qubit", format!("index {q} exceeds {MAX_QUBITS}")));
        }
        let bit = 1u64 << q;
        let (x, z) = match which {
            PauliKind::I => (0, 0),
            PauliKind::X => (bit, 0),
            PauliKind::Y => (bit, bit),
            PauliKind::Z => (0, bit),
            PauliKind::Plus | PauliKind::Minus => {
                return Err(Error::param("which", "raising/lowering operators are not Pauli strings"))
            }
        };
        Ok(Self { x, z, phase: 0 })
    }

    /// Parses letters such as `"XZZY"` acting on qubits `start..`.
    pub fn from_letters(start: usize, letters: &str) -> Result<Self> {
        let mut out = Self::identity();
        for (k, ch) in letters.chars().enumerate() {
            let which = match ch {
                'I' => PauliKind::I,
                'X' => PauliKind::X,
                'Y' => PauliKind::Y,
                'Z' => PauliKind::Z,
                _ => return Err(Error::param("letters", format!("unknown Pauli letter {ch:?}"))),
            };
            out = out.mul(&Self::single(start + k, which)?);
        }
        Ok(out)
    }

    /// Majorana operator `γ_{2q} = Z_{<q} X_q`, `γ_{2q+1} = Z_{<q} Y_q`.
    pub fn majorana(index: usize) -> Result<Self> {
        let q = index / 2;
        if q >= MAX_QUBITS {
            return Err(Error::param("majorana", format!("index {index} out of range")));
        }
        let below = (1u64 << q) - 1;
        let bit = 1u64 << q;
        Ok(if index.is_multiple_of(2) {
            Self { x: bit, z: below, phase: 0 }
        } else {
            Self {
                x: bit,
                z: below | bit,
                phase: 0,
            }
        })
    }

    /// Hermitian bilinear `i γ_a γ_b` (`a != b`).
    pub fn majorana_bilinear(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::param("majorana", "bilinear needs two distinct indices"));
        }
        Ok(Self::majorana(a)?.mul(&Self::majorana(b)?).times_i(1))
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Overall scalar `i^phase`.
    pub fn scalar(&self) -> C64 {
        [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][self.phase as usize]
    }

    /// Real sign when the scalar is `±1`.
    pub fn sign(&self) -> Option<f64> {
        match self.phase {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    pub fn times_i(&self, k: u8) -> Self {
        Self {
            phase: (self.phase + k) % 4,
            ..*self
        }
    }

    pub fn negate(&self) -> Self {
        self.times_i(2)
    }

    /// Same letters with scalar `+1`.
    pub fn unsigned(&self) -> Self {
        Self { phase: 0, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut phase = self.phase + other.phase;
        let overlap = (self.x | self.z) & (other.x | other.z);
        let mut bits = overlap;
        while bits != 0 {
            let q = bits.trailing_zeros();
            let a = ((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1);
            let b = ((other.x >> q) & 1 == 1, (other.z >> q) & 1 == 1);
            phase += letter_phase(a, b);
            bits &= bits - 1;
        }
        Self {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: phase % 4,
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `e^{-iθP} self e^{iθP}` for Hermitian `p` at `θ = ±π/4`.
    ///
    /// Anticommuting strings map to `∓ i P self`.
    pub fn conjugate_quarter(&self, p: &Self, positive: bool) -> Self {
        if self.commutes_with(p) {
            *self
        } else {
            p.mul(self).times_i(if positive { 3 } else { 1 })
        }
    }

    /// Qubits on which the string acts non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut bits = self.x | self.z;
        while bits != 0 {
            out.push(bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
        out
    }

    pub fn letter_at(&self, q: usize) -> char {
        letter((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn kind_at(&self, q: usize) -> PauliKind {
        match self.letter_at(q) {
            'X' => PauliKind::X,
            'Y' => PauliKind::Y,
            'Z' => PauliKind::Z,
            _ => PauliKind::I,
        }
    }

    /// Letters restricted to `qubits`, e.g. `"XY"`.
    pub fn letters_on(&self, qubits: &[usize]) -> String {
        qubits.iter().map(|&q| self.letter_at(q)).collect()
    }

    /// Full-register sparse operator.
    pub fn to_operator(&self, space: &HilbertSpace) -> Result<SparseOperator> {
        let sup = self.support();
        if let Some(&q) = sup.last() {
            if q >= space.n_qubits() {
                return Err(Error::SubsystemOutOfRange {
                    index: q,
                    count: space.n_qubits(),
                });
            }
        }
        let mats: Vec<SparseOperator> = sup.iter().map(|&q| pauli(self.kind_at(q))).collect();
        let factors: Vec<(usize, &SparseOperator)> = sup.iter().copied().zip(mats.iter()).collect();
        Ok(embed_product(space, &factors)?.scale(self.scalar()))
    }

    /// Dense matrix on the listed qubits (first is most significant),
    /// ignoring the string's action elsewhere.
    pub fn local_matrix(&self, qubits: &[usize]) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(1, 1, self.scalar());
        for &q in qubits {
            m = m.kronecker(&pauli(self.kind_at(q)).to_dense());
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{s}")?;
        let sup = self.support();
        if sup.is_empty() {
            return write!(f, "I");
        }
        for q in sup {
            write!(f, "{}{}", self.letter_at(q), q)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(start: usize, s: &str) -> PauliString {
        PauliString::from_letters(start, s).unwrap()
    }

    #[test]
    fn single_qubit_products() {
        assert_eq!(p(0, "X").mul(&p(0, "Y")), p(0, "Z").times_i(1));
        assert_eq!(p(0, "Y").mul(&p(0, "X")), p(0, "Z").times_i(3));
        assert_eq!(p(0, "Z").mul(&p(0, "Z")), PauliString::identity());
    }

    #[test]
    fn majoranas_anticommute_and_square_to_one() {
        for a in 0..8 {
            let ga = PauliString::majorana(a).unwrap();
            assert_eq!(ga.mul(&ga), PauliString::identity());
            for b in 0..8 {
                if a != b {
                    assert!(!ga.commutes_with(&PauliString::majorana(b).unwrap()));
                }
            }
        }
    }

    #[test]
    fn hopping_strings_as_bilinears() {
        // X_a Z.. Z X_b = -i γ_{2a+1} γ_{2b}; Y_a Z.. Z Y_b = i γ_{2a} γ_{2b+1}
        let xs = PauliString::majorana_bilinear(1, 6).unwrap();
        assert_eq!(xs, p(0, "XZZX").negate());
        let ys = PauliString::majorana_bilinear(0, 7).unwrap();
        assert_eq!(ys, p(0, "YZZY"));
    }

    #[test]
    fn operator_matches_matrices() {
        let sp = HilbertSpace::qubits(2);
        let s = p(0, "XY").times_i(2);
        let m = s.to_operator(&sp).unwrap().to_dense();
        let expect = pauli(PauliKind::X).kron(&pauli(PauliKind::Y)).to_dense() * C64::new(-1.0, 0.0);
        assert_eq!(m, expect);
        assert_eq!(s.local_matrix(&[0, 1]), expect);
    }

    #[test]
    fn quarter_conjugation_matches_dense() {
        use crate::tensor::unitary_from_hermitian;
        let sp = HilbertSpace::qubits(3);
        let t = p(0, "XZX");
        let rot = p(1, "XX");
        let u = unitary_from_hermitian(&rot.to_operator(&sp).unwrap().to_dense(), std::f64::consts::FRAC_PI_4);
        let lhs = &u * t.to_operator(&sp).unwrap().to_dense() * u.adjoint();
        let rhs = t.conjugate_quarter(&rot, true).to_operator(&sp).unwrap().to_dense();
        assert!((lhs - rhs).camax() < 1e-14);
        assert_eq!(t.conjugate_quarter(&rot, true), p(0, "XY").negate());
    }
}
