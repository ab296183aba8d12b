//! Flux-phase settings of the building-block couplers.
//!
//! A qubit-qubit coupler driven with phases `(φ⁺, φ⁻)` generates
//! `C⁺ XX − S⁺ XY + S⁻ YX + C⁻ YY` (times a positive amplitude), where
//! `C± = cos φ⁺ ± cos φ⁻` and `S± = sin φ⁺ ± sin φ⁻`. The first letter acts on
//! the lower-index qubit of the pair.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::tensor::{pauli, PauliKind};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    /// Qubit-qubit phases `(φ⁺, φ⁻)`.
    pub qq: (f64, f64),
    /// Qubit-resonator phases, when the resonator coupling is on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qr: Option<(f64, f64)>,
}

/// Phase table for signed single-term couplings.
const TABLE: [(&str, f64, (f64, f64)); 8] = [
    ("XX", 1.0, (0.0, 0.0)),
    ("XX", -1.0, (PI, PI)),
    ("YY", 1.0, (0.0, PI)),
    ("YY", -1.0, (PI, 0.0)),
    ("XY", 1.0, (-FRAC_PI_2, -FRAC_PI_2)),
    ("XY", -1.0, (FRAC_PI_2, FRAC_PI_2)),
    ("YX", 1.0, (FRAC_PI_2, -FRAC_PI_2)),
    ("YX", -1.0, (-FRAC_PI_2, FRAC_PI_2)),
];

/// Preset realising `sign * letters` on one coupler, if the content is a
/// single XX, XY, YX or YY term.
pub fn coupler_preset(letters: &str, sign: f64) -> Option<Preset> {
    TABLE
        .iter()
        .find(|(l, s, _)| *l == letters && *s == sign.signum())
        .map(|(l, s, qq)| Preset {
            name: format!("{}{}", if *s > 0.0 { "+" } else { "-" }, l),
            qq: *qq,
            qr: None,
        })
}

/// On-site analog block: qubit-qubit XX plus qubit-resonator
/// `σ^x (a + a†)`.
pub fn star_preset() -> Preset {
    Preset {
        name: "STAR".into(),
        qq: (0.0, 0.0),
        qr: Some((FRAC_PI_2, FRAC_PI_2)),
    }
}

/// Normalised coupler generator for the given phases (4x4, first qubit
/// most significant), without the amplitude prefactor.
pub fn coupler_generator(phases: (f64, f64)) -> DMatrix<C64> {
    let (p, m) = phases;
    let cp = p.cos() + m.cos();
    let cm = p.cos() - m.cos();
    let sp = p.sin() + m.sin();
    let sm = p.sin() - m.sin();
    let x = pauli(PauliKind::X);
    let y = pauli(PauliKind::Y);
    let term = |a: &crate::tensor::SparseOperator, b: &crate::tensor::SparseOperator, c: f64| {
        a.kron(b).to_dense() * C64::new(c, 0.0)
    };
    term(&x, &x, cp) + term(&x, &y, -sp) + term(&y, &x, sm) + term(&y, &y, cm)
}

/// Qubit-resonator generator `C⁺ σx i(a† − a) − C⁻ σy (a† + a) + S⁺ σx (a† + a)
/// − S⁻ σy i(a† − a)` on one qubit and `n` levels; the `(a† − a)` quadrature
/// is taken with a factor `i` so every term is Hermitian.
pub fn resonator_generator(phases: (f64, f64), n: usize) -> DMatrix<C64> {
    use crate::tensor::{ladder, LadderKind};
    let (p, m) = phases;
    let cp = p.cos() + m.cos();
    let cm = p.cos() - m.cos();
    let sp = p.sin() + m.sin();
    let sm = p.sin() - m.sin();
    let a = ladder(n, LadderKind::Annihilate).expect("n >= 2").to_dense();
    let ad = a.adjoint();
    let q = &ad + &a;
    let pmom = (&ad - &a) * C64::new(0.0, 1.0);
    let x = pauli(PauliKind::X).to_dense();
    let y = pauli(PauliKind::Y).to_dense();
    let c = |v: f64| C64::new(v, 0.0);
    x.kronecker(&pmom) * c(cp) - y.kronecker(&q) * c(cm) + x.kronecker(&q) * c(sp) - y.kronecker(&pmom) * c(sm)
}
