//! Hubbard-Holstein Hamiltonians in the fermion-boson basis and in the
//! Jordan-Wigner mapped spin-boson form.
//!
//! Site `s` of an `rows x cols` lattice owns qubits `2s` (spin up, "L") and
//! `2s + 1` (spin down, "R") and bosonic mode `s`. Sites are numbered
//! column by column, `s = c * rows + r`, which is also the Jordan-Wigner
//! order. Bonds between consecutive sites are horizontal; bonds that jump a
//! whole column (`rows` sites apart, `rows > 1`) are vertical and carry
//! `2 rows - 1` intermediate qubits in their string.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    embed_product, embed_single, ladder, pauli, quadrature, sum_ops, HilbertSpace, LadderKind, PauliKind,
    SparseOperator,
};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

pub const SPINS: [Spin; 2] = [Spin::Up, Spin::Down];

/// Qubit (and spinless fermion mode) index of `(site, spin)`.
pub fn qubit_index(site: usize, spin: Spin) -> usize {
    2 * site + spin.offset()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BondKind {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub kind: BondKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    rows: usize,
    cols: usize,
}

impl Lattice {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("lattice", "rows and cols must be at least 1"));
        }
        if rows > cols {
            return Err(Error::param("lattice", format!("rows ({rows}) must not exceed cols ({cols})")));
        }
        Ok(Self { rows, cols })
    }

    pub fn chain(n: usize) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n_sites(&self) -> usize {
        self.rows * self.cols
    }

    pub fn site(&self, r: usize, c: usize) -> usize {
        c * self.rows + r
    }

    /// Open-boundary nearest-neighbour bonds with `a < b`, sorted.
    pub fn bonds(&self) -> Vec<Bond> {
        let mut out = Vec::new();
        for c in 0..self.cols {
            for r in 0..self.rows {
                let s = self.site(r, c);
                if r + 1 < self.rows {
                    out.push(Bond {
                        a: s,
                        b: s + 1,
                        kind: BondKind::Horizontal,
                    });
                }
                if c + 1 < self.cols {
                    let b = self.site(r, c + 1);
                    let kind = if self.rows == 1 {
                        BondKind::Horizontal
                    } else {
                        BondKind::Vertical
                    };
                    out.push(Bond { a: s, b, kind });
                }
            }
        }
        out.sort_by_key(|b| (b.a, b.b));
        out
    }

    pub fn bond(&self, j: usize, l: usize) -> Result<Bond> {
        let (a, b) = if j < l { (j, l) } else { (l, j) };
        self.bonds()
            .into_iter()
            .find(|x| x.a == a && x.b == b)
            .ok_or(Error::NotNeighbours(j, l))
    }
}

/// Hubbard-Holstein parameters, all energies in the same unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HHParams {
    pub omega0: f64,
    pub u: f64,
    pub k: f64,
    pub g: f64,
    pub rows: usize,
    pub cols: usize,
    pub boson_levels: usize,
}

impl HHParams {
    pub fn validate(&self) -> Result<()> {
        Lattice::new(self.rows, self.cols)?;
        if self.boson_levels < 2 {
            return Err(Error::TooFewLevels(self.boson_levels));
        }
        for (name, v) in [("omega0", self.omega0), ("u", self.u), ("k", self.k), ("g", self.g)] {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        if self.omega0 < 0.0 {
            return Err(Error::param("omega0", "must be non-negative"));
        }
        if self.g != 0.0 && self.omega0 == 0.0 {
            return Err(Error::param("omega0", "must be positive when g != 0"));
        }
        Ok(())
    }

    /// Same physics in units of `k` (`k = 1`).
    pub fn normalized(&self) -> Result<Self> {
        if self.k == 0.0 {
            return Err(Error::param("k", "cannot normalise by a zero hopping"));
        }
        Ok(Self {
            omega0: self.omega0 / self.k,
            u: self.u / self.k,
            g: self.g / self.k,
            k: 1.0,
            ..*self
        })
    }

    /// `U - 4 g^2 / omega0` (just `U` when `g = 0`).
    pub fn u_bar(&self) -> f64 {
        if self.g == 0.0 {
            self.u
        } else {
            self.u - 4.0 * self.g * self.g / self.omega0
        }
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.rows, self.cols)
    }

    pub fn n_sites(&self) -> usize {
        self.rows * self.cols
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_sites()
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::new(self.n_qubits(), vec![self.boson_levels; self.n_sites()])
    }
}

/// Term-by-term split of the mapped spin-boson Hamiltonian.
///
/// `total() + energy_offset` has the same spectrum as the fermion-boson
/// Hamiltonian (up to boson truncation).
#[derive(Debug, Clone)]
pub struct TermDecomposition {
    pub h_free: SparseOperator,
    pub h_onsite: SparseOperator,
    pub h_eph: SparseOperator,
    pub h_horizontal: SparseOperator,
    pub h_vertical: SparseOperator,
    pub energy_offset: f64,
}

impl TermDecomposition {
    pub fn total(&self) -> SparseOperator {
        sum_ops(
            self.h_free.dim(),
            [&self.h_free, &self.h_onsite, &self.h_eph, &self.h_horizontal, &self.h_vertical],
        )
    }

    /// On-site part (free + on-site + e-p), i.e. everything but hopping.
    pub fn local(&self) -> SparseOperator {
        sum_ops(self.h_free.dim(), [&self.h_free, &self.h_onsite, &self.h_eph])
    }

    pub fn parts(&self) -> [(&'static str, &SparseOperator); 5] {
        [
            ("free", &self.h_free),
            ("onsite", &self.h_onsite),
            ("eph", &self.h_eph),
            ("horizontal", &self.h_horizontal),
            ("vertical", &self.h_vertical),
        ]
    }
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// `b_p† b_q + b_q† b_p` for spinless modes `p != q` under the
/// Jordan-Wigner map `b_p = prod_{m<p}(-Z_m) σ⁻_p`.
pub fn jw_hop(space: &HilbertSpace, p: usize, q: usize) -> Result<SparseOperator> {
    let (p, q) = if p < q { (p, q) } else { (q, p) };
    if p == q || q >= space.n_qubits() {
        return Err(Error::param("modes", format!("need two distinct qubits, got {p} and {q}")));
    }
    let minus_z = pauli(PauliKind::Z).scale_real(-1.0);
    let plus = pauli(PauliKind::Plus);
    let minus = pauli(PauliKind::Minus);
    let mut factors: Vec<(usize, &SparseOperator)> = vec![(p, &plus)];
    factors.extend((p + 1..q).map(|m| (m, &minus_z)));
    factors.push((q, &minus));
    let fwd = embed_product(space, &factors)?;
    Ok(&fwd + &fwd.adjoint())
}

/// Hopping string for one spin species across the bond `(j, l)`.
pub fn jw_string_term(
    lattice: &Lattice,
    sites: (usize, usize),
    spin: Spin,
    space: &HilbertSpace,
) -> Result<SparseOperator> {
    let bond = lattice.bond(sites.0, sites.1)?;
    jw_hop(space, qubit_index(bond.a, spin), qubit_index(bond.b, spin))
}

/// Total fermion number `sum_q (1 + Z_q) / 2` in the qubit encoding.
pub fn fermion_number(space: &HilbertSpace) -> Result<SparseOperator> {
    let n = SparseOperator::diagonal(&[re(1.0), re(0.0)]);
    let ops = (0..space.n_qubits())
        .map(|q| embed_single(space, q, &n))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum_ops(space.dim(), &ops))
}

pub fn build_spin_boson(params: &HHParams) -> Result<TermDecomposition> {
    params.validate()?;
    let lattice = params.lattice()?;
    let space = params.space()?;
    let n = params.boson_levels;
    let z = pauli(PauliKind::Z);
    let num = ladder(n, LadderKind::Number)?;
    let quad = quadrature(n)?;
    let u_bar = params.u_bar();

    let mut free = Vec::new();
    let mut onsite = Vec::new();
    let mut eph = Vec::new();
    for s in 0..lattice.n_sites() {
        let m = space.mode_subsystem(s);
        let (ql, qr) = (qubit_index(s, Spin::Up), qubit_index(s, Spin::Down));
        let zsum = &embed_single(&space, ql, &z)? + &embed_single(&space, qr, &z)?;
        free.push(&embed_single(&space, m, &num)?.scale_real(params.omega0) + &zsum.scale_real(u_bar / 4.0));
        onsite.push(embed_product(&space, &[(ql, &z), (qr, &z)])?.scale_real(params.u / 4.0));
        eph.push((&zsum * &embed_single(&space, m, &quad)?).scale_real(params.g / 2.0));
    }

    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    for bond in lattice.bonds() {
        for spin in SPINS {
            let t = jw_hop(&space, qubit_index(bond.a, spin), qubit_index(bond.b, spin))?.scale_real(-params.k);
            match bond.kind {
                BondKind::Horizontal => horizontal.push(t),
                BondKind::Vertical => vertical.push(t),
            }
        }
    }

    let dim = space.dim();
    let g2 = if params.g == 0.0 {
        0.0
    } else {
        params.g * params.g / params.omega0
    };
    Ok(TermDecomposition {
        h_free: sum_ops(dim, &free),
        h_onsite: sum_ops(dim, &onsite),
        h_eph: sum_ops(dim, &eph),
        h_horizontal: sum_ops(dim, &horizontal),
        h_vertical: sum_ops(dim, &vertical),
        energy_offset: lattice.n_sites() as f64 * (params.u / 4.0 - g2),
    })
}

/// Fermion annihilator for mode `p` in the occupation basis where digit 1
/// means occupied, with the sign `(-1)^(occupied modes before p)`.
fn occupation_annihilator(space: &HilbertSpace, p: usize) -> SparseOperator {
    let stride = space.strides()[p];
    let entries = (0..space.dim()).filter_map(|i| {
        if space.digit(i, p) != 1 {
            return None;
        }
        let before: usize = (0..p).map(|m| space.digit(i, m)).sum();
        let sign = if before.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((i - stride, i, re(sign)))
    });
    SparseOperator::from_triplets(space.dim(), entries.collect::<Vec<_>>())
}

/// Hamiltonian in the fermion occupation basis (qubit digit 1 = occupied)
/// tensored with truncated bosons. No displacement is applied.
pub fn build_fermion_boson(params: &HHParams) -> Result<SparseOperator> {
    params.validate()?;
    let lattice = params.lattice()?;
    let space = params.space()?;
    let n = params.boson_levels;
    let c: Vec<SparseOperator> = (0..space.n_qubits()).map(|p| occupation_annihilator(&space, p)).collect();
    let cd: Vec<SparseOperator> = c.iter().map(|x| x.adjoint()).collect();
    let occ: Vec<SparseOperator> = c.iter().zip(&cd).map(|(a, ad)| ad * a).collect();

    let mut terms = Vec::new();
    let num = ladder(n, LadderKind::Number)?;
    let quad = quadrature(n)?;
    for s in 0..lattice.n_sites() {
        let m = space.mode_subsystem(s);
        let (up, dn) = (qubit_index(s, Spin::Up), qubit_index(s, Spin::Down));
        terms.push(embed_single(&space, m, &num)?.scale_real(params.omega0));
        terms.push((&occ[up] * &occ[dn]).scale_real(params.u));
        terms.push((&(&occ[up] + &occ[dn]) * &embed_single(&space, m, &quad)?).scale_real(params.g));
    }
    for bond in lattice.bonds() {
        for spin in SPINS {
            let (p, q) = (qubit_index(bond.a, spin), qubit_index(bond.b, spin));
            terms.push((&(&cd[p] * &c[q]) + &(&cd[q] * &c[p])).scale_real(-params.k));
        }
    }
    Ok(sum_ops(space.dim(), &terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_bonds_are_horizontal() {
        let l = Lattice::chain(3).unwrap();
        let b = l.bonds();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.kind == BondKind::Horizontal && x.b == x.a + 1));
    }

    #[test]
    fn ladder_bond_kinds() {
        let l = Lattice::new(2, 3).unwrap();
        let b = l.bonds();
        let h = b.iter().filter(|x| x.kind == BondKind::Horizontal).count();
        let v: Vec<_> = b.iter().filter(|x| x.kind == BondKind::Vertical).collect();
        assert_eq!(h, 3);
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|x| x.b - x.a == 2));
        assert_eq!(l.bond(2, 0).unwrap().kind, BondKind::Vertical);
        assert_eq!(l.bond(1, 2), Err(Error::NotNeighbours(1, 2)));
    }

    #[test]
    fn lattice_rejects_bad_shapes() {
        assert!(Lattice::new(0, 2).is_err());
        assert!(Lattice::new(3, 2).is_err());
    }

    #[test]
    fn u_bar_follows_parameters() {
        let mut p = HHParams {
            omega0: 2.0,
            u: 4.0,
            k: 1.0,
            g: 1.0,
            rows: 1,
            cols: 2,
            boson_levels: 2,
        };
        assert_eq!(p.u_bar(), 2.0);
        p.g = 0.0;
        assert_eq!(p.u_bar(), 4.0);
        p.g = 1.0;
        p.omega0 = 0.0;
        assert!(build_spin_boson(&p).is_err());
    }

    #[test]
    fn normalisation_divides_by_k() {
        let p = HHParams {
            omega0: 1.0,
            u: 4.0,
            k: 2.0,
            g: 0.5,
            rows: 1,
            cols: 2,
            boson_levels: 2,
        };
        let n = p.normalized().unwrap();
        assert_eq!((n.omega0, n.u, n.k, n.g), (0.5, 2.0, 1.0, 0.25));
    }
}
