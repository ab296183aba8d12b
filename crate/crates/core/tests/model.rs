use daqc_core::model::{
    build_fermion_boson, build_spin_boson, fermion_number, jw_hop, jw_string_term, HHParams, Lattice, Spin,
};
use daqc_core::tensor::{spectrum, HilbertSpace, SparseOperator};
use daqc_core::C64;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn params(u: f64, k: f64, g: f64, omega0: f64, rows: usize, cols: usize, n: usize) -> HHParams {
    HHParams {
        omega0,
        u,
        k,
        g,
        rows,
        cols,
        boson_levels: n,
    }
}

fn dense_kron(ops: &[DMatrix<C64>]) -> DMatrix<C64> {
    ops.iter().skip(1).fold(ops[0].clone(), |acc, m| acc.kronecker(m))
}

fn mat(rows: [[f64; 2]; 2]) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |r, c| C64::new(rows[r][c], 0.0))
}

/// Eigenvalues of `h` restricted to basis states selected by `keep`.
fn restricted_eigs(h: &SparseOperator, keep: impl Fn(usize) -> bool) -> Vec<f64> {
    let idx: Vec<usize> = (0..h.dim()).filter(|&i| keep(i)).collect();
    let mut e: Vec<f64> = h.restrict(&idx).to_dense().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn single_site_hubbard_levels() {
    let p = params(1.0, 0.3, 0.0, 1.0, 1, 1, 2);
    let h = build_fermion_boson(&p).unwrap();
    let sp = p.space().unwrap();
    for i in 0..sp.dim() {
        let d = sp.digits(i);
        if d[2] != 0 {
            continue;
        }
        let expect = if d[0] == 1 && d[1] == 1 { 1.0 } else { 0.0 };
        assert_eq!(h.get(i, i).re, expect);
    }
}

#[test]
fn two_site_hubbard_matches_textbook_matrix() {
    let (u, k) = (3.0, 1.0);
    let p = params(u, k, 0.0, 2.0, 1, 2, 2);
    let h = build_fermion_boson(&p).unwrap();
    let sp = p.space().unwrap();
    // one up and one down fermion, bosonic vacuum
    let got = restricted_eigs(&h, |i| {
        let d = sp.digits(i);
        d[4] == 0 && d[5] == 0 && d[0] + d[2] == 1 && d[1] + d[3] == 1
    });
    // textbook basis |↑↓,0>, |0,↑↓>, |↑,↓>, |↓,↑>
    let m = DMatrix::from_row_slice(4, 4, &[u, 0.0, -k, -k, 0.0, u, -k, -k, -k, -k, 0.0, 0.0, -k, -k, 0.0, 0.0]);
    let mut expect: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    expect.sort_by(f64::total_cmp);
    let r = (u * u + 16.0 * k * k).sqrt();
    let mut closed = vec![0.0, u, (u + r) / 2.0, (u - r) / 2.0];
    closed.sort_by(f64::total_cmp);
    for ((a, b), c) in got.iter().zip(&expect).zip(&closed) {
        assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-12, "{got:?} {expect:?}");
    }
}

#[test]
fn decoupled_sites_are_displaced_oscillators() {
    let (g, w) = (0.5, 1.0);
    let p = params(0.0, 0.0, g, w, 1, 2, 24);
    let h = build_fermion_boson(&p).unwrap();
    let sp = p.space().unwrap();
    for (n1, n2) in [(0usize, 0usize), (1, 0), (1, 1), (2, 1), (2, 2)] {
        let occ = |d: &[usize]| (d[0] + d[1], d[2] + d[3]);
        let got = restricted_eigs(&h, |i| {
            let d = sp.digits(i);
            occ(&d) == (n1, n2) && d[0] >= d[1] && d[2] >= d[3] && (n1 != 1 || d[0] == 1) && (n2 != 1 || d[2] == 1)
        });
        let shift = (n1 * n1 + n2 * n2) as f64 * g * g / w;
        let mut expect: Vec<f64> = (0..4)
            .flat_map(|m1| (0..4).map(move |m2| w * (m1 + m2) as f64))
            .map(|e| e - shift)
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&expect).take(6) {
            assert!((a - b).abs() < 1e-8, "({n1},{n2}): {a} vs {b}");
        }
    }
}

#[test]
fn mapped_spectrum_converges_to_fermion_boson_spectrum() {
    let mut errors = Vec::new();
    for n in [8, 12, 16] {
        let p = params(2.0, 1.0, 2.0, 4.0, 1, 2, n);
        let fb = spectrum(&build_fermion_boson(&p).unwrap()).unwrap();
        let terms = build_spin_boson(&p).unwrap();
        let sb: Vec<f64> = spectrum(&terms.total())
            .unwrap()
            .iter()
            .map(|e| e + terms.energy_offset)
            .collect();
        let err = fb.iter().zip(&sb).take(24).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        errors.push(err);
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 1e-8, "{errors:?}");
}

#[test]
fn limits_switch_off_parts() {
    let p = params(3.0, 1.0, 0.0, 1.0, 1, 2, 3);
    let t = build_spin_boson(&p).unwrap();
    assert!(t.h_eph.is_zero());
    assert!(t.h_vertical.is_zero());
    assert_eq!(p.u_bar(), p.u);
    let p = params(0.0, 1.0, 0.7, 1.0, 1, 2, 3);
    assert!(build_spin_boson(&p).unwrap().h_onsite.is_zero());
}

#[test]
fn horizontal_string_is_xzx_plus_yzy() {
    let lat = Lattice::chain(2).unwrap();
    let sp = HilbertSpace::qubits(4);
    let op = jw_string_term(&lat, (0, 1), Spin::Up, &sp).unwrap();
    let (i, x, z) = (mat([[1.0, 0.0], [0.0, 1.0]]), mat([[0.0, 1.0], [1.0, 0.0]]), mat([[1.0, 0.0], [0.0, -1.0]]));
    let y = DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
    let expect = (dense_kron(&[x.clone(), z.clone(), x, i.clone()]) + dense_kron(&[y.clone(), z, y, i]))
        * C64::new(-0.5, 0.0);
    assert!((op.to_dense() - expect).camax() < 1e-15);
}

#[test]
fn adjacent_modes_have_no_string() {
    let sp = HilbertSpace::qubits(2);
    let op = jw_hop(&sp, 0, 1).unwrap();
    // σ⁺σ⁻ + σ⁻σ⁺ swaps |01> and |10>
    let expect = SparseOperator::from_real_dense(&[
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
    ]);
    assert_eq!(op, expect);
}

/// Brute-force Jordan-Wigner annihilator on 8 qubits.
fn brute_b(p: usize, n: usize) -> DMatrix<C64> {
    let i = mat([[1.0, 0.0], [0.0, 1.0]]);
    let mz = mat([[-1.0, 0.0], [0.0, 1.0]]);
    let lower = mat([[0.0, 0.0], [1.0, 0.0]]);
    let ops: Vec<DMatrix<C64>> = (0..n)
        .map(|m| match m.cmp(&p) {
            std::cmp::Ordering::Less => mz.clone(),
            std::cmp::Ordering::Equal => lower.clone(),
            std::cmp::Ordering::Greater => i.clone(),
        })
        .collect();
    dense_kron(&ops)
}

#[test]
fn vertical_string_matches_brute_force_jordan_wigner() {
    let lat = Lattice::new(2, 2).unwrap();
    let sp = HilbertSpace::qubits(8);
    let b: Vec<DMatrix<C64>> = (0..8).map(|p| brute_b(p, 8)).collect();
    // canonical anticommutation of the oracle itself
    let anti = &b[0] * b[4].adjoint() + b[4].adjoint() * &b[0];
    assert!(anti.camax() < 1e-15);
    for (spin, (p, q)) in [(Spin::Up, (0, 4)), (Spin::Down, (1, 5))] {
        let op = jw_string_term(&lat, (0, 2), spin, &sp).unwrap();
        let expect = b[p].adjoint() * &b[q] + b[q].adjoint() * &b[p];
        assert!((op.to_dense() - expect).camax() < 1e-15);
    }
    assert!(jw_string_term(&lat, (0, 3), Spin::Up, &sp).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn parts_are_hermitian_number_conserving_and_sum_to_total(
        u in -4.0f64..8.0, g in 0.0f64..2.0, w in 0.5f64..4.0, k in 0.1f64..2.0,
        shape in prop::sample::select(vec![(1usize, 2usize), (1, 3), (2, 2)]),
    ) {
        let p = params(u, k, g, w, shape.0, shape.1, 2);
        let t = build_spin_boson(&p).unwrap();
        let n = fermion_number(&p.space().unwrap()).unwrap();
        let mut sum = SparseOperator::zeros(t.h_free.dim());
        for (_, part) in t.parts() {
            prop_assert!(part.is_hermitian(1e-12));
            prop_assert!(part.commutator(&n).unwrap().is_zero());
            sum = &sum + part;
        }
        prop_assert!(sum.max_abs_diff(&t.total()) < 1e-12);
        prop_assert_eq!(t.h_vertical.is_zero(), shape.0 == 1);
    }
}
