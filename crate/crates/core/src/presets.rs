//! Pinned configurations used by the reproduction runs and acceptance checks.

use crate::model::HHParams;

/// Half filling on two sites: one up-spin on site 0, one down-spin on site 1.
pub const HALF_FILLING: [usize; 6] = [0, 1, 1, 0, 0, 0];

/// Both electrons of a bound pair on site 0, all modes in vacuum.
pub const PAIR_ON_FIRST_SITE: [usize; 6] = [0, 0, 1, 1, 0, 0];

/// Trotter steps of the fidelity benchmark and heatmap cells.
pub const BENCHMARK_STEPS: usize = 50;

/// Final time of the fidelity benchmark, in units of `1/k`.
pub const BENCHMARK_TIME: f64 = 1.0;

/// Final time of the pair-dynamics runs, in units of `1/k`.
pub const PAIR_TIME: f64 = 50.0;

/// Trotter steps of the pair-dynamics runs.
pub const PAIR_STEPS: usize = 1000;

/// Two-site chain with 8-level modes and `k = 1`.
pub fn two_site(u: f64, g: f64, omega0: f64) -> HHParams {
    HHParams {
        omega0,
        u,
        k: 1.0,
        g,
        rows: 1,
        cols: 2,
        boson_levels: 8,
    }
}

/// Reference point of the fidelity benchmark: `U = 5k`, `g = k`, `omega0 = 2k`.
pub fn benchmark() -> HHParams {
    two_site(5.0, 1.0, 2.0)
}

/// Repulsively bound pair regime, `U = omega0 = 8k`, at coupling `g`.
pub fn bound_pair(g: f64) -> HHParams {
    two_site(8.0, g, 8.0)
}
