//! Hybrid qubit/boson tensor-product spaces, sparse operators and states.

mod expm;
mod local;
mod operator;
mod space;
mod state;

pub use expm::{expm_apply, spectrum, unitary_from_hermitian, Propagator, DENSE_BLOCK_LIMIT};
pub use local::{embed_product, embed_single, ladder, mode_op, pauli, quadrature, qubit_op, LadderKind, PauliKind};
pub use operator::{sum_ops, SparseOperator, DEFAULT_DROP_TOL};
pub use space::HilbertSpace;
pub use state::{DensityMatrix, StateVector};
pub(crate) use state::check_dim;
