//! Digital-analog simulation of the Hubbard-Holstein model on hybrid
//! qubit/boson hardware.

mod error;
pub mod channels;
pub mod digital;
pub mod evolve;
pub mod model;
pub mod observables;
pub mod pauli;
pub mod presets;
pub mod schedule;
pub mod synthesis;
pub mod tensor;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
