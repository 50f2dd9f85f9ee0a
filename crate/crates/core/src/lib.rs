//! Pauli-string algebra, exact conjugation by single-axis rotations and Clifford
//! gates, and exact diagonalization for checking spin-model dualities.

pub mod constructions;
pub mod dense;
pub mod error;
pub mod hamiltonian;
pub mod json;
pub mod lab;
pub mod lanczos;
pub mod lattice;
pub mod models;
pub mod pauli;
pub mod rotation;
pub mod spectra;

pub use error::{Error, Result};
pub use hamiltonian::{Hamiltonian, Term};
pub use pauli::{Pauli, PauliWord};
pub use rotation::{Angle, GateScript, GateStep};
