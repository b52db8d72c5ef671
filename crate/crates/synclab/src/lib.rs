//! synclab — a numerical laboratory for synchronization subspaces.
//!
//! Two finite-dimensional subsystems carry clock observables `T_A` and
//! `T_B`. The synchronization operator `K = T_A (x) I - I (x) T_B` has a
//! kernel consisting of the states on which both clocks agree. This crate
//! builds `K` and its kernel data, evolves states under epsilon-compatible
//! Hamiltonians (`|[H,K]| <= eps`), checks the linear drift bound
//! `|K psi(t)| <= eps |t|` and the spectral-gap fidelity bound numerically,
//! and classifies synchronization-preserving dynamics for finite symmetry
//! groups via isotypic projectors and commutant algebras.

pub mod dynamics;
pub mod error;
pub mod grouprep;
pub mod linalg;
pub mod random;
pub mod sync;

pub use error::{Error, Result};
pub use linalg::{C64, ComplexDense, StateVector, Tolerance};
