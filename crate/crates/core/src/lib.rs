//! Spectral diagnostics for single-atom cavity models.
//!
//! The library builds truncated Fock-space Hamiltonians for the Rabi,
//! Jaynes-Cummings, and symmetry-broken Rabi models, diagonalizes them
//! with a dense real-symmetric eigensolver, and extracts two families of
//! observables:
//!
//! * eigenvalue flow over the coupling `g`, with line tracking, parity
//!   labels, and refined level-crossing candidates ([`spectra`]),
//! * per-eigenstate qubit uncertainty products `Δ = Δσ̃ₓ·Δσ̃ᵧ` and their
//!   distribution across the spectrum ([`observables`]).
//!
//! All matrices are real in the chosen product basis (field index outer,
//! atom index inner, `k = 2n + s`), so the whole pipeline works over
//! `f64` without complex arithmetic.

pub mod eigensolve;
mod error;
pub mod hilbert;
pub mod matrix;
pub mod observables;
pub mod spectra;
pub mod symmetry;

pub use eigensolve::{eigh, validate, EigenDecomposition, ValidationReport};
pub use error::Error;
pub use hilbert::{FockTruncation, ModelKind, ModelParams};
pub use matrix::{Matrix, RealSymMatrix};
pub use observables::{AtomicState, Histogram, UncertaintyRecord};
pub use spectra::{Crossing, CrossingKind, CrossingScan, SpectralFlow, TruncationReport};
pub use symmetry::{Parity, ParityLabel};
