//! Z2 parity: the operator, per-eigenstate labels, and sector spectra.
//!
//! The parity operator flips the atom and counts field quanta modulo 2;
//! it commutes with the Rabi Hamiltonian and is broken by the `ε σ_x`
//! term. Projecting onto its two eigenspaces splits the parity-symmetric
//! problem into independent blocks of half the dimension, which serves
//! as an internal cross-check of the full diagonalization and classifies
//! level crossings.

use crate::eigensolve::eigh;
use crate::hilbert::{build_hamiltonian, FockTruncation, ModelKind, ModelParams};
use crate::matrix::{Matrix, RealSymMatrix};
use crate::Error;

/// Threshold on `|<P>|` above which a state gets a definite label.
pub const LABEL_THRESHOLD: f64 = 1.0 - 1e-6;

/// Definite parity sector, or none when the expectation is indefinite
/// (mixed states near degeneracies, broken-symmetry models).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    /// Signed representation used in file outputs: +1 / -1 / 0.
    pub fn to_sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
            Parity::None => 0,
        }
    }
}

/// Parity classification of one eigenstate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityLabel {
    pub value: Parity,
    /// Raw expectation `v^T P v`, in `[-1, 1]`.
    pub expectation: f64,
}

/// The diagonal parity operator: entry at `k = 2n + s` is
/// `(-1)^n * (+1 if s = 1 else -1)`; `P^2 = I` exactly.
pub fn parity_operator(trunc: FockTruncation) -> RealSymMatrix {
    let entries: Vec<f64> = (0..trunc.dim())
        .map(|k| {
            let n = k / 2;
            let s = k % 2;
            let field = if n % 2 == 0 { 1.0 } else { -1.0 };
            let atom = if s == 1 { 1.0 } else { -1.0 };
            field * atom
        })
        .collect();
    RealSymMatrix::new(Matrix::diagonal(&entries)).expect("diagonal is symmetric")
}

/// Label a unit eigenvector by its parity expectation.
pub fn parity_label(v: &[f64], p: &RealSymMatrix) -> Result<ParityLabel, Error> {
    if v.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            actual: v.len(),
        });
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    let expectation = p.quadratic_form(v);
    let value = if expectation > LABEL_THRESHOLD {
        Parity::Even
    } else if expectation < -LABEL_THRESHOLD {
        Parity::Odd
    } else {
        Parity::None
    };
    Ok(ParityLabel { value, expectation })
}

/// Diagonalize the two parity blocks of a parity-symmetric Hamiltonian.
///
/// Returns the even-sector and odd-sector eigenvalues, each ascending
/// and of length `n_cut`. Refuses models that do not commute with `P`.
pub fn sector_spectra(
    p: &ModelParams,
    trunc: FockTruncation,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    match p.model {
        ModelKind::Rabi | ModelKind::AsymRabi => {
            if p.epsilon != 0.0 {
                return Err(Error::ParityBroken(p.epsilon));
            }
        }
        ModelKind::Jc => return Err(Error::SectorsUnsupported(p.model.name())),
    }

    let h = build_hamiltonian(p, trunc)?;
    let parity = parity_operator(trunc);

    let mut even_idx = Vec::with_capacity(trunc.n_cut());
    let mut odd_idx = Vec::with_capacity(trunc.n_cut());
    for k in 0..trunc.dim() {
        if parity[(k, k)] > 0.0 {
            even_idx.push(k);
        } else {
            odd_idx.push(k);
        }
    }

    let even = eigh(&h.select(&even_idx))?.values;
    let odd = eigh(&h.select(&odd_idx))?.values;
    Ok((even, odd))
}
