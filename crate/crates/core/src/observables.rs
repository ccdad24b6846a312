//! Atomic reduced states and the qubit uncertainty product.
//!
//! For the rescaled operators `σ̃ = σ/√2` the identity `σ̃² = I/2` holds,
//! so each single-operator uncertainty is `Δσ̃ = sqrt((1 - <σ>²)/2)` and
//! the product `Δ = Δσ̃ₓ·Δσ̃ᵧ` lies in `[0, 1/2]` with the Robertson
//! floor `Δ >= |<σ_z>|/2`. The `σ̃²` expectation is used analytically
//! (exact operator identity) instead of numerically, which keeps `Δ`
//! clean near the `1/2` ceiling.
//!
//! Joint eigenvectors are real in the fixed basis, so the reduced
//! density matrix is real symmetric and `<σ_y>` vanishes identically;
//! it is returned as an exact zero rather than computed.

use crate::hilbert::{FockTruncation, ModelParams};
use crate::spectra::{sweep, SpectralFlow};
use crate::Error;

/// 2x2 real symmetric atomic density matrix in the `(|g>, |e>)` basis.
///
/// Built from real joint eigenvectors, so the would-be imaginary part
/// of the off-diagonal is identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicState {
    rho: [[f64; 2]; 2],
}

impl AtomicState {
    /// Wrap a density matrix, enforcing trace one, symmetry, and
    /// positivity (up to rounding).
    pub fn new(rho: [[f64; 2]; 2]) -> Result<Self, Error> {
        let trace = rho[0][0] + rho[1][1];
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(trace));
        }
        let defect = (rho[0][1] - rho[1][0]).abs();
        if defect > 1e-12 {
            return Err(Error::NotSymmetric {
                i: 0,
                j: 1,
                defect,
            });
        }
        // Eigenvalues of [[a, c], [c, b]]: (a+b)/2 +- sqrt(((a-b)/2)^2 + c^2).
        let mean = 0.5 * trace;
        let radius = (0.25 * (rho[0][0] - rho[1][1]).powi(2) + rho[0][1] * rho[1][0]).sqrt();
        if mean - radius < -1e-12 {
            return Err(Error::NotNormalized(mean - radius));
        }
        Ok(Self { rho })
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rho[i][j]
    }

    pub fn determinant(&self) -> f64 {
        self.rho[0][0] * self.rho[1][1] - self.rho[0][1] * self.rho[1][0]
    }
}

/// Per-eigenstate Pauli expectations and uncertainty product.
#[derive(Debug, Clone, Copy)]
pub struct UncertaintyRecord {
    pub eigen_index: usize,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    /// `Δσ̃ₓ = sqrt((1 - sx²)/2)`
    pub dsx: f64,
    /// `Δσ̃ᵧ = sqrt((1 - sy²)/2)`, equal to `1/√2` for real states.
    pub dsy: f64,
    /// `Δ = Δσ̃ₓ·Δσ̃ᵧ`
    pub delta: f64,
}

/// Trace out the field from a real joint eigenvector:
/// `rho[s][s'] = sum_n v[2n+s] v[2n+s']`.
pub fn atomic_reduced(v: &[f64], trunc: FockTruncation) -> Result<AtomicState, Error> {
    if v.len() != trunc.dim() {
        return Err(Error::DimensionMismatch {
            expected: trunc.dim(),
            actual: v.len(),
        });
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }

    let mut rho = [[0.0; 2]; 2];
    for n in 0..trunc.n_cut() {
        let g = v[2 * n];
        let e = v[2 * n + 1];
        rho[0][0] += g * g;
        rho[0][1] += g * e;
        rho[1][1] += e * e;
    }
    rho[1][0] = rho[0][1];
    AtomicState::new(rho)
}

/// Pauli expectations of a reduced state; `sy` is exactly zero for the
/// real states this crate produces.
pub fn pauli_expectations(rho: &AtomicState) -> (f64, f64, f64) {
    let sx = 2.0 * rho.entry(0, 1);
    let sy = 0.0;
    let sz = rho.entry(1, 1) - rho.entry(0, 0);
    (sx, sy, sz)
}

/// Uncertainty product of the rescaled Pauli pair for one state.
pub fn uncertainty_product(rho: &AtomicState) -> UncertaintyRecord {
    let (sx, sy, sz) = pauli_expectations(rho);
    let dsx = (0.5 * (1.0 - sx * sx)).max(0.0).sqrt();
    let dsy = (0.5 * (1.0 - sy * sy)).max(0.0).sqrt();
    UncertaintyRecord {
        eigen_index: 0,
        sx,
        sy,
        sz,
        dsx,
        dsy,
        delta: dsx * dsy,
    }
}

/// Uncertainty records for the lowest `levels` eigenstates computed
/// from an existing flow (the same decomposition that produced the
/// spectrum, so the two outputs are mutually consistent).
pub fn records_from_flow(flow: &SpectralFlow) -> Result<Vec<Vec<UncertaintyRecord>>, Error> {
    flow.vectors
        .iter()
        .map(|point| {
            point
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let rho = atomic_reduced(v, flow.trunc)?;
                    let mut rec = uncertainty_product(&rho);
                    rec.eigen_index = i;
                    Ok(rec)
                })
                .collect()
        })
        .collect()
}

/// Sweep the grid and compute one record per `(g, eigen_index)`,
/// ordered grid-point outer, eigenstate index inner.
pub fn uncertainty_sweep(
    p: &ModelParams,
    g_grid: &[f64],
    levels: usize,
    trunc: FockTruncation,
) -> Result<Vec<Vec<UncertaintyRecord>>, Error> {
    let flow = sweep(p, g_grid, levels, trunc)?;
    records_from_flow(&flow)
}

/// Binned distribution of uncertainty products over `[0, 1/2]`.
#[derive(Debug, Clone)]
pub struct Histogram {
    /// `n_bins + 1` uniform edges from 0 to 1/2.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// `counts / total`.
    pub probabilities: Vec<f64>,
}

impl Histogram {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// Index of the most populated bin (lowest index on ties).
    pub fn modal_bin(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = i;
            }
        }
        best
    }
}

/// Bin the `delta` values of a record set into `n_bins` uniform bins
/// over `[0, 1/2]`; the last bin is right-closed.
pub fn histogram(records: &[UncertaintyRecord], n_bins: usize) -> Result<Histogram, Error> {
    if n_bins < 2 {
        return Err(Error::TooFewBins(n_bins));
    }
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }

    let width = 0.5 / n_bins as f64;
    let mut counts = vec![0usize; n_bins];
    for rec in records {
        if !(-1e-12..=0.5 + 1e-12).contains(&rec.delta) {
            return Err(Error::DeltaOutOfRange(rec.delta));
        }
        let clamped = rec.delta.clamp(0.0, 0.5);
        let bin = ((clamped / width) as usize).min(n_bins - 1);
        counts[bin] += 1;
    }

    let total = records.len() as f64;
    Ok(Histogram {
        edges: (0..=n_bins).map(|i| i as f64 * width).collect(),
        probabilities: counts.iter().map(|&c| c as f64 / total).collect(),
        counts,
    })
}
