//! Eigenvalue flow over the coupling grid: sweeping, line tracking,
//! level-crossing detection and refinement, and truncation control.
//!
//! A sweep diagonalizes the model at every grid point (grid points are
//! independent and run in parallel), keeping the lowest `M` eigenpairs.
//! Lines are then tracked through the grid by eigenvector overlap so a
//! curve keeps its identity when sorted eigenvalues exchange order at a
//! crossing. Candidate crossings (local minima of adjacent sorted gaps)
//! are refined by golden-section search on the gap with fresh
//! diagonalizations, and classified as true or avoided against the
//! spectral scale.

use rayon::prelude::*;

use crate::eigensolve::eigh;
use crate::hilbert::{build_hamiltonian, FockTruncation, ModelParams};
use crate::symmetry::{parity_label, parity_operator, ParityLabel};
use crate::Error;

/// Minimum eigenvector overlap for a confident line match.
pub const OVERLAP_THRESHOLD: f64 = 0.5;

/// Relative gap below which a refined candidate counts as a true
/// crossing: `min_gap < CROSSING_GAP_REL * (E_{M-1} - E_0)`.
pub const CROSSING_GAP_REL: f64 = 1e-8;

/// Coupling resolution of the golden-section refinement.
pub const G_RESOLUTION: f64 = 1e-9;

/// Hard ceiling for the truncation controller.
pub const N_CUT_CAP: usize = 2048;

/// Uniformly spaced grid of `steps >= 1` points from `lo` to `hi`.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i == steps - 1 { hi } else { lo + i as f64 * h })
        .collect()
}

/// Eigenvalue curves over a coupling grid with tracked line identities.
#[derive(Debug, Clone)]
pub struct SpectralFlow {
    pub params: ModelParams,
    pub trunc: FockTruncation,
    /// Number of retained levels `M`.
    pub levels: usize,
    pub g_grid: Vec<f64>,
    /// `energies[k][i]`: i-th lowest eigenvalue at grid point k.
    pub energies: Vec<Vec<f64>>,
    /// `vectors[k][i]`: the matching unit eigenvector (length `d`).
    pub vectors: Vec<Vec<Vec<f64>>>,
    /// `parities[k][i]`: parity label of that eigenstate.
    pub parities: Vec<Vec<ParityLabel>>,
    /// `line_ids[k][i]`: persistent line identity of sorted slot `i`;
    /// a permutation of `0..levels` at every grid point.
    pub line_ids: Vec<Vec<usize>>,
    /// Per-segment flag: the overlap match between points `k` and `k+1`
    /// fell below [`OVERLAP_THRESHOLD`].
    pub unresolved: Vec<bool>,
    tracked: bool,
}

impl SpectralFlow {
    /// Assemble a flow from precomputed data (line identities start as
    /// the sorted order; call [`track_lines`] to resolve them).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        params: ModelParams,
        trunc: FockTruncation,
        levels: usize,
        g_grid: Vec<f64>,
        energies: Vec<Vec<f64>>,
        vectors: Vec<Vec<Vec<f64>>>,
        parities: Vec<Vec<ParityLabel>>,
    ) -> Self {
        let pts = g_grid.len();
        Self {
            params,
            trunc,
            levels,
            g_grid,
            energies,
            vectors,
            parities,
            line_ids: (0..pts).map(|_| (0..levels).collect()).collect(),
            unresolved: vec![false; pts.saturating_sub(1)],
            tracked: false,
        }
    }

    pub fn is_tracked(&self) -> bool {
        self.tracked
    }

    /// Sorted slot occupied by `line` at grid point `k`.
    pub fn sorted_position(&self, k: usize, line: usize) -> Option<usize> {
        self.line_ids[k].iter().position(|&l| l == line)
    }

    /// Energy of a tracked line at grid point `k`.
    pub fn line_energy(&self, k: usize, line: usize) -> Option<f64> {
        self.sorted_position(k, line).map(|i| self.energies[k][i])
    }

    /// Central-difference slope of a tracked line at interior point `k`.
    pub fn line_slope(&self, k: usize, line: usize) -> Option<f64> {
        if k == 0 || k + 1 >= self.g_grid.len() {
            return None;
        }
        let lo = self.line_energy(k - 1, line)?;
        let hi = self.line_energy(k + 1, line)?;
        Some((hi - lo) / (self.g_grid[k + 1] - self.g_grid[k - 1]))
    }

    /// Index of the last grid point with `g <= g_star` (clamped to a
    /// valid segment start).
    pub fn grid_index_left_of(&self, g_star: f64) -> usize {
        let mut k = 0;
        while k + 1 < self.g_grid.len() && self.g_grid[k + 1] <= g_star {
            k += 1;
        }
        k.min(self.g_grid.len().saturating_sub(2))
    }

    /// Tracked-line jumps exceeding the loose slope bound
    /// `|dE| <= 2 sqrt(n_cut) * dg` (the 2-norm of the coupling
    /// operator); returns `(segment, line)` pairs. Diagnostic only.
    pub fn continuity_violations(&self) -> Vec<(usize, usize)> {
        let bound_rate = 2.0 * (self.trunc.n_cut() as f64).sqrt();
        let mut out = Vec::new();
        for k in 0..self.g_grid.len().saturating_sub(1) {
            let dg = self.g_grid[k + 1] - self.g_grid[k];
            for line in 0..self.levels {
                let (Some(a), Some(b)) = (self.line_energy(k, line), self.line_energy(k + 1, line))
                else {
                    continue;
                };
                if (b - a).abs() > bound_rate * dg + 1e-9 {
                    out.push((k, line));
                }
            }
        }
        out
    }
}

/// Diagonalize the model over `g_grid`, retaining the lowest `levels`
/// eigenpairs and parity labels at every point. Grid points run in
/// parallel; the result ordering is fixed by the grid.
pub fn sweep(
    p: &ModelParams,
    g_grid: &[f64],
    levels: usize,
    trunc: FockTruncation,
) -> Result<SpectralFlow, Error> {
    if g_grid.is_empty() {
        return Err(Error::GridEmpty);
    }
    if g_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::GridNotAscending);
    }
    // The upper half of the truncated spectrum is untrusted.
    if levels == 0 || levels > trunc.n_cut() {
        return Err(Error::TooManyLevels {
            levels,
            max: trunc.n_cut(),
        });
    }
    p.validate()?;

    let parity = parity_operator(trunc);
    let points: Result<Vec<_>, Error> = g_grid
        .par_iter()
        .enumerate()
        .map(|(index, &g)| {
            solve_point(p, g, levels, trunc, &parity).map_err(|e| Error::SweepFailure {
                index,
                g,
                source: Box::new(e),
            })
        })
        .collect();
    let points = points?;

    let mut energies = Vec::with_capacity(points.len());
    let mut vectors = Vec::with_capacity(points.len());
    let mut parities = Vec::with_capacity(points.len());
    for (e, v, l) in points {
        energies.push(e);
        vectors.push(v);
        parities.push(l);
    }

    Ok(SpectralFlow::from_parts(
        *p,
        trunc,
        levels,
        g_grid.to_vec(),
        energies,
        vectors,
        parities,
    ))
}

type PointData = (Vec<f64>, Vec<Vec<f64>>, Vec<ParityLabel>);

fn solve_point(
    p: &ModelParams,
    g: f64,
    levels: usize,
    trunc: FockTruncation,
    parity: &crate::matrix::RealSymMatrix,
) -> Result<PointData, Error> {
    let h = build_hamiltonian(&p.with_g(g), trunc)?;
    let decomp = eigh(&h)?;
    let energies: Vec<f64> = decomp.values[..levels].to_vec();
    let vectors: Vec<Vec<f64>> = (0..levels).map(|i| decomp.vector(i)).collect();
    let labels = vectors
        .iter()
        .map(|v| parity_label(v, parity))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((energies, vectors, labels))
}

/// Greedy assignment between two eigenvector sets by descending
/// absolute overlap; each row and column is used once.
///
/// `to_curr[i] = j` maps slot `i` of the previous point to slot `j` of
/// the current one; `overlaps[i]` is the matched `|v_i . w_j|`.
#[derive(Debug, Clone)]
pub struct OverlapAssignment {
    pub to_curr: Vec<usize>,
    pub overlaps: Vec<f64>,
}

pub fn match_by_overlap(prev: &[Vec<f64>], curr: &[Vec<f64>]) -> OverlapAssignment {
    let m = prev.len();
    assert_eq!(m, curr.len(), "level counts must agree");

    let mut entries: Vec<(f64, usize, usize)> = Vec::with_capacity(m * m);
    for (i, vi) in prev.iter().enumerate() {
        for (j, wj) in curr.iter().enumerate() {
            let dot: f64 = vi.iter().zip(wj).map(|(a, b)| a * b).sum();
            entries.push((dot.abs(), i, j));
        }
    }
    // Descending overlap; ties resolve by (i, j) for determinism.
    entries.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut to_curr = vec![usize::MAX; m];
    let mut used = vec![false; m];
    let mut overlaps = vec![0.0; m];
    for (o, i, j) in entries {
        if to_curr[i] == usize::MAX && !used[j] {
            to_curr[i] = j;
            used[j] = true;
            overlaps[i] = o;
        }
    }
    OverlapAssignment { to_curr, overlaps }
}

/// Resolve persistent line identities through the grid by eigenvector
/// overlap. Segments whose best match drops below
/// [`OVERLAP_THRESHOLD`] are flagged unresolved; when two earlier grid
/// points exist, the weakly matched subset is reassigned by
/// extrapolating eigenvalue slopes (the eigenvector basis is arbitrary
/// at a degeneracy).
pub fn track_lines(flow: &mut SpectralFlow) {
    let pts = flow.g_grid.len();
    flow.line_ids[0] = (0..flow.levels).collect();

    for k in 0..pts.saturating_sub(1) {
        let assignment = match_by_overlap(&flow.vectors[k], &flow.vectors[k + 1]);

        let mut next_ids = vec![usize::MAX; flow.levels];
        for i in 0..flow.levels {
            next_ids[assignment.to_curr[i]] = flow.line_ids[k][i];
        }

        let weak: Vec<usize> = (0..flow.levels)
            .filter(|&i| assignment.overlaps[i] < OVERLAP_THRESHOLD)
            .collect();
        if !weak.is_empty() {
            flow.unresolved[k] = true;
            if k >= 1 {
                reassign_by_slope(flow, k, &assignment, &weak, &mut next_ids);
            }
        }

        debug_assert!({
            let mut seen = vec![false; flow.levels];
            next_ids.iter().all(|&l| {
                let fresh = !seen[l];
                seen[l] = true;
                fresh
            })
        });
        flow.line_ids[k + 1] = next_ids;
    }
    flow.tracked = true;
}

/// Reassign the weakly matched slots of segment `k -> k+1` so that the
/// extrapolated line slopes stay continuous.
fn reassign_by_slope(
    flow: &SpectralFlow,
    k: usize,
    assignment: &OverlapAssignment,
    weak: &[usize],
    next_ids: &mut [usize],
) {
    let dg_prev = flow.g_grid[k] - flow.g_grid[k - 1];
    let dg_next = flow.g_grid[k + 1] - flow.g_grid[k];

    // Candidate target slots: those currently fed by a weak match.
    let targets: Vec<usize> = weak.iter().map(|&i| assignment.to_curr[i]).collect();

    // Predict each weak line's energy at the next point from its slope
    // over the two previous points.
    let mut predictions: Vec<(usize, f64)> = Vec::with_capacity(weak.len());
    for &i in weak {
        let line = flow.line_ids[k][i];
        let e_now = flow.energies[k][i];
        let e_prev = match flow.sorted_position(k - 1, line) {
            Some(pos) => flow.energies[k - 1][pos],
            None => return,
        };
        let slope = (e_now - e_prev) / dg_prev;
        predictions.push((line, e_now + slope * dg_next));
    }

    // Greedy nearest-prediction matching (tie-break: slope continuity
    // is exactly what the prediction encodes; remaining ties resolve by
    // index order).
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (pi, &(_, predicted)) in predictions.iter().enumerate() {
        for &j in &targets {
            pairs.push(((predicted - flow.energies[k + 1][j]).abs(), pi, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut line_done = vec![false; predictions.len()];
    let mut slot_done: Vec<usize> = Vec::new();
    for (_, pi, j) in pairs {
        if line_done[pi] || slot_done.contains(&j) {
            continue;
        }
        next_ids[j] = predictions[pi].0;
        line_done[pi] = true;
        slot_done.push(j);
    }
}

/// Classification of a refined degeneracy candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    TrueCrossing,
    Avoided,
}

impl CrossingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CrossingKind::TrueCrossing => "TRUE_CROSSING",
            CrossingKind::Avoided => "AVOIDED",
        }
    }
}

/// A refined gap minimum between two adjacent eigenvalue lines.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub g_star: f64,
    pub energy: f64,
    pub line_a: usize,
    pub line_b: usize,
    pub min_gap: f64,
    pub kind: CrossingKind,
}

/// A candidate whose refinement failed; the scan continues past it.
#[derive(Debug, Clone)]
pub struct RefineFailure {
    pub pair: usize,
    pub g_lo: f64,
    pub g_hi: f64,
    pub error: Error,
}

/// Outcome of a crossing scan: refined candidates sorted by `g_star`,
/// plus any per-candidate refinement failures.
#[derive(Debug, Clone)]
pub struct CrossingScan {
    pub crossings: Vec<Crossing>,
    pub failures: Vec<RefineFailure>,
}

/// Locate and refine the gap minima of a tracked flow.
///
/// Every adjacent-pair gap with an interior local minimum is bracketed
/// on the grid and refined by golden-section search (fresh
/// diagonalizations) down to [`G_RESOLUTION`] in `g`. A candidate is a
/// true crossing when the refined gap is below [`CROSSING_GAP_REL`]
/// times the local spectral scale `E_{M-1} - E_0`.
pub fn find_crossings(p: &ModelParams, flow: &SpectralFlow) -> Result<CrossingScan, Error> {
    if !flow.is_tracked() {
        return Err(Error::FlowNotTracked);
    }
    let pts = flow.g_grid.len();
    let m = flow.levels;

    // Bracket candidates: (pair index, left grid index).
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for i in 0..m.saturating_sub(1) {
        for k in 1..pts.saturating_sub(1) {
            let gap_prev = flow.energies[k - 1][i + 1] - flow.energies[k - 1][i];
            let gap_here = flow.energies[k][i + 1] - flow.energies[k][i];
            let gap_next = flow.energies[k + 1][i + 1] - flow.energies[k + 1][i];
            if gap_here < gap_prev && gap_here <= gap_next {
                candidates.push((i, k));
            }
        }
    }

    let results: Vec<Result<Crossing, RefineFailure>> = candidates
        .par_iter()
        .map(|&(pair, k)| {
            let g_lo = flow.g_grid[k - 1];
            let g_hi = flow.g_grid[k + 1];
            refine_candidate(p, flow, pair, k).map_err(|error| RefineFailure {
                pair,
                g_lo,
                g_hi,
                error,
            })
        })
        .collect();

    let mut crossings = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(c) => crossings.push(c),
            Err(f) => failures.push(f),
        }
    }

    // Merge duplicate detections of the same minimum (same line pair,
    // same refined location); keep the smaller gap.
    crossings.sort_by(|a, b| {
        a.g_star
            .total_cmp(&b.g_star)
            .then(a.line_a.cmp(&b.line_a))
            .then(a.line_b.cmp(&b.line_b))
    });
    crossings.dedup_by(|b, a| {
        let same_lines = (a.line_a.min(a.line_b), a.line_a.max(a.line_b))
            == (b.line_a.min(b.line_b), b.line_a.max(b.line_b));
        if same_lines && (a.g_star - b.g_star).abs() < 1e-6 {
            if b.min_gap < a.min_gap {
                a.min_gap = b.min_gap;
                a.g_star = b.g_star;
                a.energy = b.energy;
                a.kind = b.kind;
            }
            true
        } else {
            false
        }
    });

    Ok(CrossingScan {
        crossings,
        failures,
    })
}

fn refine_candidate(
    p: &ModelParams,
    flow: &SpectralFlow,
    pair: usize,
    k: usize,
) -> Result<Crossing, Error> {
    let gap_at = |g: f64| -> Result<(f64, f64, f64, f64), Error> {
        let h = build_hamiltonian(&p.with_g(g), flow.trunc)?;
        let d = eigh(&h)?;
        let lo = d.values[pair];
        let hi = d.values[pair + 1];
        let scale = d.values[flow.levels - 1] - d.values[0];
        Ok((hi - lo, lo, hi, scale))
    };

    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = flow.g_grid[k - 1];
    let mut b = flow.g_grid[k + 1];

    let mut best_g = flow.g_grid[k];
    let (mut best_gap, mut best_lo, mut best_hi, mut best_scale) = gap_at(best_g)?;

    let mut record = |g: f64, value: (f64, f64, f64, f64)| {
        if value.0 < best_gap {
            best_gap = value.0;
            best_g = g;
            (best_lo, best_hi, best_scale) = (value.1, value.2, value.3);
        }
    };

    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = gap_at(x1)?;
    let mut f2 = gap_at(x2)?;
    record(x1, f1);
    record(x2, f2);

    while b - a > G_RESOLUTION {
        if f1.0 <= f2.0 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = gap_at(x1)?;
            record(x1, f1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = gap_at(x2)?;
            record(x2, f2);
        }
    }

    let kind = if best_gap < CROSSING_GAP_REL * best_scale {
        CrossingKind::TrueCrossing
    } else {
        CrossingKind::Avoided
    };

    Ok(Crossing {
        g_star: best_g,
        energy: 0.5 * (best_lo + best_hi),
        line_a: flow.line_ids[k - 1][pair],
        line_b: flow.line_ids[k - 1][pair + 1],
        min_gap: best_gap,
        kind,
    })
}

/// One doubling comparison of the truncation controller.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceStep {
    pub n_cut_small: usize,
    pub n_cut_large: usize,
    /// Max absolute change of the lowest `M` eigenvalues.
    pub max_delta: f64,
}

/// Result of the truncation controller: the chosen `n_cut` and the
/// per-doubling deltas that justified it.
#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub n_cut: usize,
    pub steps: Vec<ConvergenceStep>,
}

/// Double `n_cut` from `max(2M, 32)` until the lowest `M` eigenvalues
/// at `g = g_max` move by less than `tol`; returns the smaller
/// converged `n_cut`. Fails loudly at the [`N_CUT_CAP`] ceiling.
pub fn converge_truncation(
    p: &ModelParams,
    levels: usize,
    tol: f64,
    g_max: f64,
) -> Result<TruncationReport, Error> {
    converge_truncation_capped(p, levels, tol, g_max, N_CUT_CAP)
}

/// [`converge_truncation`] with an explicit `n_cut` ceiling.
pub fn converge_truncation_capped(
    p: &ModelParams,
    levels: usize,
    tol: f64,
    g_max: f64,
    cap: usize,
) -> Result<TruncationReport, Error> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::NonPositiveTolerance(tol));
    }
    p.validate()?;

    let lowest = |n_cut: usize| -> Result<Vec<f64>, Error> {
        let trunc = FockTruncation::new(n_cut)?;
        let h = build_hamiltonian(&p.with_g(g_max), trunc)?;
        Ok(eigh(&h)?.values[..levels].to_vec())
    };

    let mut n_cut = (2 * levels).max(32);
    if n_cut > cap {
        return Err(Error::TruncationCap {
            cap,
            last_delta: f64::INFINITY,
        });
    }
    let mut reference = lowest(n_cut)?;
    let mut steps = Vec::new();

    loop {
        let doubled = 2 * n_cut;
        if doubled > cap {
            return Err(Error::TruncationCap {
                cap,
                last_delta: steps
                    .last()
                    .map(|s: &ConvergenceStep| s.max_delta)
                    .unwrap_or(f64::INFINITY),
            });
        }
        let refined = lowest(doubled)?;
        let max_delta = reference
            .iter()
            .zip(&refined)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        steps.push(ConvergenceStep {
            n_cut_small: n_cut,
            n_cut_large: doubled,
            max_delta,
        });
        if max_delta < tol {
            return Ok(TruncationReport { n_cut, steps });
        }
        n_cut = doubled;
        reference = refined;
    }
}
