//! Dense real-symmetric eigendecomposition.
//!
//! Householder reduction to tridiagonal form followed by the implicit
//! QL algorithm with Wilkinson shifts (the classic EISPACK `tred2` /
//! `tql2` pair). Eigenvalues come back ascending; eigenvectors are
//! orthonormal columns with a fixed sign gauge (largest-magnitude
//! component positive) so repeated runs and downstream overlap tracking
//! are reproducible.
//!
//! The QL stage runs on the transposed accumulation matrix so that each
//! plane rotation touches two contiguous rows instead of two strided
//! columns.

use crate::matrix::{Matrix, RealSymMatrix};
use crate::Error;

/// Largest accepted matrix dimension.
pub const MAX_DIM: usize = 4096;

/// Iteration cap per eigenvalue before declaring non-convergence.
pub const MAX_SWEEPS: usize = 64;

/// Ascending eigenvalues and the matching orthonormal eigenvectors.
///
/// Column `i` of `vectors` is the unit eigenvector of `values[i]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i)
    }
}

/// Residual and orthonormality defect maxima of a decomposition.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    /// `max_i ||H v_i - lambda_i v_i||_2`
    pub max_residual: f64,
    /// `max_ij |v_i^T v_j - delta_ij|`
    pub max_orthonormality_defect: f64,
}

/// Diagonalize a real symmetric matrix.
pub fn eigh(h: &RealSymMatrix) -> Result<EigenDecomposition, Error> {
    let n = h.dim();
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge(n, MAX_DIM));
    }

    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut v = h.matrix().clone();
    tridiagonalize(&mut v, &mut diag, &mut off);

    // Rows of `w` are the accumulated basis vectors.
    let mut w = v.transpose();
    ql_implicit(&mut diag, &mut off, &mut w)?;

    sort_ascending(&mut diag, &mut w);
    fix_signs(&mut w);

    Ok(EigenDecomposition {
        values: diag,
        vectors: w.transpose(),
    })
}

/// Compute the defect maxima of `decomp` against `h`.
pub fn validate(h: &RealSymMatrix, decomp: &EigenDecomposition) -> Result<ValidationReport, Error> {
    let n = h.dim();
    if decomp.dim() != n || decomp.vectors.rows() != n || decomp.vectors.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: decomp.dim(),
        });
    }

    // H*V once, then per-column residuals.
    let hv = h.matrix().matmul(&decomp.vectors);
    let mut max_residual: f64 = 0.0;
    for i in 0..n {
        let mut s = 0.0;
        for k in 0..n {
            let r = hv[(k, i)] - decomp.values[i] * decomp.vectors[(k, i)];
            s += r * r;
        }
        max_residual = max_residual.max(s.sqrt());
    }

    let gram = decomp.vectors.transpose().matmul(&decomp.vectors);
    let mut max_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            max_defect = max_defect.max((gram[(i, j)] - target).abs());
        }
    }

    Ok(ValidationReport {
        max_residual,
        max_orthonormality_defect: max_defect,
    })
}

/// Householder reduction of `v` (input matrix, output accumulated
/// transformations) to tridiagonal form in `diag`/`off`.
///
/// Follows the EISPACK `tred2` procedure of Bowdler, Martin, Reinsch,
/// and Wilkinson.
fn tridiagonalize(v: &mut Matrix, diag: &mut [f64], off: &mut [f64]) {
    let n = diag.len();
    for j in 0..n {
        diag[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        // Scale to avoid under/overflow when forming the reflector.
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in diag.iter().take(i) {
            scale += item.abs();
        }

        if scale == 0.0 {
            off[i] = diag[i - 1];
            for j in 0..i {
                diag[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for x in diag.iter_mut().take(i) {
                *x /= scale;
                h += *x * *x;
            }
            let f = diag[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            off[i] = scale * g;
            h -= f * g;
            diag[i - 1] = f - g;
            for item in off.iter_mut().take(i) {
                *item = 0.0;
            }

            // Apply the similarity transformation to the leading block.
            for j in 0..i {
                let f = diag[j];
                v[(j, i)] = f;
                let mut g = off[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * diag[k];
                    off[k] += v[(k, j)] * f;
                }
                off[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                off[j] /= h;
                f += off[j] * diag[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                off[j] -= hh * diag[j];
            }
            for j in 0..i {
                let f = diag[j];
                let g = off[j];
                for k in j..i {
                    v[(k, j)] -= f * off[k] + g * diag[k];
                }
                diag[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        diag[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = diag[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                diag[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * diag[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        diag[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    off[0] = 0.0;
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix,
/// rotations accumulated into the rows of `w` (EISPACK `tql2`).
fn ql_implicit(diag: &mut [f64], off: &mut [f64], w: &mut Matrix) -> Result<(), Error> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        off[i - 1] = off[i];
    }
    off[n - 1] = 0.0;

    let eps = f64::EPSILON; // 2^-52, as in the reference procedure
    let mut shift_total = 0.0;
    let mut tst1: f64 = 0.0;

    for l in 0..n {
        tst1 = tst1.max(diag[l].abs() + off[l].abs());

        // Find a negligible subdiagonal element; off[n-1] is zero, so
        // the scan always terminates by m = n-1.
        let mut m = l;
        while m < n - 1 {
            if off[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        index: l,
                        sweeps: MAX_SWEEPS,
                    });
                }

                // Wilkinson shift from the leading 2x2.
                let g = diag[l];
                let mut p = (diag[l + 1] - g) / (2.0 * off[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                diag[l] = off[l] / (p + r);
                diag[l + 1] = off[l] * (p + r);
                let dl1 = diag[l + 1];
                let mut h = g - diag[l];
                for item in diag.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                shift_total += h;

                // Implicit QL sweep from m down to l.
                p = diag[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = off[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * off[i];
                    h = c * p;
                    r = p.hypot(off[i]);
                    off[i + 1] = s * r;
                    s = off[i] / r;
                    c = p / r;
                    p = c * diag[i] - s * g;
                    diag[i + 1] = h + s * (c * g + s * diag[i]);

                    // Rotate rows i and i+1 of the accumulation matrix.
                    rotate_rows(w, i, s, c);
                }
                p = -s * s2 * c3 * el1 * off[l] / dl1;
                off[l] = s * p;
                diag[l] = c * p;

                if off[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        diag[l] += shift_total;
        off[l] = 0.0;
    }
    Ok(())
}

#[inline]
fn rotate_rows(w: &mut Matrix, i: usize, s: f64, c: f64) {
    let (top, bottom) = w.adjacent_rows_mut(i);
    for (a, b) in top.iter_mut().zip(bottom.iter_mut()) {
        let h = *b;
        *b = s * *a + c * h;
        *a = c * *a - s * h;
    }
}

fn sort_ascending(values: &mut [f64], w: &mut Matrix) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    values.copy_from_slice(&sorted_values);

    let mut sorted = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            sorted[(dst, k)] = w[(src, k)];
        }
    }
    *w = sorted;
}

/// Gauge fix: make the largest-magnitude component of each eigenvector
/// (row of `w`) positive; ties resolve to the lowest index.
fn fix_signs(w: &mut Matrix) {
    let n = w.cols();
    for i in 0..w.rows() {
        let row = w.row(i);
        let mut best = 0;
        for k in 1..n {
            if row[k].abs() > row[best].abs() {
                best = k;
            }
        }
        if row[best] < 0.0 {
            for k in 0..n {
                w[(i, k)] = -w[(i, k)];
            }
        }
    }
}
