use crate::error::{CarpetError, Result};
use crate::graph;
use crate::matrix::RealMatrix;

const MAX_ITERATIONS: usize = 1_000_000;

/// Perron root of a nonnegative square matrix, to absolute tolerance `tol`.
///
/// The matrix is split into strongly connected blocks of its support; the
/// result is the largest Perron root over the blocks (0 when the matrix is
/// nilpotent). Each block is solved exactly when its row or column sums are
/// constant, otherwise by power iteration on `B + I` with Collatz–Wielandt
/// bounds as the stopping rule.
pub fn spectral_radius(a: &RealMatrix, tol: f64) -> Result<f64> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(CarpetError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let support = a.support();
    let mut rho: f64 = 0.0;
    for block in graph::strongly_connected_components(&support) {
        if block.len() == 1 && a.get(block[0], block[0]) == 0.0 {
            continue;
        }
        rho = rho.max(irreducible_perron_root(&a.submatrix(&block), tol)?);
    }
    Ok(rho)
}

fn irreducible_perron_root(b: &RealMatrix, tol: f64) -> Result<f64> {
    let d = b.dim();
    if d == 1 {
        return Ok(b.get(0, 0));
    }
    let rows: Vec<f64> = (0..d).map(|i| (0..d).map(|j| b.get(i, j)).sum()).collect();
    if rows.iter().all(|&r| r == rows[0]) {
        return Ok(rows[0]);
    }
    let cols: Vec<f64> = (0..d).map(|j| (0..d).map(|i| b.get(i, j)).sum()).collect();
    if cols.iter().all(|&c| c == cols[0]) {
        return Ok(cols[0]);
    }

    // B + I is primitive, so the iteration converges without oscillation.
    let mut x = vec![1.0; d];
    let mut y = vec![0.0; d];
    for _ in 0..MAX_ITERATIONS {
        b.mul_vec(&x, &mut y);
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        let mut top: f64 = 0.0;
        for i in 0..d {
            y[i] += x[i];
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
            top = top.max(y[i]);
        }
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi) - 1.0);
        }
        for i in 0..d {
            x[i] = y[i] / top;
        }
    }
    Err(CarpetError::NonConvergence(MAX_ITERATIONS))
}
