//! Sparse symmetric positive definite solves shared by the pressure and
//! projection stages.

use nalgebra::{DMatrix, DVector};
use sprs::{CsMat, FillInReduction, TriMat};
use sprs_ldl::Ldl;

use crate::error::{Error, Result};

/// Relative residual accepted from a direct solve.
pub const SOLVE_TOL: f64 = 1e-10;

/// Largest system handed to the dense least-squares fallback.
const DENSE_FALLBACK_LIMIT: usize = 4000;

/// Compressed symmetric matrix from `(row, col, value)` triplets.
/// Duplicate entries are summed.
pub fn assemble(n: usize, triplets: &[(usize, usize, f64)]) -> CsMat<f64> {
    let mut tri = TriMat::with_capacity((n, n), triplets.len());
    for &(i, j, v) in triplets {
        tri.add_triplet(i, j, v);
    }
    tri.to_csc()
}

pub fn mat_vec(a: &CsMat<f64>, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; a.rows()];
    for (v, (i, j)) in a.iter() {
        y[i] += v * x[j];
    }
    y
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `‖A x − b‖ / ‖b‖`, or the absolute residual when `b = 0`.
pub fn relative_residual(a: &CsMat<f64>, x: &[f64], b: &[f64]) -> f64 {
    let ax = mat_vec(a, x);
    let r: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let scale = norm(b);
    if scale > 0.0 {
        norm(&r) / scale
    } else {
        norm(&r)
    }
}

/// Solves `A x = b` for symmetric positive definite `A` with a sparse LDLᵀ
/// factorization under reverse Cuthill-McKee ordering.
///
/// Fails with a numeric error if a pivot is not positive or the residual
/// stays above [`SOLVE_TOL`] after one refinement step.
pub fn solve_spd(a: &CsMat<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        // the sparse factorization needs at least two unknowns
        let d = a.get(0, 0).copied().unwrap_or(0.0);
        if !(d > 0.0) {
            return Err(Error::numeric(
                format!("matrix is not positive definite (pivot {d:.3e})"),
                f64::NAN,
            ));
        }
        return Ok(vec![b[0] / d]);
    }
    let ldl = Ldl::new()
        .fill_in_reduction(FillInReduction::ReverseCuthillMcKee)
        .numeric(a.view())
        .map_err(|e| Error::numeric(format!("sparse LDLᵀ factorization failed: {e}"), f64::NAN))?;
    let dmax = ldl.d().iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if let Some(d) = ldl.d().iter().find(|&&d| d <= 1e-14 * dmax) {
        return Err(Error::numeric(
            format!("matrix is not positive definite (pivot {d:.3e})"),
            f64::NAN,
        ));
    }
    let mut x: Vec<f64> = ldl.solve(b);
    let mut res = relative_residual(a, &x, b);
    if res > SOLVE_TOL {
        let ax = mat_vec(a, &x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let dx: Vec<f64> = ldl.solve(&r);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        res = relative_residual(a, &x, b);
    }
    if !res.is_finite() || res > SOLVE_TOL {
        return Err(Error::numeric("sparse solve did not reach tolerance", res));
    }
    Ok(x)
}

/// Minimum-norm least-squares solution of a symmetric system through a
/// dense SVD. Only for small or rank-deficient systems.
pub fn solve_least_squares(a: &CsMat<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if n > DENSE_FALLBACK_LIMIT {
        return Err(Error::numeric(
            format!("least-squares fallback refused for {n} unknowns"),
            f64::NAN,
        ));
    }
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for (v, (i, j)) in a.iter() {
        dense[(i, j)] += v;
    }
    let svd = dense.svd(true, true);
    let smax = svd.singular_values.max();
    let x = svd
        .solve(&DVector::from_column_slice(b), 1e-12 * smax.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::numeric(format!("SVD solve failed: {e}"), f64::NAN))?;
    Ok(x.iter().copied().collect())
}
