use num_complex::Complex64;

use super::{Method, SpectrumResult, TridiagonalHamiltonian, DEFAULT_REAL_THRESHOLD};
use crate::error::{Error, Result};

/// Number of eigenvalues strictly below `x` for the symmetric tridiagonal
/// matrix with diagonal `d` and constant off-diagonal `e`.
pub fn count_below(d: &[f64], e: f64, x: f64) -> usize {
    let e2 = e * e;
    let mut count = 0;
    let mut q = 1.0;
    for (i, &di) in d.iter().enumerate() {
        q = if i == 0 { di - x } else { di - x - e2 / q };
        if q == 0.0 {
            // Nudge off an exact pivot; the count is unaffected.
            q = -f64::EPSILON * (di.abs() + e.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `k` eigenvalues of a real symmetric tridiagonal matrix by
/// bisection on the Sturm count.
pub(crate) fn bisect_lowest(d: &[f64], e: f64, k: usize) -> Vec<f64> {
    let lo0 = d.iter().fold(f64::INFINITY, |m, v| m.min(*v)) - 2.0 * e.abs();
    let hi0 = d.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v)) + 2.0 * e.abs();
    let mut out = Vec::with_capacity(k);
    let mut lo_floor = lo0;
    for j in 0..k {
        // Invariant: count(lo) <= j < count(hi).
        let (mut lo, mut hi) = (lo_floor, hi0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(d, e, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        let value = 0.5 * (lo + hi);
        out.push(value);
        lo_floor = lo;
    }
    out
}

/// Lowest `k` eigenvalues of a Hermitian discretization.
pub fn eigen_real(h: &TridiagonalHamiltonian, k: usize) -> Result<SpectrumResult> {
    if !h.is_hermitian() {
        return Err(Error::WrongSolver(
            "potential has an imaginary part; use eigen_complex".into(),
        ));
    }
    if k > h.size() {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenvalues from a matrix of size {}",
            h.size()
        )));
    }
    let values = bisect_lowest(&h.real_diagonal(), h.off_diagonal(), k)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    Ok(SpectrumResult::single_grid(
        values,
        Method::OracleReal,
        h.grid().n_points(),
        h.grid().h(),
        DEFAULT_REAL_THRESHOLD,
    ))
}
