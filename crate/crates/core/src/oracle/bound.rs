use num_complex::Complex64;

use super::{
    count_below, discretize, eigen_complex, eigen_real, eigenvectors, sort_spectrum, OracleConfig, SpectrumResult,
};
use crate::error::Result;
use crate::grid::{Grid, SampledFunction};

/// Bound eigenpairs below the right-hand asymptote of the potential.
#[derive(Debug, Clone)]
pub struct BoundStates {
    pub spectrum: SpectrumResult,
    pub states: Vec<SampledFunction>,
    /// `Re V` averaged over the last 5% of nodes.
    pub threshold: f64,
}

/// Up to `count` eigenpairs with `Re E` below the asymptotic value of `V`
/// at `x_max`.
///
/// A state whose modulus next to a wall exceeds `1e-6` of its peak gets a
/// domain-too-small warning. With `left_wall` the left end is treated as a
/// physical wall (`psi(x_min) = 0`) and is not checked.
pub fn bound_states(
    v: &(dyn Fn(f64) -> Complex64 + Sync),
    grid: Grid,
    mu: f64,
    count: usize,
    left_wall: bool,
    cfg: &OracleConfig,
) -> Result<BoundStates> {
    let sampled = SampledFunction::from_fn(grid, v)?;
    let n = grid.n_points();
    let tail = (n / 20).max(1);
    let threshold = sampled.values()[n - tail..].iter().map(|z| z.re).sum::<f64>() / tail as f64;

    let h = discretize(&sampled, mu)?;
    let mut spectrum = if h.is_hermitian() {
        let below = count_below(&h.real_diagonal(), h.off_diagonal(), threshold);
        eigen_real(&h, below.min(count))?
    } else {
        let mut all = eigen_complex(&h, cfg)?;
        let keep: Vec<usize> = (0..all.len()).filter(|&i| all.eigenvalues[i].re < threshold).take(count).collect();
        let pick = |v: &[Complex64]| keep.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let mut eig = pick(&all.eigenvalues);
        sort_spectrum(&mut eig);
        all.numerically_real = keep.iter().map(|&i| all.numerically_real[i]).collect();
        all.convergence_estimate = vec![0.0; keep.len()];
        all.raw = eig.clone();
        all.eigenvalues = eig;
        all
    };

    let states = eigenvectors(&h, &spectrum.eigenvalues)?;
    for (i, psi) in states.iter().enumerate() {
        let vals = psi.values();
        let peak = psi.max_abs();
        let left = vals[1].norm() > 1e-6 * peak;
        let right = vals[n - 2].norm() > 1e-6 * peak;
        let side = match (left && !left_wall, right) {
            (true, true) => Some("both boundaries"),
            (true, false) => Some("the left boundary"),
            (false, true) => Some("the right boundary"),
            (false, false) => None,
        };
        if let Some(side) = side {
            spectrum
                .warnings
                .push(format!("domain too small: state {i} does not decay toward {side}"));
        }
    }
    Ok(BoundStates {
        spectrum,
        states,
        threshold,
    })
}
