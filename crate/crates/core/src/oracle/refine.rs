use std::sync::Arc;

use num_complex::Complex64;

use super::{discretize, eigen_complex, eigen_real, Method, OracleConfig, SpectrumResult};
use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    /// Bisection for real potentials, QR otherwise.
    Auto,
    Real,
    Complex,
}

/// Lowest `count` levels of `-mu^2 d^2/dx^2 + V` on `[x_min, x_max]`.
#[derive(Clone)]
pub struct Problem {
    pub potential: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    pub x_min: f64,
    pub x_max: f64,
    pub mu: f64,
    pub count: usize,
    /// Starting grid size.
    pub n_points: usize,
    pub solver: Solver,
}

/// Outcome of [`refine_until`]. `history[k]` holds the raw eigenvalues on the
/// `k`-th grid, with its node count.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub spectrum: SpectrumResult,
    pub history: Vec<(usize, Vec<Complex64>)>,
}

impl Problem {
    fn solve(&self, n_points: usize, cfg: &OracleConfig) -> Result<SpectrumResult> {
        let grid = Grid::new(self.x_min, self.x_max, n_points)?;
        let v = SampledFunction::from_fn(grid, |x| (self.potential)(x))?;
        let h = discretize(&v, self.mu)?;
        let real = match self.solver {
            Solver::Auto => h.is_hermitian(),
            Solver::Real => true,
            Solver::Complex => false,
        };
        let mut s = if real { eigen_real(&h, self.count)? } else { eigen_complex(&h, cfg)? };
        s.truncate(self.count);
        if s.len() < self.count {
            return Err(Error::InvalidParameter(format!(
                "grid of {n_points} nodes has only {} levels",
                s.len()
            )));
        }
        Ok(s)
    }
}

fn richardson(fine: &[Complex64], coarse: &[Complex64]) -> Vec<Complex64> {
    fine.iter().zip(coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect()
}

fn max_change(a: &[Complex64], b: &[Complex64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).collect()
}

/// Halves `h` (nested grids, `n -> 2(n - 1) + 1`) until the error estimate
/// of every level drops below `target_tol`, at most `max_doublings` times.
///
/// After each doubling the two finest grids give a Richardson value
/// `(4 E_fine - E_coarse) / 3`. The estimate is the change between
/// successive Richardson values, or the raw change after the first
/// doubling. If the budget runs out first the result is flagged
/// unconverged and still returned. The complex solver also stops early at
/// its size cap.
pub fn refine_until(problem: &Problem, target_tol: f64, max_doublings: usize, cfg: &OracleConfig) -> Result<Refinement> {
    if max_doublings > 6 {
        return Err(Error::InvalidParameter(format!(
            "max_doublings must be <= 6, got {max_doublings}"
        )));
    }
    let mut n = problem.n_points;
    let first = problem.solve(n, cfg)?;
    let mut history = vec![(n, first.eigenvalues.clone())];
    let mut last = first;
    let mut rich: Option<Vec<Complex64>> = None;
    let mut estimate = vec![f64::INFINITY; problem.count];
    let mut warnings = Vec::new();
    let mut converged = false;

    for _ in 0..max_doublings {
        let next_n = 2 * (n - 1) + 1;
        let complex = last.method == Method::OracleComplex;
        if complex && next_n - 2 > cfg.qr_cap {
            warnings.push(format!("stopped at {n} nodes: next grid exceeds the complex solver cap"));
            break;
        }
        let fine = problem.solve(next_n, cfg)?;
        let r = richardson(&fine.eigenvalues, &last.eigenvalues);
        estimate = match &rich {
            Some(prev) => max_change(&r, prev),
            None => max_change(&fine.eigenvalues, &last.eigenvalues),
        };
        rich = Some(r);
        history.push((next_n, fine.eigenvalues.clone()));
        n = next_n;
        last = fine;
        if estimate.iter().all(|e| *e < target_tol) {
            converged = true;
            break;
        }
    }

    let mut spectrum = last;
    if let Some(r) = rich {
        spectrum.raw = spectrum.eigenvalues.clone();
        spectrum.numerically_real = r
            .iter()
            .map(|e| super::is_numerically_real(*e, cfg.real_threshold))
            .collect();
        spectrum.eigenvalues = r;
    } else {
        warnings.push("no refinement performed".into());
    }
    spectrum.convergence_estimate = estimate.iter().map(|e| if e.is_finite() { *e } else { f64::MAX }).collect();
    spectrum.converged = converged;
    if !converged {
        warnings.push(format!("refinement did not reach tolerance {target_tol:e}"));
    }
    spectrum.warnings.extend(warnings);
    Ok(Refinement { spectrum, history })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(v: impl Fn(f64) -> Complex64 + Send + Sync + 'static, lo: f64, hi: f64, count: usize, n: usize) -> Problem {
        Problem {
            potential: Arc::new(v),
            x_min: lo,
            x_max: hi,
            mu: 1.0,
            count,
            n_points: n,
            solver: Solver::Auto,
        }
    }

    #[test]
    fn box_changes_shrink_fourfold() {
        let p = problem(|_| Complex64::new(0.0, 0.0), 0.0, 1.0, 1, 101);
        let r = refine_until(&p, 0.0, 4, &OracleConfig::default()).unwrap();
        let e: Vec<f64> = r.history.iter().map(|(_, v)| v[0].re).collect();
        let d: Vec<f64> = e.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in d.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
        }
        assert!(!r.spectrum.converged);
    }

    #[test]
    fn oscillator_ground_state_to_1e8() {
        let p = problem(|x| Complex64::new(x * x, 0.0), -12.0, 12.0, 1, 501);
        let r = refine_until(&p, 1e-8, 4, &OracleConfig::default()).unwrap();
        assert!(r.spectrum.converged);
        assert!(r.history.len() <= 5);
        assert!((r.spectrum.eigenvalues[0].re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn step_potential_does_not_crash() {
        let p = problem(|x| Complex64::new(if x > 0.3 { 50.0 } else { 0.0 }, 0.0), 0.0, 1.0, 2, 101);
        let r = refine_until(&p, 1e-12, 3, &OracleConfig::default()).unwrap();
        assert!(!r.spectrum.converged);
        assert!(r.spectrum.eigenvalues.iter().all(|e| e.re.is_finite()));
        assert!(r.spectrum.convergence_estimate.iter().all(|e| *e >= 0.0));
    }

    #[test]
    fn pt_levels_via_extrapolation() {
        let p = problem(|x| Complex64::new(x * x, x), -12.0, 12.0, 6, 301);
        let r = refine_until(&p, 1e-6, 6, &OracleConfig::default()).unwrap();
        assert_eq!(r.history.last().unwrap().0, 1201);
        for (n, e) in r.spectrum.eigenvalues.iter().enumerate() {
            assert!((e.re - (2 * n + 1) as f64 - 0.25).abs() <= 1e-4, "n = {n}: {e}");
            assert!(e.im.abs() <= 1e-8, "n = {n}: {e}");
        }
    }

    #[test]
    fn budget_is_bounded() {
        let p = problem(|_| Complex64::new(0.0, 0.0), 0.0, 1.0, 1, 11);
        assert!(refine_until(&p, 1e-3, 7, &OracleConfig::default()).is_err());
    }
}
