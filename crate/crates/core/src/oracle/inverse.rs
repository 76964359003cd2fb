use num_complex::Complex64;

use super::TridiagonalHamiltonian;
use crate::calculus::l2_norm;
use crate::error::{Error, Result};
use crate::grid::SampledFunction;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// LU factors of a tridiagonal matrix with row interchanges.
struct TridiagonalLu {
    dl: Vec<Complex64>,
    d: Vec<Complex64>,
    du: Vec<Complex64>,
    du2: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(diag: &[Complex64], off: f64, shift: Complex64) -> Self {
        let n = diag.len();
        let mut d: Vec<Complex64> = diag.iter().map(|v| v - shift).collect();
        let mut dl = vec![Complex64::new(off, 0.0); n.saturating_sub(1)];
        let mut du = dl.clone();
        let mut du2 = vec![ZERO; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let tiny = f64::EPSILON * diag.iter().map(|v| v.norm()).fold(off.abs(), f64::max);
        for i in 0..n.saturating_sub(1) {
            if d[i].norm() >= dl[i].norm() {
                if d[i].norm() == 0.0 {
                    d[i] = Complex64::new(tiny, 0.0);
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1].norm() == 0.0 {
            d[n - 1] = Complex64::new(tiny, 0.0);
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [Complex64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] = b[i + 1] - self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Inverse iteration at a shift just off `lambda`, three sweeps.
fn interior_vector(h: &TridiagonalHamiltonian, lambda: Complex64) -> Vec<Complex64> {
    let n = h.size();
    let delta = 1e-10 * (1.0 + lambda.norm());
    let lu = TridiagonalLu::factor(h.diagonal(), h.off_diagonal(), lambda + delta);
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.5 * (0.7 * i as f64).sin(), 0.0))
        .collect();
    for _ in 0..3 {
        lu.solve(&mut v);
        let m = max_abs(&v);
        if m > 0.0 && m.is_finite() {
            v.iter_mut().for_each(|x| *x /= m);
        }
    }
    v
}

/// Eigenvectors for the given eigenvalues, on the full grid with zero end
/// values, unit trapezoid norm and the largest component real and positive.
pub fn eigenvectors(h: &TridiagonalHamiltonian, eigenvalues: &[Complex64]) -> Result<Vec<SampledFunction>> {
    eigenvalues
        .iter()
        .map(|&lambda| {
            let v = interior_vector(h, lambda);
            let peak = v
                .iter()
                .copied()
                .fold(ZERO, |best, x| if x.norm() > best.norm() { x } else { best });
            if peak.norm() == 0.0 {
                return Err(Error::InvalidParameter(format!("inverse iteration collapsed at {lambda}")));
            }
            let phase = peak / peak.norm();
            let mut full = Vec::with_capacity(v.len() + 2);
            full.push(ZERO);
            full.extend(v.iter().map(|x| x / phase));
            full.push(ZERO);
            let f = SampledFunction::new(*h.grid(), full)?;
            let norm = l2_norm(&f);
            f.scale(Complex64::new(1.0 / norm, 0.0))
        })
        .collect()
}

/// `max |H v - lambda v| / max |v|` over interior nodes.
pub fn eigenvector_residual(h: &TridiagonalHamiltonian, lambda: Complex64, v: &SampledFunction) -> f64 {
    let vals = v.values();
    let inner = &vals[1..vals.len() - 1];
    let hv = h.apply(inner);
    let r = hv.iter().zip(inner).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max);
    r / max_abs(inner)
}
