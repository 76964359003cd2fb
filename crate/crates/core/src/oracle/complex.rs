use num_complex::Complex64;

use super::{Method, OracleConfig, SpectrumResult, TridiagonalHamiltonian};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Why the fast path gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum QlFailure {
    /// A rotation with `c^2 + s^2 = 1` needed `f^2 + g^2 ~ 0`.
    Breakdown,
    NoConvergence(usize),
}

/// Eigenvalues of the complex-symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` (`e[i]` couples `i` and `i + 1`), by implicit QL with
/// complex-orthogonal rotations.
///
/// Runs in `O(n^2)`. Complex-orthogonal rotations are unbounded, so the
/// iteration can break down; see [`eigen_complex`] for the fallback.
pub fn complex_symmetric_ql(d: &[Complex64], e: &[Complex64], max_iterations: usize) -> Result<Vec<Complex64>> {
    ql(d, e, max_iterations).map_err(|f| match f {
        QlFailure::Breakdown => Error::QrNonConvergence { iterations: 0 },
        QlFailure::NoConvergence(it) => Error::QrNonConvergence { iterations: it },
    })
}

fn ql(d_in: &[Complex64], e_in: &[Complex64], max_iterations: usize) -> std::result::Result<Vec<Complex64>, QlFailure> {
    let n = d_in.len();
    let mut d = d_in.to_vec();
    let mut e = vec![ZERO; n];
    e[..n.saturating_sub(1)].copy_from_slice(&e_in[..n.saturating_sub(1)]);
    let mut total = 0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total += 1;
            if iter > max_iterations {
                return Err(QlFailure::NoConvergence(total));
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + ONE).sqrt();
            let denom = if (g + r).norm() >= (g - r).norm() { g + r } else { g - r };
            if denom.norm() < 1e-300 {
                return Err(QlFailure::Breakdown);
            }
            g = d[m] - d[l] + e[l] / denom;
            let (mut s, mut c, mut p) = (ONE, ONE, ZERO);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                let scale = f.norm().max(g.norm());
                if scale == 0.0 {
                    d[i + 1] -= p;
                    e[m] = ZERO;
                    deflated = true;
                    break;
                }
                if r.norm() < 1e-6 * scale {
                    return Err(QlFailure::Breakdown);
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = ZERO;
        }
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(QlFailure::Breakdown);
    }
    Ok(d)
}

/// Eigenvalues of a dense upper Hessenberg matrix (row-major, `n x n`) by
/// single-shift QR with unitary Givens rotations and Wilkinson shifts.
pub fn hessenberg_qr_eigenvalues(a: &[Complex64], n: usize, max_iterations: usize) -> Result<Vec<Complex64>> {
    let mut h = a.to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    let mut hi = n.saturating_sub(1);
    let mut its = 0;
    let mut total = 0;
    let mut rot = Vec::with_capacity(n);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let s = h[idx(lo - 1, lo - 1)].norm() + h[idx(lo, lo)].norm();
            if h[idx(lo, lo - 1)].norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[idx(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if its > max_iterations {
            return Err(Error::QrNonConvergence { iterations: total });
        }

        let (a11, a12, a21, a22) = (
            h[idx(hi - 1, hi - 1)],
            h[idx(hi - 1, hi)],
            h[idx(hi, hi - 1)],
            h[idx(hi, hi)],
        );
        let shift = if its % 11 == 10 {
            // Exceptional shift to break cycles.
            a22 + h[idx(hi, hi - 1)].norm() * 0.75
        } else {
            let half = (a11 + a22) * 0.5;
            let disc = ((a11 - a22) * (a11 - a22) * 0.25 + a12 * a21).sqrt();
            let (m1, m2) = (half + disc, half - disc);
            if (m1 - a22).norm() <= (m2 - a22).norm() {
                m1
            } else {
                m2
            }
        };

        for j in lo..=hi {
            h[idx(j, j)] -= shift;
        }
        rot.clear();
        for k in lo..hi {
            let x = h[idx(k, k)];
            let y = h[idx(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (x / r, y / r) };
            rot.push((c, s));
            for j in k..=hi {
                let (u, v) = (h[idx(k, j)], h[idx(k + 1, j)]);
                h[idx(k, j)] = c.conj() * u + s.conj() * v;
                h[idx(k + 1, j)] = -s * u + c * v;
            }
        }
        for (off, &(c, s)) in rot.iter().enumerate() {
            let k = lo + off;
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let (u, v) = (h[idx(i, k)], h[idx(i, k + 1)]);
                h[idx(i, k)] = c * u + s * v;
                h[idx(i, k + 1)] = -s.conj() * u + c.conj() * v;
            }
        }
        for j in lo..=hi {
            h[idx(j, j)] += shift;
        }
    }
    Ok((0..n).map(|i| h[idx(i, i)]).collect())
}

/// Full spectrum of a (possibly non-Hermitian) discretization.
///
/// The complex-symmetric QL iteration runs first. If it breaks down or
/// stalls, the same matrix goes through dense Hessenberg QR. Either way the
/// matrix size must not exceed `cfg.qr_cap`.
pub fn eigen_complex(h: &TridiagonalHamiltonian, cfg: &OracleConfig) -> Result<SpectrumResult> {
    let n = h.size();
    if n > cfg.qr_cap {
        return Err(Error::SizeCap { size: n, cap: cfg.qr_cap });
    }
    let off = vec![Complex64::new(h.off_diagonal(), 0.0); n.saturating_sub(1)];
    let mut warnings = Vec::new();
    let values = match ql(h.diagonal(), &off, cfg.max_iterations) {
        Ok(v) => v,
        Err(why) => {
            warnings.push(format!("complex-symmetric QL failed ({why:?}); used dense Hessenberg QR"));
            let mut dense = vec![ZERO; n * n];
            for i in 0..n {
                dense[i * n + i] = h.diagonal()[i];
                if i + 1 < n {
                    dense[i * n + i + 1] = off[i];
                    dense[(i + 1) * n + i] = off[i];
                }
            }
            hessenberg_qr_eigenvalues(&dense, n, cfg.max_iterations)?
        }
    };
    let mut out = SpectrumResult::single_grid(
        values,
        Method::OracleComplex,
        h.grid().n_points(),
        h.grid().h(),
        cfg.real_threshold,
    );
    out.warnings = warnings;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, SampledFunction};
    use crate::oracle::{discretize, eigen_real, sort_spectrum};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        sort_spectrum(&mut v);
        v
    }

    #[test]
    fn two_by_two_hand_case() {
        let v = sorted(complex_symmetric_ql(&[c(0.0, 0.0); 2], &[c(0.0, 1.0)], 60).unwrap());
        assert!((v[0] - c(0.0, -1.0)).norm() < 1e-15 && (v[1] - c(0.0, 1.0)).norm() < 1e-15);
        let dense = [c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)];
        let v = sorted(hessenberg_qr_eigenvalues(&dense, 2, 60).unwrap());
        assert!((v[0] - c(0.0, -1.0)).norm() < 1e-15 && (v[1] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn isotropic_pair_breaks_the_fast_path() {
        // [[1, i], [i, -1]] is nilpotent; the complex-orthogonal rotation
        // degenerates, the unitary one does not.
        assert!(ql(&[c(1.0, 0.0), c(-1.0, 0.0)], &[c(0.0, 1.0)], 60).is_err());
        let dense = [c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(-1.0, 0.0)];
        for v in hessenberg_qr_eigenvalues(&dense, 2, 60).unwrap() {
            assert!(v.norm() < 1e-7);
        }
    }

    #[test]
    fn both_paths_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3usize, 8, 25, 60] {
            let d: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-5.0..5.0), rng.gen_range(-2.0..2.0))).collect();
            let e: Vec<Complex64> = (0..n - 1).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5))).collect();
            let a = sorted(complex_symmetric_ql(&d, &e, 60).unwrap());
            let mut dense = vec![ZERO; n * n];
            for i in 0..n {
                dense[i * n + i] = d[i];
                if i + 1 < n {
                    dense[i * n + i + 1] = e[i];
                    dense[(i + 1) * n + i] = e[i];
                }
            }
            let b = sorted(hessenberg_qr_eigenvalues(&dense, n, 60).unwrap());
            let tr: Complex64 = d.iter().sum();
            assert!((a.iter().sum::<Complex64>() - tr).norm() < 1e-10 * n as f64);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-9 * (1.0 + x.norm()), "n = {n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn real_input_agrees_with_bisection() {
        let g = Grid::new(-10.0, 10.0, 601).unwrap();
        let v = SampledFunction::from_real_fn(g, |x| x * x - 4.0 / x.cosh()).unwrap();
        let h = discretize(&v, 1.0).unwrap();
        let full = eigen_complex(&h, &OracleConfig::default()).unwrap();
        let real = eigen_real(&h, 5).unwrap();
        for (a, b) in full.eigenvalues.iter().zip(&real.eigenvalues) {
            assert!((a - b).norm() <= 1e-9, "{a} vs {b}");
        }
        for e in &full.eigenvalues {
            assert!(e.im.abs() <= 1e-10 * (1.0 + e.re.abs()));
        }
    }

    #[test]
    fn pt_oscillator_has_real_shifted_levels() {
        let g = Grid::new(-12.0, 12.0, 801).unwrap();
        let lambda = 1.0;
        let v = SampledFunction::from_fn(g, |x| c(x * x, lambda * x)).unwrap();
        let s = eigen_complex(&discretize(&v, 1.0).unwrap(), &OracleConfig::default()).unwrap();
        for n in 0..5 {
            let e = s.eigenvalues[n];
            assert!(e.im.abs() <= 1e-8, "n = {n}: {e}");
            assert!(s.numerically_real[n]);
            assert!((e.re - (2 * n + 1) as f64 - lambda * lambda / 4.0).abs() < 5e-3);
        }
    }

    #[test]
    fn size_cap() {
        let g = Grid::new(0.0, 1.0, 53).unwrap();
        let h = discretize(&SampledFunction::zeros(g), 1.0).unwrap();
        let cfg = OracleConfig {
            qr_cap: 50,
            ..OracleConfig::default()
        };
        assert_eq!(eigen_complex(&h, &cfg).unwrap_err(), Error::SizeCap { size: 51, cap: 50 });
    }
}
