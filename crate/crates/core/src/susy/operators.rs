use num_complex::Complex64;

use crate::calculus::{cumulative_integral, derivative, normalize};
use crate::error::Result;
use crate::grid::{Grid, SampledFunction};

use super::{Convention, Superpotential};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Partner potentials `(V_-, V_+)` on `grid` under `conv`.
pub fn partner_potentials(
    f: &Superpotential,
    mu: f64,
    conv: Convention,
    alpha0: Complex64,
    grid: Grid,
) -> Result<(SampledFunction, SampledFunction)> {
    let pairs: Vec<(Complex64, Complex64)> = grid
        .nodes()
        .map(|x| conv.partner_values(f.eval(x), f.eval_deriv(x), mu, alpha0))
        .collect();
    let vm = SampledFunction::new(grid, pairs.iter().map(|p| p.0).collect())?;
    let vp = SampledFunction::new(grid, pairs.iter().map(|p| p.1).collect())?;
    Ok((vm, vp))
}

/// `max |V - (F^2 - k mu F') - E0|` where `k` is the convention's
/// derivative coefficient, i.e. how far `V` is from `V_- + E0`.
pub fn riccati_residual(f: &Superpotential, v: &SampledFunction, e0: Complex64, mu: f64, conv: Convention) -> f64 {
    let grid = v.grid();
    v.values()
        .iter()
        .enumerate()
        .map(|(i, &vv)| {
            let x = grid.x(i);
            let (vm, _) = conv.partner_values(f.eval(x), f.eval_deriv(x), mu, e0);
            (vv - vm).norm()
        })
        .fold(0.0, f64::max)
}

/// Lowering operator: `mu psi' + iF psi` (i-weighted) or `mu psi' + F psi`.
pub fn apply_lowering(
    f: &Superpotential,
    mu: f64,
    conv: Convention,
    psi: &SampledFunction,
) -> Result<SampledFunction> {
    let dpsi = derivative(psi)?;
    let k = conv.lowering_potential_factor();
    psi.zip_with(&dpsi, |x, p, dp| mu * dp + k * f.eval(x) * p)
}

/// Raising operator: `-i mu psi' + F psi` (i-weighted), `-mu psi' + conj(F) psi`
/// (standard) or `-mu psi' + F psi` (transpose).
pub fn apply_raising(
    f: &Superpotential,
    mu: f64,
    conv: Convention,
    psi: &SampledFunction,
) -> Result<SampledFunction> {
    let dpsi = derivative(psi)?;
    match conv {
        Convention::PaperSec4 => psi.zip_with(&dpsi, |x, p, dp| -I * mu * dp + f.eval(x) * p),
        Convention::Standard => psi.zip_with(&dpsi, |x, p, dp| -mu * dp + f.eval(x).conj() * p),
        Convention::TransposeAdjoint => psi.zip_with(&dpsi, |x, p, dp| -mu * dp + f.eval(x) * p),
    }
}

/// Unnormalized kernel of the convention's lowering operator,
/// `exp(-(k/mu) int_{x_min}^x F)`, scaled so its largest modulus is 1.
pub fn ground_state_kernel(f: &Superpotential, mu: f64, grid: Grid, conv: Convention) -> Result<SampledFunction> {
    let k = conv.lowering_potential_factor();
    let cum = cumulative_integral(&f.sample(grid)?);
    let exponent: Vec<Complex64> = cum.values().iter().map(|s| -k * s / mu).collect();
    let peak = exponent.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    let values = exponent.iter().map(|e| (e - peak).exp()).collect();
    SampledFunction::new(grid, values)
}

/// Ground state from the superpotential, normalized to unit trapezoid norm.
///
/// Fails with [`crate::Error::NonNormalizable`] when the kernel does not
/// decay toward one of the boundaries.
pub fn ground_state_from_superpotential(
    f: &Superpotential,
    mu: f64,
    grid: Grid,
    conv: Convention,
) -> Result<SampledFunction> {
    normalize(&ground_state_kernel(f, mu, grid, conv)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{bilinear, inner, l2_norm, overlap};
    use crate::error::{Error, Growth};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn oscillator_states(grid: Grid) -> (SampledFunction, SampledFunction) {
        let g0 = SampledFunction::from_real_fn(grid, |x| (-x * x / 2.0).exp()).unwrap();
        let g1 = SampledFunction::from_real_fn(grid, |x| x * (-x * x / 2.0).exp()).unwrap();
        (g0, g1)
    }

    #[test]
    fn harmonic_partners() {
        let g = Grid::new(-5.0, 5.0, 101).unwrap();
        let f = Superpotential::linear(re(1.0));
        let (vm, vp) = partner_potentials(&f, 1.0, Convention::Standard, re(0.0), g).unwrap();
        for (i, x) in g.nodes().enumerate() {
            assert!((vm.values()[i] - re(x * x - 1.0)).norm() < 1e-14);
            assert!((vp.values()[i] - re(x * x + 1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_superpotential_partners_coincide() {
        let g = Grid::new(0.0, 3.0, 31).unwrap();
        let f = Superpotential::constant(Complex64::new(0.7, 0.2));
        let alpha0 = Complex64::new(-1.0, 0.5);
        for conv in Convention::ALL {
            let (vm, vp) = partner_potentials(&f, 1.3, conv, alpha0, g).unwrap();
            let expect = Complex64::new(0.7, 0.2).powi(2) + alpha0;
            assert!(vm.max_abs_diff(&vp).unwrap() == 0.0);
            assert!((vm.values()[0] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn riccati_oscillator_and_sensitivity() {
        let g = Grid::new(-6.0, 6.0, 241).unwrap();
        let v = SampledFunction::from_real_fn(g, |x| x * x).unwrap();
        let f = Superpotential::linear(re(1.0));
        assert!(riccati_residual(&f, &v, re(1.0), 1.0, Convention::Standard) <= 1e-12);
        let perturbed = f.shifted(re(0.1));
        assert!(riccati_residual(&perturbed, &v, re(1.0), 1.0, Convention::Standard) >= 0.01);
    }

    #[test]
    fn gaussian_ground_state() {
        let g = Grid::new(-8.0, 8.0, 1601).unwrap();
        let f = Superpotential::linear(re(1.0));
        let phi = ground_state_from_superpotential(&f, 1.0, g, Convention::Standard).unwrap();
        assert!((l2_norm(&phi) - 1.0).abs() < 1e-12);
        let ratios: Vec<Complex64> = g
            .nodes()
            .zip(phi.values())
            .filter(|(x, _)| x.abs() < 5.0)
            .map(|(x, p)| p / (-x * x / 2.0).exp())
            .collect();
        for r in &ratios {
            assert!((r - ratios[0]).norm() <= 1e-8 * ratios[0].norm());
        }
    }

    #[test]
    fn constant_superpotential_kernel_is_exponential() {
        let (f0, mu, l) = (0.8, 0.5, 6.0);
        let g = Grid::new(0.0, l, 601).unwrap();
        let f = Superpotential::constant(re(f0));
        let k = ground_state_kernel(&f, mu, g, Convention::Standard).unwrap();
        for (x, v) in g.nodes().zip(k.values()) {
            assert!((v - re((-f0 * x / mu).exp())).norm() < 1e-12);
        }
        // On its own the exponential keeps its maximum at x_min, which the
        // normalizer reports as growth toward the left boundary.
        assert_eq!(
            ground_state_from_superpotential(&f, mu, g, Convention::Standard),
            Err(Error::NonNormalizable(Growth::Left))
        );
    }

    #[test]
    fn lowering_annihilates_its_kernel() {
        let g = Grid::new(-8.0, 8.0, 2001).unwrap();
        let f = Superpotential::linear(re(1.0));
        for conv in Convention::ALL {
            let phi = ground_state_kernel(&f, 1.0, g, conv).unwrap();
            let lowered = apply_lowering(&f, 1.0, conv, &phi).unwrap();
            let h2 = g.h() * g.h();
            let ratio = lowered.max_abs() / phi.max_abs();
            // Paper kernel is a chirp exp(-i x^2/2); its derivative error
            // carries an extra |x|^3 factor at the edges.
            let c = if conv == Convention::PaperSec4 { 200.0 } else { 2.0 };
            assert!(ratio <= c * h2, "{conv}: {ratio:e} vs {:e}", c * h2);
        }
    }

    #[test]
    fn lowering_of_zero_superpotential_is_pure_derivative() {
        let g = Grid::new(0.0, 2.0, 41).unwrap();
        let psi = SampledFunction::from_real_fn(g, |x| x.sin()).unwrap();
        let f = Superpotential::constant(re(0.0));
        let out = apply_lowering(&f, 0.7, Convention::Standard, &psi).unwrap();
        let d = derivative(&psi).unwrap().scale(re(0.7)).unwrap();
        assert_eq!(out, d);
    }

    #[test]
    fn ladder_action_on_oscillator_states() {
        let g = Grid::new(-10.0, 10.0, 4001).unwrap();
        let f = Superpotential::linear(re(1.0));
        let (g0, g1) = oscillator_states(g);

        let lowered = apply_lowering(&f, 1.0, Convention::Standard, &g1).unwrap();
        assert!(overlap(&lowered, &g0).unwrap() >= 1.0 - 1e-6);

        let raised = apply_raising(&f, 1.0, Convention::Standard, &g0).unwrap();
        assert!(overlap(&raised, &g1).unwrap() >= 1.0 - 1e-6);

        let zero = SampledFunction::zeros(g);
        assert_eq!(apply_raising(&f, 1.0, Convention::Standard, &zero).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn raising_is_the_adjoint_or_transpose_of_lowering() {
        let g = Grid::new(-6.0, 6.0, 1201).unwrap();
        let f = Superpotential::new(
            "complex-tanh",
            vec![],
            |x| Complex64::new(x.tanh(), 0.3 / x.cosh()),
            |x| Complex64::new(1.0 / x.cosh().powi(2), -0.3 * x.tanh() / x.cosh()),
        );
        let bump = |c: f64, k: f64| {
            SampledFunction::from_fn(g, move |x| {
                let e = (-(x - c) * (x - c) * 2.0).exp();
                Complex64::new(e * (k * x).cos(), e * (k * x).sin())
            })
            .unwrap()
        };
        let phi = bump(-0.5, 1.3);
        let psi = bump(0.4, -0.7);
        let mu = 0.8;

        // Hermitian adjoint under <a, b> = int conj(a) b.
        let lhs = inner(&phi, &apply_raising(&f, mu, Convention::Standard, &psi).unwrap()).unwrap();
        let rhs = inner(&apply_lowering(&f, mu, Convention::Standard, &phi).unwrap(), &psi).unwrap();
        assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");

        // Formal transpose under (a, b) = int a b.
        let lhs = bilinear(&phi, &apply_raising(&f, mu, Convention::TransposeAdjoint, &psi).unwrap()).unwrap();
        let rhs = bilinear(&apply_lowering(&f, mu, Convention::TransposeAdjoint, &phi).unwrap(), &psi).unwrap();
        assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");

        // The printed operator pair is neither.
        let lhs = inner(&phi, &apply_raising(&f, mu, Convention::PaperSec4, &psi).unwrap()).unwrap();
        let rhs = inner(&apply_lowering(&f, mu, Convention::PaperSec4, &phi).unwrap(), &psi).unwrap();
        assert!((lhs - rhs).norm() > 1e-3);
    }
}
