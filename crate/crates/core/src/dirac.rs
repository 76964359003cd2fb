//! Reduction of the one-dimensional Dirac equation with a (possibly complex)
//! potential `nu(x)` to a Schrodinger-like problem for the upper combination.
//!
//! With `Phi = u1 + i u2` and `chi = u1 - i u2` the spinor equations
//!
//! ```text
//! u1' + (eps - nu) u2 + M u2 = 0
//! u2' - (eps - nu) u1 + M u1 = 0
//! ```
//!
//! become `Phi' = -iM chi + i(eps - nu) Phi`, `chi' = iM Phi - i(eps - nu) chi`,
//! and eliminating `chi` gives `-Phi'' + U Phi = 0` with
//! `U = 2 eps nu - nu^2 - i nu' - eps^2 + M^2`.
//!
//! The energy lives inside `U`. [`schrodinger_form`] rescales the same
//! equation to `-mu^2 Phi'' + V Phi = E Phi`; that identification of `V` and
//! `E` is one algebraic choice among several and is offered as a convenience,
//! not as the unique bridge.

use num_complex::Complex64;

use crate::calculus::{derivative, derivative_fourth_order, second_derivative};
use crate::error::Result;
use crate::grid::{Grid, SampledFunction};
use crate::params::PhysicalConfig;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// The two Dirac spinor components on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorPair {
    u1: SampledFunction,
    u2: SampledFunction,
}

impl SpinorPair {
    pub fn new(u1: SampledFunction, u2: SampledFunction) -> Result<Self> {
        u1.ensure_same_grid(&u2)?;
        Ok(Self { u1, u2 })
    }

    pub fn u1(&self) -> &SampledFunction {
        &self.u1
    }

    pub fn u2(&self) -> &SampledFunction {
        &self.u2
    }

    pub fn grid(&self) -> &Grid {
        self.u1.grid()
    }
}

/// `Phi = u1 + i u2` and `chi = u1 - i u2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedPair {
    phi: SampledFunction,
    chi: SampledFunction,
}

impl CombinedPair {
    pub fn new(phi: SampledFunction, chi: SampledFunction) -> Result<Self> {
        phi.ensure_same_grid(&chi)?;
        Ok(Self { phi, chi })
    }

    pub fn phi(&self) -> &SampledFunction {
        &self.phi
    }

    pub fn chi(&self) -> &SampledFunction {
        &self.chi
    }
}

pub fn combine_spinors(s: &SpinorPair) -> CombinedPair {
    let phi = s.u1.zip_with(&s.u2, |_, a, b| a + I * b);
    let chi = s.u1.zip_with(&s.u2, |_, a, b| a - I * b);
    CombinedPair {
        phi: phi.expect("spinor components share a grid"),
        chi: chi.expect("spinor components share a grid"),
    }
}

pub fn split_spinors(c: &CombinedPair) -> SpinorPair {
    let u1 = c.phi.zip_with(&c.chi, |_, p, x| 0.5 * (p + x));
    let u2 = c.phi.zip_with(&c.chi, |_, p, x| (p - x) / (2.0 * I));
    SpinorPair {
        u1: u1.expect("combined pair shares a grid"),
        u2: u2.expect("combined pair shares a grid"),
    }
}

fn effective_from_parts(
    nu: &SampledFunction,
    dnu: &SampledFunction,
    cfg: &PhysicalConfig,
) -> Result<SampledFunction> {
    let eps = cfg.epsilon();
    let m2 = cfg.mass() * cfg.mass();
    nu.zip_with(dnu, |_, v, dv| 2.0 * eps * v - v * v - I * dv - eps * eps + m2)
}

/// `U(x) = 2 eps nu - nu^2 - i nu' - eps^2 + M^2` with `nu'` by finite
/// differences.
pub fn effective_potential(nu: &SampledFunction, cfg: &PhysicalConfig) -> Result<SampledFunction> {
    let dnu = derivative(nu)?;
    effective_from_parts(nu, &dnu, cfg)
}

/// Same as [`effective_potential`] with an exact derivative supplied by the
/// caller.
pub fn effective_potential_analytic(
    grid: Grid,
    cfg: &PhysicalConfig,
    nu: impl Fn(f64) -> Complex64,
    dnu: impl Fn(f64) -> Complex64,
) -> Result<SampledFunction> {
    let nu_s = SampledFunction::from_fn(grid, nu)?;
    let dnu_s = SampledFunction::from_fn(grid, dnu)?;
    effective_from_parts(&nu_s, &dnu_s, cfg)
}

/// Standard-form view `-mu^2 Phi'' + V Phi = E Phi` of the reduced equation:
/// `V = mu^2 (2 eps nu - nu^2 - i nu')` and `E = mu^2 eps^2 - 1`.
pub fn schrodinger_form(nu: &SampledFunction, cfg: &PhysicalConfig) -> Result<(SampledFunction, f64)> {
    let mu2 = cfg.mu() * cfg.mu();
    let eps = cfg.epsilon();
    let dnu = derivative(nu)?;
    let v = nu.zip_with(&dnu, |_, v, dv| mu2 * (2.0 * eps * v - v * v - I * dv))?;
    Ok((v, mu2 * eps * eps - 1.0))
}

/// Max-norm of `-Phi'' + U Phi`.
pub fn reduced_residual(phi: &SampledFunction, nu: &SampledFunction, cfg: &PhysicalConfig) -> Result<f64> {
    phi.ensure_same_grid(nu)?;
    let u = effective_potential(nu, cfg)?;
    let d2 = second_derivative(phi)?;
    let res = phi
        .values()
        .iter()
        .zip(d2.values())
        .zip(u.values())
        .map(|((p, d), uu)| (-d + uu * p).norm())
        .fold(0.0, f64::max);
    Ok(res)
}

/// Lower combination recovered from `Phi`, with the residuals of both
/// first-order equations.
#[derive(Debug, Clone)]
pub struct ChiRecovery {
    pub chi: SampledFunction,
    /// `max |Phi' + iM chi - i(eps - nu) Phi|`.
    pub phi_equation_residual: f64,
    /// `max |chi' - iM Phi + i(eps - nu) chi|`; small only when `Phi` solves
    /// the reduced equation.
    pub chi_equation_residual: f64,
}

/// Solves `Phi' = -iM chi + i(eps - nu) Phi` for `chi`:
/// `chi = ((eps - nu) Phi + i Phi') / M`.
pub fn recover_chi(phi: &SampledFunction, nu: &SampledFunction, cfg: &PhysicalConfig) -> Result<ChiRecovery> {
    phi.ensure_same_grid(nu)?;
    let m = cfg.mass();
    let eps = cfg.epsilon();
    let dphi = derivative_fourth_order(phi)?;

    let chi_vals: Vec<Complex64> = phi
        .values()
        .iter()
        .zip(dphi.values())
        .zip(nu.values())
        .map(|((p, dp), v)| ((eps - v) * p + I * dp) / m)
        .collect();
    let chi = SampledFunction::new(*phi.grid(), chi_vals)?;
    // chi' by the product rule; differencing chi itself would amplify the
    // one-sided endpoint error of Phi' by 1/h.
    let d2phi = second_derivative(phi)?;
    let dnu = derivative(nu)?;
    let dchi_vals: Vec<Complex64> = (0..phi.len())
        .map(|i| {
            let w = eps - nu.values()[i];
            (-dnu.values()[i] * phi.values()[i] + w * dphi.values()[i] + I * d2phi.values()[i]) / m
        })
        .collect();
    let dchi = SampledFunction::new(*phi.grid(), dchi_vals)?;

    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    for i in 0..phi.len() {
        let p = phi.values()[i];
        let x = chi.values()[i];
        let w = eps - nu.values()[i];
        r1 = r1.max((dphi.values()[i] + I * m * x - I * w * p).norm());
        r2 = r2.max((dchi.values()[i] - I * m * p + I * w * x).norm());
    }
    Ok(ChiRecovery {
        chi,
        phi_equation_residual: r1,
        chi_equation_residual: r2,
    })
}

/// Max-norm residuals of `u1' + (eps - nu) u2 + M u2` and
/// `u2' - (eps - nu) u1 + M u1`.
pub fn dirac_residual(s: &SpinorPair, nu: &SampledFunction, cfg: &PhysicalConfig) -> Result<(f64, f64)> {
    s.u1.ensure_same_grid(nu)?;
    let m = cfg.mass();
    let eps = cfg.epsilon();
    let d1 = derivative(&s.u1)?;
    let d2 = derivative(&s.u2)?;
    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    for i in 0..nu.len() {
        let w = eps - nu.values()[i];
        let (a, b) = (s.u1.values()[i], s.u2.values()[i]);
        r1 = r1.max((d1.values()[i] + w * b + m * b).norm());
        r2 = r2.max((d2.values()[i] - w * a + m * a).norm());
    }
    Ok((r1, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn grid() -> Grid {
        Grid::new(0.0, 10.0, 401).unwrap()
    }

    fn constant(g: Grid, v: Complex64) -> SampledFunction {
        SampledFunction::from_fn(g, |_| v).unwrap()
    }

    #[test]
    fn combine_unit_cases() {
        let g = grid();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let c = combine_spinors(&SpinorPair::new(constant(g, one), constant(g, zero)).unwrap());
        assert!(c.phi().values().iter().all(|&v| v == one));
        assert!(c.chi().values().iter().all(|&v| v == one));

        let c = combine_spinors(&SpinorPair::new(constant(g, zero), constant(g, one)).unwrap());
        assert!(c.phi().values().iter().all(|&v| v == I));
        assert!(c.chi().values().iter().all(|&v| v == -I));
    }

    #[test]
    fn split_unit_cases() {
        let g = grid();
        let one = Complex64::new(1.0, 0.0);
        let s = split_spinors(&CombinedPair::new(constant(g, one), constant(g, one)).unwrap());
        assert!(s.u1().values().iter().all(|v| (v - one).norm() < 1e-15));
        assert!(s.u2().max_abs() < 1e-15);

        let s = split_spinors(&CombinedPair::new(constant(g, I), constant(g, -I)).unwrap());
        assert!(s.u1().max_abs() < 1e-15);
        assert!(s.u2().values().iter().all(|v| (v - one).norm() < 1e-15));
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = SampledFunction::zeros(Grid::new(0.0, 1.0, 5).unwrap());
        let b = SampledFunction::zeros(Grid::new(0.0, 1.0, 7).unwrap());
        assert_eq!(SpinorPair::new(a.clone(), b.clone()), Err(Error::GridMismatch));
        assert_eq!(CombinedPair::new(a, b), Err(Error::GridMismatch));
    }

    #[test]
    fn free_effective_potential_is_constant() {
        let g = grid();
        let cfg = PhysicalConfig::new(1.0, 2.0).unwrap();
        let u = effective_potential(&SampledFunction::zeros(g), &cfg).unwrap();
        assert!(u.values().iter().all(|v| (v - Complex64::new(-3.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn constant_potential_completes_the_square() {
        let g = grid();
        for (eps, m, v0) in [(2.0, 1.0, 0.5), (-1.0, 3.0, 2.0), (0.3, 0.7, -4.0)] {
            let cfg = PhysicalConfig::new(m, eps).unwrap();
            let nu = constant(g, Complex64::new(v0, 0.0));
            let u = effective_potential(&nu, &cfg).unwrap();
            let expect = m * m - (eps - v0) * (eps - v0);
            let mean: f64 = u.values().iter().map(|v| v.re).sum::<f64>() / u.len() as f64;
            let var: f64 = u.values().iter().map(|v| (v.re - mean).powi(2) + v.im.powi(2)).sum::<f64>()
                / u.len() as f64;
            assert!((mean - expect).abs() < 1e-12);
            assert!(var <= 1e-20);
        }
    }

    #[test]
    fn zero_phi_gives_zero_chi() {
        let g = grid();
        let cfg = PhysicalConfig::new(1.0, 1.5).unwrap();
        let nu = SampledFunction::from_real_fn(g, |x| (-x).exp()).unwrap();
        let rec = recover_chi(&SampledFunction::zeros(g), &nu, &cfg).unwrap();
        assert_eq!(rec.chi.max_abs(), 0.0);
    }

    #[test]
    fn plane_wave_recovery() {
        let g = Grid::new(0.0, 10.0, 4001).unwrap();
        let (m, k) = (1.0f64, 0.8f64);
        let eps = (k * k + m * m).sqrt();
        let cfg = PhysicalConfig::new(m, eps).unwrap();
        let phi = SampledFunction::from_fn(g, |x| (I * k * x).exp()).unwrap();
        let nu = SampledFunction::zeros(g);
        let rec = recover_chi(&phi, &nu, &cfg).unwrap();
        let factor = (eps - k) / m;
        for (x, chi) in g.nodes().zip(rec.chi.values()) {
            assert!((chi - factor * (I * k * x).exp()).norm() < 1e-5);
        }
        assert!(rec.phi_equation_residual < 1e-12);
        assert!(rec.chi_equation_residual <= 1e-6, "{}", rec.chi_equation_residual);
    }

    #[test]
    fn residual_of_zero_spinors() {
        let g = grid();
        let cfg = PhysicalConfig::new(1.0, 0.5).unwrap();
        let z = SampledFunction::zeros(g);
        let s = SpinorPair::new(z.clone(), z.clone()).unwrap();
        assert_eq!(dirac_residual(&s, &z, &cfg).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn schrodinger_form_matches_scaled_reduction() {
        let g = grid();
        let cfg = PhysicalConfig::new(2.0, 1.3).unwrap();
        let nu = SampledFunction::from_real_fn(g, |x| -3.0 / (1.0 + (x - 5.0).exp())).unwrap();
        let (v, e) = schrodinger_form(&nu, &cfg).unwrap();
        let u = effective_potential(&nu, &cfg).unwrap();
        let mu2 = cfg.mu() * cfg.mu();
        for (vv, uu) in v.values().iter().zip(u.values()) {
            // mu^2 U = V - E
            assert!((mu2 * uu - (vv - e)).norm() < 1e-12);
        }
    }
}
