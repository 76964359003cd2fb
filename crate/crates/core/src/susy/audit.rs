use num_complex::Complex64;

use crate::calculus::{derivative, second_derivative};
use crate::error::Result;
use crate::grid::{Grid, SampledFunction};
use crate::params::PhysicalConfig;

use super::operators::{apply_lowering, apply_raising, partner_potentials};
use super::{Convention, Superpotential};

/// Smooth test functions that decay to ~1e-11 at both ends of `grid`:
/// modulated Gaussians centred across the middle third of the interval,
/// each scaled to unit max-modulus.
pub fn default_test_functions(grid: Grid, count: usize) -> Vec<SampledFunction> {
    let len = grid.x_max() - grid.x_min();
    let sigma = len / 20.0;
    (0..count)
        .map(|j| {
            let frac = if count > 1 { j as f64 / (count - 1) as f64 } else { 0.5 };
            let centre = grid.x_min() + len * (0.4 + 0.2 * frac);
            let k = (j as f64 - 1.0) / sigma;
            SampledFunction::from_fn(grid, |x| {
                let t = (x - centre) / sigma;
                let env = (-0.5 * t * t).exp();
                Complex64::from_polar(env, k * (x - centre))
            })
            .expect("gaussian samples are finite")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConventionResidual {
    pub convention: Convention,
    pub residual: f64,
}

/// Per-convention residuals of `raising(lowering(psi)) + E0 psi` against
/// `-mu^2 psi'' + V psi`, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub entries: Vec<ConventionResidual>,
}

impl FactorizationReport {
    pub fn best(&self) -> &ConventionResidual {
        &self.entries[0]
    }

    pub fn residual(&self, conv: Convention) -> f64 {
        self.entries
            .iter()
            .find(|e| e.convention == conv)
            .map(|e| e.residual)
            .expect("every convention is audited")
    }

    /// Conventions whose residual is at most `tol`.
    pub fn realized_by(&self, tol: f64) -> Vec<Convention> {
        self.entries
            .iter()
            .filter(|e| e.residual <= tol)
            .map(|e| e.convention)
            .collect()
    }
}

pub fn factorization_audit(
    f: &Superpotential,
    mu: f64,
    v: &SampledFunction,
    e0: Complex64,
    test_functions: &[SampledFunction],
) -> Result<FactorizationReport> {
    let mut entries = Vec::with_capacity(3);
    for conv in Convention::ALL {
        let mut worst = 0.0f64;
        for psi in test_functions {
            psi.ensure_same_grid(v)?;
            let factored = apply_raising(f, mu, conv, &apply_lowering(f, mu, conv, psi)?)?;
            let d2 = second_derivative(psi)?;
            for i in 0..psi.len() {
                let p = psi.values()[i];
                let direct = -mu * mu * d2.values()[i] + v.values()[i] * p;
                worst = worst.max((factored.values()[i] + e0 * p - direct).norm());
            }
        }
        entries.push(ConventionResidual {
            convention: conv,
            residual: worst,
        });
    }
    entries.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    Ok(FactorizationReport { entries })
}

/// Outcome of applying the 2x2 supercharges `Q = [[0,0],[L,0]]` and
/// `Q+ = [[0,R],[0,0]]` (L lowering, R raising) to two-component test
/// vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperchargeReport {
    pub convention: Convention,
    /// `max |Q Q psi|`; zero by the block pattern.
    pub q_squared: f64,
    /// `max |Q+ Q+ psi|`; zero by the block pattern.
    pub q_dagger_squared: f64,
    /// `max |{Q, Q+} psi - diag(R L, L R) psi|`.
    pub anticommutator: f64,
    /// `max |diag(R L, L R) psi - diag(H_-, H_+) psi|` with
    /// `H_-/+ = -mu^2 d^2 + V_-/+` from the same convention.
    pub hamiltonian_deviation: f64,
}

type Spinor = (SampledFunction, SampledFunction);

fn apply_q(f: &Superpotential, mu: f64, conv: Convention, s: &Spinor) -> Result<Spinor> {
    let grid = *s.0.grid();
    Ok((SampledFunction::zeros(grid), apply_lowering(f, mu, conv, &s.0)?))
}

fn apply_q_dagger(f: &Superpotential, mu: f64, conv: Convention, s: &Spinor) -> Result<Spinor> {
    let grid = *s.0.grid();
    Ok((apply_raising(f, mu, conv, &s.1)?, SampledFunction::zeros(grid)))
}

fn spinor_max(s: &Spinor) -> f64 {
    s.0.max_abs().max(s.1.max_abs())
}

pub fn supercharge_algebra_check(
    f: &Superpotential,
    mu: f64,
    conv: Convention,
    test_functions: &[SampledFunction],
) -> Result<SuperchargeReport> {
    let mut report = SuperchargeReport {
        convention: conv,
        q_squared: 0.0,
        q_dagger_squared: 0.0,
        anticommutator: 0.0,
        hamiltonian_deviation: 0.0,
    };
    let Some(first) = test_functions.first() else {
        return Ok(report);
    };
    let grid = *first.grid();
    let zero = SampledFunction::zeros(grid);
    let (vm, vp) = partner_potentials(f, mu, conv, Complex64::new(0.0, 0.0), grid)?;

    let mut spinors: Vec<Spinor> = Vec::new();
    for (j, psi) in test_functions.iter().enumerate() {
        spinors.push((psi.clone(), zero.clone()));
        spinors.push((zero.clone(), psi.clone()));
        let other = &test_functions[(j + 1) % test_functions.len()];
        spinors.push((psi.clone(), other.clone()));
    }

    for s in &spinors {
        s.0.ensure_same_grid(&s.1)?;
        let qq = apply_q(f, mu, conv, &apply_q(f, mu, conv, s)?)?;
        let dd = apply_q_dagger(f, mu, conv, &apply_q_dagger(f, mu, conv, s)?)?;
        report.q_squared = report.q_squared.max(spinor_max(&qq));
        report.q_dagger_squared = report.q_dagger_squared.max(spinor_max(&dd));

        let a = apply_q(f, mu, conv, &apply_q_dagger(f, mu, conv, s)?)?;
        let b = apply_q_dagger(f, mu, conv, &apply_q(f, mu, conv, s)?)?;
        let anti0 = a.0.zip_with(&b.0, |_, x, y| x + y)?;
        let anti1 = a.1.zip_with(&b.1, |_, x, y| x + y)?;

        let h_minus = apply_raising(f, mu, conv, &apply_lowering(f, mu, conv, &s.0)?)?;
        let h_plus = apply_lowering(f, mu, conv, &apply_raising(f, mu, conv, &s.1)?)?;
        report.anticommutator = report
            .anticommutator
            .max(anti0.max_abs_diff(&h_minus)?)
            .max(anti1.max_abs_diff(&h_plus)?);

        let d2a = second_derivative(&s.0)?;
        let d2b = second_derivative(&s.1)?;
        for i in 0..grid.n_points() {
            let ea = -mu * mu * d2a.values()[i] + vm.values()[i] * s.0.values()[i];
            let eb = -mu * mu * d2b.values()[i] + vp.values()[i] * s.1.values()[i];
            report.hamiltonian_deviation = report
                .hamiltonian_deviation
                .max((h_minus.values()[i] - ea).norm())
                .max((h_plus.values()[i] - eb).norm());
        }
    }
    Ok(report)
}

/// Imaginary part `Z = -mu F'` of the effective potential together with two
/// consistency diagnostics.
#[derive(Debug, Clone)]
pub struct PotentialParts {
    pub z: SampledFunction,
    /// `max |Z' + mu F''|` with both sides by finite differences.
    pub derivative_identity_residual: f64,
    /// `max |2 mu^3 (eps - nu) nu' - 2 Z F|`, evaluated as printed.
    pub coupling_residual: f64,
}

pub fn decompose_potential_parts(
    f: &Superpotential,
    nu: &SampledFunction,
    cfg: &PhysicalConfig,
) -> Result<PotentialParts> {
    let grid = *nu.grid();
    let mu = cfg.mu();
    let z = f.sample_deriv(grid)?.scale(Complex64::new(-mu, 0.0))?;
    let dz = derivative(&z)?;
    let f_s = f.sample(grid)?;
    let d2f = second_derivative(&f_s)?;
    let derivative_identity_residual = dz
        .values()
        .iter()
        .zip(d2f.values())
        .map(|(a, b)| (a + mu * b).norm())
        .fold(0.0, f64::max);

    let dnu = derivative(nu)?;
    let eps = cfg.epsilon();
    let coupling_residual = (0..grid.n_points())
        .map(|i| {
            let lhs = 2.0 * mu.powi(3) * (eps - nu.values()[i]) * dnu.values()[i];
            let rhs = 2.0 * z.values()[i] * f_s.values()[i];
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max);

    Ok(PotentialParts {
        z,
        derivative_identity_residual,
        coupling_residual,
    })
}
