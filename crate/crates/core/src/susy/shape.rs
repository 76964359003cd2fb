use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

use super::operators::partner_potentials;
use super::{Convention, Superpotential};

/// One-parameter family of superpotentials `F(x; a)` with its
/// shape-invariance parameter map `a -> f(a)`.
pub trait SuperpotentialFamily: Send + Sync {
    fn member(&self, a: Complex64) -> Result<Superpotential>;

    fn parameter_map(&self, a: Complex64) -> Complex64;
}

/// `F(x; omega) = omega x`, mapped to itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct OscillatorFamily;

impl SuperpotentialFamily for OscillatorFamily {
    fn member(&self, a: Complex64) -> Result<Superpotential> {
        Ok(Superpotential::linear(a))
    }

    fn parameter_map(&self, a: Complex64) -> Complex64 {
        a
    }
}

/// Mean and spread of `D(x) = V_+(x; a1) - V_-(x; a2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeInvariance {
    /// Grid mean of `D`, the remainder `R(a2)`.
    pub r: Complex64,
    /// `max |D(x) - R|`; zero for an exactly shape-invariant pair.
    pub x_variance: f64,
    /// Whether `a2` equals the family's map of `a1` (to 1e-12 relative).
    pub map_consistent: bool,
}

pub fn shape_invariance_residual(
    family: &dyn SuperpotentialFamily,
    a1: Complex64,
    a2: Complex64,
    mu: f64,
    conv: Convention,
    grid: Grid,
) -> Result<ShapeInvariance> {
    let zero = Complex64::new(0.0, 0.0);
    let (_, vp1) = partner_potentials(&family.member(a1)?, mu, conv, zero, grid)?;
    let (vm2, _) = partner_potentials(&family.member(a2)?, mu, conv, zero, grid)?;
    let d: Vec<Complex64> = vp1.values().iter().zip(vm2.values()).map(|(p, m)| p - m).collect();
    let r = d.iter().sum::<Complex64>() / d.len() as f64;
    let x_variance = d.iter().map(|v| (v - r).norm()).fold(0.0, f64::max);
    let mapped = family.parameter_map(a1);
    let map_consistent = (mapped - a2).norm() <= 1e-12 * (1.0 + mapped.norm());
    Ok(ShapeInvariance {
        r,
        x_variance,
        map_consistent,
    })
}

/// One rung of the Hamiltonian hierarchy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyLevel {
    /// 1-based level index.
    pub k: usize,
    pub params: Complex64,
    /// `R(a_{k-1}, a_k)`; zero at level 1.
    pub residual: Complex64,
    /// Ground energy of `H_k` relative to `H_1`: the running sum of residuals.
    pub cumulative_energy: Complex64,
}

/// Iterates `a_{k+1} = param_map(a_k)` and accumulates
/// `E^(k) = sum_{j=2..k} R(a_{j-1}, a_j)`, so level 1 sits at zero.
///
/// Any failure to build a family member or evaluate `R` is reported as a
/// degenerate parameter at the offending level.
pub fn hierarchy_energies(
    family: &dyn SuperpotentialFamily,
    a1: Complex64,
    param_map: impl Fn(Complex64) -> Complex64,
    r_func: impl Fn(Complex64, Complex64) -> Result<Complex64>,
    n_levels: usize,
) -> Result<Vec<HierarchyLevel>> {
    if n_levels == 0 {
        return Err(Error::InvalidParameter("n_levels must be >= 1".into()));
    }
    let degenerate = |level: usize, e: Error| Error::DegenerateParameter {
        level,
        reason: e.to_string(),
    };

    family.member(a1).map_err(|e| degenerate(1, e))?;
    let mut levels = vec![HierarchyLevel {
        k: 1,
        params: a1,
        residual: Complex64::new(0.0, 0.0),
        cumulative_energy: Complex64::new(0.0, 0.0),
    }];
    for k in 2..=n_levels {
        let prev = levels[k - 2];
        let a = param_map(prev.params);
        family.member(a).map_err(|e| degenerate(k, e))?;
        let r = r_func(prev.params, a).map_err(|e| degenerate(k, e))?;
        levels.push(HierarchyLevel {
            k,
            params: a,
            residual: r,
            cumulative_energy: prev.cumulative_energy + r,
        });
    }
    Ok(levels)
}
