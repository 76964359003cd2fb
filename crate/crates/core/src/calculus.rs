//! Finite-difference derivatives and trapezoid quadrature on uniform grids.
//!
//! Every stencil here is at least second-order accurate, including the
//! one-sided boundary stencils, so error estimates scale uniformly as `h^2`.

use num_complex::Complex64;

use crate::error::{Error, Growth, Result};
use crate::grid::{Grid, SampledFunction};

/// Fraction of the peak modulus a boundary value may keep before the state
/// counts as not decaying there.
pub const NORMALIZABLE_TAIL: f64 = 1e-3;

fn require_three(grid: &Grid) -> Result<()> {
    if grid.n_points() < 3 {
        return Err(Error::InvalidGrid("derivative needs at least 3 nodes".into()));
    }
    Ok(())
}

/// First derivative: central differences inside, one-sided second-order
/// stencils at the two endpoints.
pub fn derivative(f: &SampledFunction) -> Result<SampledFunction> {
    let grid = *f.grid();
    require_three(&grid)?;
    let v = f.values();
    let n = v.len();
    let inv2h = 1.0 / (2.0 * grid.h());
    let mut out = Vec::with_capacity(n);
    out.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2h);
    for i in 1..n - 1 {
        out.push((v[i + 1] - v[i - 1]) * inv2h);
    }
    out.push((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv2h);
    SampledFunction::new(grid, out)
}

/// Fourth-order first derivative: 5-point central stencil inside,
/// 5-point one-sided and off-centre stencils on the two nodes at each end.
///
/// Used where the result is differenced again: a second-order derivative
/// would leave an `O(h^2)` jump between its boundary and interior error
/// that a second differencing turns into `O(h)`.
pub(crate) fn derivative_fourth_order(f: &SampledFunction) -> Result<SampledFunction> {
    let grid = *f.grid();
    let v = f.values();
    let n = v.len();
    if n < 5 {
        return derivative(f);
    }
    let inv12h = 1.0 / (12.0 * grid.h());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let end = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let near = [-3.0, -10.0, 18.0, -6.0, 1.0];
    out[0] = (0..5).map(|k| end[k] * v[k]).sum::<Complex64>() * inv12h;
    out[1] = (0..5).map(|k| near[k] * v[k]).sum::<Complex64>() * inv12h;
    out[n - 1] = -(0..5).map(|k| end[k] * v[n - 1 - k]).sum::<Complex64>() * inv12h;
    out[n - 2] = -(0..5).map(|k| near[k] * v[n - 1 - k]).sum::<Complex64>() * inv12h;
    for i in 2..n - 2 {
        out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * inv12h;
    }
    SampledFunction::new(grid, out)
}

/// Second derivative: 3-point stencil inside, 5-point one-sided stencils at
/// the endpoints (4-point on 4-node grids, the interior value on 3-node ones).
pub fn second_derivative(f: &SampledFunction) -> Result<SampledFunction> {
    let grid = *f.grid();
    require_three(&grid)?;
    let v = f.values();
    let n = v.len();
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) * inv_h2;
    }
    if n >= 5 {
        // Third-order one-sided stencils keep the endpoint error below the
        // interior one.
        let c = [35.0, -104.0, 114.0, -56.0, 11.0];
        let lo: Complex64 = (0..5).map(|k| c[k] * v[k]).sum();
        let hi: Complex64 = (0..5).map(|k| c[k] * v[n - 1 - k]).sum();
        out[0] = lo * inv_h2 / 12.0;
        out[n - 1] = hi * inv_h2 / 12.0;
    } else if n == 4 {
        out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * inv_h2;
        out[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) * inv_h2;
    } else {
        out[0] = out[1];
        out[n - 1] = out[1];
    }
    SampledFunction::new(grid, out)
}

/// Trapezoid rule over the whole grid.
pub fn integrate(f: &SampledFunction) -> Complex64 {
    trapezoid(f.values(), f.grid().h())
}

fn trapezoid(v: &[Complex64], h: f64) -> Complex64 {
    let n = v.len();
    let inner: Complex64 = v[1..n - 1].iter().sum();
    (inner + 0.5 * (v[0] + v[n - 1])) * h
}

/// Running trapezoid `F(x_i) = int_{x_min}^{x_i} f`, with `F(x_min) = 0`.
pub fn cumulative_integral(f: &SampledFunction) -> SampledFunction {
    let h = f.grid().h();
    let v = f.values();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(v.len());
    out.push(acc);
    for w in v.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    SampledFunction::new(*f.grid(), out).expect("running sum of finite values is finite")
}

/// Sesquilinear product `int conj(a) b dx`.
pub fn inner(a: &SampledFunction, b: &SampledFunction) -> Result<Complex64> {
    a.ensure_same_grid(b)?;
    let prod: Vec<Complex64> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.conj() * y)
        .collect();
    Ok(trapezoid(&prod, a.grid().h()))
}

/// Bilinear product `int a b dx` (no conjugation).
pub fn bilinear(a: &SampledFunction, b: &SampledFunction) -> Result<Complex64> {
    a.ensure_same_grid(b)?;
    let prod: Vec<Complex64> = a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect();
    Ok(trapezoid(&prod, a.grid().h()))
}

/// `sqrt(int |f|^2 dx)`.
pub fn l2_norm(f: &SampledFunction) -> f64 {
    let dens: Vec<Complex64> = f
        .values()
        .iter()
        .map(|v| Complex64::new(v.norm_sqr(), 0.0))
        .collect();
    trapezoid(&dens, f.grid().h()).re.sqrt()
}

/// `|<a, b>| / (|a| |b|)`, 0 when either side vanishes.
pub fn overlap(a: &SampledFunction, b: &SampledFunction) -> Result<f64> {
    let na = l2_norm(a);
    let nb = l2_norm(b);
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok(inner(a, b)?.norm() / (na * nb))
}

/// Reports the boundary toward which `|f|` fails to decay, if any.
///
/// A side is flagged when the boundary modulus keeps more than
/// [`NORMALIZABLE_TAIL`] of the peak and the modulus does not fall off
/// over the outermost 5% of the grid.
pub fn growth_direction(f: &SampledFunction) -> Option<Growth> {
    let m: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
    let n = m.len();
    let peak = m.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return None;
    }
    let probe = (n / 20).max(1).min(n - 1);
    let left = m[0] > NORMALIZABLE_TAIL * peak && m[0] >= m[probe];
    let right = m[n - 1] > NORMALIZABLE_TAIL * peak && m[n - 1] >= m[n - 1 - probe];
    match (left, right) {
        (true, true) => Some(Growth::Both),
        (true, false) => Some(Growth::Left),
        (false, true) => Some(Growth::Right),
        (false, false) => None,
    }
}

/// Scales `f` to unit trapezoid norm after checking that it decays at both
/// boundaries.
pub fn normalize(f: &SampledFunction) -> Result<SampledFunction> {
    if let Some(side) = growth_direction(f) {
        return Err(Error::NonNormalizable(side));
    }
    let norm = l2_norm(f);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidParameter("cannot normalize a zero state".into()));
    }
    f.scale(Complex64::new(1.0 / norm, 0.0))
}
