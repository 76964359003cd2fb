//! Deformed Woods-Saxon model: potential, the two-parameter superpotential
//! ansatz, its matching conditions, the closed-form ground state and the
//! shape-invariant energy ladder.
//!
//! Everything is written in terms of `s(x) = 1 / (q + e^{alpha (x - X0)})`,
//! so that `V = -V0 s + c s^2` and `F = -mu (G1 + G2 s)`. This form never
//! exponentiates a large positive argument.
//!
//! Sign conventions matter here. The matching conditions close against
//! `V = F^2 - i mu F' + E0`, while shape invariance under `a -> a - alpha q`
//! and the closed-form ground state belong to the real-coefficient pair
//! `V_-/+ = F^2 -/+ mu F'`. See [`crate::susy::Convention`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::calculus::normalize;
use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};
use crate::params::DwsParams;
use crate::susy::{Superpotential, SuperpotentialFamily};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `1 / (q + e^{alpha t})`, overflow-safe for any finite `alpha t`.
#[inline]
pub fn s_factor(alpha_t: f64, q: f64) -> f64 {
    if alpha_t > 0.0 {
        let e = (-alpha_t).exp();
        e / (1.0 + q * e)
    } else {
        1.0 / (q + alpha_t.exp())
    }
}

/// `ln(e^{alpha t} / (e^{alpha t} + q)) = -ln(1 + q e^{-alpha t})`.
#[inline]
fn ln_base(alpha_t: f64, q: f64) -> f64 {
    if alpha_t >= 0.0 {
        -(q * (-alpha_t).exp()).ln_1p()
    } else {
        alpha_t - (q + alpha_t.exp()).ln()
    }
}

/// The potential `V(x) = -V0 s + c s^2`.
pub fn dws_potential(p: &DwsParams) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    let (v0, c, q, x0, alpha) = (p.v0, p.c, p.q, p.x0, p.alpha());
    move |x| {
        let s = s_factor(alpha * (x - x0), q);
        -v0 * s + c * s * s
    }
}

/// `V'(x) = (-V0 + 2cs) s'` with `s' = -alpha (s - q s^2)`.
pub fn dws_potential_deriv(p: &DwsParams) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    let (v0, c, q, x0, alpha) = (p.v0, p.c, p.q, p.x0, p.alpha());
    move |x| {
        let s = s_factor(alpha * (x - x0), q);
        (-v0 + 2.0 * c * s) * (-alpha * (s - q * s * s))
    }
}

pub fn sample_potential(p: &DwsParams, grid: Grid) -> Result<SampledFunction> {
    SampledFunction::from_real_fn(grid, dws_potential(p))
}

/// Root choice for the quadratic in `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            other => Err(Error::InvalidParameter(format!("unknown branch '{other}'"))),
        }
    }
}

/// Coefficients of `F = -mu (G1 + G2 s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DwsSuperpotentialParams {
    pub g1: Complex64,
    pub g2: Complex64,
    pub alpha: f64,
    pub q: f64,
    pub x0: f64,
    pub mu: f64,
    pub branch: Branch,
}

impl DwsSuperpotentialParams {
    /// Builds the coefficients from a given `G2` with `G1 = g1_of(G2)`; no
    /// matching check is made, so this also serves user overrides.
    pub fn from_g2(p: &DwsParams, mu: f64, g2: Complex64, branch: Branch) -> Result<Self> {
        Ok(Self {
            g1: g1_of(g2, p, mu)?,
            g2,
            alpha: p.alpha(),
            q: p.q,
            x0: p.x0,
            mu,
            branch,
        })
    }

    #[inline]
    pub fn s(&self, x: f64) -> f64 {
        s_factor(self.alpha * (x - self.x0), self.q)
    }
}

/// Relative residuals of the four matching lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingResiduals {
    /// `|alpha a - 1|`.
    pub alpha: f64,
    /// `mu^2 G1^2 + E0 = 0`.
    pub constant: f64,
    /// `mu^2 (2 G1 G2 - i alpha G2) = -V0`.
    pub linear: f64,
    /// `mu^2 (G2^2 + i alpha q G2) = c`.
    pub quadratic: f64,
}

impl MatchingResiduals {
    pub fn max(&self) -> f64 {
        self.alpha.max(self.constant).max(self.linear).max(self.quadratic)
    }
}

/// `|lhs - rhs|` scaled by the largest term on either side (at least 1), so
/// the check is insensitive to the overall size of `V0`, `c` and `1/mu`.
fn relative(lhs: Complex64, rhs: Complex64, terms: &[f64]) -> f64 {
    let scale = terms.iter().copied().fold(1.0, f64::max);
    (lhs - rhs).norm() / scale
}

/// Substitutes `(G1, G2, E0, alpha)` back into the matching conditions.
pub fn matching_residuals(
    p: &DwsParams,
    mu: f64,
    g1: Complex64,
    g2: Complex64,
    e0: Complex64,
    alpha: f64,
) -> MatchingResiduals {
    let mu2 = mu * mu;
    let c0 = mu2 * g1 * g1;
    let l_a = mu2 * 2.0 * g1 * g2;
    let l_b = mu2 * I * alpha * g2;
    let q_a = mu2 * g2 * g2;
    let q_b = mu2 * I * alpha * p.q * g2;
    MatchingResiduals {
        alpha: (alpha * p.a - 1.0).abs(),
        constant: relative(c0, -e0, &[c0.norm(), e0.norm()]),
        linear: relative(l_a - l_b, Complex64::new(-p.v0, 0.0), &[l_a.norm(), l_b.norm(), p.v0.abs()]),
        quadratic: relative(q_a + q_b, Complex64::new(p.c, 0.0), &[q_a.norm(), q_b.norm(), p.c.abs()]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedSolution {
    pub params: DwsSuperpotentialParams,
    pub e0: Complex64,
    pub residuals: MatchingResiduals,
}

/// Roots of `mu^2 (G2^2 + i alpha q G2) = c`:
/// `G2 = -i alpha q / 2 +/- sqrt(c/mu^2 - (alpha q / 2)^2)`.
pub fn matching_roots(p: &DwsParams, mu: f64) -> [Complex64; 2] {
    let half = p.alpha() * p.q / 2.0;
    let r = p.c / (mu * mu) - half * half;
    let d = if r >= 0.0 {
        Complex64::new(r.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-r).sqrt())
    };
    let centre = Complex64::new(0.0, -half);
    [centre + d, centre - d]
}

/// Solves the matching conditions on the chosen branch.
///
/// Fails with [`Error::DegenerateRoot`] when the branch gives `G2 = 0`
/// (the `Plus` branch at `c = 0`), since `G1` is then undefined.
pub fn solve_matching(p: &DwsParams, mu: f64, branch: Branch) -> Result<MatchedSolution> {
    p.validate()?;
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter(format!("mu must be > 0, got {mu}")));
    }
    let [plus, minus] = matching_roots(p, mu);
    let g2 = if branch.sign() > 0.0 { plus } else { minus };
    if g2.norm() <= 1e-12 * p.alpha() * p.q {
        return Err(Error::DegenerateRoot);
    }
    let params = DwsSuperpotentialParams::from_g2(p, mu, g2, branch)?;
    let e0 = -mu * mu * params.g1 * params.g1;
    let residuals = matching_residuals(p, mu, params.g1, g2, e0, params.alpha);
    Ok(MatchedSolution { params, e0, residuals })
}

/// `G1(a) = (-V0 + c/q) / (2 mu^2 a) - a / (2q)`.
pub fn g1_of(a: Complex64, p: &DwsParams, mu: f64) -> Result<Complex64> {
    if a.norm() == 0.0 {
        return Err(Error::DegenerateParameter {
            level: 0,
            reason: "G1 needs a nonzero G2".into(),
        });
    }
    Ok(p.depth_term() / (2.0 * mu * mu * a) - a / (2.0 * p.q))
}

/// `F = -mu (G1 + G2 s)` with `F' = mu alpha G2 (s - q s^2)`.
pub fn dws_superpotential(sp: &DwsSuperpotentialParams) -> Superpotential {
    let a = *sp;
    let b = *sp;
    Superpotential::new(
        "dws",
        vec![sp.g1, sp.g2],
        move |x| -a.mu * (a.g1 + a.g2 * a.s(x)),
        move |x| {
            let s = b.s(x);
            b.mu * b.alpha * b.g2 * (s - b.q * s * s)
        },
    )
}

/// Shape-invariant family `a -> F(x; G1(a), a)` with map `a -> a - alpha q`.
#[derive(Debug, Clone, Copy)]
pub struct DwsFamily {
    pub params: DwsParams,
    pub mu: f64,
}

impl SuperpotentialFamily for DwsFamily {
    fn member(&self, a: Complex64) -> Result<Superpotential> {
        let sp = DwsSuperpotentialParams::from_g2(&self.params, self.mu, a, Branch::Minus)?;
        Ok(dws_superpotential(&sp))
    }

    fn parameter_map(&self, a: Complex64) -> Complex64 {
        parameter_map(a, self.params.alpha(), self.params.q)
    }
}

pub fn parameter_map(g2: Complex64, alpha: f64, q: f64) -> Complex64 {
    g2 - alpha * q
}

/// Unnormalized `ln Phi0 = G1 x + (G2 / (alpha q)) ln(e^{alpha t} / (e^{alpha t} + q))`.
pub fn dws_ground_state_log(sp: &DwsSuperpotentialParams, grid: Grid) -> Vec<Complex64> {
    let k = sp.g2 / (sp.alpha * sp.q);
    grid.nodes()
        .map(|x| sp.g1 * x + k * ln_base(sp.alpha * (x - sp.x0), sp.q))
        .collect()
}

/// The same expression with the base printed as `e^{alpha t} / (e^{-alpha t} + q)`.
pub fn printed_ground_state_log(sp: &DwsSuperpotentialParams, grid: Grid) -> Vec<Complex64> {
    let k = sp.g2 / (sp.alpha * sp.q);
    grid.nodes()
        .map(|x| {
            let at = sp.alpha * (x - sp.x0);
            // ln(e^{-at} + q) without overflow for very negative at.
            let den = if at < 0.0 { -at + (1.0 + sp.q * at.exp()).ln() } else { ((-at).exp() + sp.q).ln() };
            sp.g1 * x + k * (at - den)
        })
        .collect()
}

fn exp_of_log(grid: Grid, logs: &[Complex64]) -> Result<SampledFunction> {
    let peak = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    SampledFunction::new(grid, logs.iter().map(|l| (l - peak).exp()).collect())
}

/// Closed-form ground state `N e^{G1 x} (e^{alpha t} / (e^{alpha t} + q))^{G2/(alpha q)}`,
/// normalized. This is the kernel of `mu d/dx + F`.
///
/// Fails with [`Error::NonNormalizable`] naming the growth direction when
/// the modulus does not decay at the boundaries of `grid`.
pub fn dws_ground_state(sp: &DwsSuperpotentialParams, grid: Grid) -> Result<SampledFunction> {
    normalize(&dws_ground_state_unnormalized(sp, grid)?)
}

/// Closed-form ground state scaled to unit peak modulus.
pub fn dws_ground_state_unnormalized(sp: &DwsSuperpotentialParams, grid: Grid) -> Result<SampledFunction> {
    exp_of_log(grid, &dws_ground_state_log(sp, grid))
}

/// The bracket `T(a) = mu^2 G1(a)^2` whose differences make up the ladder.
fn ladder_term(a: Complex64, p: &DwsParams, mu: f64) -> Result<Complex64> {
    let g = g1_of(a, p, mu)?;
    Ok(mu * mu * g * g)
}

/// `R(a1, a2) = mu^2 G1(a1)^2 - mu^2 G1(a2)^2`.
pub fn residual_r(a1: Complex64, a2: Complex64, p: &DwsParams, mu: f64) -> Result<Complex64> {
    Ok(ladder_term(a1, p, mu)? - ladder_term(a2, p, mu)?)
}

/// Closed-form level `n` of the ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormEnergy {
    pub n: usize,
    /// `a_{n+1} = G2 - n alpha q`.
    pub level_param: Complex64,
    /// Energy above the ground state, `T(G2) - T(a_{n+1})`; zero at `n = 0`.
    pub relative: Complex64,
    /// `-T(a_{n+1})`, i.e. `relative + E0`.
    pub absolute: Complex64,
}

/// Ladder energy of level `n` starting from `g2`.
///
/// Fails with [`Error::DegenerateParameter`] naming `n` when
/// `G2 - n alpha q = 0`.
pub fn energy_closed_form_from(g2: Complex64, n: usize, p: &DwsParams, mu: f64) -> Result<ClosedFormEnergy> {
    let a = g2 - n as f64 * p.alpha() * p.q;
    let degenerate = |what: &str| Error::DegenerateParameter {
        level: n,
        reason: format!("{what} vanishes"),
    };
    if a.norm() <= 1e-12 * (1.0 + g2.norm()) {
        return Err(degenerate("G2 - n alpha q"));
    }
    let t1 = ladder_term(g2, p, mu).map_err(|_| degenerate("G2"))?;
    let tn = ladder_term(a, p, mu)?;
    Ok(ClosedFormEnergy {
        n,
        level_param: a,
        relative: if n == 0 { Complex64::new(0.0, 0.0) } else { t1 - tn },
        absolute: -tn,
    })
}

pub fn energy_closed_form(n: usize, p: &DwsParams, mu: f64, branch: Branch) -> Result<ClosedFormEnergy> {
    let m = solve_matching(p, mu, branch)?;
    energy_closed_form_from(m.params.g2, n, p, mu)
}

/// The real formula used for the energy-versus-parameter figures:
/// `E_n = -(mu^2/a^2) [ (a^2 V0 / (mu^2 q (n+1)))^2 + ((n+1)/2)^2 + 2 a V0^2 / (mu^2 q^2) ]`.
pub fn energy_special_case(n: usize, p: &DwsParams, mu: f64) -> f64 {
    let (a, v0, q) = (p.a, p.v0, p.q);
    let mu2 = mu * mu;
    let m = (n + 1) as f64;
    let t1 = a * a * v0 / (mu2 * q * m);
    let t2 = m / 2.0;
    let t3 = 2.0 * a * v0 * v0 / (mu2 * q * q);
    -(mu2 / (a * a)) * (t1 * t1 + t2 * t2 + t3)
}

/// Items where a formula as printed differs from the self-consistent one.
pub mod printed {
    use super::*;

    /// `G2 = -i alpha q / 2 +/- sqrt((alpha q / 2)^2 + c / mu^2)`.
    pub fn g2_roots(p: &DwsParams, mu: f64) -> [Complex64; 2] {
        let half = p.alpha() * p.q / 2.0;
        let d = Complex64::new(half * half + p.c / (mu * mu), 0.0).sqrt();
        let centre = Complex64::new(0.0, -half);
        [centre + d, centre - d]
    }

    /// Ladder energy with the second bracket's numerator printed as `1`:
    /// `T(G2) - mu^2 [1/(2 mu^2 a_{n+1}) - a_{n+1}/(2q)]^2`.
    pub fn energy_unit_numerator(g2: Complex64, n: usize, p: &DwsParams, mu: f64) -> Result<Complex64> {
        let mu2 = mu * mu;
        let a = g2 - n as f64 * p.alpha() * p.q;
        if a.norm() == 0.0 || g2.norm() == 0.0 {
            return Err(Error::DegenerateParameter {
                level: n,
                reason: "G2 - n alpha q vanishes".into(),
            });
        }
        let b = 1.0 / (2.0 * mu2 * a) - a / (2.0 * p.q);
        Ok(ladder_term(g2, p, mu)? - mu2 * b * b)
    }

    /// Partner pair as printed, `(V_+, V_-)`, with `-2 G2^2 / q` in the
    /// coefficient of `s`.
    pub fn partner_potentials(sp: &DwsSuperpotentialParams, p: &DwsParams, x: f64) -> (Complex64, Complex64) {
        let mu2 = sp.mu * sp.mu;
        let s = sp.s(x);
        let common = sp.g1 * sp.g1 + (p.depth_term() / mu2 - 2.0 * sp.g2 * sp.g2 / sp.q) * s + sp.g2 * sp.g2 * s * s;
        let odd = I * sp.alpha * sp.g2 * s - I * sp.alpha * sp.q * sp.g2 * s * s;
        (mu2 * (common + odd), mu2 * (common - odd))
    }

    /// The same pair with the coefficient of `s` expanded directly from `F`,
    /// `2 G1 G2 = (-V0 + c/q)/mu^2 - G2^2/q`.
    pub fn partner_potentials_expanded(sp: &DwsSuperpotentialParams, p: &DwsParams, x: f64) -> (Complex64, Complex64) {
        let mu2 = sp.mu * sp.mu;
        let s = sp.s(x);
        let common = sp.g1 * sp.g1 + (p.depth_term() / mu2 - sp.g2 * sp.g2 / sp.q) * s + sp.g2 * sp.g2 * s * s;
        let odd = I * sp.alpha * sp.g2 * s - I * sp.alpha * sp.q * sp.g2 * s * s;
        (mu2 * (common + odd), mu2 * (common - odd))
    }

    /// The literal `G2 = -alpha q` substitution.
    pub fn literal_g2(p: &DwsParams) -> Complex64 {
        Complex64::new(-p.alpha() * p.q, 0.0)
    }
}
