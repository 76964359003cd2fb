//! Finite-difference spectral oracle for `-mu^2 d^2/dx^2 + V(x)` with
//! Dirichlet walls at both grid ends.
//!
//! Real potentials go through Sturm-sequence bisection, complex ones through
//! a shifted QR-type iteration on the complex-symmetric tridiagonal matrix.
//! Eigenvectors come from inverse iteration in both cases.

mod bound;
mod complex;
mod hamiltonian;
mod inverse;
mod refine;
mod sturm;

use std::fmt;

use num_complex::Complex64;

pub use bound::{bound_states, BoundStates};
pub use complex::{complex_symmetric_ql, eigen_complex, hessenberg_qr_eigenvalues};
pub use hamiltonian::{discretize, TridiagonalHamiltonian};
pub use inverse::{eigenvector_residual, eigenvectors};
pub use refine::{refine_until, Problem, Refinement, Solver};
pub use sturm::{count_below, eigen_real};

/// Default size cap for the complex solver.
pub const DEFAULT_QR_CAP: usize = 1200;
/// Default relative threshold on `|Im E|` for the numerically-real flag.
pub const DEFAULT_REAL_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    OracleReal,
    OracleComplex,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::OracleReal => "oracle-real",
            Method::OracleComplex => "oracle-complex",
        })
    }
}

/// Solver knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub qr_cap: usize,
    pub real_threshold: f64,
    /// Iteration budget per eigenvalue in the complex solver.
    pub max_iterations: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            qr_cap: DEFAULT_QR_CAP,
            real_threshold: DEFAULT_REAL_THRESHOLD,
            max_iterations: 60,
        }
    }
}

impl OracleConfig {
    /// Defaults, with the size cap taken from `PSUSY_MAX_QR_SIZE` when set to
    /// a positive integer.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(cap) = std::env::var("PSUSY_MAX_QR_SIZE")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
        {
            cfg.qr_cap = cap;
        }
        cfg
    }
}

/// Eigenvalues sorted by real part, ties broken by imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<Complex64>,
    pub method: Method,
    pub n_points: usize,
    pub h: f64,
    /// Per-eigenvalue error estimate; 0 when only one grid was solved.
    pub convergence_estimate: Vec<f64>,
    pub numerically_real: Vec<bool>,
    /// False when a refinement budget ran out above tolerance.
    pub converged: bool,
    /// Unextrapolated values on the finest grid.
    pub raw: Vec<Complex64>,
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    pub(crate) fn single_grid(mut eigenvalues: Vec<Complex64>, method: Method, n_points: usize, h: f64, threshold: f64) -> Self {
        sort_spectrum(&mut eigenvalues);
        let k = eigenvalues.len();
        Self {
            numerically_real: eigenvalues.iter().map(|e| is_numerically_real(*e, threshold)).collect(),
            raw: eigenvalues.clone(),
            eigenvalues,
            method,
            n_points,
            h,
            convergence_estimate: vec![0.0; k],
            converged: true,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Keeps the lowest `k` entries.
    pub fn truncate(&mut self, k: usize) {
        self.eigenvalues.truncate(k);
        self.convergence_estimate.truncate(k);
        self.numerically_real.truncate(k);
        self.raw.truncate(k);
    }
}

pub fn is_numerically_real(e: Complex64, threshold: f64) -> bool {
    e.im.abs() <= threshold * (1.0 + e.re.abs())
}

pub fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}
