use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};

/// Interior block of the 3-point discretization of `-mu^2 d^2/dx^2 + V`.
///
/// Node `j` of the matrix is grid node `j + 1`; the two end nodes carry the
/// Dirichlet condition and are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    grid: Grid,
    mu: f64,
    diagonal: Vec<Complex64>,
    off_diagonal: f64,
    hermitian: bool,
}

const HERMITIAN_TOL: f64 = 1e-14;

pub fn discretize(v: &SampledFunction, mu: f64) -> Result<TridiagonalHamiltonian> {
    let grid = *v.grid();
    if grid.n_points() < 5 {
        return Err(Error::InvalidGrid(format!(
            "the oracle needs at least 5 nodes, got {}",
            grid.n_points()
        )));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter(format!("mu must be > 0, got {mu}")));
    }
    let k = mu * mu / (grid.h() * grid.h());
    let vals = v.values();
    let interior = &vals[1..vals.len() - 1];
    Ok(TridiagonalHamiltonian {
        grid,
        mu,
        diagonal: interior.iter().map(|vi| vi + 2.0 * k).collect(),
        off_diagonal: -k,
        hermitian: interior.iter().all(|vi| vi.im.abs() <= HERMITIAN_TOL),
    })
}

impl TridiagonalHamiltonian {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[Complex64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> f64 {
        self.off_diagonal
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        self.diagonal.iter().map(|d| d.re).collect()
    }

    /// `H v` on interior vectors.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        let e = self.off_diagonal;
        (0..n)
            .map(|i| {
                let mut acc = self.diagonal[i] * v[i];
                if i > 0 {
                    acc += e * v[i - 1];
                }
                if i + 1 < n {
                    acc += e * v[i + 1];
                }
                acc
            })
            .collect()
    }
}
