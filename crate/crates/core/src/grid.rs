//! Uniform grids and complex functions tabulated on them.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform 1D discretization `x_i = x_min + i*h`, `i = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    h: f64,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes, got {n_points}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "need finite x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        let h = (x_max - x_min) / (n_points - 1) as f64;
        Ok(Self {
            x_min,
            x_max,
            n_points,
            h,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Node spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Position of node `i`.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Same interval with `2(n-1)+1` nodes, so every old node survives.
    pub fn refined(&self) -> Self {
        Self::new(self.x_min, self.x_max, 2 * (self.n_points - 1) + 1)
            .expect("refining a valid grid stays valid")
    }
}

/// Complex values, one per node of a [`Grid`]. All values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.n_points()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(|x| Complex64::new(f(x), 0.0)).collect())
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ensure_same_grid(&self, other: &SampledFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Node-wise map; the result is re-validated for finiteness.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.grid.x(i), v))
            .collect();
        Self::new(self.grid, values)
    }

    /// Node-wise binary operation on two functions sharing a grid.
    pub fn zip_with(
        &self,
        other: &SampledFunction,
        f: impl Fn(f64, Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (&a, &b))| f(self.grid.x(i), a, b))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        self.map(|_, v| v * factor)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.values)
    }

    /// Largest node-wise `|self - other|`.
    pub fn max_abs_diff(&self, other: &SampledFunction) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn imag_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }
}

pub(crate) fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing_and_nodes() {
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.h(), 0.5);
        let xs: Vec<f64> = g.nodes().collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(matches!(Grid::new(0.0, 1.0, 2), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(1.0, 1.0, 10), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(2.0, 1.0, 10), Err(Error::InvalidGrid(_))));
        assert!(Grid::new(0.0, f64::INFINITY, 10).is_err());
    }

    #[test]
    fn refined_grid_nests() {
        let g = Grid::new(0.0, 3.0, 4).unwrap();
        let r = g.refined();
        assert_eq!(r.n_points(), 7);
        for i in 0..g.n_points() {
            assert_eq!(g.x(i), r.x(2 * i));
        }
    }

    #[test]
    fn sampled_function_validates() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        assert!(SampledFunction::new(g, vec![Complex64::new(0.0, 0.0); 2]).is_err());
        let bad = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(f64::NAN, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert_eq!(
            SampledFunction::new(g, bad),
            Err(Error::NonFinite { index: 1 })
        );
    }

    #[test]
    fn zip_requires_shared_grid() {
        let a = SampledFunction::zeros(Grid::new(0.0, 1.0, 3).unwrap());
        let b = SampledFunction::zeros(Grid::new(0.0, 2.0, 3).unwrap());
        assert_eq!(a.zip_with(&b, |_, x, y| x + y), Err(Error::GridMismatch));
    }
}
