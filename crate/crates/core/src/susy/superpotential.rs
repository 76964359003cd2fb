use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::calculus::derivative;
use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};

pub type ScalarFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Analytic superpotential `F(x)` together with its exact derivative.
#[derive(Clone)]
pub struct Superpotential {
    label: String,
    params: Vec<Complex64>,
    eval: ScalarFn,
    eval_deriv: ScalarFn,
}

impl Superpotential {
    pub fn new(
        label: impl Into<String>,
        params: Vec<Complex64>,
        eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        eval_deriv: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            params,
            eval: Arc::new(eval),
            eval_deriv: Arc::new(eval_deriv),
        }
    }

    /// Builds the superpotential and checks `eval_deriv` against a numeric
    /// derivative of `eval` on `probe`.
    pub fn checked(
        label: impl Into<String>,
        params: Vec<Complex64>,
        eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        eval_deriv: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        probe: &Grid,
        tol: f64,
    ) -> Result<Self> {
        let sp = Self::new(label, params, eval, eval_deriv);
        let err = sp.consistency_error(probe)?;
        if err > tol {
            return Err(Error::InvalidParameter(format!(
                "superpotential '{}' derivative disagrees with finite differences by {err:e}",
                sp.label
            )));
        }
        Ok(sp)
    }

    /// Constant `F = f0`.
    pub fn constant(f0: Complex64) -> Self {
        Self::new("constant", vec![f0], move |_| f0, |_| Complex64::new(0.0, 0.0))
    }

    /// `F = omega x`.
    pub fn linear(omega: Complex64) -> Self {
        Self::new("linear", vec![omega], move |x| omega * x, move |_| omega)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &[Complex64] {
        &self.params
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }

    #[inline]
    pub fn eval_deriv(&self, x: f64) -> Complex64 {
        (self.eval_deriv)(x)
    }

    pub fn sample(&self, grid: Grid) -> Result<SampledFunction> {
        SampledFunction::from_fn(grid, |x| self.eval(x))
    }

    pub fn sample_deriv(&self, grid: Grid) -> Result<SampledFunction> {
        SampledFunction::from_fn(grid, |x| self.eval_deriv(x))
    }

    /// Max deviation of the analytic derivative from central differences.
    pub fn consistency_error(&self, grid: &Grid) -> Result<f64> {
        let numeric = derivative(&self.sample(*grid)?)?;
        numeric.max_abs_diff(&self.sample_deriv(*grid)?)
    }

    /// Shifts `F` by a constant; used to probe residual detectors.
    pub fn shifted(&self, delta: Complex64) -> Self {
        let eval = Arc::clone(&self.eval);
        let deriv = Arc::clone(&self.eval_deriv);
        Self {
            label: format!("{}+shift", self.label),
            params: self.params.clone(),
            eval: Arc::new(move |x| eval(x) + delta),
            eval_deriv: deriv,
        }
    }
}

impl fmt::Debug for Superpotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Superpotential")
            .field("label", &self.label)
            .field("params", &self.params)
            .finish()
    }
}
