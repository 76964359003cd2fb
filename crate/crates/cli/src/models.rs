use std::sync::Arc;

use psusy_core::dws::{dws_potential, dws_potential_deriv, energy_closed_form_from, energy_special_case, printed, solve_matching};
use psusy_core::{Complex64, Grid};

use crate::config::{Formula, G2Override, GridSpec, Model, RunConfig};
use crate::error::{CliError, CliResult};

pub type Potential = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Default node count for real potentials; complex ones start coarser
/// because the dense solver is capped.
pub const AUTO_POINTS_REAL: usize = 2001;
pub const AUTO_POINTS_COMPLEX: usize = 301;

impl RunConfig {
    pub fn potential(&self) -> Potential {
        match self.model {
            Model::Dws => {
                let v = dws_potential(&self.dws);
                Arc::new(move |x| Complex64::new(v(x), 0.0))
            }
            Model::Box | Model::Free => Arc::new(|_| Complex64::new(0.0, 0.0)),
            Model::Oscillator => Arc::new(|x| Complex64::new(x * x, 0.0)),
            Model::PtOscillator => {
                let l = self.lambda;
                Arc::new(move |x| Complex64::new(x * x, l * x))
            }
        }
    }

    /// Exact derivative of [`RunConfig::potential`].
    pub fn potential_deriv(&self) -> Potential {
        match self.model {
            Model::Dws => {
                let dv = dws_potential_deriv(&self.dws);
                Arc::new(move |x| Complex64::new(dv(x), 0.0))
            }
            Model::Box | Model::Free => Arc::new(|_| Complex64::new(0.0, 0.0)),
            Model::Oscillator => Arc::new(|x| Complex64::new(2.0 * x, 0.0)),
            Model::PtOscillator => {
                let l = self.lambda;
                Arc::new(move |x| Complex64::new(2.0 * x, l))
            }
        }
    }

    pub fn is_complex(&self) -> bool {
        self.model == Model::PtOscillator && self.lambda != 0.0
    }

    /// Interval used when the grid is `auto`.
    pub fn window(&self) -> (f64, f64) {
        match self.model {
            Model::Dws => {
                let (lo, hi) = self.dws.default_window();
                if self.half_line {
                    (0.0, hi)
                } else {
                    (lo, hi)
                }
            }
            Model::Box => (0.0, self.length),
            Model::Oscillator | Model::PtOscillator | Model::Free => (-10.0, 10.0),
        }
    }

    pub fn grid(&self) -> CliResult<Grid> {
        let (lo, hi, n) = match self.grid {
            GridSpec::Explicit { x_min, x_max, n } => (x_min, x_max, n),
            GridSpec::Auto => {
                let (lo, hi) = self.window();
                let n = if self.is_complex() { AUTO_POINTS_COMPLEX } else { AUTO_POINTS_REAL };
                (lo, hi, n)
            }
        };
        if self.half_line && lo < 0.0 {
            return Err(CliError::bad("half-line needs a grid starting at x >= 0"));
        }
        Ok(Grid::new(lo, hi, n)?)
    }

    /// First quantum number printed in level tables: the box counts from 1.
    pub fn first_level(&self) -> usize {
        match self.model {
            Model::Box | Model::Free => 1,
            _ => 0,
        }
    }

    /// Formula actually used for closed-form DWS energies: `ladder` when a
    /// G2 override is given and no formula was chosen, `figure` otherwise.
    pub fn effective_formula(&self) -> Formula {
        self.formula.unwrap_or(if self.g2_override.is_some() { Formula::Ladder } else { Formula::Figure })
    }

    /// The `G2` to use for ladder quantities: the override if set,
    /// otherwise the matched root on the configured branch.
    pub fn g2(&self) -> CliResult<Complex64> {
        match self.g2_override {
            Some(G2Override::Value(z)) => Ok(z),
            Some(G2Override::Paper) => Ok(printed::literal_g2(&self.dws)),
            None => Ok(solve_matching(&self.dws, self.mu, self.branch)?.params.g2),
        }
    }

    /// Closed-form energy of level `n` (model numbering), if the model has one.
    pub fn closed_form(&self, n: usize) -> CliResult<Option<Complex64>> {
        let mu = self.mu;
        let re = |v: f64| Ok(Some(Complex64::new(v, 0.0)));
        match self.model {
            Model::Dws => match self.effective_formula() {
                Formula::Figure => re(energy_special_case(n, &self.dws, mu)),
                Formula::Ladder => Ok(Some(energy_closed_form_from(self.g2()?, n, &self.dws, mu)?.absolute)),
            },
            Model::Box | Model::Free => {
                let g = self.grid()?;
                re((mu * n as f64 * std::f64::consts::PI / (g.x_max() - g.x_min())).powi(2))
            }
            Model::Oscillator => re(mu * (2 * n + 1) as f64),
            Model::PtOscillator => re(mu * (2 * n + 1) as f64 + self.lambda * self.lambda / 4.0),
        }
    }
}
