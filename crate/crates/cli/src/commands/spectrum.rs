use psusy_core::oracle::{refine_until, OracleConfig, Problem, Solver};

use crate::config::{Model, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::Table;

/// Richardson tolerance and doubling budget for the oracle column.
pub const ORACLE_TOL: f64 = 1e-8;
pub const ORACLE_DOUBLINGS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    ClosedForm,
    Oracle,
    Both,
}

fn method(cfg: &RunConfig) -> CliResult<Method> {
    match cfg.method.as_deref() {
        None | Some("both") => Ok(Method::Both),
        Some("closed-form") => Ok(Method::ClosedForm),
        Some("oracle") => Ok(Method::Oracle),
        Some(other) => Err(CliError::bad(format!("method must be closed-form, oracle or both, got '{other}'"))),
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Table> {
    let method = method(cfg)?;
    let first = cfg.first_level();
    let mut table = Table::new(&[
        "n",
        "E_closed_Re",
        "E_closed_Im",
        "E_oracle_Re",
        "E_oracle_Im",
        "abs_dE",
        "convergence_estimate",
    ]);
    if cfg.model == Model::Dws && method != Method::Oracle {
        table.note(format!("closed-form formula = {}", cfg.effective_formula()));
    }

    let closed = if method == Method::Oracle {
        None
    } else {
        let levels = (0..cfg.n_levels)
            .map(|k| cfg.closed_form(first + k))
            .collect::<CliResult<Vec<_>>>()?;
        Some(levels)
    };

    let oracle = if method == Method::ClosedForm {
        None
    } else {
        let grid = cfg.grid()?;
        let problem = Problem {
            potential: cfg.potential(),
            x_min: grid.x_min(),
            x_max: grid.x_max(),
            mu: cfg.mu,
            count: cfg.n_levels,
            n_points: grid.n_points(),
            solver: Solver::Auto,
        };
        let r = refine_until(&problem, ORACLE_TOL, ORACLE_DOUBLINGS, &OracleConfig::from_env())?;
        let finest = r.history.last().map(|h| h.0).unwrap_or(grid.n_points());
        table.note(format!("oracle = {}, finest grid {finest} nodes, Richardson extrapolated", r.spectrum.method));
        for w in &r.spectrum.warnings {
            table.note(format!("warning: {w}"));
        }
        if cfg.model == Model::Dws {
            let edge = (cfg.potential())(grid.x_max()).re;
            for (k, e) in r.spectrum.eigenvalues.iter().enumerate() {
                if e.re >= edge {
                    table.note(format!(
                        "warning: level {} lies above the asymptote V(x_max) = {edge}; it is a box state",
                        first + k
                    ));
                }
            }
        }
        Some(r.spectrum)
    };

    for k in 0..cfg.n_levels {
        let c = closed.as_ref().and_then(|v| v[k]);
        let o = oracle.as_ref().map(|s| (s.eigenvalues[k], s.convergence_estimate[k]));
        let diff = match (c, o) {
            (Some(c), Some((o, _))) => Some((c - o).norm()),
            _ => None,
        };
        table.rows.push(vec![
            Some((first + k) as f64),
            c.map(|z| z.re),
            c.map(|z| z.im),
            o.map(|(z, _)| z.re),
            o.map(|(z, _)| z.im),
            diff,
            o.map(|(_, e)| e),
        ]);
    }
    Ok(table)
}
