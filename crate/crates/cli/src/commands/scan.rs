use psusy_core::dws::energy_special_case;
use psusy_core::DwsParams;
use rayon::prelude::*;

use crate::config::{Model, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Q,
    A,
    V0,
}

impl Sweep {
    fn parse(s: &str) -> CliResult<Self> {
        match s {
            "q" => Ok(Sweep::Q),
            "a" => Ok(Sweep::A),
            "V0" => Ok(Sweep::V0),
            other => Err(CliError::bad(format!("sweep must be q, a or V0, got '{other}'"))),
        }
    }

    fn apply(self, base: &DwsParams, value: f64) -> CliResult<DwsParams> {
        let mut p = *base;
        match self {
            Sweep::Q => p.q = value,
            Sweep::A => p.a = value,
            Sweep::V0 => p.v0 = value,
        }
        p.validate()?;
        Ok(p)
    }
}

/// Evenly spaced points from `from` to `to` inclusive.
pub fn sweep_points(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else {
                from + (to - from) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Figure-formula energies along one parameter; points run in parallel and
/// rows come back in sweep order.
pub fn run(cfg: &RunConfig) -> CliResult<Table> {
    if cfg.model != Model::Dws {
        return Err(CliError::bad("scan sweeps the deformed Woods-Saxon model only"));
    }
    let sweep = Sweep::parse(cfg.sweep.as_deref().ok_or_else(|| CliError::bad("scan needs --sweep"))?)?;
    let (from, to) = match (cfg.from, cfg.to) {
        (Some(f), Some(t)) => (f, t),
        _ => return Err(CliError::bad("scan needs --from and --to")),
    };
    if !(from < to) {
        return Err(CliError::bad(format!("scan needs from < to, got {from} and {to}")));
    }
    if cfg.steps < 2 {
        return Err(CliError::bad("scan needs steps >= 2"));
    }

    let mut columns = vec!["sweep_value".to_string()];
    columns.extend((0..cfg.n_levels).map(|n| format!("E_{n}")));
    let points = sweep_points(from, to, cfg.steps);
    let rows: Vec<Vec<Option<f64>>> = points
        .par_iter()
        .map(|&v| {
            let p = sweep.apply(&cfg.dws, v)?;
            let mut row = vec![Some(v)];
            row.extend((0..cfg.n_levels).map(|n| Some(energy_special_case(n, &p, cfg.mu))));
            Ok(row)
        })
        .collect::<CliResult<_>>()?;

    let mut table = Table {
        columns,
        rows,
        notes: Vec::new(),
    };
    table.note(format!("swept variable = {}", cfg.sweep.as_deref().unwrap_or_default()));
    Ok(table)
}
