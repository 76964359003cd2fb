use psusy_core::dirac::effective_potential_analytic;
use psusy_core::PhysicalConfig;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{fmt_num, Table};

/// Effective potential of the reduced Dirac problem with the model's
/// potential as `nu`.
pub fn run(cfg: &RunConfig) -> CliResult<Table> {
    let phys = PhysicalConfig::new(cfg.mass, cfg.epsilon)?;
    let grid = cfg.grid()?;
    let nu = cfg.potential();
    let dnu = cfg.potential_deriv();
    let u = effective_potential_analytic(grid, &phys, |x| nu(x), |x| dnu(x))?;

    let mut table = Table::new(&["x", "nu_Re", "nu_Im", "U_Re", "U_Im"]);
    table.note(format!(
        "reduction: epsilon = {}, M = {}, mu = {}",
        fmt_num(phys.epsilon()),
        fmt_num(phys.mass()),
        fmt_num(phys.mu())
    ));
    for (i, z) in u.values().iter().enumerate() {
        let x = grid.x(i);
        let n = nu(x);
        table.rows.push(vec![Some(x), Some(n.re), Some(n.im), Some(z.re), Some(z.im)]);
    }
    Ok(table)
}
