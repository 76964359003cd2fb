use psusy_core::calculus::{integrate, normalize};
use psusy_core::dws::{dws_ground_state, DwsSuperpotentialParams};
use psusy_core::oracle::{discretize, eigen_complex, eigen_real, eigenvectors, OracleConfig};
use psusy_core::susy::ground_state_from_superpotential;
use psusy_core::{Complex64, Convention, SampledFunction, Superpotential};

use crate::config::{Model, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::Table;

fn closed_form_state(cfg: &RunConfig) -> CliResult<Option<SampledFunction>> {
    if cfg.level != 0 {
        return Ok(None);
    }
    let grid = cfg.grid()?;
    match cfg.model {
        Model::Dws => {
            let sp = DwsSuperpotentialParams::from_g2(&cfg.dws, cfg.mu, cfg.g2()?, cfg.branch)?;
            Ok(Some(dws_ground_state(&sp, grid)?))
        }
        Model::Oscillator => {
            let f = Superpotential::linear(Complex64::new(1.0, 0.0));
            Ok(Some(ground_state_from_superpotential(&f, cfg.mu, grid, Convention::Standard)?))
        }
        _ => Ok(None),
    }
}

/// Oracle eigenvector of level `cfg.level` with its eigenvalue.
fn oracle_state(cfg: &RunConfig) -> CliResult<(SampledFunction, Complex64)> {
    let first = cfg.first_level();
    if cfg.level < first {
        return Err(CliError::bad(format!("{} levels start at n = {first}", cfg.model)));
    }
    let k = cfg.level - first;
    let grid = cfg.grid()?;
    let pot = cfg.potential();
    let v = SampledFunction::from_fn(grid, |x| pot(x))?;
    let h = discretize(&v, cfg.mu)?;
    let mut spectrum = if h.is_hermitian() {
        eigen_real(&h, (k + 1).min(h.size()))?
    } else {
        eigen_complex(&h, &OracleConfig::from_env())?
    };
    if spectrum.len() <= k {
        return Err(CliError::bad(format!("grid has no level n = {}", cfg.level)));
    }
    spectrum.truncate(k + 1);
    let e = spectrum.eigenvalues[k];
    let psi = eigenvectors(&h, &[e])?.remove(0);
    Ok((normalize(&psi)?, e))
}

pub fn run(cfg: &RunConfig) -> CliResult<Table> {
    let want = cfg.method.as_deref().unwrap_or("auto");
    let (psi, method, energy) = match want {
        "auto" | "closed-form" => match closed_form_state(cfg)? {
            Some(psi) => (psi, "closed-form", None),
            None if want == "auto" => {
                let (psi, e) = oracle_state(cfg)?;
                (psi, "oracle", Some(e))
            }
            None => {
                return Err(CliError::bad(format!(
                    "no closed-form state for {} level {}; use --method oracle",
                    cfg.model, cfg.level
                )))
            }
        },
        "oracle" => {
            let (psi, e) = oracle_state(cfg)?;
            (psi, "oracle", Some(e))
        }
        other => return Err(CliError::bad(format!("method must be auto, closed-form or oracle, got '{other}'"))),
    };

    let density = psi.map(|_, z| Complex64::new(z.norm_sqr(), 0.0))?;
    let norm = integrate(&density).re;
    let mut table = Table::new(&["x", "psi_Re", "psi_Im", "abs_psi_sq"]);
    table.note(format!("state method = {method}"));
    table.note(format!("norm = {}", crate::output::fmt_num(norm)));
    if let Some(e) = energy {
        table.note(format!("energy = {} + {}i", crate::output::fmt_num(e.re), crate::output::fmt_num(e.im)));
    }
    for (i, z) in psi.values().iter().enumerate() {
        let x = psi.grid().x(i);
        table.rows.push(vec![Some(x), Some(z.re), Some(z.im), Some(z.norm_sqr())]);
    }
    Ok(table)
}
