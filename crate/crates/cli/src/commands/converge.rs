use std::path::Path;

use halfline_nls::solver::solve_ibvp;
use halfline_nls::verification::{convergence_study, ConvergenceTable};
use halfline_nls::C64;

use super::prepare_dir;
use crate::config::RunConfig;
use crate::output::{fmt_f64, write_json};
use crate::presets::{BoundaryPreset, BoundaryShape, InitialPreset};
use crate::CliError;

/// Centre `c` when the configuration is the soliton `e^{it} sech(x - c)` of
/// `i u_t + u_xx + 2|u|^2 u = 0`.
pub fn soliton_reference(cfg: &RunConfig) -> Option<f64> {
    let p = &cfg.problem;
    if p.lambda != C64::new(2.0, 0.0) || p.alpha != 3.0 {
        return None;
    }
    let InitialPreset::Sech { center, amplitude } = cfg.phi else { return None };
    let BoundaryPreset::Shaped { shape: BoundaryShape::Constant, amplitude: a, phase } = cfg.f else { return None };
    let matches = amplitude == 1.0 && phase == 1.0 && (a - 1.0 / center.cosh()).abs() <= 1e-12;
    matches.then_some(center)
}

pub fn cmd_converge(cfg: &RunConfig, levels: usize, out: &Path) -> Result<ConvergenceTable, CliError> {
    if levels < 3 {
        return Err(CliError::Config(format!("--levels must be at least 3, got {levels}")));
    }
    if cfg.f.is_file() || matches!(cfg.phi, InitialPreset::File(_)) {
        return Err(CliError::Config("file-sourced data cannot be refined; use presets".into()));
    }
    let solve = |level: usize| {
        let grid = cfg.grid.refined(level);
        let spec = cfg.spec_on(&grid).map_err(|e| halfline_nls::Error::Study(e.to_string()))?;
        log::info!("level {level}: nx = {}, nt = {}", grid.nx, grid.nt);
        solve_ibvp(&spec, &cfg.solver).map(|(u, _)| u)
    };
    let table = match soliton_reference(cfg) {
        Some(c) => {
            let exact = move |x: f64, t: f64| C64::from_polar(1.0 / (x - c).cosh(), t);
            convergence_study(levels, solve, Some(&exact))?
        }
        None => convergence_study(levels, solve, None)?,
    };
    prepare_dir(out)?;
    write_csv(&out.join("convergence.csv"), &table)?;
    if cfg.output.formats.json {
        write_json(&out.join("convergence.json"), &table)?;
    }
    let reference = if table.exact_reference { "exact solution" } else { "finest level" };
    println!("errors against the {reference}");
    println!("{:>5} {:>7} {:>7} {:>12} {:>7}", "level", "nx", "nt", "error", "order");
    for (i, row) in table.levels.iter().enumerate() {
        let order = order_of(&table, i).map_or("-".into(), |o| format!("{o:.3}"));
        println!("{:>5} {:>7} {:>7} {:>12.4e} {:>7}", row.level, row.nx, row.nt, row.error, order);
    }
    if table.flagged {
        eprintln!("warning: errors do not decrease monotonically; no orders reported");
    }
    Ok(table)
}

/// Observed order between row `i - 1` and row `i`.
fn order_of(table: &ConvergenceTable, i: usize) -> Option<f64> {
    let orders = table.orders.as_ref()?;
    i.checked_sub(1).and_then(|k| orders.get(k).copied())
}

fn write_csv(path: &Path, table: &ConvergenceTable) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["level", "nx", "nt", "error", "order"]).map_err(err)?;
    for (i, row) in table.levels.iter().enumerate() {
        let order = order_of(table, i).map_or(String::new(), fmt_f64);
        w.write_record([row.level.to_string(), row.nx.to_string(), row.nt.to_string(), fmt_f64(row.error), order])
            .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
