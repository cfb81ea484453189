use std::path::Path;

use halfline_nls::ops::{
    boundary_forcing_freq, boundary_forcing_kernel, boundary_forcing_time, boundary_forcing_time_at, derivative_jump,
    expected_jump, free_group,
};
use halfline_nls::riemann_liouville::{frac_derivative, frac_fourier_path, frac_integral};
use halfline_nls::sobolev::smooth_extension;
use halfline_nls::solver::{solve_ibvp, ProblemSpec};
use halfline_nls::verification::{compare_fields, crank_nicolson, mass_flux_balance, FDConfig};
use halfline_nls::{GridFunction, Result, SolutionField, SpatialGrid, TimeGrid, TimeSignal, C64};
use serde::Serialize;

use super::{prepare_dir, rel_l2};
use crate::config::RunConfig;
use crate::output::write_json;
use crate::presets::InitialPreset;
use crate::CliError;

const GROUP_TOL: f64 = 1e-10;
const SEMIGROUP_TOL: f64 = 1e-4;
const PATHS_TOL: f64 = 1e-2;
const REPRESENTATION_TOL: f64 = 1e-2;
const TRACE_TOL: f64 = 1e-3;
const JUMP_TOL: f64 = 1e-1;
const DATA_TOL: f64 = 1e-6;
const FLUX_TOL: f64 = 1e-2;
/// Floor of the Crank-Nicolson tolerance, which otherwise scales with the
/// scheme's own estimated error.
const FD_TOL: f64 = 1e-3;
const FD_SAFETY: f64 = 3.0;
/// Crank-Nicolson tolerance for file-sourced data, which cannot be refined.
const FD_FILE_TOL: f64 = 1e-2;
/// Smallest grids on which the Crank-Nicolson comparison is attempted.
const FD_MIN_NODES: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn measured(name: &'static str, value: f64, tolerance: f64, detail: String) -> Self {
        Self { name, value: Some(value), tolerance, pass: value <= tolerance, detail }
    }

    fn skipped(name: &'static str, tolerance: f64, detail: String) -> Self {
        Self { name, value: None, tolerance, pass: true, detail }
    }

    fn errored(name: &'static str, tolerance: f64, e: impl std::fmt::Display) -> Self {
        Self { name, value: None, tolerance, pass: false, detail: format!("error: {e}") }
    }
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    pass: bool,
    failed: Vec<&'static str>,
    checks: &'a [Check],
}

/// `16 t^2 (T - t)^2 / T^4`, the test signal for the operator checks.
fn bump(tg: TimeGrid) -> TimeSignal {
    let t_max = tg.t_max();
    TimeSignal::from_real(tg, move |t| 16.0 * (t * (t_max - t)).powi(2) / t_max.powi(4))
}

fn run(name: &'static str, tol: f64, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::errored(name, tol, e))
}

fn group_check(sg: SpatialGrid, spec: &ProblemSpec) -> Check {
    const NAME: &str = "free group law and unitarity";
    run(NAME, GROUP_TOL, || {
        let mut phi = smooth_extension(&spec.phi);
        if phi.l2_norm() == 0.0 {
            phi = GridFunction::from_fn(sg, |x| C64::new((-x * x).exp(), 0.0));
        }
        let (t1, t2) = (spec.t_final() / 3.0, -spec.t_final() / 2.0);
        let two = free_group(&free_group(&phi, t1), t2);
        let one = free_group(&phi, t1 + t2);
        let law = rel_l2(&two.values, &one.values);
        let unit = (free_group(&phi, t1).l2_norm() - phi.l2_norm()).abs() / phi.l2_norm();
        Ok(Check::measured(NAME, law.max(unit), GROUP_TOL, format!("law {law:.2e}, norm drift {unit:.2e}")))
    })
}

fn semigroup_check(g: &TimeSignal) -> Check {
    const NAME: &str = "fractional integral semigroup";
    run(NAME, SEMIGROUP_TOL, || {
        let twice = frac_integral(&frac_integral(g, 0.5)?, 0.5)?;
        let once = frac_integral(g, 1.0)?;
        let e = rel_l2(&twice.values, &once.values);
        Ok(Check::measured(NAME, e, SEMIGROUP_TOL, format!("I_1/2 I_1/2 vs I_1: {e:.2e}")))
    })
}

fn paths_check(g: &TimeSignal) -> Check {
    const NAME: &str = "fractional calculus: Fourier vs time";
    run(NAME, PATHS_TOL, || {
        let mut parts = Vec::new();
        let mut worst = 0.0f64;
        for order in [0.5, 1.0, -0.5] {
            let time = if order > 0.0 { frac_integral(g, order)? } else { frac_derivative(g, -order)?.signal };
            let freq = frac_fourier_path(g, order)?;
            let e = rel_l2(&freq.values, &time.values);
            worst = worst.max(e);
            parts.push(format!("order {order}: {e:.2e}"));
        }
        Ok(Check::measured(NAME, worst, PATHS_TOL, parts.join(", ")))
    })
}

fn representation_check(g: &TimeSignal, sg: SpatialGrid, tg: TimeGrid) -> Check {
    const NAME: &str = "boundary operator representation equivalence";
    run(NAME, REPRESENTATION_TOL, || {
        let time = boundary_forcing_time(g, sg, tg)?;
        let freq = compare_fields(&boundary_forcing_freq(g, sg, tg)?, &time)?.rel_l2;
        let kernel = compare_fields(&boundary_forcing_kernel(g, sg, tg)?, &time)?.rel_l2;
        Ok(Check::measured(
            NAME,
            freq.max(kernel),
            REPRESENTATION_TOL,
            format!("frequency vs time {freq:.2e}, kernel vs time {kernel:.2e}"),
        ))
    })
}

fn trace_check(g: &TimeSignal) -> Check {
    const NAME: &str = "boundary operator trace";
    run(NAME, TRACE_TOL, || {
        let tr = boundary_forcing_time_at(g, 0.0)?;
        let e = tr.values.iter().zip(&g.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / g.sup_norm();
        Ok(Check::measured(NAME, e, TRACE_TOL, format!("sup |L f(0, t) - f(t)| / sup |f| = {e:.2e}")))
    })
}

fn jump_check(g: &TimeSignal, sg: SpatialGrid, tg: TimeGrid) -> Check {
    const NAME: &str = "derivative jump identity";
    run(NAME, JUMP_TOL, || {
        let lf = boundary_forcing_kernel(g, sg, tg)?;
        let (left, right) = derivative_jump(g, &lf)?;
        let jump: Vec<C64> = left.values.iter().zip(&right.values).map(|(a, b)| a - b).collect();
        let e = rel_l2(&jump, &expected_jump(g)?.values);
        Ok(Check::measured(NAME, e, JUMP_TOL, format!("jump vs 2 e^(-i pi/4) I_(-1/2) f: {e:.2e}")))
    })
}

/// Checks on the integral-equation solution of the configured problem.
fn solution_checks(spec: &ProblemSpec, cfg: &RunConfig, checks: &mut Vec<Check>) -> Option<SolutionField> {
    const DATA: &str = "solution matches initial and boundary data";
    const FLUX: &str = "mass-flux balance";
    let u = match solve_ibvp(spec, &cfg.solver) {
        Ok((u, _)) => u,
        Err(e) => {
            checks.push(Check::errored(DATA, DATA_TOL, &e));
            checks.push(Check::errored(FLUX, FLUX_TOL, &e));
            return None;
        }
    };
    let z = u.sgrid.zero_index();
    let initial = rel_l2(&u.slice(0)[z..], &spec.phi.values);
    let trace = rel_l2(&u.boundary_trace().values, &spec.f.values);
    checks.push(Check::measured(
        DATA,
        initial.max(trace),
        DATA_TOL,
        format!("u(x, 0) vs phi {initial:.2e}, u(0, t) vs f {trace:.2e}"),
    ));
    let flux = mass_flux_balance(&u).rel_imbalance;
    checks.push(Check::measured(FLUX, flux, FLUX_TOL, format!("relative imbalance {flux:.2e}")));
    Some(u)
}

fn fd_check(spec: &ProblemSpec, cfg: &RunConfig, u: Option<&SolutionField>) -> Check {
    const NAME: &str = "Crank-Nicolson agreement";
    let sg = spec.phi.grid;
    let nx = sg.half_line_len();
    let nt = cfg.grid.nt;
    if !nx.is_power_of_two() || nx < FD_MIN_NODES || nt < FD_MIN_NODES {
        return Check::skipped(NAME, FD_TOL, format!("grid too small for the finite-difference run ({nx} x {nt})"));
    }
    let Some(u) = u else { return Check::errored(NAME, FD_TOL, "no integral-equation solution") };
    let refined = match (&cfg.phi, cfg.f.is_file()) {
        (InitialPreset::File(_), _) | (_, true) => None,
        _ => Some(cfg.grid.refined(1)),
    };
    run(NAME, FD_TOL, || {
        let cn = crank_nicolson(spec, &FDConfig::new(nx, nt, sg.x_max()))?;
        let e = compare_fields(u, &cn)?.rel_l2;
        let Some(grid) = refined else {
            return Ok(Check::measured(NAME, e, FD_FILE_TOL, format!("relative L2 difference {e:.2e}")));
        };
        let fine_spec = cfg.spec_on(&grid).map_err(|e| halfline_nls::Error::Study(e.to_string()))?;
        let fine = crank_nicolson(&fine_spec, &FDConfig::new(2 * nx, 2 * nt, sg.x_max()))?;
        let own = compare_fields(&cn, &fine)?.rel_l2 * 4.0 / 3.0;
        Ok(Check::measured(
            NAME,
            e,
            FD_TOL.max(FD_SAFETY * own),
            format!("relative L2 difference {e:.2e}, estimated finite-difference error {own:.2e}"),
        ))
    })
}

/// Runs the property suite on the configured grids.
pub fn suite(cfg: &RunConfig) -> std::result::Result<Vec<Check>, CliError> {
    let spec = cfg.spec()?;
    let sg = spec.phi.grid;
    let tg = spec.f.grid;
    let g = bump(tg);
    let mut checks = vec![
        group_check(sg, &spec),
        semigroup_check(&g),
        paths_check(&g),
        representation_check(&g, sg, tg),
        trace_check(&g),
        jump_check(&g, sg, tg),
    ];
    let u = solution_checks(&spec, cfg, &mut checks);
    checks.push(fd_check(&spec, cfg, u.as_ref()));
    Ok(checks)
}

pub fn cmd_verify(cfg: &RunConfig, out: &Path) -> std::result::Result<Vec<Check>, CliError> {
    let checks = suite(cfg)?;
    for c in &checks {
        let status = match (c.pass, c.value) {
            (false, _) => "FAIL",
            (true, None) => "SKIP",
            (true, Some(_)) => "PASS",
        };
        println!("[{status}] {}: {} (tolerance {:.0e})", c.name, c.detail, c.tolerance);
    }
    let failed: Vec<&'static str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    prepare_dir(out)?;
    let report = VerifyReport { pass: failed.is_empty(), failed: failed.clone(), checks: &checks };
    write_json(&out.join("verify.json"), &report)?;
    if failed.is_empty() {
        Ok(checks)
    } else {
        Err(CliError::Verify(failed.join(", ")))
    }
}
