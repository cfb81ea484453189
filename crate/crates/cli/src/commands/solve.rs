use std::path::Path;

use halfline_nls::solver::{blowup_monitor, solve_ibvp, AdmissiblePair, Criticality, SolveReport};
use halfline_nls::{Error, SolutionField, C64};
use serde::Serialize;

use super::{prepare_dir, rel_l2};
use crate::config::RunConfig;
use crate::output::{write_field_csv, write_json, write_signal_csv, write_table, FieldData};
use crate::CliError;

/// Contents of `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub status: &'static str,
    pub t_final: f64,
    pub t_reached: f64,
    pub criticality: Criticality,
    pub pair: AdmissiblePair,
    pub total_iterates: usize,
    pub halvings: usize,
    pub max_fixed_point_residual: f64,
    /// Relative `L^2` gap between `u(., 0)` and `phi` on `x >= 0`.
    pub initial_rel_error: Option<f64>,
    /// Relative `L^2` gap between `u(0, .)` and `f` up to `t_reached`.
    pub trace_rel_error: Option<f64>,
    /// Largest ratio of the `H^s` norm to its initial value.
    pub norm_growth: Option<f64>,
    /// Contraction ratios of the last failed window, after a suspected blow-up.
    pub last_ratios: Option<Vec<f64>>,
    pub report: SolveReport,
}

pub fn cmd_solve(cfg: &RunConfig, out: &Path) -> Result<SolveSummary, CliError> {
    let spec = cfg.spec()?;
    prepare_dir(out)?;
    let (field, report, status, ratios, failure) = match solve_ibvp(&spec, &cfg.solver) {
        Ok((u, report)) => (Some(u), report, "converged", None, None),
        Err(Error::BlowupSuspected(b)) => {
            log::warn!("blow-up suspected at t = {}", b.t_reached);
            let ratios = Some(b.last_ratios.clone());
            (b.partial.clone(), b.report.clone(), "blowup_suspected", ratios, Some(Error::BlowupSuspected(b)))
        }
        Err(e) => return Err(e.into()),
    };
    let mut summary = SolveSummary {
        status,
        t_final: spec.t_final(),
        t_reached: report.t_reached,
        criticality: report.criticality,
        pair: report.pair,
        total_iterates: report.total_iterates(),
        halvings: report.halvings,
        max_fixed_point_residual: report.max_fixed_point_residual(),
        initial_rel_error: None,
        trace_rel_error: None,
        norm_growth: None,
        last_ratios: ratios,
        report,
    };
    if let Some(u) = &field {
        write_solution(cfg, out, u, &spec.phi.values, &spec.f.values, &mut summary)?;
    }
    if cfg.output.formats.json {
        write_json(&out.join("report.json"), &summary)?;
    }
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(summary),
    }
}

fn write_solution(
    cfg: &RunConfig,
    out: &Path,
    u: &SolutionField,
    phi: &[C64],
    f: &[C64],
    summary: &mut SolveSummary,
) -> Result<(), CliError> {
    let z = u.sgrid.zero_index();
    let x: Vec<f64> = (z..u.sgrid.n()).map(|j| u.sgrid.x(j)).collect();
    let t = u.tgrid.nodes();
    let trace = u.boundary_trace();
    let norms = blowup_monitor(u, cfg.problem.s);
    let n0 = norms.values[0].re;
    let growth: Vec<f64> = norms.values.iter().map(|v| if n0 > 0.0 { v.re / n0 } else { 0.0 }).collect();
    summary.initial_rel_error = Some(rel_l2(&u.slice(0)[z..], phi));
    summary.trace_rel_error = Some(rel_l2(&trace.values, &f[..trace.values.len()]));
    summary.norm_growth = Some(growth.iter().copied().fold(0.0, f64::max));
    if !cfg.output.formats.csv {
        return Ok(());
    }
    write_signal_csv(&out.join("trace.csv"), "t", &t, &trace.values)?;
    write_field_csv(&out.join("field.csv"), &FieldData::from_field(u))?;
    let initial = x.iter().zip(&u.slice(0)[z..]).zip(phi).map(|((x, v), p)| vec![*x, v.re, v.im, p.re, p.im]);
    write_table(&out.join("initial.csv"), &["x", "re", "im", "phi_re", "phi_im"], initial)?;
    let rows = t.iter().zip(&norms.values).zip(&growth).map(|((t, n), g)| vec![*t, n.re, *g]);
    write_table(&out.join("norms.csv"), &["t", "hs_norm", "growth"], rows)
}
