use serde::{Deserialize, Serialize};

use super::lambda::LambdaOperator;
use super::problem::{admissible_pair, compatibility_check, criticality, AdmissiblePair, Criticality, ProblemSpec, SolverConfig};
use crate::error::{Error, Result};
use crate::fourier::Spectral;
use crate::grid::{SolutionField, TimeGrid, TimeSignal, MIN_TIME_STEPS};
use crate::sobolev::{extend_half_line, mixed_norm, smooth_extension, sup_time_sobolev};

/// Differences below this fraction of the iterate norm are roundoff and are
/// not used to judge contraction.
const NOISE_FLOOR: f64 = 1e-13;

/// Picard history on one time window.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub iterates: usize,
    /// `||Lambda u_k - u_k|| / ||u_k||` for each iterate.
    pub residual_history: Vec<f64>,
    /// Ratios of successive iterate differences.
    pub contraction_ratios: Vec<f64>,
    pub fixed_point_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub t_start: f64,
    pub steps: usize,
    pub iteration: IterationReport,
    /// Mixed Strichartz norm of the window's linear part.
    pub linear_mixed_norm: f64,
}

/// A window attempt that failed and led to halving.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedWindow {
    pub t_start: f64,
    pub steps: usize,
    pub linear_mixed_norm: f64,
    pub contraction_ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub criticality: Criticality,
    pub pair: AdmissiblePair,
    pub windows: Vec<WindowReport>,
    pub rejected_windows: Vec<RejectedWindow>,
    pub halvings: usize,
    pub t_reached: f64,
}

impl SolveReport {
    pub fn total_iterates(&self) -> usize {
        self.windows.iter().map(|w| w.iteration.iterates).sum()
    }

    pub fn max_fixed_point_residual(&self) -> f64 {
        self.windows.iter().map(|w| w.iteration.fixed_point_residual).fold(0.0, f64::max)
    }
}

/// Returned inside [`Error::BlowupSuspected`].
#[derive(Debug, Clone)]
pub struct BlowupReport {
    pub t_reached: f64,
    /// Solution up to `t_reached`, if any window converged.
    pub partial: Option<SolutionField>,
    pub report: SolveReport,
    /// Contraction ratios of the last failed attempt.
    pub last_ratios: Vec<f64>,
}

enum WindowOutcome {
    Converged(SolutionField, IterationReport),
    NoContraction(Vec<f64>),
}

/// Picard iteration from `start`. With a `head`, the slices it covers are
/// held fixed so only the new window moves.
fn iterate_window(
    op: &LambdaOperator,
    sp: &Spectral,
    s: f64,
    cfg: &SolverConfig,
    start: SolutionField,
    head: Option<&SolutionField>,
) -> Result<WindowOutcome> {
    let mut u = start;
    let mut report = IterationReport::default();
    let mut prev_diff: Option<f64> = None;
    for _ in 0..cfg.max_iter {
        let mut next = match op.apply(&u) {
            Ok(v) => v,
            Err(Error::NonFinite(_)) => return Ok(WindowOutcome::NoContraction(report.contraction_ratios)),
            Err(e) => return Err(e),
        };
        if let Some(h) = head {
            freeze(&mut next, h);
        }
        report.iterates += 1;
        let unorm = sup_time_sobolev(sp, &u, s);
        let diff = sup_time_sobolev(sp, &next.difference(&u)?, s);
        if !diff.is_finite() || !unorm.is_finite() {
            return Ok(WindowOutcome::NoContraction(report.contraction_ratios));
        }
        let rel = if unorm > 0.0 { diff / unorm } else { diff };
        report.residual_history.push(rel);
        if let Some(p) = prev_diff {
            if p > NOISE_FLOOR * unorm {
                let ratio = diff / p;
                report.contraction_ratios.push(ratio);
                if ratio > cfg.ratio_cap && diff > NOISE_FLOOR * unorm {
                    return Ok(WindowOutcome::NoContraction(report.contraction_ratios));
                }
            }
        }
        if diff <= cfg.tol * unorm || diff == 0.0 {
            report.fixed_point_residual = rel;
            return Ok(WindowOutcome::Converged(u, report));
        }
        prev_diff = Some(diff);
        u = next;
    }
    Ok(WindowOutcome::NoContraction(report.contraction_ratios))
}

fn freeze(u: &mut SolutionField, head: &SolutionField) {
    let len = head.values.len();
    u.values[..len].copy_from_slice(&head.values);
}

/// `head` followed by `steps` zero slices.
fn zero_padded(head: &SolutionField, steps: usize) -> Result<SolutionField> {
    let mut values = head.values.clone();
    values.resize(head.values.len() + steps * head.n(), crate::grid::C64::new(0.0, 0.0));
    SolutionField::new(head.sgrid, TimeGrid::from_step(head.tgrid.dt(), head.tgrid.m() + steps)?, values)
}

/// Slices `k..` of `u` as a field starting at `t = 0`.
fn tail(u: &SolutionField, k: usize) -> Result<SolutionField> {
    let n = u.n();
    SolutionField::new(u.sgrid, TimeGrid::from_step(u.tgrid.dt(), u.tgrid.m() - k)?, u.values[k * n..].to_vec())
}

fn validate(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<(Criticality, AdmissiblePair)> {
    let s = spec.s.value();
    let class = criticality(s, spec.alpha)?;
    if class == Criticality::Supercritical {
        return Err(Error::Supercritical { s, alpha: spec.alpha, limit: super::critical_exponent(s) });
    }
    if !spec.phi.grid.is_zero_aligned() {
        return Err(Error::InvalidGrid("the solver needs a node at x = 0".into()));
    }
    if !compatibility_check(&spec.phi, &spec.f, spec.s, cfg.compat_tol) {
        return Err(Error::Incompatible { gap: (spec.phi.at_origin() - spec.f.values[0]).norm() });
    }
    Ok((class, admissible_pair(s, spec.alpha)?))
}

/// Marches the integral equation window by window up to step `k_end` of
/// `spec.f`'s grid. A window starting at `t_k` keeps the solution on
/// `[0, t_k]` fixed and iterates the full-history map on `[0, t_k + window]`,
/// which is the restarted equation from `u(t_k)` written through the
/// concatenation identities for `L` and `D`.
fn march(
    spec: &ProblemSpec,
    cfg: &SolverConfig,
    k_end: usize,
    head: Option<SolutionField>,
    mut report: SolveReport,
) -> Result<(SolutionField, SolveReport)> {
    let sgrid = spec.phi.grid;
    let sp = Spectral::new(sgrid);
    let s = spec.s.value();
    let dt = spec.f.grid.dt();
    let min_steps = cfg.min_window_steps.max(MIN_TIME_STEPS);
    let op = LambdaOperator::new(&smooth_extension(&spec.phi), &spec.f.segment(0, k_end)?, spec.lambda, spec.alpha)?;
    let mut acc = head;
    let mut k = acc.as_ref().map_or(0, |h| h.tgrid.m());
    let mut window = k_end - k;
    while k < k_end {
        let rem = k_end - k;
        let mut steps = window.min(rem);
        if rem > steps && rem - steps < MIN_TIME_STEPS {
            steps = rem;
        }
        let start = match &acc {
            None => Ok(op.linear_part().truncate(steps)?),
            Some(h) => op.apply(&zero_padded(h, steps)?).map(|mut v| {
                freeze(&mut v, h);
                v
            }),
        };
        let (outcome, lin_norm) = match start {
            Err(Error::NonFinite(_)) => (WindowOutcome::NoContraction(Vec::new()), f64::INFINITY),
            Err(e) => return Err(e),
            Ok(start) => {
                let lin_norm = mixed_norm(&sp, &tail(&start, k)?, s, report.pair.q, report.pair.r);
                if report.criticality == Criticality::Critical && lin_norm >= cfg.delta_crit {
                    log::info!("linear part norm {lin_norm:.3e} above threshold on {steps} steps");
                    (WindowOutcome::NoContraction(Vec::new()), lin_norm)
                } else {
                    (iterate_window(&op, &sp, s, cfg, start, acc.as_ref())?, lin_norm)
                }
            }
        };
        match outcome {
            WindowOutcome::Converged(u, it) => {
                log::debug!("window at t = {:.4} ({steps} steps): {} iterates", k as f64 * dt, it.iterates);
                report.windows.push(WindowReport {
                    t_start: k as f64 * dt,
                    steps,
                    iteration: it,
                    linear_mixed_norm: lin_norm,
                });
                acc = Some(u);
                k += steps;
                report.t_reached = k as f64 * dt;
            }
            WindowOutcome::NoContraction(ratios) => {
                report.rejected_windows.push(RejectedWindow {
                    t_start: k as f64 * dt,
                    steps,
                    linear_mixed_norm: lin_norm,
                    contraction_ratios: ratios.clone(),
                });
                if report.halvings >= cfg.max_halvings || steps / 2 < min_steps {
                    log::warn!("no contraction at t = {:.4}; giving up", k as f64 * dt);
                    return Err(Error::BlowupSuspected(Box::new(BlowupReport {
                        t_reached: k as f64 * dt,
                        partial: acc,
                        report,
                        last_ratios: ratios,
                    })));
                }
                window = steps / 2;
                report.halvings += 1;
                log::info!("halving window to {window} steps at t = {:.4}", k as f64 * dt);
            }
        }
    }
    let field = match acc {
        Some(f) => f,
        None => SolutionField::zeros(sgrid, TimeGrid::from_step(dt, k_end)?),
    };
    Ok((field, report))
}

fn empty_report(class: Criticality, pair: AdmissiblePair) -> SolveReport {
    SolveReport { criticality: class, pair, windows: Vec::new(), rejected_windows: Vec::new(), halvings: 0, t_reached: 0.0 }
}

/// Solves the integral equation on `[0, T]`, `T` being the end of the
/// boundary data grid. The result lives on the whole spatial grid; its
/// `x >= 0` part is the half-line solution.
pub fn solve_ibvp(spec: &ProblemSpec, cfg: &SolverConfig) -> Result<(SolutionField, SolveReport)> {
    let (class, pair) = validate(spec, cfg)?;
    let mut report = empty_report(class, pair);
    let sgrid = spec.phi.grid;
    if spec.is_trivial() {
        report.t_reached = spec.t_final();
        report.windows.push(WindowReport {
            t_start: 0.0,
            steps: spec.f.grid.m(),
            iteration: IterationReport { iterates: 1, residual_history: vec![0.0], ..Default::default() },
            linear_mixed_norm: 0.0,
        });
        return Ok((SolutionField::zeros(sgrid, spec.f.grid), report));
    }
    report.t_reached = 0.0;
    march(spec, cfg, spec.f.grid.m(), None, report)
}

/// Extends a solution `u` of `spec` on `[0, T]` to `[0, T + delta]` by
/// solving the restarted equation from `u(., T)` with the shifted boundary
/// data. The boundary data of `spec` must cover the longer interval on the
/// same step. Slices up to `T` are returned unchanged.
pub fn continue_solution(
    u: &SolutionField,
    spec: &ProblemSpec,
    delta: f64,
    cfg: &SolverConfig,
) -> Result<(SolutionField, SolveReport)> {
    let (class, pair) = validate(spec, cfg)?;
    let dt = u.tgrid.dt();
    if (spec.f.grid.dt() - dt).abs() > 1e-12 * dt {
        return Err(Error::GridMismatch("boundary data step differs from the solution's".into()));
    }
    if u.sgrid != spec.phi.grid {
        return Err(Error::GridMismatch("solution and initial data grids differ".into()));
    }
    let k0 = u.tgrid.m();
    let extra = (delta / dt).round() as usize;
    let mut report = empty_report(class, pair);
    report.t_reached = u.tgrid.t_max();
    if extra == 0 {
        return Ok((u.clone(), report));
    }
    if k0 + extra > spec.f.grid.m() {
        return Err(Error::InvalidProblem("boundary data too short for the continuation".into()));
    }
    if extra < MIN_TIME_STEPS {
        return Err(Error::InvalidProblem(format!("continuation needs at least {MIN_TIME_STEPS} steps")));
    }
    march(spec, cfg, k0 + extra, Some(u.clone()), report)
}

/// First contraction ratio of the Picard map on the initial window for each
/// window length in `steps` (no halving). `None` when the first two
/// differences are at roundoff level.
pub fn contraction_probe(spec: &ProblemSpec, steps: &[usize]) -> Result<Vec<(f64, Option<f64>)>> {
    let sgrid = spec.phi.grid;
    let sp = Spectral::new(sgrid);
    let s = spec.s.value();
    let init = smooth_extension(&spec.phi);
    let mut out = Vec::with_capacity(steps.len());
    for &m in steps {
        let g = spec.f.segment(0, m)?;
        let op = LambdaOperator::new(&init, &g, spec.lambda, spec.alpha)?;
        let u0 = op.linear_part().clone();
        let u1 = op.apply(&u0)?;
        let u2 = op.apply(&u1)?;
        let d1 = sup_time_sobolev(&sp, &u1.difference(&u0)?, s);
        let d2 = sup_time_sobolev(&sp, &u2.difference(&u1)?, s);
        let scale = sup_time_sobolev(&sp, &u1, s);
        let ratio = (d1 > NOISE_FLOOR * scale).then(|| d2 / d1);
        out.push((g.grid.t_max(), ratio));
    }
    Ok(out)
}

/// Per-slice `H^s` norm of the extension of the `x >= 0` part of `u`.
pub fn blowup_monitor(u: &SolutionField, s: f64) -> TimeSignal {
    let sp = Spectral::new(u.sgrid);
    let values = (0..u.tgrid.len())
        .map(|k| {
            let ext = extend_half_line(&u.slice_function(k).restrict_half_line());
            crate::grid::C64::new(crate::sobolev::sobolev_norm_with(&sp, &ext.values, s, false), 0.0)
        })
        .collect();
    TimeSignal { grid: u.tgrid, values }
}
