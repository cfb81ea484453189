use serde::{Deserialize, Serialize};

use super::compare::{compare_fields, compare_with_exact};
use crate::error::{Error, Result};
use crate::grid::{SolutionField, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyLevel {
    pub level: usize,
    pub nx: usize,
    pub nt: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub levels: Vec<StudyLevel>,
    /// `log2(e_k / e_{k+1})`; absent when the errors are not strictly
    /// decreasing and positive.
    pub orders: Option<Vec<f64>>,
    /// Set when the errors fail to decrease monotonically (or vanish).
    pub flagged: bool,
    /// Whether errors are against a closed form rather than the finest level.
    pub exact_reference: bool,
}

impl ConvergenceTable {
    /// Smallest observed order, if orders were reported.
    pub fn min_order(&self) -> Option<f64> {
        self.orders.as_ref().map(|o| o.iter().copied().fold(f64::INFINITY, f64::min))
    }
}

/// Runs `solve(level)` for `level = 0..levels` (each level refining both
/// grids by two) and tabulates errors against `exact` when given, otherwise
/// against the finest level, which then gets no entry of its own.
pub fn convergence_study(
    levels: usize,
    solve: impl Fn(usize) -> Result<SolutionField>,
    exact: Option<&dyn Fn(f64, f64) -> C64>,
) -> Result<ConvergenceTable> {
    if levels < 3 {
        return Err(Error::Study(format!("need at least 3 levels, got {levels}")));
    }
    let fields: Vec<SolutionField> = (0..levels).map(&solve).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    match exact {
        Some(e) => {
            for (level, u) in fields.iter().enumerate() {
                rows.push(StudyLevel { level, nx: u.sgrid.n(), nt: u.tgrid.m(), error: compare_with_exact(u, e) });
            }
        }
        None => {
            let finest = &fields[levels - 1];
            for (level, u) in fields[..levels - 1].iter().enumerate() {
                let error = compare_fields(u, finest)?.rel_l2;
                rows.push(StudyLevel { level, nx: u.sgrid.n(), nt: u.tgrid.m(), error });
            }
        }
    }
    let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
    let monotone = errors.iter().all(|e| *e > 0.0 && e.is_finite()) && errors.windows(2).all(|w| w[1] < w[0]);
    let orders = monotone.then(|| errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect());
    if !monotone {
        log::warn!("errors are not strictly decreasing; orders not reported");
    }
    Ok(ConvergenceTable { levels: rows, orders, flagged: !monotone, exact_reference: exact.is_some() })
}
