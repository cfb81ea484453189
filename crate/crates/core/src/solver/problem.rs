use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{HalfLineFunction, TimeSignal, C64};

/// Sobolev regularity `0 <= s < 3/2`, `s != 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub fn new(s: f64) -> Result<Self> {
        if !(0.0..1.5).contains(&s) {
            return Err(Error::InvalidProblem(format!("s = {s} outside [0, 3/2)")));
        }
        if s == 0.5 {
            return Err(Error::InvalidProblem("s = 1/2 is not supported".into()));
        }
        Ok(Self(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Whether point values at `x = 0` are meaningful (`s > 1/2`).
    pub fn has_trace(self) -> bool {
        self.0 > 0.5
    }
}

/// The data of one initial-boundary value problem
/// `i u_t + u_xx + lambda u |u|^{alpha-1} = 0`, `u(x,0) = phi`, `u(0,t) = f`.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub lambda: C64,
    pub alpha: f64,
    pub s: SobolevIndex,
    pub phi: HalfLineFunction,
    pub f: TimeSignal,
}

impl ProblemSpec {
    pub fn new(lambda: C64, alpha: f64, s: SobolevIndex, phi: HalfLineFunction, f: TimeSignal) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 2.0) {
            return Err(Error::InvalidProblem(format!("alpha = {alpha} must be at least 2")));
        }
        if !lambda.is_finite() {
            return Err(Error::NonFinite("lambda"));
        }
        Ok(Self { lambda, alpha, s, phi, f })
    }

    /// Final time, the end of the boundary data grid.
    pub fn t_final(&self) -> f64 {
        self.f.grid.t_max()
    }

    pub fn is_trivial(&self) -> bool {
        let zero = C64::new(0.0, 0.0);
        self.phi.values.iter().all(|z| *z == zero) && self.f.values.iter().all(|z| *z == zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Relative stopping tolerance on successive Picard iterates.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest accepted ratio between successive iterate differences.
    pub ratio_cap: f64,
    pub max_halvings: usize,
    /// Smallness threshold for the linear part in the critical case.
    pub delta_crit: f64,
    /// Relative tolerance of the compatibility condition.
    pub compat_tol: f64,
    pub min_window_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 60,
            ratio_cap: 0.9,
            max_halvings: 8,
            delta_crit: 0.5,
            compat_tol: 1e-8,
            min_window_steps: crate::grid::MIN_TIME_STEPS,
        }
    }
}

/// Strichartz exponents with `1/q + 1/(2r) = 1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub q: f64,
    pub r: f64,
}

pub fn admissible_pair(s: f64, alpha: f64) -> Result<AdmissiblePair> {
    if !(s >= 0.0 && alpha > 1.0) {
        return Err(Error::InvalidProblem(format!("no admissible pair for s = {s}, alpha = {alpha}")));
    }
    if s >= 0.5 {
        return Ok(AdmissiblePair { q: f64::INFINITY, r: 2.0 });
    }
    let r = (alpha + 1.0) / (1.0 + (alpha - 1.0) * s);
    let q = 4.0 * (alpha + 1.0) / ((alpha - 1.0) * (1.0 - 2.0 * s));
    let gap = 1.0 / q + 0.5 / r - 0.25;
    if gap.abs() > 1e-12 || q < 2.0 || r < 2.0 {
        return Err(Error::InvalidProblem(format!("pair (q, r) = ({q}, {r}) is not admissible")));
    }
    Ok(AdmissiblePair { q, r })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

/// Largest admissible `alpha` for `s < 1/2`; unbounded above `1/2`.
pub fn critical_exponent(s: f64) -> f64 {
    if s < 0.5 {
        (5.0 - 2.0 * s) / (1.0 - 2.0 * s)
    } else {
        f64::INFINITY
    }
}

pub fn criticality(s: f64, alpha: f64) -> Result<Criticality> {
    SobolevIndex::new(s)?;
    let limit = critical_exponent(s);
    if limit.is_infinite() {
        return Ok(Criticality::Subcritical);
    }
    let eps = 1e-12 * limit;
    Ok(if alpha < limit - eps {
        Criticality::Subcritical
    } else if alpha <= limit + eps {
        Criticality::Critical
    } else {
        Criticality::Supercritical
    })
}

/// `phi(0) = f(0)` when `s > 1/2`, within `tol` relative to the larger of
/// the two values (and 1).
pub fn compatibility_check(phi: &HalfLineFunction, f: &TimeSignal, s: SobolevIndex, tol: f64) -> bool {
    if !s.has_trace() {
        return true;
    }
    let (a, b) = (phi.at_origin(), f.values[0]);
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SpatialGrid, TimeGrid};

    #[test]
    fn pairs_from_formulas() {
        let p = admissible_pair(0.0, 3.0).unwrap();
        assert_eq!((p.q, p.r), (8.0, 4.0));
        let p = admissible_pair(0.0, 5.0).unwrap();
        assert_eq!((p.q, p.r), (6.0, 6.0));
        let p = admissible_pair(1.0, 3.0).unwrap();
        assert!(p.q.is_infinite() && p.r == 2.0);
    }

    #[test]
    fn classification() {
        assert_eq!(criticality(0.0, 3.0).unwrap(), Criticality::Subcritical);
        assert_eq!(criticality(0.0, 5.0).unwrap(), Criticality::Critical);
        assert_eq!(criticality(0.25, 9.0).unwrap(), Criticality::Critical);
        assert_eq!(criticality(0.0, 7.0).unwrap(), Criticality::Supercritical);
        assert_eq!(criticality(1.0, 40.0).unwrap(), Criticality::Subcritical);
        assert!(criticality(0.5, 3.0).is_err());
    }

    #[test]
    fn compatibility_only_above_one_half() {
        let sg = SpatialGrid::symmetric(8.0, 32).unwrap();
        let tg = TimeGrid::new(1.0, 8).unwrap();
        let phi = HalfLineFunction::from_fn(sg, |_| C64::new(1.0, 0.0));
        let one = TimeSignal::from_real(tg, |_| 1.0);
        let zero = TimeSignal::zeros(tg);
        let s1 = SobolevIndex::new(1.0).unwrap();
        assert!(compatibility_check(&phi, &one, s1, 1e-8));
        assert!(!compatibility_check(&phi, &zero, s1, 1e-8));
        assert!(compatibility_check(&phi, &zero, SobolevIndex::new(0.3).unwrap(), 1e-8));
    }

    #[test]
    fn rejects_small_alpha_and_half_index() {
        assert!(SobolevIndex::new(0.5).is_err());
        assert!(SobolevIndex::new(1.5).is_err());
        let sg = SpatialGrid::symmetric(8.0, 32).unwrap();
        let tg = TimeGrid::new(1.0, 8).unwrap();
        let phi = HalfLineFunction::from_fn(sg, |_| C64::new(0.0, 0.0));
        let s = SobolevIndex::new(0.0).unwrap();
        assert!(ProblemSpec::new(C64::new(1.0, 0.0), 1.5, s, phi, TimeSignal::zeros(tg)).is_err());
    }
}
