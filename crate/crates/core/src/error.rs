use thiserror::Error;

use crate::solver::BlowupReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("order {order} is not allowed here: {reason}")]
    InvalidOrder { order: f64, reason: &'static str },

    #[error("multiplier |xi|^{s} is unbounded at xi = 0 and the input has a nonzero mean")]
    UnboundedMultiplier { s: f64 },

    #[error("boundary data must vanish at t = 0 (|f(0)| = {value:e})")]
    NonVanishingStart { value: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error(
        "supercritical exponent: alpha = {alpha} exceeds the admissible limit {limit} for s = {s}"
    )]
    Supercritical { s: f64, alpha: f64, limit: f64 },

    #[error("compatibility condition phi(0) = f(0) violated: |phi(0) - f(0)| = {gap:e}")]
    Incompatible { gap: f64 },

    #[error("Picard iteration failed to contract; blow-up suspected at t = {}", .0.t_reached)]
    BlowupSuspected(Box<BlowupReport>),

    #[error("inner nonlinear iteration diverged at time step {step}")]
    InnerIterationDiverged { step: usize },

    #[error("fields do not share a common domain")]
    DisjointDomains,

    #[error("{0}")]
    Study(String),
}
