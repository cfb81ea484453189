//! Picard iteration for the half-line problem, window by window in time.

mod lambda;
mod picard;
mod problem;

pub use lambda::{nonlinearity, LambdaOperator};
pub use picard::{
    blowup_monitor, continue_solution, contraction_probe, solve_ibvp, BlowupReport, IterationReport, RejectedWindow,
    SolveReport, WindowReport,
};
pub use problem::{
    admissible_pair, compatibility_check, critical_exponent, criticality, AdmissiblePair, Criticality,
    ProblemSpec, SobolevIndex, SolverConfig,
};
