//! Independent checks: a Crank-Nicolson solver for the same problem, field
//! comparison, convergence tables and residual diagnostics.

mod compare;
mod convergence;
mod crank_nicolson;
mod diagnostics;

pub use compare::{compare_fields, compare_with_exact, FieldComparison};
pub use convergence::{convergence_study, ConvergenceTable, StudyLevel};
pub use crank_nicolson::{crank_nicolson, crank_nicolson_fn, FDConfig, RightBoundary};
pub use diagnostics::{mass_flux_balance, nls_residual, schrodinger_residual, MassFlux, Residual};
