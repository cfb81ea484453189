//! Numerical solution of the nonlinear Schrodinger equation on the half-line
//! `x > 0` with initial data `phi` and Dirichlet boundary data `f`.
//!
//! The solution is built from explicit linear solution operators (free
//! group, Duhamel operator, boundary forcing operator) and a Picard
//! iteration on the resulting integral equation. A Crank-Nicolson scheme is
//! provided as an independent cross-check.

pub mod error;
pub mod fourier;
pub mod grid;
pub mod ops;
pub mod quadrature;
pub mod riemann_liouville;
pub mod sobolev;
pub mod solver;
pub mod special;
pub mod verification;

pub use error::{Error, Result};
pub use grid::{GridFunction, HalfLineFunction, SolutionField, SpatialGrid, TimeGrid, TimeSignal, C64};
