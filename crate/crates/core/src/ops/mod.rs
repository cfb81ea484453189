//! The solution operators of the linear problem: the free Schrodinger group,
//! the Duhamel operator and the boundary forcing operator `L`.

mod boundary_freq;
mod boundary_kernel;
mod boundary_time;
mod duhamel;
mod group;
mod jump;

pub use boundary_freq::{boundary_forcing_freq, SpectralBoundaryOperator};
pub use boundary_kernel::{boundary_forcing_kernel, ramp_response, step_response, BoundaryOperator};
pub use boundary_time::{boundary_forcing_time, boundary_forcing_time_at};
pub use duhamel::{duhamel, duhamel_field};
pub use group::{free_group, free_group_field, EDGE_TOLERANCE};
pub use jump::{derivative_jump, expected_jump, x_derivative};

/// `(tau - i0)^{1/2}` on the principal branch: `|tau|^{1/2}` for `tau > 0`,
/// `-i |tau|^{1/2}` for `tau < 0`. Points strictly below the real axis use the
/// principal square root directly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BranchSqrt;

impl BranchSqrt {
    pub fn eval(w: crate::grid::C64) -> crate::grid::C64 {
        if w.im == 0.0 && w.re < 0.0 {
            crate::grid::C64::new(0.0, -(-w.re).sqrt())
        } else {
            w.sqrt()
        }
    }
}
