use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::grid::{SolutionField, TimeSignal, C64};
use crate::riemann_liouville::frac_derivative;

/// One-sided second-order `x`-derivatives of `Lf` at `0-` and `0+`.
pub fn derivative_jump(f: &TimeSignal, lf: &SolutionField) -> Result<(TimeSignal, TimeSignal)> {
    if f.grid != lf.tgrid {
        return Err(Error::GridMismatch("boundary data and field time grids differ".into()));
    }
    let sg = lf.sgrid;
    let z = sg.zero_index();
    if !sg.is_zero_aligned() || z < 2 || z + 2 >= sg.n() {
        return Err(Error::InvalidGrid("jump needs a zero node with two neighbours each side".into()));
    }
    let h2 = 2.0 * sg.dx();
    let len = lf.tgrid.len();
    let left = (0..len)
        .map(|k| (3.0 * lf.at(z, k) - 4.0 * lf.at(z - 1, k) + lf.at(z - 2, k)) / h2)
        .collect();
    let right = (0..len)
        .map(|k| (-3.0 * lf.at(z, k) + 4.0 * lf.at(z + 1, k) - lf.at(z + 2, k)) / h2)
        .collect();
    Ok((TimeSignal { grid: f.grid, values: left }, TimeSignal { grid: f.grid, values: right }))
}

/// `2 e^{-i pi/4} I_{-1/2} f`, the value of `d_x Lf(0-) - d_x Lf(0+)`.
pub fn expected_jump(f: &TimeSignal) -> Result<TimeSignal> {
    let h = frac_derivative(f, 0.5)?.signal;
    let c = C64::from_polar(2.0, -FRAC_PI_4);
    Ok(h.map(|z| z * c))
}

/// Centred difference `d_x u(x_j, t_k)` at an interior node.
pub fn x_derivative(field: &SolutionField, j: usize, k: usize) -> C64 {
    assert!(j >= 1 && j + 1 < field.n(), "node {j} has no two-sided stencil");
    (field.at(j + 1, k) - field.at(j - 1, k)) / (2.0 * field.sgrid.dx())
}
