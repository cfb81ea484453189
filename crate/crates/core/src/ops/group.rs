use crate::fourier::Spectral;
use crate::grid::{GridFunction, SolutionField, TimeGrid, C64};

/// Edge magnitude above which periodic wrap-around is reported.
pub const EDGE_TOLERANCE: f64 = 1e-8;

fn warn_edges(phi: &GridFunction) {
    let edge = phi.edge_magnitude();
    if edge > EDGE_TOLERANCE {
        log::warn!("initial data reaches {edge:e} at the grid edge; expect wrap-around");
    }
}

/// `e^{it d_x^2} phi`, by multiplying the transform with `e^{-it xi^2}`.
pub fn free_group(phi: &GridFunction, t: f64) -> GridFunction {
    if t == 0.0 {
        return phi.clone();
    }
    warn_edges(phi);
    let sp = Spectral::new(phi.grid);
    let values = sp.apply_multiplier(&phi.values, |xi| C64::from_polar(1.0, -t * xi * xi));
    GridFunction { grid: phi.grid, values }
}

/// `e^{it_k d_x^2} phi` on every node of `tgrid`.
pub fn free_group_field(phi: &GridFunction, tgrid: TimeGrid) -> SolutionField {
    warn_edges(phi);
    let sp = Spectral::new(phi.grid);
    let n = phi.grid.n();
    let mut hat = phi.values.clone();
    sp.forward(&mut hat);
    let scale = 1.0 / n as f64;
    let mut field = SolutionField::zeros(phi.grid, tgrid);
    field.slice_mut(0).copy_from_slice(&phi.values);
    for k in 1..tgrid.len() {
        let t = tgrid.t(k);
        let slice = field.slice_mut(k);
        for ((out, h), &xi) in slice.iter_mut().zip(&hat).zip(sp.wavenumbers()) {
            *out = h * C64::from_polar(scale, -t * xi * xi);
        }
        sp.inverse(slice);
    }
    field
}
