use rayon::prelude::*;

use super::BranchSqrt;
use crate::error::{Error, Result};
use crate::fourier::CausalSpectrum;
use crate::grid::{SolutionField, SpatialGrid, TimeGrid, TimeSignal, C64};

const CHUNK: usize = 32;

/// Frequency representation of `L`: each `x` column is the inverse time
/// transform of `e^{-|x| (tau - i0)^{1/2}} f^(tau)`.
#[derive(Debug, Clone, Copy)]
pub struct SpectralBoundaryOperator {
    pub sgrid: SpatialGrid,
    pub tgrid: TimeGrid,
}

impl SpectralBoundaryOperator {
    pub fn new(sgrid: SpatialGrid, tgrid: TimeGrid) -> Self {
        Self { sgrid, tgrid }
    }

    pub fn apply(&self, f: &TimeSignal) -> Result<SolutionField> {
        if f.grid != self.tgrid {
            return Err(Error::GridMismatch("boundary data and time grid differ".into()));
        }
        let sg = self.sgrid;
        let n = sg.n();
        let mut field = SolutionField::zeros(sg, self.tgrid);
        if f.values.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            return Ok(field);
        }
        let cs = CausalSpectrum::new(f);
        let roots: Vec<C64> = cs.frequencies().iter().map(|&w| BranchSqrt::eval(w)).collect();
        let dx = sg.dx();
        let z = sg.zero_index();

        let column = |dist: f64| -> Vec<C64> {
            let mult: Vec<C64> = roots.iter().map(|r| (-dist * r).exp()).collect();
            cs.apply(&mult)
        };

        if sg.is_zero_aligned() {
            let reach = z.max(n - 1 - z);
            let step: Vec<C64> = roots.iter().map(|r| (-dx * r).exp()).collect();
            let starts: Vec<usize> = (0..=reach).step_by(CHUNK).collect();
            let columns: Vec<Vec<C64>> = starts
                .par_iter()
                .flat_map_iter(|&d0| {
                    let mut mult: Vec<C64> =
                        roots.iter().map(|r| (-(d0 as f64) * dx * r).exp()).collect();
                    let end = (d0 + CHUNK).min(reach + 1);
                    let mut out = Vec::with_capacity(end - d0);
                    for _ in d0..end {
                        out.push(cs.apply(&mult));
                        for (m, e) in mult.iter_mut().zip(&step) {
                            *m *= e;
                        }
                    }
                    out
                })
                .collect();
            for j in 0..n {
                let col = &columns[j.abs_diff(z)];
                for (k, v) in col.iter().enumerate() {
                    field.values[k * n + j] = *v;
                }
            }
        } else {
            let columns: Vec<Vec<C64>> =
                (0..n).into_par_iter().map(|j| column(sg.x(j).abs())).collect();
            for (j, col) in columns.iter().enumerate() {
                for (k, v) in col.iter().enumerate() {
                    field.values[k * n + j] = *v;
                }
            }
        }

        // The initial slice is zero except for the boundary value itself.
        let first = field.slice_mut(0);
        first.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        if sg.is_zero_aligned() {
            first[z] = f.values[0];
        }
        if field.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("boundary forcing"));
        }
        Ok(field)
    }
}

/// `Lf` on `sgrid x tgrid` through the frequency representation.
pub fn boundary_forcing_freq(
    f: &TimeSignal,
    sgrid: SpatialGrid,
    tgrid: TimeGrid,
) -> Result<SolutionField> {
    SpectralBoundaryOperator::new(sgrid, tgrid).apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_data_gives_zero_field() {
        let sg = SpatialGrid::symmetric(8.0, 32).unwrap();
        let tg = TimeGrid::new(1.0, 16).unwrap();
        let lf = boundary_forcing_freq(&TimeSignal::zeros(tg), sg, tg).unwrap();
        assert!(lf.values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn trace_reproduces_data_and_initial_slice_vanishes() {
        let sg = SpatialGrid::symmetric(16.0, 128).unwrap();
        let tg = TimeGrid::new(1.0, 64).unwrap();
        let f = TimeSignal::from_real(tg, |t| (t * (1.0 - t)).powi(2));
        let lf = boundary_forcing_freq(&f, sg, tg).unwrap();
        let tr = lf.boundary_trace();
        for (a, b) in tr.values.iter().zip(&f.values) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(lf.slice(0).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn even_in_x() {
        let sg = SpatialGrid::symmetric(16.0, 128).unwrap();
        let tg = TimeGrid::new(1.0, 32).unwrap();
        let f = TimeSignal::from_real(tg, |t| t * t * (1.0 - t).powi(2));
        let lf = boundary_forcing_freq(&f, sg, tg).unwrap();
        let z = sg.zero_index();
        for d in 1..40 {
            assert_eq!(lf.at(z + d, 20), lf.at(z - d, 20));
        }
    }

    #[test]
    fn rejects_mismatched_grid() {
        let sg = SpatialGrid::symmetric(8.0, 32).unwrap();
        let tg = TimeGrid::new(1.0, 16).unwrap();
        let other = TimeGrid::new(2.0, 16).unwrap();
        assert!(boundary_forcing_freq(&TimeSignal::zeros(other), sg, tg).is_err());
    }
}
