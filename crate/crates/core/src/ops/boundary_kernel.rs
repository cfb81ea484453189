use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use errorfunctions::ComplexErrorFunctions;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{SolutionField, SpatialGrid, TimeGrid, TimeSignal, C64};

/// Above this `|z|` the ramp response uses its asymptotic series.
const ASYMPTOTIC_Z: f64 = 8.0;
const ASYMPTOTIC_TERMS: usize = 24;

/// `L` by product integration against the exact kernel: the boundary data is
/// replaced by its piecewise linear interpolant and each linear piece is
/// propagated with the closed-form ramp response
/// `W(x, s) = s e^{-z^2} [(1 + 2z^2) erfcx(z) - 2z/sqrt(pi)]`,
/// `z = |x| e^{-i pi/4} / (2 sqrt(s))`.
/// The result is exact for piecewise linear data, so kinks at grid nodes
/// (in particular at `t = 0`) cost nothing.
///
/// The ramp response is tabulated once per distinct `|x|`; `apply` accepts
/// data on `tgrid` or on any prefix of it.
#[derive(Debug, Clone)]
pub struct BoundaryOperator {
    pub sgrid: SpatialGrid,
    pub tgrid: TimeGrid,
    /// Distance of each column's table row.
    rows: Vec<usize>,
    /// `W(d, k dt)` for `k = 0..=m`, one row per distinct distance `d`.
    ramp: Vec<Vec<C64>>,
    dists: Vec<f64>,
}

impl BoundaryOperator {
    pub fn new(sgrid: SpatialGrid, tgrid: TimeGrid) -> Self {
        let n = sgrid.n();
        let (dists, rows): (Vec<f64>, Vec<usize>) = if sgrid.is_zero_aligned() {
            let z = sgrid.zero_index();
            let reach = z.max(n - 1 - z);
            let dx = sgrid.dx();
            ((0..=reach).map(|d| d as f64 * dx).collect(), (0..n).map(|j| j.abs_diff(z)).collect())
        } else {
            ((0..n).map(|j| sgrid.x(j).abs()).collect(), (0..n).collect())
        };
        let dt = tgrid.dt();
        let ramp = dists
            .par_iter()
            .map(|&d| (0..=tgrid.m()).map(|k| ramp_response(d, k as f64 * dt)).collect())
            .collect();
        Self { sgrid, tgrid, rows, ramp, dists }
    }

    pub fn apply(&self, f: &TimeSignal) -> Result<SolutionField> {
        let dt = self.tgrid.dt();
        if f.grid.m() > self.tgrid.m() || (f.grid.dt() - dt).abs() > 1e-12 * dt {
            return Err(Error::GridMismatch("boundary data and time grid differ".into()));
        }
        let sg = self.sgrid;
        let n = sg.n();
        let mut field = SolutionField::zeros(sg, f.grid);
        if f.values.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            return Ok(field);
        }
        let conv = Convolver::new(f);
        let columns: Vec<Vec<C64>> = self
            .ramp
            .par_iter()
            .zip(&self.dists)
            .map(|(w, &d)| conv.column(d, w))
            .collect();
        for (j, &r) in self.rows.iter().enumerate() {
            for (k, v) in columns[r].iter().enumerate() {
                field.values[k * n + j] = *v;
            }
        }
        if field.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("boundary forcing"));
        }
        Ok(field)
    }
}

/// `Lf` on `sgrid x tgrid` by exact-kernel product integration.
pub fn boundary_forcing_kernel(
    f: &TimeSignal,
    sgrid: SpatialGrid,
    tgrid: TimeGrid,
) -> Result<SolutionField> {
    if f.grid != tgrid {
        return Err(Error::GridMismatch("boundary data and time grid differ".into()));
    }
    BoundaryOperator::new(sgrid, tgrid).apply(f)
}

struct Convolver<'a> {
    f: &'a TimeSignal,
    /// Transform of the data with `f_0` removed, zero padded to `size`.
    spectrum: Vec<C64>,
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl<'a> Convolver<'a> {
    fn new(f: &'a TimeSignal) -> Self {
        let len = f.values.len();
        let size = (2 * len).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let mut spectrum = vec![C64::new(0.0, 0.0); size];
        spectrum[1..len].copy_from_slice(&f.values[1..]);
        forward.process(&mut spectrum);
        Self { f, spectrum, size, forward, inverse }
    }

    /// Column at distance `dist`, `w` holding the tabulated ramp response.
    fn column(&self, dist: f64, w: &[C64]) -> Vec<C64> {
        let vals = &self.f.values;
        if dist == 0.0 {
            return vals.clone();
        }
        let m = vals.len() - 1;
        let dt = self.f.grid.dt();
        let mut weights = vec![C64::new(0.0, 0.0); self.size];
        if m >= 1 {
            weights[0] = w[1] / dt;
        }
        for q in 1..m {
            weights[q] = (w[q + 1] - w[q] * 2.0 + w[q - 1]) / dt;
        }
        self.forward.process(&mut weights);
        for (a, b) in weights.iter_mut().zip(&self.spectrum) {
            *a *= b / self.size as f64;
        }
        self.inverse.process(&mut weights);
        let mut out = weights;
        out.truncate(m + 1);
        out[0] = C64::new(0.0, 0.0);
        if vals[0] != C64::new(0.0, 0.0) {
            for k in 1..=m {
                let s = k as f64 * dt;
                out[k] += vals[0] * (step_response(dist, s) - (w[k] - w[k - 1]) / dt);
            }
        }
        out
    }
}

fn kernel_argument(dist: f64, s: f64) -> C64 {
    C64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2) * (dist / (2.0 * s.sqrt()))
}

/// Response at `|x| = dist` to unit boundary data switched on at `t = 0`:
/// `erfc(|x| / (2 sqrt(i s)))`.
pub fn step_response(dist: f64, s: f64) -> C64 {
    if s <= 0.0 {
        return if dist == 0.0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    if dist == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let z = kernel_argument(dist, s);
    (-z * z).exp() * z.erfcx()
}

/// Response to the ramp `f(t) = t`, the time integral of [`step_response`].
pub fn ramp_response(dist: f64, s: f64) -> C64 {
    if s <= 0.0 {
        return C64::new(0.0, 0.0);
    }
    if dist == 0.0 {
        return C64::new(s, 0.0);
    }
    let z = kernel_argument(dist, s);
    let bracket = if z.norm() <= ASYMPTOTIC_Z {
        (z * z * 2.0 + 1.0) * z.erfcx() - z * (2.0 / PI.sqrt())
    } else {
        // (1 + 2z^2) erfcx(z) - 2z/sqrt(pi) ~ (z sqrt(pi))^{-1} sum_{n>=1} -2n a_n z^{-2n},
        // a_n = (-1)^n (2n-1)!! / 2^n.
        let inv2 = (z * z).inv();
        let mut a = 1.0;
        let mut pow = C64::new(1.0, 0.0);
        let mut sum = C64::new(0.0, 0.0);
        for n in 1..=ASYMPTOTIC_TERMS {
            a *= -((2 * n - 1) as f64) / 2.0;
            pow *= inv2;
            sum += pow * (-2.0 * n as f64 * a);
        }
        sum / (z * PI.sqrt())
    };
    (-z * z).exp() * bracket * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_branches_agree_at_switch() {
        let s = 1.0;
        let dist = 2.0 * ASYMPTOTIC_Z;
        let z = kernel_argument(dist, s);
        let direct = (-z * z).exp() * ((z * z * 2.0 + 1.0) * z.erfcx() - z * (2.0 / PI.sqrt())) * s;
        let series = ramp_response(dist, s);
        assert!((direct - series).norm() < 1e-10 * series.norm(), "{direct} {series}");
    }

    #[test]
    fn ramp_is_integral_of_step() {
        let dist = 1.3;
        let (a, b) = (0.4, 0.7);
        let gl = crate::special::GaussLegendre::new(40);
        let integral: C64 = gl.mapped(a, b).map(|(s, w)| step_response(dist, s) * w).sum();
        let want = ramp_response(dist, b) - ramp_response(dist, a);
        assert!((integral - want).norm() < 1e-12, "{integral} {want}");
    }

    #[test]
    fn linear_data_reproduced_at_origin() {
        let sg = SpatialGrid::symmetric(8.0, 64).unwrap();
        let tg = TimeGrid::new(1.0, 16).unwrap();
        let f = TimeSignal::from_fn(tg, |t| C64::new(t, 0.0) * C64::from_polar(1.0, 3.0 * t));
        let lf = boundary_forcing_kernel(&f, sg, tg).unwrap();
        let tr = lf.boundary_trace();
        for (a, b) in tr.values.iter().zip(&f.values) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!(lf.slice(0).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn ramp_data_matches_closed_form() {
        let sg = SpatialGrid::symmetric(8.0, 64).unwrap();
        let tg = TimeGrid::new(1.0, 32).unwrap();
        let f = TimeSignal::from_real(tg, |t| t);
        let lf = boundary_forcing_kernel(&f, sg, tg).unwrap();
        for j in [33, 40, 50, 63] {
            for k in [1, 7, 32] {
                let want = ramp_response(sg.x(j).abs(), tg.t(k));
                assert!((lf.at(j, k) - want).norm() < 1e-12);
            }
        }
    }
}
