//! Fourier multipliers, Sobolev norms, the time cutoff and the half-line
//! extension that every operator module builds on.

use crate::error::{Error, Result};
use crate::fourier::{Spectral, TIME_PADDING};
use crate::grid::{
    fft_frequencies, GridFunction, HalfLineFunction, SolutionField, SpatialGrid, TimeGrid, TimeSignal, C64,
};
use crate::special::smooth_step;

/// `<xi>^s = (1 + xi^2)^(s/2)`.
pub fn japanese_bracket(xi: f64, s: f64) -> f64 {
    (1.0 + xi * xi).powf(0.5 * s)
}

/// `D^s g = F^{-1}[|xi|^s g^]`.
///
/// The zero mode is kept when `s = 0` (the input is returned untouched) and
/// annihilated when `s > 0`. Negative orders are accepted only for mean-free
/// input.
pub fn fractional_derivative(g: &GridFunction, s: f64) -> Result<GridFunction> {
    if !s.is_finite() {
        return Err(Error::InvalidOrder { order: s, reason: "order must be finite" });
    }
    if s == 0.0 {
        return Ok(g.clone());
    }
    let sp = Spectral::new(g.grid);
    if s < 0.0 {
        let mean: C64 = g.values.iter().sum();
        let mass: f64 = g.values.iter().map(|z| z.norm()).sum();
        if mean.norm() > 1e-12 * mass.max(f64::MIN_POSITIVE) {
            return Err(Error::UnboundedMultiplier { s });
        }
    }
    let values = sp.apply_multiplier(&g.values, |xi| {
        if xi == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(xi.abs().powf(s), 0.0)
        }
    });
    Ok(GridFunction { grid: g.grid, values })
}

/// Whole-line Sobolev norm from the discrete transform; `homogeneous`
/// selects `|xi|^s` over `<xi>^s`.
pub fn sobolev_norm(g: &GridFunction, s: f64, homogeneous: bool) -> f64 {
    let sp = Spectral::new(g.grid);
    sobolev_norm_with(&sp, &g.values, s, homogeneous)
}

pub(crate) fn sobolev_norm_with(sp: &Spectral, values: &[C64], s: f64, homogeneous: bool) -> f64 {
    if homogeneous {
        sp.weighted_norm(values, |xi| if xi == 0.0 && s != 0.0 { 0.0 } else { xi.abs().powf(s) })
    } else {
        sp.weighted_norm(values, |xi| japanese_bracket(xi, s))
    }
}

/// Inhomogeneous Sobolev norm in `t` of the zero extension of `h` to the line.
pub fn time_sobolev_norm(h: &TimeSignal, s: f64) -> f64 {
    let m = h.grid.m();
    let len = TIME_PADDING * m;
    let dt = h.grid.dt();
    let mut buf = vec![C64::new(0.0, 0.0); len];
    buf[..=m].copy_from_slice(&h.values);
    let mut planner = rustfft::FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    let s_sum: f64 = buf
        .iter()
        .zip(fft_frequencies(len, dt))
        .map(|(z, tau)| japanese_bracket(tau, 2.0 * s) * z.norm_sqr())
        .sum();
    (dt / len as f64 * s_sum).sqrt()
}

/// The fixed bump profile: 1 on `[-1, 1]`, 0 outside `[-2, 2]`.
pub fn theta(u: f64) -> f64 {
    let a = u.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        smooth_step(2.0 - a)
    }
}

/// `theta_T(t) = theta(t / T)` sampled on `grid`.
pub fn cutoff(t_scale: f64, grid: TimeGrid) -> Result<TimeSignal> {
    if !(t_scale.is_finite() && t_scale > 0.0) {
        return Err(Error::InvalidProblem(format!("cutoff scale must be positive, got {t_scale}")));
    }
    Ok(TimeSignal::from_real(grid, |t| theta(t / t_scale)))
}

/// Whole-line extension of half-line data: even reflection about the zero
/// node, multiplied by a smooth cutoff that is 1 for `x >= x_min/4` and 0 for
/// `x <= x_min/2`. Samples with `x >= 0` are copied unchanged.
pub fn extend_half_line(phi: &HalfLineFunction) -> GridFunction {
    GridFunction { grid: phi.grid, values: even_reflection(phi.grid, &phi.values) }
}

fn even_reflection(grid: SpatialGrid, half: &[C64]) -> Vec<C64> {
    let z = grid.zero_index();
    let n = grid.n();
    let lo = 0.5 * grid.x_min();
    let width = -0.25 * grid.x_min();
    let mut values = vec![C64::new(0.0, 0.0); n];
    values[z..].copy_from_slice(half);
    for j in 0..z {
        let mirror = 2 * z - j;
        if mirror >= n {
            continue;
        }
        let chi = smooth_step((grid.x(j) - lo) / width);
        if chi > 0.0 {
            values[j] = half[mirror - z] * chi;
        }
    }
    values
}

/// `C^2` whole-line extension of half-line samples `half` (starting at the
/// zero node of `grid`). The even reflection of [`extend_half_line`] already
/// matches every even derivative at the origin; adding `2x g'(0) psi(x)` for
/// `x < 0` fixes the first derivative as well. `psi` is 1 for `x >= x_min/8`
/// and 0 for `x <= x_min/4`, and `g'(0)` is a fourth-order one-sided
/// difference. Samples with `x >= 0` are copied unchanged.
pub fn smooth_extension_values(grid: SpatialGrid, half: &[C64]) -> Vec<C64> {
    let mut values = even_reflection(grid, half);
    if half.len() < 5 {
        return values;
    }
    let slope = (half[1] * 48.0 - half[0] * 25.0 - half[2] * 36.0 + half[3] * 16.0 - half[4] * 3.0)
        / (12.0 * grid.dx());
    let lo = 0.25 * grid.x_min();
    let width = -0.125 * grid.x_min();
    for j in 0..grid.zero_index() {
        let x = grid.x(j);
        let psi = smooth_step((x - lo) / width);
        if psi > 0.0 {
            values[j] += slope * (2.0 * x * psi);
        }
    }
    values
}

/// [`smooth_extension_values`] of a half-line function.
pub fn smooth_extension(phi: &HalfLineFunction) -> GridFunction {
    GridFunction { grid: phi.grid, values: smooth_extension_values(phi.grid, &phi.values) }
}

/// Bessel potential `J^s g = F^{-1}[<xi>^s g^]`.
pub fn bessel_potential(sp: &Spectral, values: &[C64], s: f64) -> Vec<C64> {
    if s == 0.0 {
        return values.to_vec();
    }
    sp.apply_multiplier(values, |xi| C64::new(japanese_bracket(xi, s), 0.0))
}

/// Discrete `L^r` norm in `x`; `r = inf` gives the sup norm.
pub fn lr_norm(values: &[C64], dx: f64, r: f64) -> f64 {
    if r.is_infinite() {
        values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    } else {
        (dx * values.iter().map(|z| z.norm().powf(r)).sum::<f64>()).powf(1.0 / r)
    }
}

/// Discrete `C_t H^s_x` norm: the largest per-slice inhomogeneous norm.
pub fn sup_time_sobolev(sp: &Spectral, field: &SolutionField, s: f64) -> f64 {
    field.slices().map(|v| sobolev_norm_with(sp, v, s, false)).fold(0.0, f64::max)
}

/// Discrete `L^q_t W^{s,r}_x` norm with trapezoidal weights in `t`.
pub fn mixed_norm(sp: &Spectral, field: &SolutionField, s: f64, q: f64, r: f64) -> f64 {
    let dx = field.sgrid.dx();
    let per_slice: Vec<f64> =
        field.slices().map(|v| lr_norm(&bessel_potential(sp, v, s), dx, r)).collect();
    if q.is_infinite() {
        return per_slice.into_iter().fold(0.0, f64::max);
    }
    let dt = field.tgrid.dt();
    let last = per_slice.len() - 1;
    let sum: f64 = per_slice
        .iter()
        .enumerate()
        .map(|(k, v)| if k == 0 || k == last { 0.5 * v.powf(q) } else { v.powf(q) })
        .sum();
    (dt * sum).powf(1.0 / q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpatialGrid;
    use std::f64::consts::PI;

    fn grid() -> SpatialGrid {
        SpatialGrid::symmetric(PI * 8.0, 256).unwrap()
    }

    #[test]
    fn order_zero_is_identity() {
        let g = GridFunction::from_fn(grid(), |x| C64::new((-x * x).exp(), x.cos()));
        let d = fractional_derivative(&g, 0.0).unwrap();
        assert_eq!(d, g);
    }

    #[test]
    fn second_order_on_sine_eigenfunction() {
        // k = 3/8 fits the periodic box of length 16 pi exactly.
        let k = 3.0 / 8.0;
        let g = GridFunction::from_fn(grid(), |x| C64::new((k * x).sin(), 0.0));
        let d = fractional_derivative(&g, 2.0).unwrap();
        for (a, b) in d.values.iter().zip(&g.values) {
            assert!((a - b * (k * k)).norm() < 1e-12);
        }
    }

    #[test]
    fn negative_order_rejects_mean() {
        let g = GridFunction::from_fn(grid(), |x| C64::new((-x * x).exp(), 0.0));
        assert!(matches!(fractional_derivative(&g, -0.5), Err(Error::UnboundedMultiplier { .. })));
        let h = GridFunction::from_fn(grid(), |x| C64::new(x * (-x * x).exp(), 0.0));
        assert!(fractional_derivative(&h, -0.5).is_ok());
    }

    #[test]
    fn homogeneous_bounded_by_inhomogeneous() {
        let g = GridFunction::from_fn(grid(), |x| C64::new((-(x - 1.0).powi(2)).exp(), 0.2));
        for s in [0.0, 0.25, 0.5, 1.0, 1.4] {
            assert!(sobolev_norm(&g, s, true) <= sobolev_norm(&g, s, false));
        }
    }

    #[test]
    fn cutoff_plateau_and_support() {
        let tg = TimeGrid::new(4.0, 64).unwrap();
        let c = cutoff(1.0, tg).unwrap();
        assert_eq!(c.values[8].re, 1.0); // t = T/2
        assert_eq!(c.values[16].re, 1.0); // t = T
        assert_eq!(c.values[32].re, 0.0); // t = 2T
        assert_eq!(c.values[48].re, 0.0); // t = 3T
        let mid = c.values[24].re; // t = 1.5 T
        assert!(mid > 0.0 && mid < 1.0);
        let ramp: Vec<f64> = c.values[16..=32].iter().map(|z| z.re).collect();
        assert!(ramp.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn extension_is_identity_on_half_line() {
        let g = grid();
        let phi = HalfLineFunction::from_fn(g, |x| C64::new((-x).exp(), 0.0));
        let ext = extend_half_line(&phi);
        assert_eq!(&ext.values[g.zero_index()..], &phi.values[..]);
        let z = g.zero_index();
        assert_eq!(ext.values[z - 3], phi.values[3]);
        let zero = HalfLineFunction::from_fn(g, |_| C64::new(0.0, 0.0));
        assert!(extend_half_line(&zero).values.iter().all(|v| *v == C64::new(0.0, 0.0)));
    }

    #[test]
    fn smooth_extension_matches_first_derivative() {
        let g = grid();
        let phi = HalfLineFunction::from_fn(g, |x| C64::new((-x).exp(), 0.0));
        let ext = smooth_extension(&phi);
        assert_eq!(&ext.values[g.zero_index()..], &phi.values[..]);
        // The continuation of e^{-x} differs from the extension by -2 sinh x + 2x.
        let z = g.zero_index();
        for d in 1..5 {
            let x = g.x(z - d);
            assert!((ext.values[z - d].re - (-x).exp()).abs() <= 0.4 * x.abs().powi(3) + 1e-6, "{x}");
        }
    }

    #[test]
    fn time_norm_of_zero_signal() {
        let tg = TimeGrid::new(1.0, 32).unwrap();
        assert_eq!(time_sobolev_norm(&TimeSignal::zeros(tg), 0.75), 0.0);
    }
}
