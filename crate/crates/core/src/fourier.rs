//! FFT plumbing shared by the operator modules.
//!
//! Spatial transforms follow `g^(xi) = dx * sum_j g_j exp(-i x_j xi)`; only
//! moduli and multiplier round trips are used, so the `x_min` phase is dropped.
//!
//! Time transforms are causal: a signal on `[0, T]` is continued past `T`,
//! damped by `exp(-gamma t)`, zero-padded and transformed. A multiplier
//! evaluated at `tau - i*gamma` then acts exactly as its `Im tau -> 0-` limit
//! would on the undamped signal, because every kernel used here is supported
//! on `t >= 0`. The damping also suppresses periodic wrap-around.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::grid::{fft_frequencies, SpatialGrid, TimeSignal, C64};
use crate::special::smooth_step;

/// Padding factor applied to time signals before transforming.
pub const TIME_PADDING: usize = 4;

/// `gamma * t_max` for the damped time transform.
const DAMPING_TIMES_T: f64 = 12.0;

#[derive(Clone)]
pub struct Spectral {
    pub grid: SpatialGrid,
    xi: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: SpatialGrid) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.n());
        let inv = planner.plan_fft_inverse(grid.n());
        Self { grid, xi: grid.wavenumbers(), fwd, inv }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.xi
    }

    /// Unnormalized in-place DFT.
    pub fn forward(&self, buf: &mut [C64]) {
        self.fwd.process(buf);
    }

    /// Unnormalized in-place inverse DFT (caller divides by `n`).
    pub fn inverse(&self, buf: &mut [C64]) {
        self.inv.process(buf);
    }

    /// `F^{-1}[m(xi) F[g]]`.
    pub fn apply_multiplier(&self, values: &[C64], mult: impl Fn(f64) -> C64) -> Vec<C64> {
        let mut buf = values.to_vec();
        self.fwd.process(&mut buf);
        let scale = 1.0 / self.grid.n() as f64;
        for (z, &xi) in buf.iter_mut().zip(&self.xi) {
            *z *= mult(xi) * scale;
        }
        self.inv.process(&mut buf);
        buf
    }

    /// Discrete `L^2_xi` norm of `w(xi) g^(xi)`, normalized so that `w = 1`
    /// reproduces the trapezoidal `L^2_x` norm.
    pub fn weighted_norm(&self, values: &[C64], weight: impl Fn(f64) -> f64) -> f64 {
        let mut buf = values.to_vec();
        self.fwd.process(&mut buf);
        let s: f64 = buf
            .iter()
            .zip(&self.xi)
            .map(|(z, &xi)| {
                let w = weight(xi);
                w * w * z.norm_sqr()
            })
            .sum();
        (self.grid.dx() / self.grid.n() as f64 * s).sqrt()
    }
}

/// Damped, padded time transform of a causal signal, ready for repeated
/// multiplier application.
pub struct CausalSpectrum {
    steps: usize,
    dt: f64,
    damping: f64,
    shifted: Vec<C64>,
    spectrum: Vec<C64>,
    inv: Arc<dyn Fft<f64>>,
}

impl CausalSpectrum {
    pub fn new(signal: &TimeSignal) -> Self {
        let m = signal.grid.m();
        let dt = signal.grid.dt();
        let len = TIME_PADDING * m;
        let damping = DAMPING_TIMES_T / signal.grid.t_max();
        let mut buf = continue_causally(&signal.values, len);
        for (k, z) in buf.iter_mut().enumerate() {
            *z *= (-damping * k as f64 * dt).exp();
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(len).process(&mut buf);
        let inv = planner.plan_fft_inverse(len);
        let shifted = fft_frequencies(len, dt)
            .into_iter()
            .map(|tau| C64::new(tau, -damping))
            .collect();
        Self { steps: m, dt, damping, shifted, spectrum: buf, inv }
    }

    /// Complex frequencies `tau_k - i*gamma` in FFT order.
    pub fn frequencies(&self) -> &[C64] {
        &self.shifted
    }

    pub fn len(&self) -> usize {
        self.spectrum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectrum.is_empty()
    }

    /// Applies the multiplier sampled at [`Self::frequencies`] and returns the
    /// result on the original `m+1` time nodes.
    pub fn apply(&self, multiplier: &[C64]) -> Vec<C64> {
        let mut buf: Vec<C64> =
            self.spectrum.iter().zip(multiplier).map(|(a, b)| a * b).collect();
        self.finish(&mut buf)
    }

    pub fn apply_fn(&self, mult: impl Fn(C64) -> C64) -> Vec<C64> {
        let mut buf: Vec<C64> =
            self.spectrum.iter().zip(&self.shifted).map(|(a, &w)| a * mult(w)).collect();
        self.finish(&mut buf)
    }

    fn finish(&self, buf: &mut [C64]) -> Vec<C64> {
        self.inv.process(buf);
        let scale = 1.0 / buf.len() as f64;
        (0..=self.steps)
            .map(|k| buf[k] * (scale * (self.damping * k as f64 * self.dt).exp()))
            .collect()
    }
}

/// Extends samples on `[0, T]` to a padded buffer of length `len`.
///
/// Past `T` the signal is continued as `2 f(T) - f(2T - t)` (matching value and
/// slope at `T`) and tapered smoothly to zero by `2T`.
pub(crate) fn continue_causally(values: &[C64], len: usize) -> Vec<C64> {
    let m = values.len() - 1;
    let mut buf = vec![C64::new(0.0, 0.0); len];
    buf[..=m].copy_from_slice(values);
    let anchor = values[m];
    for s in 1..m.min(len.saturating_sub(m + 1)) {
        let taper = 1.0 - smooth_step(s as f64 / m as f64);
        buf[m + s] = (2.0 * anchor - values[m - s]) * taper;
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;

    #[test]
    fn identity_multiplier_round_trips() {
        let grid = TimeGrid::new(1.0, 64).unwrap();
        let f = TimeSignal::from_real(grid, |t| (t * (1.0 - t)).powi(2));
        let cs = CausalSpectrum::new(&f);
        let back = cs.apply_fn(|_| C64::new(1.0, 0.0));
        for (a, b) in back.iter().zip(&f.values) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn integration_multiplier_is_causal_antiderivative() {
        // 1/(i tau) integrates from 0; check on f = 1 - cos(2 pi t).
        let grid = TimeGrid::new(1.0, 256).unwrap();
        let f = TimeSignal::from_real(grid, |t| 1.0 - (2.0 * std::f64::consts::PI * t).cos());
        let cs = CausalSpectrum::new(&f);
        let out = cs.apply_fn(|w| 1.0 / (C64::i() * w));
        let two_pi = 2.0 * std::f64::consts::PI;
        for (k, z) in out.iter().enumerate() {
            let t = grid.t(k);
            let exact = t - (two_pi * t).sin() / two_pi;
            assert!((z.re - exact).abs() < 1e-4, "t={t}: {} vs {exact}", z.re);
        }
    }

    #[test]
    fn spectral_norm_matches_trapezoid_at_s0() {
        let g = SpatialGrid::symmetric(10.0, 128).unwrap();
        let sp = Spectral::new(g);
        let v: Vec<C64> = g.nodes().iter().map(|x| C64::new((-x * x).exp(), x.sin())).collect();
        let direct = (g.dx() * v.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        let spec = sp.weighted_norm(&v, |_| 1.0);
        assert!((direct - spec).abs() < 1e-12 * direct);
    }
}
