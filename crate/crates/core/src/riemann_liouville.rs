//! Riemann-Liouville fractional integrals and derivatives of causal time
//! signals, computed along two independent routes: product integration in
//! the time domain and the Fourier multiplier `e^{-i pi a/2} (tau - i0)^{-a}`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::fourier::CausalSpectrum;
use crate::grid::{TimeSignal, C64};
use crate::special::gamma;

/// Orders are restricted to `|a| <= 4`.
pub const MAX_ORDER: f64 = 4.0;

/// Tolerance on `|f(0)|` relative to `max(1, sup|f|)` below which a signal is
/// treated as vanishing at the origin.
pub const START_TOLERANCE: f64 = 1e-8;

/// Result of a time-domain fractional derivative.
#[derive(Debug, Clone)]
pub struct FracDerivative {
    pub signal: TimeSignal,
    /// Set when `f(0)` is not small; the derivative is then singular at 0.
    pub nonvanishing_start: bool,
}

/// Product-integration weights for `I_a` on a uniform grid.
///
/// On `[t_j, t_{j+1}]` the signal is replaced by its linear interpolant and
/// the moments of `(t_k - s)^{a-1}` are integrated in closed form. In the
/// scaled variable `u = (t_k - s)/dt` the interval is `[p, p+1]`; `near[p]`
/// multiplies `f_{k-p}` and `far[p]` multiplies `f_{k-p-1}`.
struct ProductWeights {
    near: Vec<f64>,
    far: Vec<f64>,
    scale: f64,
}

impl ProductWeights {
    fn new(order: f64, steps: usize, dt: f64) -> Self {
        let mut near = Vec::with_capacity(steps);
        let mut far = Vec::with_capacity(steps);
        for p in 0..steps {
            let p = p as f64;
            let m0 = ((p + 1.0).powf(order) - p.powf(order)) / order;
            let m1 = ((p + 1.0).powf(order + 1.0) - p.powf(order + 1.0)) / (order + 1.0);
            near.push((p + 1.0) * m0 - m1);
            far.push(m1 - p * m0);
        }
        Self { near, far, scale: dt.powf(order) / gamma(order) }
    }
}

fn check_order(order: f64) -> Result<()> {
    if !order.is_finite() || order.abs() > MAX_ORDER {
        return Err(Error::InvalidOrder { order, reason: "|order| must not exceed 4" });
    }
    Ok(())
}

/// `I_a f(t) = 1/Gamma(a) int_0^t (t-s)^{a-1} f(s) ds` for `a > 0`.
pub fn frac_integral(f: &TimeSignal, order: f64) -> Result<TimeSignal> {
    check_order(order)?;
    if order <= 0.0 {
        return Err(Error::InvalidOrder {
            order,
            reason: "fractional integral needs a positive order; use frac_derivative",
        });
    }
    let m = f.grid.m();
    let w = ProductWeights::new(order, m, f.grid.dt());
    let v = &f.values;
    let mut out = vec![C64::new(0.0, 0.0); m + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..k {
            acc += v[k - p] * w.near[p] + v[k - p - 1] * w.far[p];
        }
        *slot = acc * w.scale;
    }
    Ok(TimeSignal { grid: f.grid, values: out })
}

/// `I_{-a} f = d^k/dt^k I_{k-a} f` with `k = ceil(a)`, differentiated by
/// second-order finite differences (one-sided at the ends).
pub fn frac_derivative(f: &TimeSignal, order: f64) -> Result<FracDerivative> {
    check_order(order)?;
    if order <= 0.0 {
        return Err(Error::InvalidOrder { order, reason: "derivative order must be positive" });
    }
    let k = order.ceil() as usize;
    let rest = k as f64 - order;
    let mut g = if rest > 0.0 { frac_integral(f, rest)? } else { f.clone() };
    for _ in 0..k {
        g = differentiate(&g);
    }
    let scale = f.sup_norm().max(1.0);
    let nonvanishing_start = f.values[0].norm() > START_TOLERANCE * scale;
    if nonvanishing_start {
        log::warn!("fractional derivative of data with |f(0)| = {:e}", f.values[0].norm());
    }
    Ok(FracDerivative { signal: g, nonvanishing_start })
}

/// Second-order finite-difference derivative.
pub fn differentiate(f: &TimeSignal) -> TimeSignal {
    let v = &f.values;
    let m = v.len() - 1;
    let h = f.grid.dt();
    let mut out = vec![C64::new(0.0, 0.0); m + 1];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    out[m] = (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
    for k in 1..m {
        out[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
    }
    TimeSignal { grid: f.grid, values: out }
}

/// Combined symbol `e^{-i pi a/2} w^{-a}` of `t_+^{a-1}/Gamma(a)` at a point
/// `w` of the closed lower half-plane (principal branch, the `tau - i0` limit).
pub fn rl_symbol(w: C64, order: f64) -> C64 {
    let rotation = C64::from_polar(1.0, -FRAC_PI_2 * order);
    rotation * (-order * w.ln()).exp()
}

/// `I_a f` for any real `a` (negative orders differentiate) via the Fourier
/// multiplier, evaluated on the damped contour of [`CausalSpectrum`].
pub fn frac_fourier_path(f: &TimeSignal, order: f64) -> Result<TimeSignal> {
    check_order(order)?;
    if order == 0.0 {
        return Ok(f.clone());
    }
    let cs = CausalSpectrum::new(f);
    let values = cs.apply_fn(|w| rl_symbol(w, order));
    Ok(TimeSignal { grid: f.grid, values })
}
