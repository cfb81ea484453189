use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{SolutionField, SpatialGrid, TimeGrid, TimeSignal, C64};
use crate::quadrature::{oscillatory_power_tail, FilonRule};
use crate::riemann_liouville::{frac_derivative, START_TOLERANCE};
use crate::special::GaussLegendre;

/// Phase `x^2/(4 sigma^2)` above which the `sigma` integral is handed to the
/// oscillatory rule in the variable `v = x^2/(4 sigma^2)`.
const PHASE_SWITCH: f64 = 8.0;
/// Largest phase change across one Gauss panel.
const PANEL_PHASE: f64 = 1.5;
/// Largest `t'`-extent of one panel, in time steps.
const PANEL_STEPS: f64 = 16.0;
const V_RATIO: f64 = 1.5;
/// Beyond this `v` the integrand is replaced by its asymptotic tail.
const V_MAX: f64 = 1e6;
const GAUSS_POINTS: usize = 8;

/// Four-point Lagrange interpolant of a causal signal, zero for `t < 0`.
struct CausalInterpolant<'a> {
    values: &'a [C64],
    dt: f64,
}

impl CausalInterpolant<'_> {
    fn eval(&self, t: f64) -> C64 {
        if t < 0.0 {
            return C64::new(0.0, 0.0);
        }
        let m = self.values.len() - 1;
        let u = t / self.dt;
        let i0 = (u.floor() as isize - 1).clamp(0, m as isize - 3) as usize;
        let r = u - i0 as f64;
        let l0 = -(r - 1.0) * (r - 2.0) * (r - 3.0) / 6.0;
        let l1 = r * (r - 2.0) * (r - 3.0) / 2.0;
        let l2 = -r * (r - 1.0) * (r - 3.0) / 2.0;
        let l3 = r * (r - 1.0) * (r - 2.0) / 6.0;
        let v = &self.values[i0..i0 + 4];
        v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3
    }
}

struct TimeRoute<'a> {
    h: CausalInterpolant<'a>,
    gauss: GaussLegendre,
    filon: FilonRule,
    width: f64,
}

impl<'a> TimeRoute<'a> {
    fn new(h: &'a TimeSignal) -> Self {
        let dt = h.grid.dt();
        Self {
            h: CausalInterpolant { values: &h.values, dt },
            gauss: GaussLegendre::new(GAUSS_POINTS),
            filon: FilonRule::new(),
            width: PANEL_STEPS * dt,
        }
    }

    /// `Lf(x, t) = 2/sqrt(pi) int_0^{sqrt t} e^{i a/sigma^2} h(t - sigma^2) d sigma`,
    /// `a = x^2/4`.
    fn value(&self, x: f64, t: f64) -> C64 {
        if t <= 0.0 {
            return C64::new(0.0, 0.0);
        }
        let a = 0.25 * x * x;
        let top = t.sqrt();
        let mut acc = C64::new(0.0, 0.0);
        let mut sigma = 0.0;
        if a > 0.0 {
            let v_lo = PHASE_SWITCH.max(a / t);
            acc += self.oscillatory(a, t, v_lo);
            sigma = (a / v_lo).sqrt().min(top);
        }
        while sigma < top {
            let mut next = (sigma * sigma + self.width).sqrt();
            if a > 0.0 {
                let inv = 1.0 / (sigma * sigma) - PANEL_PHASE / a;
                if inv > 0.0 {
                    next = next.min(inv.powf(-0.5));
                }
            }
            next = next.min(top);
            for (s, w) in self.gauss.mapped(sigma, next) {
                let phase = if a > 0.0 { a / (s * s) } else { 0.0 };
                acc += C64::from_polar(w, phase) * self.h.eval(t - s * s);
            }
            sigma = next;
        }
        acc * (2.0 / std::f64::consts::PI.sqrt())
    }

    /// `int_{v_lo}^inf e^{iv} (sqrt(a)/2) v^{-3/2} h(t - a/v) dv`.
    fn oscillatory(&self, a: f64, t: f64, v_lo: f64) -> C64 {
        let amp = 0.5 * a.sqrt();
        let g = |v: f64| self.h.eval(t - a / v) * (amp * v.powf(-1.5));
        let mut acc = C64::new(0.0, 0.0);
        let mut v = v_lo;
        let mut vals = [C64::new(0.0, 0.0); GAUSS_POINTS];
        while v < V_MAX {
            let mut next = v * V_RATIO;
            let inv = 1.0 / v - self.width / a;
            if inv > 0.0 {
                next = next.min(1.0 / inv);
            }
            next = next.min(V_MAX);
            let (c, hw) = (0.5 * (v + next), 0.5 * (next - v));
            for (slot, z) in vals.iter_mut().zip(self.filon.nodes()) {
                *slot = g(c + hw * z);
            }
            acc += self.filon.integrate(v, next, &vals);
            v = next;
        }
        acc + self.h.eval(t) * amp * oscillatory_power_tail(V_MAX, 1.5)
    }

    fn column(&self, x: f64, tgrid: TimeGrid) -> Vec<C64> {
        (0..tgrid.len()).map(|k| self.value(x, tgrid.t(k))).collect()
    }
}

fn half_derivative(f: &TimeSignal) -> Result<TimeSignal> {
    let start = f.values[0].norm();
    if start > START_TOLERANCE * f.sup_norm().max(1.0) {
        return Err(Error::NonVanishingStart { value: start });
    }
    Ok(frac_derivative(f, 0.5)?.signal)
}

/// Time trace `t -> Lf(x, t)` at a single point, through the time-domain
/// representation.
pub fn boundary_forcing_time_at(f: &TimeSignal, x: f64) -> Result<TimeSignal> {
    if f.grid.m() < 3 {
        return Err(Error::InvalidGrid("time route needs at least 3 steps".into()));
    }
    let h = half_derivative(f)?;
    let route = TimeRoute::new(&h);
    Ok(TimeSignal { grid: f.grid, values: route.column(x, f.grid) })
}

/// `Lf` on `sgrid x tgrid` through the time-domain representation
/// `pi^{-1/2} int_0^t (t-t')^{-1/2} e^{i x^2/(4(t-t'))} I_{-1/2} f(t') dt'`.
pub fn boundary_forcing_time(
    f: &TimeSignal,
    sgrid: SpatialGrid,
    tgrid: TimeGrid,
) -> Result<SolutionField> {
    if f.grid != tgrid {
        return Err(Error::GridMismatch("boundary data and time grid differ".into()));
    }
    let n = sgrid.n();
    let mut field = SolutionField::zeros(sgrid, tgrid);
    if f.values.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Ok(field);
    }
    let h = half_derivative(f)?;
    let route = TimeRoute::new(&h);
    let z = sgrid.zero_index();
    let columns: Vec<Vec<C64>> = if sgrid.is_zero_aligned() {
        let reach = z.max(n - 1 - z);
        (0..=reach)
            .into_par_iter()
            .map(|d| route.column(d as f64 * sgrid.dx(), tgrid))
            .collect()
    } else {
        (0..n).into_par_iter().map(|j| route.column(sgrid.x(j), tgrid)).collect()
    };
    for j in 0..n {
        let col = if sgrid.is_zero_aligned() { &columns[j.abs_diff(z)] } else { &columns[j] };
        for (k, v) in col.iter().enumerate() {
            field.values[k * n + j] = *v;
        }
    }
    if field.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("boundary forcing"));
    }
    Ok(field)
}
