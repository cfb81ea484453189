#![allow(dead_code)]

use halfline_nls::special::GaussLegendre;
use halfline_nls::{TimeGrid, TimeSignal, C64};

pub fn rel_l2(a: &[C64], b: &[C64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let n: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (d / n).sqrt()
}

pub fn sup_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Adaptive Gauss-Legendre quadrature: panels are bisected until a 10-point
/// and a 20-point rule agree.
pub fn adaptive(f: &dyn Fn(f64) -> C64, a: f64, b: f64, tol: f64) -> C64 {
    let lo = GaussLegendre::new(10);
    let hi = GaussLegendre::new(20);
    fn go(f: &dyn Fn(f64) -> C64, a: f64, b: f64, tol: f64, lo: &GaussLegendre, hi: &GaussLegendre, depth: usize) -> C64 {
        let p: C64 = lo.mapped(a, b).map(|(x, w)| f(x) * w).sum();
        let q: C64 = hi.mapped(a, b).map(|(x, w)| f(x) * w).sum();
        if (p - q).norm() <= tol || depth > 40 {
            return q;
        }
        let m = 0.5 * (a + b);
        go(f, a, m, 0.5 * tol, lo, hi, depth + 1) + go(f, m, b, 0.5 * tol, lo, hi, depth + 1)
    }
    go(f, a, b, tol, &lo, &hi, 0)
}

/// `scale * t^2 (T - t)^2` normalized to unit peak, a `C^1` start at zero.
pub fn poly_bump(tg: TimeGrid) -> TimeSignal {
    let t_max = tg.t_max();
    TimeSignal::from_real(tg, move |t| 16.0 * (t * (t_max - t)).powi(2) / t_max.powi(4))
}

/// Smooth bump supported in `(0, T)` with unit peak.
pub fn smooth_bump(tg: TimeGrid) -> TimeSignal {
    let t_max = tg.t_max();
    TimeSignal::from_real(tg, move |t| {
        let u = t / t_max;
        if u <= 0.0 || u >= 1.0 {
            0.0
        } else {
            (4.0 - 1.0 / (u * (1.0 - u))).exp()
        }
    })
}

/// `t^3 sin(2 pi t / T)` style complex bump vanishing to third order at 0.
pub fn oscillating_bump(tg: TimeGrid) -> TimeSignal {
    let t_max = tg.t_max();
    TimeSignal::from_fn(tg, move |t| {
        let u = t / t_max;
        C64::from_polar(8.0 * u.powi(3) * (1.0 - u).powi(2), 3.0 * u)
    })
}
