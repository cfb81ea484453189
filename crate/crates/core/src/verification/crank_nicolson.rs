use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{SolutionField, SpatialGrid, TimeGrid, C64};
use crate::solver::ProblemSpec;

/// Sweeps of plain fixed-point iteration before switching to Newton.
const FIXED_POINT_SWEEPS: usize = 5;
/// Amplitude allowed near `x_max` before the Dirichlet wall is suspected of
/// polluting the solution.
const WALL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RightBoundary {
    DirichletZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDConfig {
    /// Number of intervals on `[0, x_max]`, a power of two.
    pub nx: usize,
    /// Number of time steps on `[0, T]`.
    pub nt: usize,
    pub x_max: f64,
    pub right_bc: RightBoundary,
    pub newton_tol: f64,
    pub newton_max: usize,
}

impl FDConfig {
    pub fn new(nx: usize, nt: usize, x_max: f64) -> Self {
        Self { nx, nt, x_max, right_bc: RightBoundary::DirichletZero, newton_tol: 1e-12, newton_max: 50 }
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 64 || !self.nx.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("nx must be a power of two >= 64, got {}", self.nx)));
        }
        if self.nt < 64 {
            return Err(Error::InvalidGrid(format!("nt must be at least 64, got {}", self.nt)));
        }
        if !(self.x_max.is_finite() && self.x_max > 0.0) {
            return Err(Error::InvalidGrid("x_max must be positive".into()));
        }
        Ok(())
    }

    /// Storage grid of the result: nodes `-dx, 0, dx, ..., x_max - 2dx`.
    /// The ghost node at `-dx` holds zero.
    pub fn storage_grid(&self) -> Result<SpatialGrid> {
        let dx = self.x_max / self.nx as f64;
        SpatialGrid::new(-dx, self.x_max - dx, self.nx)
    }
}

/// Crank-Nicolson solution of `i u_t + u_xx + lambda u|u|^{alpha-1} = 0` on
/// `[0, x_max]` with `u(0,t) = f(t)` and `u(x_max, t) = 0`.
///
/// The nonlinearity is evaluated at the midpoint `(u^{n+1} + u^n)/2`, which
/// conserves the discrete mass up to boundary flux for real `lambda`.
pub fn crank_nicolson_fn(
    lambda: C64,
    alpha: f64,
    phi: impl Fn(f64) -> C64,
    f: impl Fn(f64) -> C64,
    t_final: f64,
    cfg: &FDConfig,
) -> Result<SolutionField> {
    cfg.validate()?;
    let storage = cfg.storage_grid()?;
    let tgrid = TimeGrid::new(t_final, cfg.nt)?;
    let nx = cfg.nx;
    let dx = cfg.x_max / nx as f64;
    let dt = tgrid.dt();
    // Interior unknowns are j = 1..nx-1.
    let ni = nx - 1;
    let r = C64::new(0.0, 0.5 * dt / (dx * dx));
    let mut u: Vec<C64> = (1..nx).map(|j| phi(j as f64 * dx)).collect();
    let mut out = SolutionField::zeros(storage, tgrid);
    let store = |field: &mut SolutionField, k: usize, b: C64, interior: &[C64]| {
        let slice = field.slice_mut(k);
        slice[1] = b;
        slice[2..].copy_from_slice(&interior[..nx - 2]);
    };
    let mut b_prev = f(0.0);
    store(&mut out, 0, b_prev, &u);

    let lam_dt = C64::new(0.0, dt) * lambda;
    let mut explicit = vec![C64::new(0.0, 0.0); ni];
    let mut rhs = vec![C64::new(0.0, 0.0); ni];
    for step in 1..=cfg.nt {
        let b_next = f(tgrid.t(step));
        // (I + r D2) u^n plus boundary contributions from both levels.
        for j in 0..ni {
            let left = if j == 0 { b_prev } else { u[j - 1] };
            let right = if j + 1 < ni { u[j + 1] } else { C64::new(0.0, 0.0) };
            explicit[j] = u[j] + r * (left - 2.0 * u[j] + right);
        }
        explicit[0] += r * b_next;

        let mut next = u.clone();
        let mut converged = false;
        for sweep in 0..cfg.newton_max {
            let delta = if sweep < FIXED_POINT_SWEEPS {
                for j in 0..ni {
                    let mid = 0.5 * (next[j] + u[j]);
                    rhs[j] = explicit[j] + lam_dt * power(mid, alpha);
                }
                let fresh = solve_tridiagonal(-r, C64::new(1.0, 0.0) + 2.0 * r, &rhs);
                let d = max_diff(&fresh, &next);
                next = fresh;
                d
            } else {
                newton_step(&mut next, &u, &explicit, r, lam_dt, alpha)
            };
            if !delta.is_finite() {
                break;
            }
            let scale = next.iter().fold(1.0f64, |a, z| a.max(z.norm()));
            if delta <= cfg.newton_tol * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::InnerIterationDiverged { step });
        }
        u = next;
        b_prev = b_next;
        store(&mut out, step, b_prev, &u);
    }
    let wall = out
        .slices()
        .map(|s| s[s.len() - 8..].iter().fold(0.0f64, |a, z| a.max(z.norm())))
        .fold(0.0, f64::max);
    if wall > WALL_TOLERANCE {
        log::warn!("solution reaches {wall:e} near x_max; the Dirichlet wall may be felt");
    }
    Ok(out)
}

/// [`crank_nicolson_fn`] with the data of `spec`, interpolated by cubic
/// Lagrange polynomials where the finite-difference nodes fall between samples.
pub fn crank_nicolson(spec: &ProblemSpec, cfg: &FDConfig) -> Result<SolutionField> {
    let sg = spec.phi.grid;
    let phi_vals = &spec.phi.values;
    let phi = |x: f64| lagrange4(phi_vals, x / sg.dx(), true);
    let fdt = spec.f.grid.dt();
    let f_vals = &spec.f.values;
    let f = |t: f64| lagrange4(f_vals, t / fdt, false);
    crank_nicolson_fn(spec.lambda, spec.alpha, phi, f, spec.t_final(), cfg)
}

/// Cubic interpolation of uniform samples at fractional index `u`; beyond the
/// last sample the value is zero when `vanish_outside` is set.
fn lagrange4(v: &[C64], u: f64, vanish_outside: bool) -> C64 {
    let last = v.len() - 1;
    if vanish_outside && u > last as f64 {
        return C64::new(0.0, 0.0);
    }
    let i0 = (u.floor() as isize - 1).clamp(0, last as isize - 3) as usize;
    let r = u - i0 as f64;
    let l = [
        -(r - 1.0) * (r - 2.0) * (r - 3.0) / 6.0,
        r * (r - 2.0) * (r - 3.0) / 2.0,
        -r * (r - 1.0) * (r - 3.0) / 2.0,
        r * (r - 1.0) * (r - 2.0) / 6.0,
    ];
    (0..4).map(|i| v[i0 + i] * l[i]).sum()
}

fn power(z: C64, alpha: f64) -> C64 {
    let a = z.norm();
    if a == 0.0 {
        z
    } else {
        z * a.powf(alpha - 1.0)
    }
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Thomas algorithm for the constant tridiagonal system
/// `off x_{j-1} + diag x_j + off x_{j+1} = rhs_j`.
fn solve_tridiagonal(off: C64, diag: C64, rhs: &[C64]) -> Vec<C64> {
    let n = rhs.len();
    let mut c = vec![C64::new(0.0, 0.0); n];
    let mut d = vec![C64::new(0.0, 0.0); n];
    c[0] = off / diag;
    d[0] = rhs[0] / diag;
    for j in 1..n {
        let m = diag - off * c[j - 1];
        c[j] = off / m;
        d[j] = (rhs[j] - off * d[j - 1]) / m;
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    x[n - 1] = d[n - 1];
    for j in (0..n - 1).rev() {
        x[j] = d[j] - c[j] * x[j + 1];
    }
    x
}

type Block = [[f64; 2]; 2];

/// Real 2x2 block acting as `delta -> a delta + b conj(delta)`.
fn block(a: C64, b: C64) -> Block {
    [[a.re + b.re, -a.im + b.im], [a.im + b.im, a.re - b.re]]
}

fn mul(p: &Block, q: &Block) -> Block {
    let mut o = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            o[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    o
}

fn mulv(p: &Block, v: [f64; 2]) -> [f64; 2] {
    [p[0][0] * v[0] + p[0][1] * v[1], p[1][0] * v[0] + p[1][1] * v[1]]
}

fn inv(p: &Block) -> Block {
    let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    [[p[1][1] / det, -p[0][1] / det], [-p[1][0] / det, p[0][0] / det]]
}

fn sub(p: &Block, q: &Block) -> Block {
    [[p[0][0] - q[0][0], p[0][1] - q[0][1]], [p[1][0] - q[1][0], p[1][1] - q[1][1]]]
}

/// One Newton update of `G(v) = (I - r D2) v - explicit - lam_dt N((v+u)/2)`,
/// solved as a block-tridiagonal real system. Returns the update size.
fn newton_step(v: &mut [C64], u: &[C64], explicit: &[C64], r: C64, lam_dt: C64, alpha: f64) -> f64 {
    let n = v.len();
    let diag_lin = C64::new(1.0, 0.0) + 2.0 * r;
    let mut resid = vec![[0.0; 2]; n];
    let mut diag = vec![[[0.0; 2]; 2]; n];
    for j in 0..n {
        let left = if j > 0 { v[j - 1] } else { C64::new(0.0, 0.0) };
        let right = if j + 1 < n { v[j + 1] } else { C64::new(0.0, 0.0) };
        let mid = 0.5 * (v[j] + u[j]);
        let g = diag_lin * v[j] - r * (left + right) - explicit[j] - lam_dt * power(mid, alpha);
        resid[j] = [-g.re, -g.im];
        // dN/dv and dN/dconj(v) at the midpoint, each times 1/2 from the chain rule.
        let a2 = mid.norm_sqr();
        let (dn, dnbar) = if a2 == 0.0 {
            (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
        } else {
            let p = a2.powf(0.5 * (alpha - 1.0));
            let q = 0.5 * (alpha - 1.0) * a2.powf(0.5 * (alpha - 3.0));
            (C64::new(p + q * a2, 0.0), mid * mid * q)
        };
        diag[j] = block(diag_lin - lam_dt * dn * 0.5, -lam_dt * dnbar * 0.5);
    }
    let off = block(-r, C64::new(0.0, 0.0));
    // Block Thomas elimination.
    let mut cp: Vec<Block> = vec![[[0.0; 2]; 2]; n];
    let mut dp = vec![[0.0; 2]; n];
    let inv0 = inv(&diag[0]);
    cp[0] = mul(&inv0, &off);
    dp[0] = mulv(&inv0, resid[0]);
    for j in 1..n {
        let m = sub(&diag[j], &mul(&off, &cp[j - 1]));
        let mi = inv(&m);
        cp[j] = mul(&mi, &off);
        let od = mulv(&off, dp[j - 1]);
        dp[j] = mulv(&mi, [resid[j][0] - od[0], resid[j][1] - od[1]]);
    }
    let mut x = vec![[0.0; 2]; n];
    x[n - 1] = dp[n - 1];
    for j in (0..n - 1).rev() {
        let cx = mulv(&cp[j], x[j + 1]);
        x[j] = [dp[j][0] - cx[0], dp[j][1] - cx[1]];
    }
    let mut size = 0.0f64;
    for (vj, d) in v.iter_mut().zip(&x) {
        *vj += C64::new(d[0], d[1]);
        size = size.max(d[0].hypot(d[1]));
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_data_stays_zero() {
        let cfg = FDConfig::new(64, 64, 10.0);
        let z = |_: f64| C64::new(0.0, 0.0);
        let u = crank_nicolson_fn(C64::new(1.0, 0.0), 3.0, z, z, 0.5, &cfg).unwrap();
        assert!(u.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn tridiagonal_solver_inverts() {
        let off = C64::new(0.0, -0.3);
        let diag = C64::new(1.0, 0.6);
        let x: Vec<C64> = (0..10).map(|j| C64::new(j as f64, 1.0 / (j + 1) as f64)).collect();
        let mut rhs = vec![C64::new(0.0, 0.0); 10];
        for j in 0..10 {
            rhs[j] = diag * x[j];
            if j > 0 {
                rhs[j] += off * x[j - 1];
            }
            if j < 9 {
                rhs[j] += off * x[j + 1];
            }
        }
        let y = solve_tridiagonal(off, diag, &rhs);
        assert!(max_diff(&x, &y) < 1e-13);
    }

    #[test]
    fn newton_agrees_with_fixed_point() {
        // Large steps force the Newton branch; both branches solve the same equations.
        let mut cfg = FDConfig::new(64, 64, 16.0);
        let phi = |x: f64| C64::new(2.0 / (x - 6.0).cosh(), 0.0);
        let f = |t: f64| C64::from_polar(2.0 / 6.0f64.cosh(), 4.0 * t);
        let a = crank_nicolson_fn(C64::new(2.0, 0.0), 3.0, phi, f, 2.0, &cfg).unwrap();
        cfg.newton_tol = 1e-13;
        let b = crank_nicolson_fn(C64::new(2.0, 0.0), 3.0, phi, f, 2.0, &cfg).unwrap();
        assert!(max_diff(&a.values, &b.values) < 1e-10);
    }

    #[test]
    fn block_matches_complex_action() {
        let a = C64::new(0.3, -1.2);
        let b = C64::new(-0.7, 0.4);
        let d = C64::new(1.1, 2.5);
        let want = a * d + b * d.conj();
        let got = mulv(&block(a, b), [d.re, d.im]);
        assert!((got[0] - want.re).abs() < 1e-14 && (got[1] - want.im).abs() < 1e-14);
    }
}
