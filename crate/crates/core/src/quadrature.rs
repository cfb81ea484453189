//! Panel quadrature for `int e^{iv} G(v) dv` with smooth `G`: Filon-type
//! rules that integrate a polynomial interpolant of `G` against the
//! oscillatory factor exactly, so panel length is limited by the smoothness
//! of `G` rather than by the phase.

use crate::grid::C64;
use crate::special::GaussLegendre;

const FILON_POINTS: usize = 8;
/// Below this half-width the moments are computed by Gauss-Legendre rather
/// than by upward recurrence.
const RECURRENCE_THRESHOLD: f64 = 8.0;

#[derive(Debug, Clone)]
pub struct FilonRule {
    nodes: [f64; FILON_POINTS],
    /// Row `k` holds the monomial coefficient `c_k` as a combination of the
    /// nodal values: `c_k = sum_i inv_vandermonde[k][i] G_i`.
    inv_vandermonde: [[f64; FILON_POINTS]; FILON_POINTS],
    gl: GaussLegendre,
}

impl Default for FilonRule {
    fn default() -> Self {
        Self::new()
    }
}

impl FilonRule {
    pub fn new() -> Self {
        let p = FILON_POINTS;
        let mut nodes = [0.0; FILON_POINTS];
        for (i, z) in nodes.iter_mut().enumerate() {
            *z = ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * p) as f64).cos();
        }
        Self { nodes, inv_vandermonde: invert_vandermonde(&nodes), gl: GaussLegendre::new(24) }
    }

    /// Interpolation nodes on `[-1, 1]`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Moments `mu_k = int_{-1}^{1} z^k e^{i omega z} dz`, `k < 8`.
    fn moments(&self, omega: f64) -> [C64; FILON_POINTS] {
        let mut mu = [C64::new(0.0, 0.0); FILON_POINTS];
        if omega.abs() < RECURRENCE_THRESHOLD {
            for (z, w) in self.gl.nodes.iter().zip(&self.gl.weights) {
                let e = C64::from_polar(*w, omega * z);
                let mut zk = 1.0;
                for m in mu.iter_mut() {
                    *m += e * zk;
                    zk *= z;
                }
            }
        } else {
            let i_omega = C64::new(0.0, omega);
            let ep = C64::from_polar(1.0, omega);
            let em = C64::from_polar(1.0, -omega);
            mu[0] = C64::new(2.0 * omega.sin() / omega, 0.0);
            for k in 1..FILON_POINTS {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                mu[k] = (ep - em * sign - mu[k - 1] * k as f64) / i_omega;
            }
        }
        mu
    }

    /// `int_{a}^{b} e^{i v} G(v) dv` from `G` sampled at the mapped nodes
    /// (`values[i] = G((a+b)/2 + (b-a)/2 * nodes[i])`).
    pub fn integrate(&self, a: f64, b: f64, values: &[C64]) -> C64 {
        debug_assert_eq!(values.len(), FILON_POINTS);
        let c = 0.5 * (a + b);
        let w = 0.5 * (b - a);
        let mu = self.moments(w);
        let mut acc = C64::new(0.0, 0.0);
        for (row, m) in self.inv_vandermonde.iter().zip(mu.iter()) {
            let coef: C64 = row.iter().zip(values).map(|(r, g)| g * *r).sum();
            acc += coef * m;
        }
        acc * C64::from_polar(w, c)
    }
}

fn invert_vandermonde(nodes: &[f64; FILON_POINTS]) -> [[f64; FILON_POINTS]; FILON_POINTS] {
    // Solve V c = e_i for each unit vector with partial pivoting; V[i][k] = z_i^k.
    let p = FILON_POINTS;
    let mut inv = [[0.0; FILON_POINTS]; FILON_POINTS];
    for col in 0..p {
        let mut a = [[0.0; FILON_POINTS]; FILON_POINTS];
        let mut rhs = [0.0; FILON_POINTS];
        for i in 0..p {
            let mut zk = 1.0;
            for k in 0..p {
                a[i][k] = zk;
                zk *= nodes[i];
            }
        }
        rhs[col] = 1.0;
        for piv in 0..p {
            let best = (piv..p)
                .max_by(|&x, &y| a[x][piv].abs().partial_cmp(&a[y][piv].abs()).unwrap())
                .unwrap();
            a.swap(piv, best);
            rhs.swap(piv, best);
            for r in piv + 1..p {
                let f = a[r][piv] / a[piv][piv];
                for c in piv..p {
                    a[r][c] -= f * a[piv][c];
                }
                rhs[r] -= f * rhs[piv];
            }
        }
        let mut x = [0.0; FILON_POINTS];
        for r in (0..p).rev() {
            let s: f64 = (r + 1..p).map(|c| a[r][c] * x[c]).sum();
            x[r] = (rhs[r] - s) / a[r][r];
        }
        for k in 0..p {
            inv[k][col] = x[k];
        }
    }
    inv
}

/// Leading asymptotic terms of `int_V^inf e^{iv} v^{-mu} dv` for large `V`.
pub fn oscillatory_power_tail(v: f64, mu: f64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut rising = mu;
    for _ in 0..3 {
        term *= C64::new(0.0, -rising / v);
        sum += term;
        rising += 1.0;
    }
    C64::new(0.0, 1.0) * C64::from_polar(v.powf(-mu), v) * sum
}
