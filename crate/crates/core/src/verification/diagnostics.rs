use serde::{Deserialize, Serialize};

use crate::grid::{SolutionField, C64};
use crate::solver::nonlinearity;

/// Terms of the flux balance `d/dt int_0^inf |u|^2 dx = 2 Im(conj(u) u_x)(0, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassFlux {
    pub mass_start: f64,
    pub mass_end: f64,
    /// `2 int_0^T Im(conj(u) u_x)(0, t) dt`.
    pub flux: f64,
    /// `|mass_end - mass_start - flux| / max_t mass(t)`.
    pub rel_imbalance: f64,
}

fn half_line_mass(u: &SolutionField, k: usize) -> f64 {
    let sg = u.sgrid;
    let z = sg.zero_index();
    let s = u.slice(k);
    let sum: f64 = s[z..].iter().enumerate().map(|(i, v)| if i == 0 { 0.5 * v.norm_sqr() } else { v.norm_sqr() }).sum();
    sg.dx() * sum
}

/// One-sided second-order `u_x(0+, t_k)`.
fn dx_right(u: &SolutionField, k: usize) -> C64 {
    let z = u.sgrid.zero_index();
    (-3.0 * u.at(z, k) + 4.0 * u.at(z + 1, k) - u.at(z + 2, k)) / (2.0 * u.sgrid.dx())
}

/// Mass balance on `x > 0`; exact for smooth solutions with real `lambda`.
pub fn mass_flux_balance(u: &SolutionField) -> MassFlux {
    let z = u.sgrid.zero_index();
    let len = u.tgrid.len();
    let flux_rate: Vec<f64> = (0..len).map(|k| 2.0 * (u.at(z, k).conj() * dx_right(u, k)).im).collect();
    let dt = u.tgrid.dt();
    let flux = dt * (flux_rate.iter().sum::<f64>() - 0.5 * (flux_rate[0] + flux_rate[len - 1]));
    let masses: Vec<f64> = (0..len).map(|k| half_line_mass(u, k)).collect();
    let peak = masses.iter().copied().fold(0.0, f64::max);
    let (mass_start, mass_end) = (masses[0], masses[len - 1]);
    let gap = (mass_end - mass_start - flux).abs();
    MassFlux { mass_start, mass_end, flux, rel_imbalance: if peak > 0.0 { gap / peak } else { gap } }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    /// Discrete `L^2` norm of the residual over the tested region.
    pub residual: f64,
    /// Discrete `L^2` norm of the reference quantity over the same region.
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual / self.scale
        } else {
            self.residual
        }
    }
}

/// `(i d_t + d_x^2) u - w` on nodes with `x > x_gap` (and `x < x_max - 4 dx`)
/// and interior times, with fourth-order differences in `x` and centred
/// differences in `t`. `scale` is the norm of `d_x^2 u` there.
pub fn schrodinger_residual(u: &SolutionField, source: Option<&SolutionField>, x_gap: f64) -> Residual {
    let sg = u.sgrid;
    let n = sg.n();
    let dx = sg.dx();
    let dt = u.tgrid.dt();
    let mut r2 = 0.0;
    let mut s2 = 0.0;
    for k in 1..u.tgrid.m() {
        for j in 2..n - 2 {
            let x = sg.x(j);
            if x <= x_gap || x >= sg.x(n - 1) - 3.0 * dx {
                continue;
            }
            let uxx = (-u.at(j + 2, k) + 16.0 * u.at(j + 1, k) - 30.0 * u.at(j, k) + 16.0 * u.at(j - 1, k)
                - u.at(j - 2, k))
                / (12.0 * dx * dx);
            let ut = (u.at(j, k + 1) - u.at(j, k - 1)) / (2.0 * dt);
            let mut res = C64::new(0.0, 1.0) * ut + uxx;
            if let Some(w) = source {
                res -= w.at(j, k);
            }
            r2 += res.norm_sqr();
            s2 += uxx.norm_sqr();
        }
    }
    Residual { residual: (dx * dt * r2).sqrt(), scale: (dx * dt * s2).sqrt() }
}

/// Residual of `i u_t + u_xx + lambda u|u|^{alpha-1} = 0` for `x > x_gap`.
pub fn nls_residual(u: &SolutionField, lambda: C64, alpha: f64, x_gap: f64) -> Residual {
    let source = nonlinearity(u, -lambda, alpha);
    schrodinger_residual(u, Some(&source), x_gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SpatialGrid, TimeGrid};

    fn soliton(n: usize, m: usize) -> SolutionField {
        let sg = SpatialGrid::symmetric(32.0, n).unwrap();
        let tg = TimeGrid::new(0.5, m).unwrap();
        SolutionField::from_fn(sg, tg, |x, t| C64::from_polar(1.0 / (x - 6.0).cosh(), t))
    }

    #[test]
    fn exact_soliton_has_small_residual_and_balance() {
        let u = soliton(1024, 256);
        let r = nls_residual(&u, C64::new(2.0, 0.0), 3.0, 0.0);
        assert!(r.relative() < 1e-4, "{}", r.relative());
        let mf = mass_flux_balance(&u);
        // The soliton's modulus is static, so mass and flux both stay put.
        assert!(mf.rel_imbalance < 1e-8);
    }

    #[test]
    fn residual_detects_wrong_equation() {
        let u = soliton(1024, 256);
        let r = nls_residual(&u, C64::new(1.0, 0.0), 3.0, 0.0);
        assert!(r.relative() > 1e-2);
    }
}
