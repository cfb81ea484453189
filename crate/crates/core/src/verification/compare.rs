use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{SolutionField, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldComparison {
    /// `||a - b|| / max(||a||, ||b||)` in discrete `L^2(x > 0, t)`.
    pub rel_l2: f64,
    pub sup_diff: f64,
    /// `L^2_x` norm of the difference on each compared time slice.
    pub per_slice: Vec<f64>,
    /// Times of the compared slices.
    pub times: Vec<f64>,
}

/// Linear interpolation of `field` at `(x, t)`; `None` outside its grid.
fn sample(field: &SolutionField, x: f64, t: f64) -> Option<C64> {
    let sg = field.sgrid;
    let tg = field.tgrid;
    let n = sg.n();
    let u = (x - sg.x_min()) / sg.dx();
    let v = t / tg.dt();
    let tol = 1e-9;
    if u < -tol || u > (n - 1) as f64 + tol || v < -tol || v > tg.m() as f64 + tol {
        return None;
    }
    let (j, a) = split(u, n - 1);
    let (k, b) = split(v, tg.m());
    let at = |jj: usize, kk: usize| field.at(jj.min(n - 1), kk.min(tg.m()));
    let lo = at(j, k) * (1.0 - a) + if a > 0.0 { at(j + 1, k) * a } else { C64::new(0.0, 0.0) };
    if b == 0.0 {
        return Some(lo);
    }
    let hi = at(j, k + 1) * (1.0 - a) + if a > 0.0 { at(j + 1, k + 1) * a } else { C64::new(0.0, 0.0) };
    Some(lo * (1.0 - b) + hi * b)
}

/// Integer part clamped to `last` and the fractional remainder, snapping
/// values within rounding of a node onto it.
fn split(u: f64, last: usize) -> (usize, f64) {
    let r = u.round();
    if (u - r).abs() < 1e-9 {
        return ((r.max(0.0) as usize).min(last), 0.0);
    }
    let i = (u.floor().max(0.0) as usize).min(last);
    (i, u - i as f64)
}

fn grid_key(f: &SolutionField) -> (f64, f64, f64, usize, usize) {
    (f.sgrid.dx(), f.tgrid.dt(), f.sgrid.x_min(), f.sgrid.n(), f.tgrid.m())
}

/// Compares two fields on `x >= 0` over their common domain. The field with
/// the coarser grid provides the sample points and the other is interpolated
/// linearly onto them, so the result does not depend on argument order.
pub fn compare_fields(a: &SolutionField, b: &SolutionField) -> Result<FieldComparison> {
    let (base, other) = match grid_key(a).partial_cmp(&grid_key(b)) {
        Some(std::cmp::Ordering::Less) => (b, a),
        _ => (a, b),
    };
    let sg = base.sgrid;
    let x_end = sg.x(sg.n() - 1).min(other.sgrid.x(other.sgrid.n() - 1));
    let t_end = base.tgrid.t_max().min(other.tgrid.t_max());
    let z = sg.zero_index();
    let cols: Vec<usize> = (z..sg.n()).filter(|&j| sg.x(j) >= -1e-12 && sg.x(j) <= x_end + 1e-12).collect();
    let rows: Vec<usize> = (0..base.tgrid.len()).filter(|&k| base.tgrid.t(k) <= t_end * (1.0 + 1e-12)).collect();
    if cols.is_empty() || rows.is_empty() || x_end <= 0.0 {
        return Err(Error::DisjointDomains);
    }
    let dx = sg.dx();
    let mut diff2 = 0.0;
    let mut na2 = 0.0;
    let mut nb2 = 0.0;
    let mut sup: f64 = 0.0;
    let mut per_slice = Vec::with_capacity(rows.len());
    let mut times = Vec::with_capacity(rows.len());
    for &k in &rows {
        let t = base.tgrid.t(k);
        let mut slice2 = 0.0;
        for &j in &cols {
            let p = base.at(j, k);
            let q = sample(other, sg.x(j), t).ok_or(Error::DisjointDomains)?;
            let d = (p - q).norm();
            slice2 += d * d;
            sup = sup.max(d);
            na2 += p.norm_sqr();
            nb2 += q.norm_sqr();
        }
        diff2 += slice2;
        per_slice.push((dx * slice2).sqrt());
        times.push(t);
    }
    let scale = na2.max(nb2).sqrt();
    let rel_l2 = if scale > 0.0 { diff2.sqrt() / scale } else { 0.0 };
    Ok(FieldComparison { rel_l2, sup_diff: sup, per_slice, times })
}

/// Relative discrete `L^2(x > 0, t)` distance between `u` and a function
/// known in closed form.
pub fn compare_with_exact(u: &SolutionField, exact: impl Fn(f64, f64) -> C64) -> f64 {
    let sg = u.sgrid;
    let mut d2 = 0.0;
    let mut e2 = 0.0;
    for k in 0..u.tgrid.len() {
        let t = u.tgrid.t(k);
        for j in sg.zero_index()..sg.n() {
            let e = exact(sg.x(j), t);
            d2 += (u.at(j, k) - e).norm_sqr();
            e2 += e.norm_sqr();
        }
    }
    if e2 > 0.0 {
        (d2 / e2).sqrt()
    } else {
        d2.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SpatialGrid, TimeGrid};

    fn field(n: usize, m: usize) -> SolutionField {
        let sg = SpatialGrid::symmetric(8.0, n).unwrap();
        let tg = TimeGrid::new(1.0, m).unwrap();
        SolutionField::from_fn(sg, tg, |x, t| C64::new((-(x - 2.0).powi(2)).exp() * (1.0 + t), x.sin() * t))
    }

    #[test]
    fn identical_fields() {
        let a = field(64, 16);
        let r = compare_fields(&a, &a).unwrap();
        assert_eq!(r.rel_l2, 0.0);
        assert_eq!(r.sup_diff, 0.0);
    }

    #[test]
    fn symmetric_across_grids() {
        let a = field(64, 16);
        let b = field(128, 32).map(|z| z * 1.01);
        let ab = compare_fields(&a, &b).unwrap();
        let ba = compare_fields(&b, &a).unwrap();
        assert_eq!(ab, ba);
        // Nodes of the coarse grid are nodes of the fine one.
        assert!((ab.rel_l2 - 0.01 / 1.01).abs() < 1e-12);
    }

    #[test]
    fn disjoint_domains_rejected() {
        let a = field(64, 16);
        // Every node of this grid lies at x < 0.
        let sg = SpatialGrid::new(-1.0, 1e-3, 16).unwrap();
        let b = SolutionField::zeros(sg, TimeGrid::new(1.0, 16).unwrap());
        assert!(matches!(compare_fields(&a, &b), Err(Error::DisjointDomains)));
    }
}
