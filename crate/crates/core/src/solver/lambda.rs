use crate::error::{Error, Result};
use crate::grid::{GridFunction, SolutionField, TimeSignal, C64};
use crate::sobolev::smooth_extension_values;
use crate::ops::{duhamel_field, free_group_field, BoundaryOperator};

/// Pointwise `lambda u |u|^{alpha-1}`, zero where `u = 0`.
pub fn nonlinearity(u: &SolutionField, lambda: C64, alpha: f64) -> SolutionField {
    u.map(|z| pointwise(z, lambda, alpha))
}

pub(crate) fn pointwise(z: C64, lambda: C64, alpha: f64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        C64::new(0.0, 0.0)
    } else if alpha == 3.0 {
        lambda * z * (r * r)
    } else {
        lambda * z * r.powf(alpha - 1.0)
    }
}

/// The Picard map
/// `Lambda w = e^{it d^2} u0 + L(g - e^{i. d^2} u0 |_{x=0}) - D N(w) + L(D N(w)|_{x=0})`
/// with `N(w) = lambda w |w|^{alpha-1}`. The cutoffs equal one on the
/// solution interval and are omitted. Only `x >= 0` is physical: `N(w)` is
/// rebuilt on `x < 0` from its half-line values by a smooth reflection, which
/// leaves the half-line solution unchanged and keeps the spectral Duhamel
/// step free of a kink at the origin. The map is causal, so it accepts any
/// `w` on a prefix `[0, t_k]` of the data grid.
pub struct LambdaOperator {
    linear: SolutionField,
    boundary: BoundaryOperator,
    lambda: C64,
    alpha: f64,
}

impl LambdaOperator {
    /// `u0` is the whole-line initial slice, `g` the boundary data.
    pub fn new(u0: &GridFunction, g: &TimeSignal, lambda: C64, alpha: f64) -> Result<Self> {
        let sgrid = u0.grid;
        let tgrid = g.grid;
        if !sgrid.is_zero_aligned() {
            return Err(Error::InvalidGrid("the solver needs a node at x = 0".into()));
        }
        let free = free_group_field(u0, tgrid);
        let trace = free.boundary_trace();
        let gap = TimeSignal {
            grid: tgrid,
            values: g.values.iter().zip(&trace.values).map(|(a, b)| a - b).collect(),
        };
        let boundary = BoundaryOperator::new(sgrid, tgrid);
        let mut linear = boundary.apply(&gap)?;
        for (l, f) in linear.values.iter_mut().zip(&free.values) {
            *l += f;
        }
        Ok(Self { linear, boundary, lambda, alpha })
    }

    /// The `w`-independent part of the map.
    pub fn linear_part(&self) -> &SolutionField {
        &self.linear
    }

    pub fn apply(&self, w: &SolutionField) -> Result<SolutionField> {
        let steps = w.tgrid.m();
        let lin = &self.linear;
        let dt = lin.tgrid.dt();
        if w.sgrid != lin.sgrid || steps > lin.tgrid.m() || (w.tgrid.dt() - dt).abs() > 1e-12 * dt {
            return Err(Error::GridMismatch("iterate is not on a prefix of the data grid".into()));
        }
        let mut out = if steps == lin.tgrid.m() { lin.clone() } else { lin.truncate(steps)? };
        if self.lambda == C64::new(0.0, 0.0) {
            return Ok(out);
        }
        let mut source = nonlinearity(w, self.lambda, self.alpha);
        let z = w.sgrid.zero_index();
        for k in 0..=steps {
            let slice = source.slice_mut(k);
            let ext = smooth_extension_values(w.sgrid, &slice[z..]);
            slice.copy_from_slice(&ext);
        }
        let dn = duhamel_field(&source);
        let trace = dn.boundary_trace();
        debug_assert_eq!(trace.values[0], C64::new(0.0, 0.0));
        let correction = self.boundary.apply(&trace)?;
        for ((o, d), c) in out.values.iter_mut().zip(&dn.values).zip(&correction.values) {
            *o += c - d;
        }
        if out.values.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("Picard iterate"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SpatialGrid, TimeGrid};

    #[test]
    fn cubic_value() {
        let sg = SpatialGrid::symmetric(4.0, 16).unwrap();
        let tg = TimeGrid::new(1.0, 8).unwrap();
        let u = SolutionField::from_fn(sg, tg, |_, _| C64::new(2.0, 0.0));
        let lam = C64::new(0.5, 1.0);
        let n = nonlinearity(&u, lam, 3.0);
        assert!(n.values.iter().all(|z| (z - lam * 8.0).norm() < 1e-14));
        let zero = SolutionField::zeros(sg, tg);
        assert!(nonlinearity(&zero, lam, 2.0).values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn trivial_data_maps_zero_to_zero() {
        let sg = SpatialGrid::symmetric(8.0, 64).unwrap();
        let tg = TimeGrid::new(0.5, 16).unwrap();
        let op = LambdaOperator::new(&GridFunction::zeros(sg), &TimeSignal::zeros(tg), C64::new(1.0, 0.0), 3.0)
            .unwrap();
        let out = op.apply(&SolutionField::zeros(sg, tg)).unwrap();
        assert!(out.values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn boundary_trace_is_data_for_any_iterate() {
        let sg = SpatialGrid::symmetric(16.0, 128).unwrap();
        let tg = TimeGrid::new(0.5, 32).unwrap();
        let u0 = GridFunction::from_fn(sg, |x| C64::new((-(x - 3.0).powi(2)).exp(), 0.0));
        let g = TimeSignal::from_fn(tg, |t| C64::new(0.0, t * (-9.0f64).exp()));
        let op = LambdaOperator::new(&u0, &g, C64::new(2.0, 0.0), 3.0).unwrap();
        let w = SolutionField::from_fn(sg, tg, |x, t| C64::new((-x * x).exp() * (1.0 + t), 0.3));
        let out = op.apply(&w).unwrap();
        let tr = out.boundary_trace();
        for (a, b) in tr.values.iter().zip(&g.values) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}
