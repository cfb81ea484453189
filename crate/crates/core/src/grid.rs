//! Uniform space and time discretizations and the sampled objects that live on them.
//!
//! The spatial grid is periodic in the spectral sense: nodes are
//! `x_j = x_min + j*dx` for `j = 0..n`, and `x_max` itself is identified with
//! `x_min`. Time grids include both endpoints, `t_k = k*dt` for `k = 0..=m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Smallest admissible number of spatial nodes.
pub const MIN_SPATIAL_NODES: usize = 16;
/// Smallest admissible number of time steps.
pub const MIN_TIME_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if !(x_min < 0.0 && 0.0 < x_max) {
            return Err(Error::InvalidGrid(format!(
                "need x_min < 0 < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < MIN_SPATIAL_NODES || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two >= {MIN_SPATIAL_NODES}, got {n}"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    /// Grid on `[-half_width, half_width)` with the node `n/2` exactly at zero.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Index of the node nearest to `x = 0`.
    pub fn zero_index(&self) -> usize {
        let j = (-self.x_min / self.dx()).round() as usize;
        j.min(self.n - 1)
    }

    /// Offset of the zero node from the origin, `|x_z| <= dx/2`.
    pub fn zero_offset(&self) -> f64 {
        self.x(self.zero_index())
    }

    /// True when the zero node sits on the origin up to rounding.
    pub fn is_zero_aligned(&self) -> bool {
        self.zero_offset().abs() <= 1e-9 * self.dx()
    }

    /// Number of nodes with `x >= 0` (counting the zero node).
    pub fn half_line_len(&self) -> usize {
        self.n - self.zero_index()
    }

    /// Discrete angular wavenumbers in FFT order, covering `[-pi/dx, pi/dx)`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        fft_frequencies(self.n, self.dx())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_max: f64,
    m: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, m: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidGrid(format!("t_max must be positive, got {t_max}")));
        }
        if m < MIN_TIME_STEPS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_TIME_STEPS} time steps, got {m}"
            )));
        }
        Ok(Self { t_max, m })
    }

    /// Grid with `m` steps of size `dt`.
    pub fn from_step(dt: f64, m: usize) -> Result<Self> {
        Self::new(dt * m as f64, m)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.m as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.m).map(|k| self.t(k)).collect()
    }
}

/// Angular frequencies `2*pi*k/(n*h)` in FFT order.
pub fn fft_frequencies(n: usize, h: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / (n as f64 * h);
    (0..n)
        .map(|k| {
            let kk = if k < n / 2 { k as i64 } else { k as i64 - n as i64 };
            base * kk as f64
        })
        .collect()
}

fn check_finite(values: &[C64], what: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Complex samples on a [`SpatialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: SpatialGrid,
    pub values: Vec<C64>,
}

impl GridFunction {
    pub fn new(grid: SpatialGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                grid.n(),
                values.len()
            )));
        }
        check_finite(&values, "grid function")?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpatialGrid) -> Self {
        Self { grid, values: vec![C64::new(0.0, 0.0); grid.n()] }
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> C64) -> Self {
        let values = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    /// Trapezoidal (periodic) L2 norm.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.dx() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Largest magnitude among the outermost eighth of nodes on either side.
    pub fn edge_magnitude(&self) -> f64 {
        let band = (self.grid.n() / 16).max(1);
        let n = self.grid.n();
        self.values[..band]
            .iter()
            .chain(&self.values[n - band..])
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// The `x >= 0` part as half-line samples.
    pub fn restrict_half_line(&self) -> HalfLineFunction {
        let z = self.grid.zero_index();
        HalfLineFunction { grid: self.grid, values: self.values[z..].to_vec() }
    }
}

/// Samples of a function defined only for `x >= 0`, stored on the
/// non-negative nodes of a [`SpatialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineFunction {
    pub grid: SpatialGrid,
    pub values: Vec<C64>,
}

impl HalfLineFunction {
    pub fn new(grid: SpatialGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.half_line_len() {
            return Err(Error::GridMismatch(format!(
                "expected {} half-line samples, got {}",
                grid.half_line_len(),
                values.len()
            )));
        }
        check_finite(&values, "half-line function")?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> C64) -> Self {
        let z = grid.zero_index();
        let values = (z..grid.n()).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    /// Value at the zero node.
    pub fn at_origin(&self) -> C64 {
        self.values[0]
    }

    /// L2 norm over `x >= 0`, trapezoid with half weight on the origin.
    pub fn l2_norm(&self) -> f64 {
        let dx = self.grid.dx();
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, z)| if i == 0 { 0.5 * z.norm_sqr() } else { z.norm_sqr() })
            .sum();
        (dx * s).sqrt()
    }
}

/// Complex samples on a [`TimeGrid`], one per node including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    pub grid: TimeGrid,
    pub values: Vec<C64>,
}

impl TimeSignal {
    pub fn new(grid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} time samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        check_finite(&values, "time signal")?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self { grid, values: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> C64) -> Self {
        let values = (0..grid.len()).map(|k| f(grid.t(k))).collect();
        Self { grid, values }
    }

    pub fn from_real(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |t| C64::new(f(t), 0.0))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Trapezoidal L2 norm on `[0, t_max]`.
    pub fn l2_norm(&self) -> f64 {
        let dt = self.grid.dt();
        let last = self.values.len() - 1;
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, z)| if k == 0 || k == last { 0.5 * z.norm_sqr() } else { z.norm_sqr() })
            .sum();
        (dt * s).sqrt()
    }

    /// Samples `start..=start+steps`, re-based to start at `t = 0`.
    pub fn segment(&self, start: usize, steps: usize) -> Result<TimeSignal> {
        if start + steps > self.grid.m() {
            return Err(Error::GridMismatch(format!(
                "segment {start}+{steps} exceeds {} steps",
                self.grid.m()
            )));
        }
        let grid = TimeGrid::from_step(self.grid.dt(), steps)?;
        Ok(TimeSignal { grid, values: self.values[start..=start + steps].to_vec() })
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> TimeSignal {
        TimeSignal { grid: self.grid, values: self.values.iter().map(|&z| f(z)).collect() }
    }
}

/// Complex space-time samples, stored slice by slice: `values[k*n + j] = u(x_j, t_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub sgrid: SpatialGrid,
    pub tgrid: TimeGrid,
    pub values: Vec<C64>,
}

impl SolutionField {
    pub fn new(sgrid: SpatialGrid, tgrid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != sgrid.n() * tgrid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {}x{} field, got {} values",
                tgrid.len(),
                sgrid.n(),
                values.len()
            )));
        }
        check_finite(&values, "solution field")?;
        Ok(Self { sgrid, tgrid, values })
    }

    pub fn zeros(sgrid: SpatialGrid, tgrid: TimeGrid) -> Self {
        Self { sgrid, tgrid, values: vec![C64::new(0.0, 0.0); sgrid.n() * tgrid.len()] }
    }

    pub fn from_fn(sgrid: SpatialGrid, tgrid: TimeGrid, f: impl Fn(f64, f64) -> C64) -> Self {
        let mut values = Vec::with_capacity(sgrid.n() * tgrid.len());
        for k in 0..tgrid.len() {
            let t = tgrid.t(k);
            values.extend((0..sgrid.n()).map(|j| f(sgrid.x(j), t)));
        }
        Self { sgrid, tgrid, values }
    }

    /// Field whose slice `k` is `slices[k]`.
    pub fn from_slices(sgrid: SpatialGrid, tgrid: TimeGrid, slices: Vec<Vec<C64>>) -> Result<Self> {
        if slices.len() != tgrid.len() || slices.iter().any(|s| s.len() != sgrid.n()) {
            return Err(Error::GridMismatch("slice shapes do not match grids".into()));
        }
        Ok(Self { sgrid, tgrid, values: slices.concat() })
    }

    pub fn n(&self) -> usize {
        self.sgrid.n()
    }

    pub fn slice(&self, k: usize) -> &[C64] {
        let n = self.n();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn slice_mut(&mut self, k: usize) -> &mut [C64] {
        let n = self.n();
        &mut self.values[k * n..(k + 1) * n]
    }

    pub fn slices(&self) -> std::slice::Chunks<'_, C64> {
        self.values.chunks(self.n())
    }

    pub fn at(&self, j: usize, k: usize) -> C64 {
        self.values[k * self.n() + j]
    }

    pub fn slice_function(&self, k: usize) -> GridFunction {
        GridFunction { grid: self.sgrid, values: self.slice(k).to_vec() }
    }

    /// Time trace at spatial node `j`.
    pub fn trace_at(&self, j: usize) -> TimeSignal {
        let values = (0..self.tgrid.len()).map(|k| self.at(j, k)).collect();
        TimeSignal { grid: self.tgrid, values }
    }

    /// Time trace at the zero node.
    pub fn boundary_trace(&self) -> TimeSignal {
        self.trace_at(self.sgrid.zero_index())
    }

    /// First `steps` steps of the field.
    pub fn truncate(&self, steps: usize) -> Result<SolutionField> {
        if steps > self.tgrid.m() {
            return Err(Error::GridMismatch("truncation beyond field end".into()));
        }
        let tgrid = TimeGrid::from_step(self.tgrid.dt(), steps)?;
        let n = self.n();
        Ok(SolutionField {
            sgrid: self.sgrid,
            tgrid,
            values: self.values[..(steps + 1) * n].to_vec(),
        })
    }

    /// Appends `next` after this field; `next`'s first slice is dropped in
    /// favour of this field's last slice.
    pub fn concat(&self, next: &SolutionField) -> Result<SolutionField> {
        if self.sgrid != next.sgrid {
            return Err(Error::GridMismatch("spatial grids differ".into()));
        }
        let (dt_a, dt_b) = (self.tgrid.dt(), next.tgrid.dt());
        if (dt_a - dt_b).abs() > 1e-12 * dt_a {
            return Err(Error::GridMismatch("time steps differ".into()));
        }
        let steps = self.tgrid.m() + next.tgrid.m();
        let tgrid = TimeGrid::from_step(dt_a, steps)?;
        let mut values = self.values.clone();
        values.extend_from_slice(&next.values[self.n()..]);
        Ok(SolutionField { sgrid: self.sgrid, tgrid, values })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> SolutionField {
        SolutionField {
            sgrid: self.sgrid,
            tgrid: self.tgrid,
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Pointwise `self - other`.
    pub fn difference(&self, other: &SolutionField) -> Result<SolutionField> {
        if self.sgrid != other.sgrid || self.tgrid.len() != other.tgrid.len() {
            return Err(Error::GridMismatch("fields differ in shape".into()));
        }
        Ok(SolutionField {
            sgrid: self.sgrid,
            tgrid: self.tgrid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_grid_has_exact_zero_node() {
        let g = SpatialGrid::symmetric(20.0, 256).unwrap();
        assert_eq!(g.zero_index(), 128);
        assert_eq!(g.x(128), 0.0);
        assert!(g.is_zero_aligned());
        assert_eq!(g.half_line_len(), 128);
    }

    #[test]
    fn grid_validation() {
        assert!(SpatialGrid::new(0.0, 1.0, 64).is_err());
        assert!(SpatialGrid::new(-1.0, 1.0, 100).is_err());
        assert!(SpatialGrid::new(-1.0, 1.0, 8).is_err());
        assert!(TimeGrid::new(1.0, 4).is_err());
        assert!(TimeGrid::new(-1.0, 64).is_err());
    }

    #[test]
    fn skewed_grid_zero_node_within_half_step() {
        let g = SpatialGrid::new(-3.3, 10.0, 64).unwrap();
        assert!(g.zero_offset().abs() <= 0.5 * g.dx());
    }

    #[test]
    fn wavenumbers_cover_nyquist_from_below() {
        let g = SpatialGrid::symmetric(std::f64::consts::PI, 16).unwrap();
        let xi = g.wavenumbers();
        assert_eq!(xi[0], 0.0);
        assert_eq!(xi[1], 1.0);
        assert_eq!(xi[8], -8.0);
        assert_eq!(xi[15], -1.0);
    }

    #[test]
    fn concat_shares_seam() {
        let s = SpatialGrid::symmetric(1.0, 16).unwrap();
        let t = TimeGrid::new(1.0, 8).unwrap();
        let a = SolutionField::from_fn(s, t, |x, t| C64::new(x, t));
        let b = SolutionField::from_fn(s, t, |x, t| C64::new(x, t + 1.0));
        let c = a.concat(&b).unwrap();
        assert_eq!(c.tgrid.m(), 16);
        assert_eq!(c.slice(8), a.slice(8));
        assert_eq!(c.slice(9), b.slice(1));
    }

    #[test]
    fn segment_rebases_time() {
        let t = TimeGrid::new(1.0, 16).unwrap();
        let f = TimeSignal::from_real(t, |t| t);
        let seg = f.segment(8, 8).unwrap();
        assert_eq!(seg.values[0].re, 0.5);
        assert_eq!(seg.grid.t_max(), 0.5);
        assert!(f.segment(10, 8).is_err());
    }
}
