use crate::fourier::Spectral;
use crate::grid::{GridFunction, SolutionField, C64};

/// `Dw(., t_k) = -i int_0^{t_k} e^{i(t_k - t') d_x^2} w(., t') dt'` for every
/// `k`, by the trapezoidal rule in `t'`.
///
/// With `E = e^{-i xi^2 dt}` the transforms obey
/// `D_{k+1} = E D_k - i dt/2 (E w_k + w_{k+1})`, which is the same trapezoidal
/// sum evaluated recursively.
pub fn duhamel_field(w: &SolutionField) -> SolutionField {
    let sg = w.sgrid;
    let sp = Spectral::new(sg);
    let n = sg.n();
    let dt = w.tgrid.dt();
    let step: Vec<C64> = sp.wavenumbers().iter().map(|xi| C64::from_polar(1.0, -xi * xi * dt)).collect();
    let half = C64::new(0.0, -0.5 * dt);
    let scale = 1.0 / n as f64;
    let mut out = SolutionField::zeros(sg, w.tgrid);
    let mut acc = vec![C64::new(0.0, 0.0); n];
    let mut prev = w.slice(0).to_vec();
    sp.forward(&mut prev);
    for k in 1..w.tgrid.len() {
        let mut cur = w.slice(k).to_vec();
        sp.forward(&mut cur);
        for j in 0..n {
            acc[j] = step[j] * (acc[j] + half * prev[j]) + half * cur[j];
        }
        let slice = out.slice_mut(k);
        for (o, a) in slice.iter_mut().zip(&acc) {
            *o = a * scale;
        }
        sp.inverse(slice);
        prev = cur;
    }
    out
}

/// Single slice `Dw(., t_{t_index})`.
pub fn duhamel(w: &SolutionField, t_index: usize) -> GridFunction {
    assert!(t_index < w.tgrid.len(), "time index {t_index} outside the grid");
    if t_index == 0 {
        return GridFunction::zeros(w.sgrid);
    }
    let head = w.truncate(t_index).expect("index checked above");
    duhamel_field(&head).slice_function(t_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{SpatialGrid, TimeGrid};
    use crate::ops::{free_group, free_group_field};

    #[test]
    fn zero_source_gives_zero() {
        let sg = SpatialGrid::symmetric(10.0, 64).unwrap();
        let tg = TimeGrid::new(1.0, 16).unwrap();
        let w = SolutionField::zeros(sg, tg);
        assert!(duhamel_field(&w).values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn propagated_source_integrates_to_linear_factor() {
        let sg = SpatialGrid::symmetric(20.0, 256).unwrap();
        let tg = TimeGrid::new(0.8, 32).unwrap();
        let g = GridFunction::from_fn(sg, |x| C64::new((-x * x).exp(), 0.5 * x * (-x * x).exp()));
        let w = free_group_field(&g, tg);
        let k = 20;
        let d = duhamel(&w, k);
        let t = tg.t(k);
        let exact = free_group(&g, t);
        let num: f64 = d
            .values
            .iter()
            .zip(&exact.values)
            .map(|(a, b)| (a - C64::new(0.0, -t) * b).norm_sqr())
            .sum();
        let den: f64 = exact.values.iter().map(|b| (b * t).norm_sqr()).sum();
        assert!((num / den).sqrt() < 1e-12);
    }
}
