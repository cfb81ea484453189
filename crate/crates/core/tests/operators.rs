mod common;

use common::*;
use halfline_nls::ops::*;
use halfline_nls::verification::{compare_fields, schrodinger_residual};
use halfline_nls::*;
use proptest::prelude::*;

fn gaussian(sg: SpatialGrid) -> GridFunction {
    GridFunction::from_fn(sg, |x| C64::new((-x * x).exp(), 0.0))
}

#[test]
fn free_group_matches_fourier_integral() {
    let sg = SpatialGrid::symmetric(20.0, 512).unwrap();
    let t = 0.3;
    let u = free_group(&gaussian(sg), t);
    let z = sg.zero_index();
    for d in [-48isize, -30, -17, -8, -1, 0, 5, 13, 26, 40] {
        let j = (z as isize + d) as usize;
        let x = sg.x(j);
        let integrand = |xi: f64| {
            C64::from_polar(std::f64::consts::PI.sqrt() * (-xi * xi / 4.0).exp(), x * xi - t * xi * xi)
        };
        let oracle = adaptive(&integrand, -14.0, 14.0, 1e-14) / (2.0 * std::f64::consts::PI);
        let closed = C64::new(1.0, 4.0 * t).powf(-0.5) * (-(x * x) / C64::new(1.0, 4.0 * t)).exp();
        assert!((oracle - closed).norm() < 1e-12, "oracle disagrees with closed form at x={x}");
        assert!((u.values[j] - oracle).norm() <= 1e-7 * oracle.norm().max(1e-3), "x={x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn group_is_unitary_and_composes(t1 in -2.0f64..2.0, t2 in -2.0f64..2.0, c in -3.0f64..3.0) {
        let sg = SpatialGrid::symmetric(24.0, 256).unwrap();
        let phi = GridFunction::from_fn(sg, |x| C64::new((-(x - c).powi(2)).exp(), 0.3 * x * (-x * x).exp()));
        let a = free_group(&phi, t1);
        prop_assert!((a.l2_norm() - phi.l2_norm()).abs() <= 1e-12 * phi.l2_norm());
        let ab = free_group(&a, t2);
        let direct = free_group(&phi, t1 + t2);
        prop_assert!(rel_l2(&ab.values, &direct.values) <= 1e-12);
    }
}

#[test]
fn duhamel_residual_on_separable_sources() {
    let sg = SpatialGrid::symmetric(16.0, 512).unwrap();
    let tg = TimeGrid::new(1.0, 512).unwrap();
    let profiles: [(fn(f64) -> f64, fn(f64) -> C64); 3] = [
        (|x| (-x * x).exp(), |t| C64::new(1.0 + t, 0.0)),
        (|x| x * (-(x - 1.0).powi(2)).exp(), |t| C64::from_polar(1.0, 2.0 * t)),
        (|x| 1.0 / (2.0 * x).cosh(), |t| C64::new((3.0 * t).cos(), t * t)),
    ];
    for (g, a) in profiles {
        let w = SolutionField::from_fn(sg, tg, |x, t| a(t) * g(x));
        let dw = duhamel_field(&w);
        let r = schrodinger_residual(&dw, Some(&w), -16.0);
        assert!(r.relative() <= 1e-3, "residual {}", r.relative());
    }
}

#[test]
fn boundary_routes_agree_and_improve() {
    let makers: [fn(TimeGrid) -> TimeSignal; 3] = [poly_bump, smooth_bump, oscillating_bump];
    for make in makers {
        let mut prev = f64::INFINITY;
        for n in [256usize, 512] {
            let sg = SpatialGrid::symmetric(16.0, n).unwrap();
            let tg = TimeGrid::new(1.0, n).unwrap();
            let f = make(tg);
            let a = boundary_forcing_freq(&f, sg, tg).unwrap();
            let b = boundary_forcing_time(&f, sg, tg).unwrap();
            let c = boundary_forcing_kernel(&f, sg, tg).unwrap();
            let rel = compare_fields(&a, &b).unwrap().rel_l2;
            let rel_kernel = compare_fields(&c, &b).unwrap().rel_l2;
            assert!(rel <= 1e-3, "n={n}: {rel}");
            assert!(rel_kernel <= 1e-3, "n={n}: {rel_kernel}");
            assert!(rel.max(rel_kernel) < prev);
            prev = rel.max(rel_kernel);
        }
    }
}

#[test]
fn kernel_route_handles_kink_at_start() {
    let tg = TimeGrid::new(0.5, 256).unwrap();
    let sg = SpatialGrid::symmetric(16.0, 256).unwrap();
    let f = TimeSignal::from_fn(tg, |t| C64::new(t, 0.0) * C64::from_polar(1.0, t));
    let lf = boundary_forcing_kernel(&f, sg, tg).unwrap();
    for x in [0.25, 1.0, 3.0] {
        let want = boundary_forcing_time_at(&f, x).unwrap();
        let got = lf.trace_at(sg.zero_index() + (x / sg.dx()) as usize);
        let d: Vec<C64> = got.values.iter().zip(&want.values).map(|(a, b)| a - b).collect();
        let err = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-4 * f.sup_norm(), "x={x}: {err}");
        // No grid-scale oscillation in time.
        let rough = (1..tg.m()).map(|k| (d[k + 1] - d[k] * 2.0 + d[k - 1]).norm()).fold(0.0, f64::max);
        assert!(rough <= 1e-3, "x={x}: {rough}");
    }
}

#[test]
fn initial_slice_vanishes_on_all_routes() {
    let sg = SpatialGrid::symmetric(16.0, 128).unwrap();
    let tg = TimeGrid::new(1.0, 64).unwrap();
    let f = oscillating_bump(tg);
    for lf in [
        boundary_forcing_freq(&f, sg, tg).unwrap(),
        boundary_forcing_time(&f, sg, tg).unwrap(),
        boundary_forcing_kernel(&f, sg, tg).unwrap(),
    ] {
        assert!(lf.slice(0).iter().all(|z| z.norm() <= 1e-8));
    }
}

#[test]
fn decays_away_from_boundary() {
    let sg = SpatialGrid::symmetric(64.0, 1024).unwrap();
    let tg = TimeGrid::new(1.0, 512).unwrap();
    for f in [poly_bump(tg), smooth_bump(tg)] {
        for lf in [boundary_forcing_freq(&f, sg, tg).unwrap(), boundary_forcing_kernel(&f, sg, tg).unwrap()] {
            let j = sg.zero_index() + sg.n() / 4;
            assert_eq!(sg.x(j), 32.0);
            let far = lf.trace_at(j).sup_norm();
            assert!(far <= 1e-4 * f.sup_norm(), "{far}");
        }
    }
}

#[test]
fn derivative_jump_matches_half_derivative() {
    let sg = SpatialGrid::symmetric(32.0, 2048).unwrap();
    let tg = TimeGrid::new(1.0, 512).unwrap();
    for f in [poly_bump(tg), oscillating_bump(tg)] {
        let lf = boundary_forcing_kernel(&f, sg, tg).unwrap();
        let (left, right) = derivative_jump(&f, &lf).unwrap();
        let jump: Vec<C64> = left.values.iter().zip(&right.values).map(|(a, b)| a - b).collect();
        let want = expected_jump(&f).unwrap();
        assert!(rel_l2(&jump, &want.values) <= 1e-2);
        // Each one-sided limit is half of the jump, with opposite signs.
        let half: Vec<C64> = want.values.iter().map(|z| z * 0.5).collect();
        assert!(rel_l2(&left.values, &half) <= 1e-2);
    }
}

#[test]
fn solves_free_equation_away_from_origin() {
    let sg = SpatialGrid::symmetric(16.0, 512).unwrap();
    let tg = TimeGrid::new(1.0, 1024).unwrap();
    let f = smooth_bump(tg);
    let lf = boundary_forcing_freq(&f, sg, tg).unwrap();
    let r = schrodinger_residual(&lf, None, 3.0 * sg.dx());
    assert!(r.relative() <= 1e-3, "{}", r.relative());
}

#[test]
fn x_derivative_is_odd() {
    let sg = SpatialGrid::symmetric(16.0, 256).unwrap();
    let tg = TimeGrid::new(1.0, 128).unwrap();
    let f = poly_bump(tg);
    let lf = boundary_forcing_time(&f, sg, tg).unwrap();
    let z = sg.zero_index();
    for k in [16, 64, 128] {
        for d in 1..100 {
            let a = x_derivative(&lf, z + d, k);
            let b = x_derivative(&lf, z - d, k);
            assert!((a + b).norm() <= 1e-6 * a.norm().max(1e-12));
        }
    }
}
