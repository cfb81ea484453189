mod common;

use common::*;
use halfline_nls::riemann_liouville::*;
use halfline_nls::special::gamma;
use halfline_nls::*;
use proptest::prelude::*;

fn power(tg: TimeGrid, beta: f64) -> TimeSignal {
    TimeSignal::from_real(tg, move |t| t.powf(beta))
}

#[test]
fn integral_of_power_matches_direct_convolution() {
    let tg = TimeGrid::new(1.0, 1024).unwrap();
    for (alpha, beta) in [(0.5, 2.0), (1.5, 1.0), (0.25, 3.0)] {
        let got = frac_integral(&power(tg, beta), alpha).unwrap();
        for k in [128, 512, 1024] {
            let t = tg.t(k);
            // Substituting s = t - u^{1/alpha} removes the kernel singularity.
            let integrand = |u: f64| C64::new((t - u.powf(1.0 / alpha)).max(0.0).powf(beta), 0.0);
            let direct = adaptive(&integrand, 0.0, t.powf(alpha), 1e-13) / (alpha * gamma(alpha));
            let closed = gamma(beta + 1.0) / gamma(alpha + beta + 1.0) * t.powf(alpha + beta);
            assert!((direct.re - closed).abs() < 1e-10 * closed, "{} vs {closed}", direct.re);
            assert!((got.values[k].re - closed).abs() <= 1e-4 * closed, "alpha={alpha} t={t}");
        }
    }
}

#[test]
fn half_derivative_of_square() {
    let tg = TimeGrid::new(1.0, 1024).unwrap();
    let d = frac_derivative(&power(tg, 2.0), 0.5).unwrap();
    let want = TimeSignal::from_real(tg, |t| 2.0 / gamma(2.5) * t.powf(1.5));
    assert!(rel_l2(&d.signal.values, &want.values) <= 1e-4);
}

#[test]
fn semigroup_of_half_integrals() {
    let tg = TimeGrid::new(1.0, 1024).unwrap();
    for f in [poly_bump(tg), oscillating_bump(tg), power(tg, 1.0)] {
        let twice = frac_integral(&frac_integral(&f, 0.5).unwrap(), 0.5).unwrap();
        let once = frac_integral(&f, 1.0).unwrap();
        assert!(rel_l2(&twice.values, &once.values) <= 1e-5);
    }
}

#[test]
fn fourier_and_time_routes_agree() {
    let tg = TimeGrid::new(1.0, 1024).unwrap();
    for f in [poly_bump(tg), oscillating_bump(tg), smooth_bump(tg)] {
        for order in [0.5, 1.0, 1.5, -0.5] {
            let time = if order > 0.0 {
                frac_integral(&f, order).unwrap()
            } else {
                frac_derivative(&f, -order).unwrap().signal
            };
            let freq = frac_fourier_path(&f, order).unwrap();
            assert!(rel_l2(&freq.values, &time.values) <= 1e-3, "order {order}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn integrals_compose(a in 0.1f64..1.5, b in 0.1f64..1.5) {
        let tg = TimeGrid::new(2.0, 512).unwrap();
        let f = oscillating_bump(tg);
        let ab = frac_integral(&frac_integral(&f, a).unwrap(), b).unwrap();
        let direct = frac_integral(&f, a + b).unwrap();
        prop_assert!(rel_l2(&ab.values, &direct.values) <= 1e-4);
    }
}
