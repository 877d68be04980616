use super::*;
use crate::presets::{brune_rydberg, BRUNE_A_FITTED, BRUNE_Q, BRUNE_TEMPERATURE};
use crate::radiation::{b0_coefficient, cavity_decay_rate, rabi_frequency_cavity};
use crate::specfun::{j0, j0_zero};
use proptest::prelude::*;

fn brune_rates() -> (f64, f64) {
    let sys = brune_rydberg();
    let gamma = cavity_decay_rate(&sys, BRUNE_Q, BRUNE_A_FITTED).unwrap();
    let wg = rabi_frequency_cavity(&sys, BRUNE_TEMPERATURE, BRUNE_Q, BRUNE_A_FITTED).unwrap();
    (wg, gamma)
}

#[test]
fn monochromatic_examples() {
    let res = GeneralizedRabi::resonant(2.0).unwrap();
    assert_eq!(monochromatic_p21(&res, 0.0), 0.0);
    assert!((monochromatic_p21(&res, PI / 2.0) - 1.0).abs() < 1e-15);
    assert!(monochromatic_p12(&res, PI / 2.0).abs() < 1e-15);
    assert_eq!(monochromatic_p12(&res, 0.0), 1.0);

    let det = GeneralizedRabi::new(1.0, 1.0).unwrap();
    assert_eq!(det.omega(), 2f64.sqrt());
    let peak = (0..2000)
        .map(|k| monochromatic_p21(&det, k as f64 * 0.005))
        .fold(0.0, f64::max);
    assert!((peak - 0.5).abs() < 1e-5, "{peak}");
    assert!(GeneralizedRabi::new(-1.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn generalized_frequency_bounds(wg in 0.0..10.0f64, d in -10.0..10.0f64, t in 0.0..50.0f64) {
        let gr = GeneralizedRabi::new(wg, d).unwrap();
        prop_assert!(gr.omega() >= wg);
        let p = monochromatic_p21(&gr, t);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert_eq!(p + monochromatic_p12(&gr, t), 1.0);
    }
}

#[test]
fn amplitude_integration_matches_closed_form() {
    let full = schrodinger_oracle(&GeneralizedRabi::resonant(1.0).unwrap(), PI, 4000).unwrap();
    assert!((full.p21 - 1.0).abs() < 1e-8);
    for &d in &[-2.0, -0.5, 0.0, 0.7, 3.0] {
        let gr = GeneralizedRabi::new(1.0, d).unwrap();
        for &t in &[0.3, 1.0, 2.5, 6.0, 12.0] {
            let run = schrodinger_oracle(&gr, t, 20_000).unwrap();
            let exact = monochromatic_p21(&gr, t);
            assert!((run.p21 - exact).abs() < 1e-8, "d={d} t={t}: {} vs {exact}", run.p21);
            assert!(run.max_norm_drift < 1e-10);
        }
    }
    assert!(schrodinger_oracle(&GeneralizedRabi::resonant(1.0).unwrap(), 1.0, 999).is_err());
}

#[test]
fn thermal_probability_matches_quadrature() {
    assert_eq!(thermal_p21(0.0).unwrap(), 0.0);
    for &tau in &[0.1, 0.5, 1.0, 2.404_825_557_695_773, 4.0, 7.5, 15.0, 33.0, 80.0, 200.0] {
        let closed = thermal_p21(tau).unwrap();
        let quad = thermal_p21_quadrature(tau, 1e-10).unwrap();
        assert!((closed - quad).abs() < 1e-8, "tau={tau}: {closed} vs {quad}");
    }
    assert!((thermal_p21(1e5).unwrap() - 0.5).abs() < 3e-3);
}

#[test]
fn thermal_rate_examples() {
    assert_eq!(thermal_rate(0.0).unwrap(), 0.5);
    assert!(thermal_rate(j0_zero(1).unwrap()).unwrap().abs() < 1e-15);
    let h = 1e-4;
    for &tau in &[0.5, 1.7, 3.0, 9.0, 21.0, 47.0] {
        let fd = (thermal_p21(tau + h).unwrap() - thermal_p21(tau - h).unwrap()) / (2.0 * h);
        assert!((fd - thermal_rate(tau).unwrap()).abs() < 1e-7, "tau={tau}");
    }
    assert_eq!(thermal_rate_si(3.0, 0.0).unwrap(), 1.5);
}

#[test]
fn rate_integral_is_j0() {
    for &tau in &[0.2, 1.0, 2.5, 6.0, 13.0, 40.0, 120.0] {
        let q = rate_integral_quadrature(tau, 1e-10).unwrap();
        assert!((q - j0(tau)).abs() < 1e-8, "tau={tau}: {q} vs {}", j0(tau));
    }
}

#[test]
fn thermal_b_coefficient_examples() {
    let b0 = b0_coefficient(&brune_rydberg());
    let wg = 2.0;
    assert_eq!(b_coefficient_thermal(0.0, wg, b0).unwrap(), b0);
    let z = j0_zero(1).unwrap() / wg;
    assert!(b_coefficient_thermal(z, wg, b0).unwrap() < 1e-14 * b0);
    for k in 0..20_000 {
        let tau = 5.0 + k as f64 * 0.01;
        let ratio = b_coefficient_thermal(tau / wg, wg, b0).unwrap() / b0;
        assert!(ratio <= (2.0 / (PI * tau)).sqrt() * 1.02);
    }
    assert!(b_coefficient_thermal(-1.0, wg, b0).is_err());
}

#[test]
fn monochromatic_rate_examples() {
    let gr = GeneralizedRabi::new(1.5, 0.8).unwrap();
    let amp = monochromatic_rate_amplitude(2e-29, 3e-3, gr.omega());
    let at0 = monochromatic_rate(&gr, 0.0, amp).unwrap();
    assert_eq!(at0.r21, 0.0);
    let h = 1e-6;
    let fd = monochromatic_rate(&gr, h, amp).unwrap().r21 / h;
    let want = 2e-29f64.powi(2) * 3e-3 / (crate::constants::EPSILON0 * crate::constants::HBAR.powi(2));
    assert!((fd - want).abs() < 1e-9 * want);
    for &t in &[0.1, 1.0, 4.4] {
        let r = monochromatic_rate(&gr, t, amp).unwrap();
        assert_eq!(r.r12, -r.r21);
    }
}

#[test]
fn monochromatic_b_coefficient_examples() {
    let b0 = 7.0;
    let omega = 3.0;
    assert_eq!(b_coefficient_monochromatic(0.0, omega, b0).unwrap(), 0.0);
    let peak = b_coefficient_monochromatic(PI / (2.0 * omega), omega, b0).unwrap();
    assert!((peak - 3.0 * b0 / PI).abs() < 1e-14);
    for k in 0..500 {
        let t = k as f64 * 0.013;
        let a = b_coefficient_monochromatic(t, omega, b0).unwrap();
        let b = b_coefficient_monochromatic(t + PI / omega, omega, b0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn thermal_maxima_follow_envelope() {
    // maxima of C/2 sit at odd zeros; the excess over 1/2 shrinks like tau^-1/2
    let excess = |j: usize| {
        let z = j0_zero(j).unwrap();
        (z, thermal_p21(z).unwrap() - 0.5)
    };
    let mut j = 5;
    while j0_zero(j).unwrap() < 300.0 {
        let (t1, e1) = excess(j);
        let (t2, e2) = excess(j + 2);
        assert!(e1 > 0.0 && e2 > 0.0);
        let ratio = e2 / e1;
        let want = (t1 / t2).sqrt();
        assert!((ratio / want - 1.0).abs() < 0.02, "j={j}: {ratio} vs {want}");
        j += 2;
    }
}

#[test]
fn cavity_starts_at_zero() {
    let (wg, gamma) = brune_rates();
    assert_eq!(cavity_p21(0.0, wg, gamma, 1e-8).unwrap(), 0.0);
}

#[test]
fn cavity_wide_line_reduces_to_free_space() {
    let wg = 1.0;
    for &tau in &[0.5, 2.0, 5.0, 11.0, 30.0] {
        let c = cavity_p21(tau, wg, 1e6, 1e-8).unwrap();
        let f = thermal_p21(tau).unwrap();
        assert!((c - f).abs() < 1e-4, "tau={tau}: {c} vs {f}");
    }
}

#[test]
fn cavity_brune_curve_regression() {
    let (wg, gamma) = brune_rates();
    let p = |x: f64| cavity_p21(x * 2.0 * PI / wg, wg, gamma, 1e-10).unwrap();
    // frozen after cross-checking against an independent adaptive quadrature
    assert!((p(0.409_973_310_551) - 0.864_503_175_997).abs() < 1e-9);
    assert!((p(1.0) - 0.286_564_582_639).abs() < 1e-9);
    assert!((p(2.5) - 0.629_015_948_986).abs() < 1e-9);
    // first maximum sits just below half a flop period
    let first_max = (1..100)
        .map(|k| k as f64 * 0.01)
        .find(|&x| p(x) > p(x - 0.01) && p(x) > p(x + 0.01))
        .unwrap();
    assert!((first_max - 0.41).abs() < 0.011, "{first_max}");
}

#[test]
fn cavity_is_bounded_and_continuous_in_gamma() {
    let (wg, gamma) = brune_rates();
    for k in 0..200 {
        let t = k as f64 * 0.05 * 2.0 * PI / wg;
        let p = cavity_p21(t, wg, gamma, 1e-8).unwrap();
        assert!((-1e-8..=1.0 + 1e-8).contains(&p), "{p}");
        if k > 0 {
            let q = cavity_p21(t, wg, gamma * 1.001, 1e-8).unwrap();
            assert!(((q - p) / p).abs() < 1e-3, "t={t}");
        }
    }
}

#[test]
fn cavity_long_time_mean() {
    let (wg, gamma) = brune_rates();
    let period = 2.0 * PI / wg;
    let mean = cavity_mean_p21(200.0 * period, 260.0 * period, 601, wg, gamma, 1e-8).unwrap();
    assert!((mean - 0.5).abs() < 1e-4, "{mean}");
}

#[test]
fn cavity_rejects_bad_inputs() {
    assert!(matches!(cavity_p21(1.0, 1.0, 1.0, 1e-3), Err(Error::Domain { .. })));
    assert!(cavity_p21(1.0, 1.0, 1.0, 0.0).is_err());
    assert!(cavity_p21(1.0, 0.0, 1.0, 1e-8).is_err());
    assert!(cavity_p21(1.0, 1.0, -1.0, 1e-8).is_err());
    assert!(cavity_p21(-1.0, 1.0, 1.0, 1e-8).is_err());
    assert!(cavity_mean_p21(1.0, 1.0, 10, 1.0, 1.0, 1e-8).is_err());
}
