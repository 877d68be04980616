use std::f64::consts::PI;

use super::*;
use crate::oracle;

// Newton on the plain power series: 2.404825557695773
const FIRST_ZERO: f64 = 2.404_825_557_695_773;
const SECOND_ZERO: f64 = 5.520_078_110_286_311;

#[test]
fn first_zero_oracle_from_plain_series() {
    let mut x = 2.4;
    for _ in 0..30 {
        let (v, d) = oracle::j0_plain_series(x);
        x -= v / d;
    }
    assert!((x - FIRST_ZERO).abs() < 1e-14, "{x}");
}

#[test]
fn j0_examples() {
    assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
    assert!(bessel_j0(FIRST_ZERO).unwrap().abs() < 1e-12);
    let reference = oracle::j0_integral(10.0);
    assert!((bessel_j0(10.0).unwrap() - reference).abs() < 1e-12);
    assert!(bessel_j0(f64::NAN).is_err());
    assert!(bessel_j0(f64::INFINITY).is_err());
}

#[test]
fn j0_matches_integral_representation_over_wide_range() {
    let mut xs: Vec<f64> = (0..400).map(|i| i as f64 * 0.137).collect();
    xs.extend([19.99, 20.0, 20.01, 25.3, 77.7, 123.456, 1e3 + 0.3, 3.3e4, 2.5e5, 1e6]);
    for &x in &xs {
        let got = j0(x);
        let want = oracle::j0_integral(x);
        assert!((got - want).abs() < 1e-13, "x = {x}: {got} vs {want}");
        assert_eq!(j0(-x), got);
    }
}

#[test]
fn series_and_asymptotic_agree_near_switch() {
    let mut x = SERIES_LIMIT - 2.0;
    while x <= SERIES_LIMIT + 2.0 {
        let d = (j0_series(x) - j0_asymptotic(x)).abs();
        assert!(d < 1e-12, "x = {x}: {d}");
        x += 0.05;
    }
}

#[test]
fn zeros_examples() {
    assert!((j0_zero(1).unwrap() - FIRST_ZERO).abs() < 1e-12);
    assert!((j0_zero(2).unwrap() - SECOND_ZERO).abs() < 1e-12);
    assert!(j0_zero(0).is_err());
    for j in 3..200 {
        let z = j0_zero(j).unwrap();
        assert!((z - (j as f64 - 0.25) * PI).abs() < 0.04, "j = {j}");
    }
}

#[test]
fn zeros_table_invariants() {
    let zs: Vec<f64> = (1..=300).map(|j| j0_zero(j).unwrap()).collect();
    for w in zs.windows(2) {
        let gap = w[1] - w[0];
        assert!(gap > PI - 0.3 && gap < PI + 0.3);
    }
    for &z in &zs {
        assert!(j0(z).abs() < 1e-13, "{z}");
    }
    assert_eq!(j0_zeros_up_to(10.0).len(), 3);
    assert!(j0_zeros_up_to(0.0).is_empty());
}

#[test]
fn cumulative_examples() {
    assert_eq!(cumulative_j0(0.0).unwrap(), 0.0);
    assert!(cumulative_j0(-1.0).is_err());
    let c = cumulative_j0(1000.0).unwrap();
    assert!((c - 1.0).abs() < 0.03);
    let want = oracle::simpson(&j0, 0.0, FIRST_ZERO, 1e-13);
    assert!((cumulative_j0(FIRST_ZERO).unwrap() - want).abs() < 1e-10);
}

#[test]
fn cumulative_matches_quadrature_between_zeros() {
    let zs = j0_zeros_up_to(60.0);
    for &x in &[0.5, 3.0, 7.7, 11.99, 12.0, 12.01, 14.0, 21.3, 33.3, 59.9] {
        let mut pts = vec![0.0];
        pts.extend(zs.iter().copied().filter(|&z| z < x));
        pts.push(x);
        let want = oracle::simpson_pieces(&j0, &pts, 1e-14);
        let got = cumulative_j0(x).unwrap();
        assert!((got - want).abs() < 1e-11, "x = {x}: {got} vs {want}");
    }
}

#[test]
fn cumulative_derivative_is_j0() {
    let h = 1e-4;
    let mut x = 0.3;
    while x < 150.0 {
        let fd = (cumulative_j0(x + h).unwrap() - cumulative_j0(x - h).unwrap()) / (2.0 * h);
        assert!((fd - j0(x)).abs() < 1e-6, "x = {x}");
        x += 0.731;
    }
}

#[test]
fn cumulative_extrema_at_zeros() {
    // C' = J0 changes sign exactly at the tabulated zeros
    let zs = j0_zeros_up_to(100.0);
    let mut x = 0.01;
    let mut last_sign = 1.0;
    let mut flips = Vec::new();
    while x < 100.0 {
        let s = j0(x).signum();
        if s != last_sign {
            flips.push(x);
            last_sign = s;
        }
        x += 0.01;
    }
    assert_eq!(flips.len(), zs.len());
    for (f, z) in flips.iter().zip(&zs) {
        assert!((f - z).abs() <= 0.011);
    }
}

#[test]
fn probability_kernel_examples() {
    assert_eq!(hyp1f2_probability_kernel(0.0).unwrap(), 0.0);
    assert!((hyp1f2_probability_kernel(1000.0).unwrap() - 0.5).abs() < 0.02);
    let zs = j0_zeros_up_to(5.0);
    let mut pts = vec![0.0];
    pts.extend(zs);
    pts.push(5.0);
    let want = 0.5 * oracle::simpson_pieces(&j0, &pts, 1e-14);
    assert!((hyp1f2_probability_kernel(5.0).unwrap() - want).abs() < 1e-10);
}

#[test]
fn envelope_examples() {
    assert!((envelope_j0(2.0 / PI).unwrap() - 1.0).abs() < 1e-15);
    assert!((envelope_j0(100.0).unwrap() - 0.079_788_456_080_286_54).abs() < 1e-15);
    assert!(envelope_j0(0.0).is_err());
    assert!(envelope_j0(-1.0).is_err());
    let mut tau = 5.0;
    while tau < 500.0 {
        assert!(j0(tau).abs() <= envelope_j0(tau).unwrap() * 1.02);
        tau += 0.01;
    }
}

#[test]
fn abs_integral_matches_quadrature() {
    let zs = j0_zeros_up_to(20.0);
    let mut pts = vec![0.0];
    pts.extend(zs);
    pts.push(20.0);
    let want = oracle::simpson_pieces(&|x: f64| j0(x).abs(), &pts, 1e-14);
    assert!((abs_j0_integral(20.0) - want).abs() < 1e-9);
    assert_eq!(abs_j0_integral(FIRST_ZERO * 0.5), cumulative_j0(FIRST_ZERO * 0.5).unwrap());
}

#[test]
fn zero_table_is_thread_safe() {
    let handles: Vec<_> = (0..8)
        .map(|i| std::thread::spawn(move || j0_zero(400 + 37 * i).unwrap()))
        .collect();
    for (i, h) in handles.into_iter().enumerate() {
        let z = h.join().unwrap();
        assert!(j0(z).abs() < 1e-13);
        assert!((z - ((400 + 37 * i) as f64 - 0.25) * PI).abs() < 1e-3);
    }
}
