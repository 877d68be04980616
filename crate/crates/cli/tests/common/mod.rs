//! Reference computations that share no code with the library.

use std::f64::consts::PI;

/// `J0(x) = (1/pi) integral_0^pi cos(x sin th) dth` by the trapezoid rule,
/// which converges geometrically for this periodic analytic integrand.
pub fn j0_integral(x: f64) -> f64 {
    let n = (2.0 * x.abs()) as usize + 100;
    let h = PI / n as f64;
    let mut sum = 0.5 * (1.0 + (x * PI.sin()).cos());
    for k in 1..n {
        sum += (x * (k as f64 * h).sin()).cos();
    }
    sum * h / PI
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while (b - a).abs() > 1e-12 * (1.0 + a.abs()) {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
        .collect()
}
