//! Independent reference computations used only by the unit tests.

use std::f64::consts::PI;

/// Recursive adaptive Simpson with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Simpson over a list of breakpoints.
pub fn simpson_pieces<F: Fn(f64) -> f64>(f: &F, points: &[f64], tol: f64) -> f64 {
    points
        .windows(2)
        .map(|w| simpson(f, w[0], w[1], tol))
        .sum()
}

/// J0(x) = (1/pi) integral_0^pi cos(x sin theta) d theta, by the periodic
/// trapezoid rule (exponentially convergent).
pub fn j0_integral(x: f64) -> f64 {
    let n = (2.0 * x.abs()) as usize + 100;
    let h = PI / n as f64;
    (0..n)
        .map(|i| (x * (h * i as f64).sin()).cos())
        .sum::<f64>()
        / n as f64
}

/// Plain f64 power series; only trustworthy for |x| below ~5.
pub fn j0_plain_series(x: f64) -> (f64, f64) {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut value = 1.0;
    let mut deriv = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        value += term;
        // d/dx q^k = k q^k * 2/x
        deriv += term * 2.0 * kf / x;
    }
    (value, deriv)
}
