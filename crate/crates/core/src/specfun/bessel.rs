//! Bessel functions of the first kind, orders 0 and 1.
//!
//! |x| <= [`SERIES_LIMIT`]: power series summed in double-double.
//! Beyond: Hankel asymptotic expansion truncated at its smallest term.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::dd::{quarter_square, DoubleF64};
use crate::error::{domain, Result};

/// Switch point between the power series and the asymptotic expansion.
///
/// At 20 the optimally truncated Hankel series is good to ~3e-20; at 12 it
/// is only good to ~5e-13.
pub const SERIES_LIMIT: f64 = 20.0;

/// J0(x) with an absolute error below 1e-13.
///
/// Fails for NaN or infinite input.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("bessel_j0 argument", x, "finite"));
    }
    Ok(j0(x))
}

/// Unchecked J0; NaN propagates.
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        j0_series(ax)
    } else {
        j0_asymptotic(ax)
    }
}

/// J1(x); used for Newton steps on the zeros of J0 (J0' = -J1).
pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        j1_series(ax)
    } else {
        j1_asymptotic(ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub(crate) fn j0_series(x: f64) -> f64 {
    let q = quarter_square(x);
    let mut term = DoubleF64::from_f64(1.0);
    let mut sum = term;
    let mut k = 1u32;
    loop {
        let kk = f64::from(k);
        term = (term * q).div_f64(kk * kk).neg();
        sum = sum + term;
        if term.abs_f64() < 1e-22 && kk * kk > q.hi {
            break;
        }
        k += 1;
    }
    sum.to_f64()
}

pub(crate) fn j1_series(x: f64) -> f64 {
    let q = quarter_square(x);
    let mut term = DoubleF64::from_f64(0.5 * x);
    let mut sum = term;
    let mut k = 1u32;
    loop {
        let kk = f64::from(k);
        term = (term * q).div_f64(kk * (kk + 1.0)).neg();
        sum = sum + term;
        if term.abs_f64() < 1e-22 && kk * kk > q.hi {
            break;
        }
        k += 1;
    }
    sum.to_f64()
}

/// Hankel P and Q for order `nu`, truncated before the terms start growing.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0f64;
    let mut q = 0.0f64;
    let mut term = 1.0f64;
    let mut k = 1u32;
    loop {
        let kf = f64::from(k);
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() >= term.abs() || next.abs() < 1e-18 * p.abs() {
            break;
        }
        term = next;
        // k = 1, 2, 3, 4, ... contributes -> Q+, P-, Q-, P+, ...
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        k += 1;
    }
    (p, q)
}

pub(crate) fn j0_asymptotic(x: f64) -> f64 {
    let (p, q) = hankel_pq(0.0, x);
    let (s, c) = x.sin_cos();
    // chi = x - pi/4
    let cos_chi = (c + s) * FRAC_1_SQRT_2;
    let sin_chi = (s - c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

pub(crate) fn j1_asymptotic(x: f64) -> f64 {
    let (p, q) = hankel_pq(1.0, x);
    let (s, c) = x.sin_cos();
    // chi = x - 3 pi/4
    let cos_chi = (s - c) * FRAC_1_SQRT_2;
    let sin_chi = -(s + c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Large-argument envelope of |J0|: `sqrt(2 / (pi tau))`.
pub fn envelope_j0(tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(domain("envelope_j0 argument", tau, "> 0"));
    }
    Ok((2.0 / (PI * tau)).sqrt())
}
