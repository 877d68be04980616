use super::bessel::j0;
use super::dd::{quarter_square, DoubleF64};
use super::zeros::zero_anchor;
use crate::error::{domain, Result};
use crate::quad::gauss_legendre_20;

/// Below this argument C(x) is summed from its power series; above it,
/// Gauss-Legendre panels between consecutive zeros of J0 are added on.
pub const CUMULATIVE_SERIES_LIMIT: f64 = 12.0;

/// `x 1F2(1/2; 1, 3/2; -x^2/4) = sum_k (-x^2/4)^k x / ((k!)^2 (2k + 1))`.
pub(crate) fn cumulative_series(x: f64) -> f64 {
    let q = quarter_square(x);
    let mut term = DoubleF64::from_f64(1.0);
    let mut sum = term;
    let mut k = 1u32;
    loop {
        let kk = f64::from(k);
        term = (term * q).div_f64(kk * kk).neg();
        let contribution = term.div_f64(2.0 * kk + 1.0);
        sum = sum + contribution;
        if contribution.abs_f64() < 1e-22 && kk * kk > q.hi {
            break;
        }
        k += 1;
    }
    (sum * x).to_f64()
}

/// `C(x) = integral_0^x J0(u) du` for `x >= 0`.
pub fn cumulative_j0(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("cumulative_j0 argument", x, "finite and >= 0"));
    }
    Ok(cumulative_j0_unchecked(x))
}

/// [`cumulative_j0`] without argument validation (`x >= 0` assumed).
pub fn cumulative_j0_unchecked(x: f64) -> f64 {
    if x <= CUMULATIVE_SERIES_LIMIT {
        return cumulative_series(x);
    }
    let (_, zero, c_zero, _) = zero_anchor(x);
    let (from, base) = if zero >= CUMULATIVE_SERIES_LIMIT {
        (zero, c_zero)
    } else {
        (
            CUMULATIVE_SERIES_LIMIT,
            cumulative_series(CUMULATIVE_SERIES_LIMIT),
        )
    };
    base + gauss_legendre_20().integrate(j0, from, x)
}

/// `(tau / 2) 1F2(1/2; 1, 3/2; -tau^2/4) = C(tau) / 2`.
pub fn hyp1f2_probability_kernel(tau: f64) -> Result<f64> {
    Ok(0.5 * cumulative_j0(tau)?)
}

/// `integral_0^x |J0(u)| du`, assembled from sign-definite segments between
/// consecutive zeros.
pub fn abs_j0_integral(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let (_, _, c_zero, f_zero) = zero_anchor(x);
    f_zero + (cumulative_j0_unchecked(x) - c_zero).abs()
}
