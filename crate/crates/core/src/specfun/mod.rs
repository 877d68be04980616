//! Special functions behind the closed forms: J0, its zeros, the running
//! integral of J0 (equivalently `x 1F2(1/2; 1, 3/2; -x^2/4)`) and the
//! large-argument envelope.

mod bessel;
mod cumulative;
mod dd;
mod zeros;

pub use bessel::{bessel_j0, envelope_j0, j0, j1, SERIES_LIMIT};
pub use cumulative::{
    abs_j0_integral, cumulative_j0, cumulative_j0_unchecked, hyp1f2_probability_kernel,
    CUMULATIVE_SERIES_LIMIT,
};
pub use zeros::{j0_zero, j0_zeros_up_to};

pub(crate) use zeros::zeros_below;

#[cfg(test)]
pub(crate) use bessel::{j0_asymptotic, j0_series};

#[cfg(test)]
mod tests;
