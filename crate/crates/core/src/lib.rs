//! Two-level system in radiation fields, treated beyond first-order
//! perturbation theory.
//!
//! Resonant Rabi flopping makes the stimulated transition rate, and with it
//! Einstein's B coefficient, oscillate in time: `B(t) = B0 |J0(omega_gamma t)|`
//! for broadband thermal radiation. Feeding these rates into Einstein's rate
//! equations gives level populations that never settle to the Boltzmann
//! ratio, and an entropy that eventually decreases.
//!
//! Modules:
//! - [`constants`]: CODATA 2018 constants and the Rabi time scale.
//! - [`specfun`]: J0, its zeros and running integrals.
//! - [`radiation`]: Planck and cavity spectra, A and B0 coefficients,
//!   free-space and cavity Rabi frequencies, Purcell factor.
//! - [`dynamics`]: transition probabilities and rates for monochromatic,
//!   thermal and cavity fields.
//! - [`kinetics`]: closed-form and ODE solutions of the revised rate
//!   equations, entropy.
//! - [`fitting`]: cavity flopping traces and Levenberg-Marquardt recovery of
//!   the decay rate.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod fitting;
pub mod kinetics;
mod ode;
pub mod presets;
pub mod quad;
pub mod radiation;
pub mod series;
pub mod specfun;

#[cfg(test)]
mod oracle;

pub use error::{Error, Result};
pub use series::{MetaValue, TimeSeries};
