//! Physical constants (CODATA 2018) and the dimensionless time scale used by
//! the dynamics and kinetics code.
//!
//! Everything downstream of the field models runs in `tau = omega_gamma * t`.
//! SI values only appear at the module boundaries.

use crate::error::{domain, Result};
use crate::kinetics::{FieldKind, InitialState, KineticsParams};

/// Fundamental constants in SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Speed of light in vacuum, m/s.
    pub c: f64,
    /// Vacuum permittivity, F/m.
    pub epsilon0: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Elementary charge, C.
    pub e_charge: f64,
    /// Bohr radius, m.
    pub a0: f64,
}

/// CODATA 2018 recommended values.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    epsilon0: 8.854_187_812_8e-12,
    k_b: 1.380_649e-23,
    e_charge: 1.602_176_634e-19,
    a0: 5.291_772_109_03e-11,
};

pub const HBAR: f64 = CODATA_2018.hbar;
pub const C: f64 = CODATA_2018.c;
pub const EPSILON0: f64 = CODATA_2018.epsilon0;
pub const K_B: f64 = CODATA_2018.k_b;
pub const E_CHARGE: f64 = CODATA_2018.e_charge;
pub const BOHR_RADIUS: f64 = CODATA_2018.a0;

/// Maps SI times and rates onto the Rabi time scale `1/omega_gamma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessScaling {
    omega_gamma: f64,
}

impl DimensionlessScaling {
    pub fn new(omega_gamma: f64) -> Result<Self> {
        if !(omega_gamma > 0.0 && omega_gamma.is_finite()) {
            return Err(domain("omega_gamma", omega_gamma, "finite and > 0"));
        }
        Ok(Self { omega_gamma })
    }

    pub fn omega_gamma(&self) -> f64 {
        self.omega_gamma
    }

    /// `t` (s) to `tau = omega_gamma t`.
    pub fn to_tau(&self, t: f64) -> f64 {
        t * self.omega_gamma
    }

    pub fn to_seconds(&self, tau: f64) -> f64 {
        tau / self.omega_gamma
    }

    /// A rate in 1/s expressed in units of `omega_gamma`.
    pub fn rate_to_dimensionless(&self, rate: f64) -> f64 {
        rate / self.omega_gamma
    }

    pub fn rate_to_si(&self, rate: f64) -> f64 {
        rate * self.omega_gamma
    }
}

/// Builds the kinetics triple `(A/omega_gamma, |R(0)|/omega_gamma, omega_gamma)`
/// from SI rates.
pub fn to_dimensionless(
    a_rate: f64,
    r0: f64,
    omega_gamma: f64,
    field: FieldKind,
    initial: InitialState,
) -> Result<KineticsParams> {
    let scale = DimensionlessScaling::new(omega_gamma)?;
    KineticsParams::new(
        scale.rate_to_dimensionless(a_rate),
        scale.rate_to_dimensionless(r0),
        omega_gamma,
        field,
        initial,
    )
}
