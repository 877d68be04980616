//! Parameter sets of the reference systems.

use std::f64::consts::PI;

use crate::constants::C;
use crate::radiation::TwoLevelSystem;

/// Na 3s1/2 - 3p1/2 transition dipole, 2.5 e a0, C m.
pub const NA_D1_DIPOLE: f64 = 2.1196e-29;
/// Na D1 line, air wavelength, m.
pub const NA_D1_WAVELENGTH: f64 = 589.592e-9;
/// Temperature of the sodium kinetics example, K.
pub const NA_TEMPERATURE: f64 = 5e4;
/// A / omega_gamma of the sodium example.
pub const NA_A_OVER_OMEGA_GAMMA: f64 = 0.2393;
/// |R(0)| / omega_gamma of the sodium example.
pub const NA_R_OVER_OMEGA_GAMMA: f64 = 0.5;

/// Rb circular Rydberg n = 51 -> 50 transition frequency, rad/s.
pub const BRUNE_OMEGA0: f64 = 2.0 * PI * 51.099e9;
pub const BRUNE_Q: f64 = 7e7;
pub const BRUNE_TEMPERATURE: f64 = 0.8;
/// Free-space spontaneous rate derived for the Rydberg pair, 1/s.
pub const BRUNE_A_NATURAL: f64 = 0.553_611_6e6;
/// Enhanced decay rate that reproduces the measured flopping, 1/s.
pub const BRUNE_A_FITTED: f64 = 1e6;
/// pi (50 mm / 2)^2 x 27 mm, m^3.
pub const BRUNE_GEOMETRIC_VOLUME: f64 = PI * 0.025 * 0.025 * 0.027;

pub fn sodium_d1() -> TwoLevelSystem {
    TwoLevelSystem {
        omega0: 2.0 * PI * C / NA_D1_WAVELENGTH,
        mu12: NA_D1_DIPOLE,
    }
}

/// Rydberg pair with the dipole chosen so that the free-space A equals
/// [`BRUNE_A_NATURAL`].
pub fn brune_rydberg() -> TwoLevelSystem {
    TwoLevelSystem::from_einstein_a(BRUNE_OMEGA0, BRUNE_A_NATURAL)
        .expect("preset parameters are valid")
}
