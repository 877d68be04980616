//! Radiation-field spectra and the coupling constants they induce.

use std::f64::consts::PI;

use log::warn;

use crate::constants::{C, EPSILON0, HBAR, K_B};
use crate::error::{domain, Result};

/// Rotating-wave approximation is flagged once omega_gamma / omega0 exceeds this.
pub const RWA_RATIO_LIMIT: f64 = 1e-2;

/// Two non-degenerate levels coupled by an electric dipole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelSystem {
    /// Bohr angular frequency (E2 - E1)/hbar, rad/s.
    pub omega0: f64,
    /// Transition dipole moment, C m.
    pub mu12: f64,
}

impl TwoLevelSystem {
    pub fn new(omega0: f64, mu12: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(domain("omega0", omega0, "finite and > 0"));
        }
        if !(mu12 >= 0.0 && mu12.is_finite()) {
            return Err(domain("mu12", mu12, "finite and >= 0"));
        }
        Ok(Self { omega0, mu12 })
    }

    /// The dipole moment that gives a free-space spontaneous rate `a_rate`.
    pub fn from_einstein_a(omega0: f64, a_rate: f64) -> Result<Self> {
        if !(a_rate >= 0.0) {
            return Err(domain("A", a_rate, ">= 0"));
        }
        let mu2 = a_rate * 3.0 * PI * EPSILON0 * HBAR * C.powi(3) / omega0.powi(3);
        Self::new(omega0, mu2.sqrt())
    }

    /// Logs a warning and returns `false` when `omega_gamma` is too large a
    /// fraction of the Bohr frequency for the rotating-wave approximation.
    pub fn check_rotating_wave(&self, omega_gamma: f64) -> bool {
        let ratio = omega_gamma / self.omega0;
        if ratio > RWA_RATIO_LIMIT {
            warn!(
                "omega_gamma/omega0 = {ratio:.3e} exceeds {RWA_RATIO_LIMIT:e}; rotating-wave approximation is questionable"
            );
            false
        } else {
            true
        }
    }
}

/// Radiation environment seen by the two-level system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldSpec {
    /// Single-polarization plane wave of amplitude `e0` (V/m) at `omega`.
    Monochromatic { e0: f64, omega: f64 },
    /// Broadband black-body field in free space.
    ThermalFreeSpace { temperature: f64 },
    /// Single resonant cavity mode with quality factor `q`; `a_rate` is the
    /// natural decay rate entering the Lorentzian width.
    Cavity {
        temperature: f64,
        q: f64,
        a_rate: f64,
    },
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Monochromatic { e0, omega } => {
                if !(e0 >= 0.0) {
                    return Err(domain("E0", e0, ">= 0"));
                }
                if !(omega > 0.0) {
                    return Err(domain("omega", omega, "> 0"));
                }
            }
            FieldSpec::ThermalFreeSpace { temperature } => check_temperature(temperature)?,
            FieldSpec::Cavity {
                temperature,
                q,
                a_rate,
            } => {
                check_temperature(temperature)?;
                if !(q > 0.0) {
                    return Err(domain("Q", q, "> 0"));
                }
                if !(a_rate >= 0.0) {
                    return Err(domain("A", a_rate, ">= 0"));
                }
            }
        }
        Ok(())
    }

    /// Rabi flopping frequency this field induces in `sys`.
    ///
    /// Monochromatic: `mu12 E0 / hbar` (dipole aligned with the field).
    pub fn rabi_frequency(&self, sys: &TwoLevelSystem) -> Result<f64> {
        self.validate()?;
        let wg = match *self {
            FieldSpec::Monochromatic { e0, .. } => sys.mu12 * e0 / HBAR,
            FieldSpec::ThermalFreeSpace { temperature } => {
                rabi_frequency_free_space(sys, temperature)?
            }
            FieldSpec::Cavity {
                temperature,
                q,
                a_rate,
            } => rabi_frequency_cavity(sys, temperature, q, a_rate)?,
        };
        sys.check_rotating_wave(wg);
        Ok(wg)
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(domain("temperature", t, "finite and >= 0"));
    }
    Ok(())
}

/// Bose-Einstein occupancy `1/(exp(hbar omega / kB T) - 1)`; exactly 0 at T = 0.
pub fn thermal_occupancy(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

/// Spectral energy density per unit angular frequency, J s/m^3:
/// `(hbar omega^3 / pi^2 c^3) [n(omega, T) + 1/2]`, the half-quantum only
/// when `zero_point` is set.
pub fn planck_density(omega: f64, temperature: f64, zero_point: bool) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(domain("omega", omega, "finite and > 0"));
    }
    check_temperature(temperature)?;
    let prefactor = HBAR * omega.powi(3) / (PI * PI * C.powi(3));
    let occupancy = thermal_occupancy(omega, temperature) + if zero_point { 0.5 } else { 0.0 };
    Ok(prefactor * occupancy)
}

/// Lorentzian-broadened density `u0 Gamma^2 / (4 (omega - omega0)^2 + Gamma^2)`.
pub fn lorentzian_density(omega: f64, omega0: f64, gamma: f64, u0: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(domain("Gamma", gamma, "> 0"));
    }
    let d = omega - omega0;
    Ok(u0 * gamma * gamma / (4.0 * d * d + gamma * gamma))
}

/// Net cavity decay rate `Gamma = A + omega0 / Q`.
pub fn cavity_decay_rate(sys: &TwoLevelSystem, q: f64, a_rate: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(domain("Q", q, "> 0"));
    }
    if !(a_rate >= 0.0) {
        return Err(domain("A", a_rate, ">= 0"));
    }
    Ok(a_rate + sys.omega0 / q)
}

/// Spontaneous emission rate `omega0^3 mu12^2 / (3 pi eps0 hbar c^3)`, 1/s.
pub fn einstein_a(sys: &TwoLevelSystem) -> f64 {
    sys.omega0.powi(3) * sys.mu12 * sys.mu12 / (3.0 * PI * EPSILON0 * HBAR * C.powi(3))
}

/// Time-independent (perturbative) B coefficient `pi mu12^2 / (3 eps0 hbar^2)`.
pub fn b0_coefficient(sys: &TwoLevelSystem) -> f64 {
    PI * sys.mu12 * sys.mu12 / (3.0 * EPSILON0 * HBAR * HBAR)
}

/// `2 pi mu12^2 u(omega0) / (3 eps0 hbar^2)` for a density `u` in J s/m^3.
fn rabi_drive(sys: &TwoLevelSystem, u: f64) -> f64 {
    2.0 * PI * sys.mu12 * sys.mu12 * u / (3.0 * EPSILON0 * HBAR * HBAR)
}

/// Free-space thermal Rabi frequency, zero-point density included.
pub fn rabi_frequency_free_space(sys: &TwoLevelSystem, temperature: f64) -> Result<f64> {
    let u = planck_density(sys.omega0, temperature, true)?;
    Ok(rabi_drive(sys, u))
}

/// Cavity Rabi frequency: positive root of
/// `omega_gamma (1 + 2 omega_gamma / Gamma) = 2 pi mu12^2 u(omega0) / (3 eps0 hbar^2)`.
pub fn rabi_frequency_cavity(
    sys: &TwoLevelSystem,
    temperature: f64,
    q: f64,
    a_rate: f64,
) -> Result<f64> {
    let gamma = cavity_decay_rate(sys, q, a_rate)?;
    let drive = rabi_drive(sys, planck_density(sys.omega0, temperature, true)?);
    Ok(cavity_root(drive, gamma))
}

/// Positive root of `w (1 + 2 w / gamma) = drive`, in the cancellation-free
/// form `2 drive / (1 + sqrt(1 + 8 drive / gamma))`.
pub fn cavity_root(drive: f64, gamma: f64) -> f64 {
    debug_assert!(drive >= 0.0 && gamma > 0.0);
    let root = 2.0 * drive / (1.0 + (1.0 + 8.0 * drive / gamma).sqrt());
    debug_assert!(root >= 0.0, "cavity Rabi frequency must be non-negative");
    root
}

/// How the quality factor enters the Purcell factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PurcellQ {
    /// Plain `Q`.
    Bare,
    /// `Q / (1 + A Q / omega0)`.
    DecayCorrected { a_rate: f64 },
}

/// Purcell enhancement `3 lambda^3 Q' / (4 pi^2 V_eff)` with `lambda = 2 pi c / omega0`.
pub fn purcell_factor(sys: &TwoLevelSystem, q: f64, v_eff: f64, q_form: PurcellQ) -> Result<f64> {
    if !(v_eff > 0.0) {
        return Err(domain("V_eff", v_eff, "> 0"));
    }
    if !(q > 0.0) {
        return Err(domain("Q", q, "> 0"));
    }
    let q_eff = match q_form {
        PurcellQ::Bare => q,
        PurcellQ::DecayCorrected { a_rate } => q / (1.0 + a_rate * q / sys.omega0),
    };
    let lambda = 2.0 * PI * C / sys.omega0;
    Ok(3.0 * lambda.powi(3) * q_eff / (4.0 * PI * PI * v_eff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{BOHR_RADIUS, E_CHARGE};
    use crate::oracle;
    use crate::presets;

    fn na() -> TwoLevelSystem {
        presets::sodium_d1()
    }

    fn brune() -> TwoLevelSystem {
        presets::brune_rydberg()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn vacuum_density_at_zero_temperature() {
        let w = na().omega0;
        let u = planck_density(w, 0.0, true).unwrap();
        let want = HBAR * w.powi(3) / (2.0 * PI * PI * C.powi(3));
        assert!(rel(u, want) < 1e-15);
        assert_eq!(planck_density(w, 0.0, false).unwrap(), 0.0);
        assert!(planck_density(0.0, 1.0, true).is_err());
        assert!(planck_density(-1.0, 1.0, true).is_err());
    }

    #[test]
    fn occupancy_is_one_at_ln2() {
        let w = 1e15;
        let t = HBAR * w / (K_B * 2f64.ln());
        assert!((thermal_occupancy(w, t) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wien_tail_is_negligible() {
        // hbar omega / kB T = 50 versus the peak near 2.82
        let t = 300.0;
        let w_tail = 50.0 * K_B * t / HBAR;
        let w_peak = 2.821_439_372_122_079 * K_B * t / HBAR;
        let tail = planck_density(w_tail, t, false).unwrap();
        let peak = planck_density(w_peak, t, false).unwrap();
        // x^3 e^{-x} / (x_p^3 / (e^{x_p} - 1)) evaluated in closed form
        let x: f64 = 50.0;
        let xp: f64 = 2.821_439_372_122_079;
        let want = x.powi(3) / x.exp_m1() / (xp.powi(3) / xp.exp_m1());
        assert!(rel(tail / peak, want) < 1e-12);
        assert!(tail < 1e-16 * peak);
    }

    #[test]
    fn density_monotone_in_temperature() {
        let w = brune().omega0;
        let mut last = 0.0;
        for i in 0..200 {
            let u = planck_density(w, i as f64 * 0.05, true).unwrap();
            assert!(u >= last);
            last = u;
        }
    }

    #[test]
    fn lorentzian_examples() {
        let (w0, g, u0) = (1e10, 3e6, 2.5);
        assert_eq!(lorentzian_density(w0, w0, g, u0).unwrap(), u0);
        assert!((lorentzian_density(w0 + g / 2.0, w0, g, u0).unwrap() - u0 / 2.0).abs() < 1e-15);
        assert!(lorentzian_density(w0, w0, 0.0, u0).is_err());
    }

    #[test]
    fn brune_cavity_width() {
        let sys = brune();
        let gamma = cavity_decay_rate(&sys, 7e7, 0.553_611_6e6).unwrap();
        let want = 553_611.6 + 2.0 * PI * 51.099e9 / 7e7;
        assert!(rel(gamma, want) < 1e-15);
        assert!((gamma - 558_198.235_514_45).abs() < 1e-6);
    }

    #[test]
    fn lorentzian_normalisation() {
        // integral over the real line = u0 pi Gamma / 2; substitute d = (g/2) tan(theta)
        let (w0, g, u0) = (0.0, 2.0, 1.3);
        let f = |theta: f64| {
            let d = 0.5 * g * theta.tan();
            lorentzian_density(w0 + d, w0, g, u0).unwrap() * 0.5 * g / theta.cos().powi(2)
        };
        let h = PI / 2.0 - 1e-9;
        let total = oracle::simpson(&f, -h, h, 1e-13);
        assert!(rel(total, u0 * PI * g / 2.0) < 1e-8);
    }

    #[test]
    fn einstein_a_examples() {
        let mu = 2.5 * E_CHARGE * BOHR_RADIUS;
        assert!((mu - 2.1196e-29).abs() < 1e-33);
        let sys = na();
        let a = einstein_a(&sys);
        let wg = rabi_frequency_free_space(&sys, 5e4).unwrap();
        assert!((a / wg - 0.2393).abs() < 5e-5, "{}", a / wg);

        let zero = TwoLevelSystem::new(sys.omega0, 0.0).unwrap();
        assert_eq!(einstein_a(&zero), 0.0);
        let double = TwoLevelSystem::new(sys.omega0, 2.0 * sys.mu12).unwrap();
        assert!(rel(einstein_a(&double), 4.0 * a) < 1e-15);
    }

    #[test]
    fn b0_examples() {
        let sys = na();
        let b0 = b0_coefficient(&sys);
        let uq = planck_density(sys.omega0, 0.0, true).unwrap();
        assert!(rel(b0 * uq, einstein_a(&sys) / 2.0) < 1e-14);
        assert_eq!(b0_coefficient(&TwoLevelSystem::new(1.0, 0.0).unwrap()), 0.0);
        // pi mu^2 / (3 eps0 hbar^2) for mu = 2.1196e-29 C m
        assert!(rel(b0, 4.777_881_652_795_776e21) < 1e-12, "{b0:e}");
    }

    #[test]
    fn free_space_rabi_frequency() {
        for sys in [na(), brune()] {
            let wg = rabi_frequency_free_space(&sys, 0.0).unwrap();
            let want = sys.mu12.powi(2) * sys.omega0.powi(3) / (3.0 * PI * C.powi(3) * EPSILON0 * HBAR);
            assert!(rel(wg, want) < 1e-14);
            assert!(rel(wg, einstein_a(&sys)) < 1e-12);
        }
        // Rayleigh-Jeans slope: 2 mu^2 omega0^2 kB / (3 pi eps0 hbar^2 c^3)
        let sys = brune();
        let (t1, t2) = (1e4, 2e4);
        let slope = (rabi_frequency_free_space(&sys, t2).unwrap()
            - rabi_frequency_free_space(&sys, t1).unwrap())
            / (t2 - t1);
        let want = 2.0 * sys.mu12.powi(2) * sys.omega0.powi(2) * K_B
            / (3.0 * EPSILON0 * HBAR * HBAR * PI * C.powi(3));
        assert!(rel(slope, want) < 0.01);
    }

    #[test]
    fn cavity_rabi_frequency() {
        let sys = brune();
        let (q, a) = (7e7, 1e6);
        let wg = rabi_frequency_cavity(&sys, 0.0, q, a).unwrap();
        let k = sys.mu12.powi(2) * sys.omega0.powi(3) / (3.0 * PI * C.powi(3) * EPSILON0 * HBAR);
        let s = 4.0 * q / (sys.omega0 + a * q);
        let closed = (-1.0 + (1.0 + k * 2.0 * s).sqrt()) / s;
        assert!(rel(wg, closed) < 1e-12);

        let gamma = cavity_decay_rate(&sys, q, a).unwrap();
        let residual = wg * (1.0 + 2.0 * wg / gamma) - k;
        assert!((residual / k).abs() < 1e-12);

        let tiny_q = rabi_frequency_cavity(&sys, 0.0, 1e-12, a).unwrap();
        assert!(rel(tiny_q, k) < 1e-10);
        assert!(rel(tiny_q, einstein_a(&sys)) < 1e-10);
    }

    #[test]
    fn cavity_tends_to_free_space_for_wide_lines() {
        let drive = 3.3e5;
        assert!(rel(cavity_root(drive, 1e9 * drive), drive) < 1e-6);
    }

    #[test]
    fn purcell_examples() {
        let sys = brune();
        let v = presets::BRUNE_GEOMETRIC_VOLUME;
        let bare = purcell_factor(&sys, 7e7, v, PurcellQ::Bare).unwrap();
        let same = purcell_factor(&sys, 7e7, v, PurcellQ::DecayCorrected { a_rate: 0.0 }).unwrap();
        assert_eq!(bare, same);
        let half = purcell_factor(&sys, 7e7, 2.0 * v, PurcellQ::Bare).unwrap();
        assert!(rel(half, bare / 2.0) < 1e-15);
        assert!(purcell_factor(&sys, 7e7, 0.0, PurcellQ::Bare).is_err());
    }

    #[test]
    fn purcell_effective_volume_rescales_decay() {
        // With V_eff = 300.7 V_geo and the decay-corrected Q, A_natural / F lands on 1e6/s.
        let sys = brune();
        let a_nat = presets::BRUNE_A_NATURAL;
        let f = purcell_factor(
            &sys,
            presets::BRUNE_Q,
            300.7 * presets::BRUNE_GEOMETRIC_VOLUME,
            PurcellQ::DecayCorrected { a_rate: a_nat },
        )
        .unwrap();
        assert!((f - 0.553_685_5).abs() < 1e-6, "{f}");
        assert!(rel(a_nat / f, presets::BRUNE_A_FITTED) < 5e-4);
    }

    #[test]
    fn rotating_wave_flag() {
        let sys = na();
        assert!(sys.check_rotating_wave(1e-3 * sys.omega0));
        assert!(!sys.check_rotating_wave(0.1 * sys.omega0));
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::ThermalFreeSpace { temperature: -1.0 }.validate().is_err());
        assert!(FieldSpec::Cavity { temperature: 1.0, q: 0.0, a_rate: 1.0 }.validate().is_err());
        assert!(FieldSpec::Monochromatic { e0: -1.0, omega: 1.0 }.validate().is_err());
        let sys = na();
        let wg = FieldSpec::ThermalFreeSpace { temperature: 5e4 }.rabi_frequency(&sys).unwrap();
        assert_eq!(wg, rabi_frequency_free_space(&sys, 5e4).unwrap());
    }
}
