//! Transition probabilities and stimulated rates for monochromatic,
//! free-space thermal and cavity fields, plus the time-dependent B
//! coefficient.
//!
//! Broadband probabilities are integrals over the generalized Rabi frequency
//! `Omega` from `omega_gamma` to infinity. The substitution
//! `Omega = sqrt(omega_gamma^2 + v^2)` turns the inverse-square-root endpoint
//! singularity into a smooth integrand; `sin^2 = (1 - cos)/2` splits off the
//! non-oscillating part, which integrates in closed form. What remains is a
//! smooth head on `v in [0, 1]` (units of `omega_gamma`) and a Fourier tail in
//! `Omega` handled by [`quad::fourier_tail`].

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::quad::{self, Oscillation};
use crate::specfun;

/// Default absolute tolerance for the broadband quadratures.
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;
/// Loosest tolerance accepted by [`cavity_p21`].
pub const MAX_QUAD_TOL: f64 = 1e-4;

const HEAD_SEGMENTS: usize = 4000;
const TAIL_PANELS: usize = 2000;

/// Rabi frequency together with the detuning `omega - omega0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedRabi {
    pub omega_gamma: f64,
    pub detuning: f64,
}

impl GeneralizedRabi {
    pub fn new(omega_gamma: f64, detuning: f64) -> Result<Self> {
        if !(omega_gamma >= 0.0 && omega_gamma.is_finite()) {
            return Err(domain("omega_gamma", omega_gamma, "finite and >= 0"));
        }
        if !detuning.is_finite() {
            return Err(domain("detuning", detuning, "finite"));
        }
        Ok(Self {
            omega_gamma,
            detuning,
        })
    }

    pub fn resonant(omega_gamma: f64) -> Result<Self> {
        Self::new(omega_gamma, 0.0)
    }

    /// `Omega = sqrt(detuning^2 + omega_gamma^2)`.
    pub fn omega(&self) -> f64 {
        self.detuning.hypot(self.omega_gamma)
    }
}

/// Stimulated emission probability `omega_gamma^2 sin^2(Omega t / 2) / Omega^2`.
pub fn monochromatic_p21(gr: &GeneralizedRabi, t: f64) -> f64 {
    let omega = gr.omega();
    if omega == 0.0 {
        return 0.0;
    }
    let s = (0.5 * omega * t).sin();
    (gr.omega_gamma / omega).powi(2) * s * s
}

/// Stimulated absorption probability `1 - P_{2->1}`.
pub fn monochromatic_p12(gr: &GeneralizedRabi, t: f64) -> f64 {
    1.0 - monochromatic_p21(gr, t)
}

/// Outcome of the direct amplitude integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeIntegration {
    /// `|c1(t)|^2`.
    pub p21: f64,
    /// Largest `| |c1|^2 + |c2|^2 - 1 |` seen along the way.
    pub max_norm_drift: f64,
}

/// Integrates the interaction-picture amplitude equations of the driven
/// two-level Hamiltonian with classical RK4, starting from the upper level:
///
/// ```text
/// i dc1/dt = -(omega_gamma / 2) e^{-i delta t} c2
/// i dc2/dt = -(omega_gamma / 2) e^{+i delta t} c1
/// ```
pub fn schrodinger_oracle(gr: &GeneralizedRabi, t: f64, steps: usize) -> Result<AmplitudeIntegration> {
    if steps < 1000 {
        return Err(domain("RK4 step count", steps as f64, ">= 1000"));
    }
    if !(t >= 0.0) {
        return Err(domain("t", t, ">= 0"));
    }
    let half = 0.5 * gr.omega_gamma;
    let delta = gr.detuning;
    let i = Complex64::i();
    let rhs = |time: f64, c: [Complex64; 2]| -> [Complex64; 2] {
        let phase = Complex64::from_polar(1.0, delta * time);
        [
            i * half * phase.conj() * c[1],
            i * half * phase * c[0],
        ]
    };
    let h = t / steps as f64;
    let mut c = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let mut drift = 0.0f64;
    for n in 0..steps {
        let s = n as f64 * h;
        let k1 = rhs(s, c);
        let k2 = rhs(s + 0.5 * h, [c[0] + 0.5 * h * k1[0], c[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(s + 0.5 * h, [c[0] + 0.5 * h * k2[0], c[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(s + h, [c[0] + h * k3[0], c[1] + h * k3[1]]);
        for j in 0..2 {
            c[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        drift = drift.max((c[0].norm_sqr() + c[1].norm_sqr() - 1.0).abs());
    }
    Ok(AmplitudeIntegration {
        p21: c[0].norm_sqr(),
        max_norm_drift: drift,
    })
}

/// Free-space thermal emission probability at `tau = omega_gamma t`:
/// `(tau/2) 1F2(1/2; 1, 3/2; -tau^2/4) = C(tau)/2`.
pub fn thermal_p21(tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(domain("tau", tau, ">= 0"));
    }
    specfun::hyp1f2_probability_kernel(tau)
}

/// `d/dtau` of [`thermal_p21`]: `J0(tau) / 2`, in units of `omega_gamma`.
pub fn thermal_rate(tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(domain("tau", tau, ">= 0"));
    }
    Ok(0.5 * specfun::j0(tau))
}

/// SI stimulated rate `(pi mu12^2 u(omega0) / 3 eps0 hbar^2) J0(omega_gamma t)
/// = (omega_gamma / 2) J0(omega_gamma t)`, 1/s.
pub fn thermal_rate_si(omega_gamma: f64, t: f64) -> Result<f64> {
    Ok(omega_gamma * thermal_rate(omega_gamma * t)?)
}

/// Time-dependent Einstein coefficient `B0 |J0(omega_gamma t)|`.
pub fn b_coefficient_thermal(t: f64, omega_gamma: f64, b0: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain("t", t, ">= 0"));
    }
    Ok(b0 * specfun::j0(omega_gamma * t).abs())
}

/// Stimulated rates in a monochromatic field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StimulatedRates {
    /// Emission rate R_{2->1}.
    pub r21: f64,
    /// Absorption rate R_{1->2} = -R_{2->1}.
    pub r12: f64,
}

/// `mu12^2 u / (eps0 hbar^2 Omega)`: the peak of the monochromatic rate for an
/// energy density `u` (J/m^3). For `u = eps0 E0^2 / 2` this is
/// `omega_gamma^2 / (2 Omega)`.
pub fn monochromatic_rate_amplitude(mu12: f64, u: f64, omega: f64) -> f64 {
    use crate::constants::{EPSILON0, HBAR};
    mu12 * mu12 * u / (EPSILON0 * HBAR * HBAR * omega)
}

/// `R_{2->1}(t) = peak sin(Omega t)`, with `peak` from
/// [`monochromatic_rate_amplitude`].
pub fn monochromatic_rate(gr: &GeneralizedRabi, t: f64, peak: f64) -> Result<StimulatedRates> {
    if !(t >= 0.0) {
        return Err(domain("t", t, ">= 0"));
    }
    let r21 = peak * (gr.omega() * t).sin();
    Ok(StimulatedRates { r21, r12: -r21 })
}

/// Monochromatic B coefficient `(3 B0 / pi) |sin(Omega t)|`.
pub fn b_coefficient_monochromatic(t: f64, omega: f64, b0: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain("t", t, ">= 0"));
    }
    Ok(3.0 * b0 / PI * (omega * t).sin().abs())
}

/// Line shape multiplying the Rabi response, in units of `omega_gamma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineShape {
    /// Flat spectrum around the resonance (free space).
    Flat,
    /// Lorentzian of full width `g = Gamma / omega_gamma`.
    Lorentzian(f64),
}

impl LineShape {
    #[inline]
    fn weight(&self, v: f64) -> f64 {
        match *self {
            LineShape::Flat => 1.0,
            LineShape::Lorentzian(g) => g * g / (4.0 * v * v + g * g),
        }
    }

    /// `1 + 2 / g`, the normalization that makes the long-time mean 1/2.
    fn normalization(&self) -> f64 {
        match *self {
            LineShape::Flat => 1.0,
            LineShape::Lorentzian(g) => 1.0 + 2.0 / g,
        }
    }
}

/// Quadrature form of the broadband emission probability at `tau`:
///
/// `(2 n / pi) integral_0^inf w(v) sin^2(tau sqrt(1+v^2) / 2) / (1 + v^2) dv`
///
/// with `w` the line shape and `n` its normalization. Evaluated as
/// `1/2 - (n / pi) integral_0^inf w(v) cos(tau sqrt(1+v^2)) / (1+v^2) dv`.
pub fn broadband_p21(tau: f64, shape: LineShape, tol: f64) -> Result<f64> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(domain("tau", tau, "finite and >= 0"));
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    let norm = shape.normalization();
    // (n/pi) scales the integral; give each piece a third of the budget
    let piece_tol = tol * PI / (3.0 * norm);
    let head = quad::adaptive(
        |v: f64| {
            let o2 = 1.0 + v * v;
            shape.weight(v) * (tau * o2.sqrt()).cos() / o2
        },
        0.0,
        1.0,
        piece_tol,
        HEAD_SEGMENTS,
    );
    let head = reframe(head, tol)?;
    let tail = quad::fourier_tail(
        |omega: f64| {
            let v = (omega * omega - 1.0).sqrt();
            shape.weight(v) / (omega * v)
        },
        SQRT_2,
        tau,
        Oscillation::Cos,
        piece_tol,
        TAIL_PANELS,
    );
    let tail = reframe(tail, tol)?;
    Ok(0.5 - norm / PI * (head.value + tail.value))
}

// quadrature errors are reported against the caller's tolerance
fn reframe(r: Result<quad::QuadEstimate>, tol: f64) -> Result<quad::QuadEstimate> {
    r.map_err(|e| match e {
        Error::Quadrature {
            achieved, estimate, ..
        } => Error::Quadrature {
            requested: tol,
            achieved,
            estimate,
        },
        other => other,
    })
}

/// Free-space thermal probability evaluated by quadrature instead of the
/// closed form.
pub fn thermal_p21_quadrature(tau: f64, tol: f64) -> Result<f64> {
    broadband_p21(tau, LineShape::Flat, tol)
}

/// `(2/pi) integral_0^inf sin(tau sqrt(1+v^2)) / sqrt(1+v^2) dv`, which equals
/// J0(tau); the rate integral behind the thermal B coefficient.
pub fn rate_integral_quadrature(tau: f64, tol: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(domain("tau", tau, "finite and > 0"));
    }
    let piece_tol = tol * PI / 6.0;
    let head = quad::adaptive(
        |v: f64| {
            let o = (1.0 + v * v).sqrt();
            (tau * o).sin() / o
        },
        0.0,
        1.0,
        piece_tol,
        HEAD_SEGMENTS,
    );
    let head = reframe(head, tol)?;
    let tail = quad::fourier_tail(
        |omega: f64| 1.0 / (omega * omega - 1.0).sqrt(),
        SQRT_2,
        tau,
        Oscillation::Sin,
        piece_tol,
        TAIL_PANELS,
    );
    let tail = reframe(tail, tol)?;
    Ok(2.0 / PI * (head.value + tail.value))
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= MAX_QUAD_TOL) {
        return Err(domain("quad_tol", tol, "in (0, 1e-4]"));
    }
    Ok(())
}

/// Cavity emission probability at time `t` (s) for Rabi frequency
/// `omega_gamma` and net decay rate `gamma`:
///
/// `(2 wg (1 + 2 wg / G) / pi) integral_0^inf [G^2 / (4 v^2 + G^2)]
///  sin^2(sqrt(wg^2 + v^2) t / 2) / (wg^2 + v^2) dv`
pub fn cavity_p21(t: f64, omega_gamma: f64, gamma: f64, quad_tol: f64) -> Result<f64> {
    check_tol(quad_tol)?;
    if !(omega_gamma > 0.0) {
        return Err(domain("omega_gamma", omega_gamma, "> 0"));
    }
    if !(gamma > 0.0) {
        return Err(domain("Gamma", gamma, "> 0"));
    }
    if !(t >= 0.0) {
        return Err(domain("t", t, ">= 0"));
    }
    broadband_p21(
        omega_gamma * t,
        LineShape::Lorentzian(gamma / omega_gamma),
        quad_tol,
    )
}

/// [`cavity_p21`] at every time in `times`, evaluated in parallel.
pub fn cavity_curve(times: &[f64], omega_gamma: f64, gamma: f64, quad_tol: f64) -> Result<Vec<f64>> {
    times
        .par_iter()
        .map(|&t| cavity_p21(t, omega_gamma, gamma, quad_tol))
        .collect()
}

/// Mean of [`cavity_p21`] over `[t_start, t_end]` (trapezoid on `samples`
/// points).
pub fn cavity_mean_p21(
    t_start: f64,
    t_end: f64,
    samples: usize,
    omega_gamma: f64,
    gamma: f64,
    quad_tol: f64,
) -> Result<f64> {
    if !(t_end > t_start) || samples < 2 {
        return Err(Error::Grid(format!(
            "averaging window [{t_start}, {t_end}] with {samples} samples"
        )));
    }
    let step = (t_end - t_start) / (samples - 1) as f64;
    let mut sum = 0.0;
    for k in 0..samples {
        let w = if k == 0 || k == samples - 1 { 0.5 } else { 1.0 };
        sum += w * cavity_p21(t_start + k as f64 * step, omega_gamma, gamma, quad_tol)?;
    }
    Ok(sum / (samples - 1) as f64)
}

#[cfg(test)]
mod tests;
