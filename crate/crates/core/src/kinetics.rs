//! Einstein rate equations with time-dependent stimulated rates.
//!
//! In units of the Rabi frequency (`tau = omega_gamma t`, `a = A/omega_gamma`,
//! `r = |R(0)|/omega_gamma`) the upper-level probability obeys
//!
//! ```text
//! dP2/dtau = r k(tau) - (a + 2 r k(tau)) P2
//! ```
//!
//! with `k = |J0|` for a thermal field, `k = |sin|` for a resonant
//! monochromatic field, and `k = 1` for the static (Einstein) limit. Writing
//! `F(tau) = integral_0^tau k`, the solution is
//!
//! ```text
//! P2(tau) = r integral_0^tau exp(a (s - tau) + 2 r (F(s) - F(tau))) k(s) ds
//!           [+ exp(-a tau - 2 r F(tau)) when starting in the upper level]
//! ```
//!
//! The exponent is kept non-positive by folding the outer factor in before
//! exponentiating.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::ode::Dopri5;
use crate::quad;
use crate::series::{validate_grid, TimeSeries};
use crate::specfun;

/// Default relative tolerance of the ODE oracle.
pub const DEFAULT_ODE_TOL: f64 = 1e-9;
/// Half-width of the window outside [0, 1] that [`entropy`] clamps.
pub const PROBABILITY_SLACK: f64 = 1e-9;

const INNER_TOL: f64 = 1e-13;
const INNER_SEGMENTS: usize = 200;

/// Time profile of the stimulated rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    /// Broadband free-space radiation: `|R(t)| = |R(0)| |J0(omega_gamma t)|`.
    Thermal,
    /// Resonant single-frequency field: `|R(t)| = |R(0)| |sin(omega_gamma t)|`.
    Monochromatic,
    /// Constant rate; the `omega_gamma -> 0` limit that recovers Einstein's
    /// kinetics.
    Static,
}

impl FieldKind {
    /// `|k(tau)|`.
    pub fn kernel(self, tau: f64) -> f64 {
        match self {
            FieldKind::Thermal => specfun::j0(tau).abs(),
            FieldKind::Monochromatic => tau.sin().abs(),
            FieldKind::Static => 1.0,
        }
    }

    /// `integral_0^tau |k|`.
    pub fn rate_integral(self, tau: f64) -> f64 {
        match self {
            FieldKind::Thermal => abs_rate_integral_thermal(tau),
            FieldKind::Monochromatic => abs_rate_integral_mono(tau),
            FieldKind::Static => tau.max(0.0),
        }
    }

    /// Kinks of `|k|` strictly inside `(lo, hi)`.
    fn kinks_between(self, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            FieldKind::Thermal => specfun::zeros_below(hi)
                .into_iter()
                .filter(|&z| z > lo && z < hi)
                .collect(),
            FieldKind::Monochromatic => {
                let first = (lo / PI).floor() as i64 + 1;
                (first..)
                    .map(|j| j as f64 * PI)
                    .take_while(|&z| z < hi)
                    .filter(|&z| z > lo)
                    .collect()
            }
            FieldKind::Static => Vec::new(),
        }
    }
}

/// Which level the system occupies at `tau = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialState {
    /// `P2(0) = 0`.
    Ground,
    /// `P2(0) = 1`.
    Excited,
}

impl InitialState {
    pub fn p2(self) -> f64 {
        match self {
            InitialState::Ground => 0.0,
            InitialState::Excited => 1.0,
        }
    }
}

/// Dimensionless kinetics inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KineticsParams {
    /// `A / omega_gamma`.
    pub a: f64,
    /// `|R(0)| / omega_gamma`.
    pub r: f64,
    /// Rabi frequency, rad/s; only used to convert back to seconds.
    pub omega_gamma: f64,
    pub field: FieldKind,
    pub initial: InitialState,
}

impl KineticsParams {
    pub fn new(
        a: f64,
        r: f64,
        omega_gamma: f64,
        field: FieldKind,
        initial: InitialState,
    ) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(domain("a", a, "finite and >= 0"));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(domain("r", r, "finite and >= 0"));
        }
        if !(omega_gamma > 0.0 && omega_gamma.is_finite()) {
            return Err(domain("omega_gamma", omega_gamma, "finite and > 0"));
        }
        Ok(Self {
            a,
            r,
            omega_gamma,
            field,
            initial,
        })
    }

    /// Same parameters with `omega_gamma = 1`.
    pub fn dimensionless(a: f64, r: f64, field: FieldKind, initial: InitialState) -> Result<Self> {
        Self::new(a, r, 1.0, field, initial)
    }
}

/// Einstein's constant-rate solution from the lower level:
/// `r / (a + 2r) (1 - exp(-(a + 2r) tau))`.
pub fn einstein_baseline_p2(tau: f64, a: f64, r: f64) -> f64 {
    let k = a + 2.0 * r;
    if k == 0.0 {
        return 0.0;
    }
    -r / k * (-k * tau).exp_m1()
}

/// Einstein solution honoring the initial level.
pub fn einstein_p2(params: &KineticsParams, tau: f64) -> f64 {
    let k = params.a + 2.0 * params.r;
    let base = einstein_baseline_p2(tau, params.a, params.r);
    match params.initial {
        InitialState::Ground => base,
        InitialState::Excited => base + (-k * tau).exp(),
    }
}

/// `omega_gamma f(t) = integral_0^tau |J0(s)| ds`.
pub fn abs_rate_integral_thermal(tau: f64) -> f64 {
    specfun::abs_j0_integral(tau)
}

/// `omega_gamma g(t) = integral_0^tau |sin s| ds
///  = 2 floor(tau/pi) + 1 - cos(tau - pi floor(tau/pi))`.
pub fn abs_rate_integral_mono(tau: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let n = (tau / PI).floor();
    2.0 * n + 1.0 - (tau - PI * n).cos()
}

/// Closed-form upper-level probability at a single `tau`.
pub fn p2_closed_form(params: &KineticsParams, tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(domain("tau", tau, ">= 0"));
    }
    if tau == 0.0 {
        return Ok(params.initial.p2());
    }
    Ok(p2_closed_form_series(params, &[tau])?[0])
}

/// Closed-form probability on an increasing grid of non-negative times.
///
/// The inner integral is carried forward between grid points, so the cost
/// is linear in the grid span.
pub fn p2_closed_form_series(params: &KineticsParams, grid: &[f64]) -> Result<Vec<f64>> {
    validate_grid(grid)?;
    if grid[0] < 0.0 {
        return Err(domain("tau", grid[0], ">= 0"));
    }
    let KineticsParams {
        a, r, field, initial, ..
    } = *params;
    let mut out = Vec::with_capacity(grid.len());
    let mut prev_tau = 0.0;
    let mut prev_f = 0.0;
    // integral_0^prev exp(a (s - prev) + 2r (F(s) - F(prev))) k(s) ds
    let mut carried = 0.0;
    for &tau in grid {
        if tau > prev_tau {
            let f_tau = field.rate_integral(tau);
            let decay = (-a * (tau - prev_tau) - 2.0 * r * (f_tau - prev_f)).exp();
            let integrand = |s: f64| {
                let expo = a * (s - tau) + 2.0 * r * (field.rate_integral(s) - f_tau);
                expo.exp() * field.kernel(s)
            };
            let mut cuts = vec![prev_tau];
            cuts.extend(field.kinks_between(prev_tau, tau));
            cuts.push(tau);
            let mut fresh = 0.0;
            for w in cuts.windows(2) {
                fresh += quad::adaptive(integrand, w[0], w[1], INNER_TOL, INNER_SEGMENTS)
                    .map_err(|e| match e {
                        Error::Quadrature { achieved, estimate, .. } => Error::Quadrature {
                            requested: INNER_TOL,
                            achieved,
                            estimate,
                        },
                        other => other,
                    })?
                    .value;
            }
            carried = carried * decay + fresh;
            prev_tau = tau;
            prev_f = f_tau;
        }
        let mut p2 = r * carried;
        if initial == InitialState::Excited {
            p2 += (-a * tau - 2.0 * r * prev_f).exp();
        }
        out.push(p2);
    }
    Ok(out)
}

/// Integrates the rate equation directly with adaptive Dormand-Prince steps,
/// restarting at every kink of the kernel. `tol` is the relative tolerance;
/// the absolute tolerance is `1e-3 tol`.
pub fn ode_oracle_p2(params: &KineticsParams, grid: &[f64], tol: f64) -> Result<Vec<f64>> {
    validate_grid(grid)?;
    if grid[0] < 0.0 {
        return Err(domain("tau", grid[0], ">= 0"));
    }
    if !(tol > 0.0) {
        return Err(domain("ODE tolerance", tol, "> 0"));
    }
    let KineticsParams {
        a, r, field, initial, ..
    } = *params;
    let rhs = |s: f64, p: f64| {
        let k = field.kernel(s);
        r * k - (a + 2.0 * r * k) * p
    };
    let mut solver = Dopri5::new(tol, 1e-3 * tol);
    let mut t = 0.0;
    let mut p = initial.p2();
    let mut out = Vec::with_capacity(grid.len());
    for &target in grid {
        let mut cuts = field.kinks_between(t, target);
        cuts.push(target);
        for stop in cuts {
            if stop > t {
                p = solver.integrate(&rhs, t, stop, p)?;
                t = stop;
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// Two-level entropy `-[p ln p + (1-p) ln(1-p)]` in units of k_B.
///
/// Values within [`PROBABILITY_SLACK`] outside [0, 1] are clamped.
pub fn entropy(p2: f64) -> Result<f64> {
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p2) {
        return Err(domain("probability", p2, "within [0, 1]"));
    }
    let p = p2.clamp(0.0, 1.0);
    Ok(-(xlnx(p) + xlnx(1.0 - p)))
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn field_name(field: FieldKind) -> &'static str {
    match field {
        FieldKind::Thermal => "thermal",
        FieldKind::Monochromatic => "monochromatic",
        FieldKind::Static => "static",
    }
}

/// Evaluates every kinetics channel on `grid`: `P2`, `P1`, `P2_ode`, `S`,
/// `P2_einstein`, `P1_einstein` and `S_einstein`.
pub fn run_kinetics(params: &KineticsParams, grid: &[f64]) -> Result<TimeSeries> {
    let p2 = p2_closed_form_series(params, grid)?;
    let p2_ode = ode_oracle_p2(params, grid, DEFAULT_ODE_TOL)?;
    let p1: Vec<f64> = p2.iter().map(|p| 1.0 - p).collect();
    let s = p2.iter().map(|&p| entropy(p)).collect::<Result<Vec<_>>>()?;
    let p2_e: Vec<f64> = grid.iter().map(|&t| einstein_p2(params, t)).collect();
    let p1_e: Vec<f64> = p2_e.iter().map(|p| 1.0 - p).collect();
    let s_e = p2_e.iter().map(|&p| entropy(p)).collect::<Result<Vec<_>>>()?;

    let mut ts = TimeSeries::new("tau", grid.to_vec())?;
    ts.set_meta("a", params.a);
    ts.set_meta("r", params.r);
    ts.set_meta("omega_gamma", params.omega_gamma);
    ts.set_meta("field", field_name(params.field));
    ts.set_meta(
        "initial",
        match params.initial {
            InitialState::Ground => "ground",
            InitialState::Excited => "excited",
        },
    );
    ts.push_channel("P1", p1)?;
    ts.push_channel("P2", p2)?;
    ts.push_channel("P2_ode", p2_ode)?;
    ts.push_channel("S", s)?;
    ts.push_channel("P1_einstein", p1_e)?;
    ts.push_channel("P2_einstein", p2_e)?;
    ts.push_channel("S_einstein", s_e)?;
    Ok(ts)
}
