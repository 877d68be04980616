//! Least-squares recovery of the cavity decay rate from measured vacuum
//! Rabi flopping traces.
//!
//! The model is `scale * P_cav(t; A) + offset`, with `Q`, `omega0`, `T` and
//! the dipole (or a fixed Rabi frequency) held constant. `A` is optimized as
//! `ln A` so every candidate stays positive.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dynamics::cavity_curve;
use crate::error::{domain, Error, Result};
use crate::radiation::{cavity_decay_rate, rabi_frequency_cavity, TwoLevelSystem};

/// One measured point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    /// Interaction time, s.
    pub t: f64,
    /// Measured emission probability.
    pub p: f64,
    /// Standard deviation of `p`, when known.
    pub sigma: Option<f64>,
}

/// A validated flopping trace sorted by time.
#[derive(Clone, Debug, PartialEq)]
pub struct FlopTrace {
    points: Vec<TracePoint>,
    source: String,
}

impl FlopTrace {
    /// Sorts by time and validates: `t >= 0` and unique, `p` in [0, 1],
    /// `sigma > 0` where given.
    pub fn new(mut points: Vec<TracePoint>, source: impl Into<String>) -> Result<Self> {
        for pt in &points {
            if !(pt.t >= 0.0 && pt.t.is_finite()) {
                return Err(Error::Validation(format!("time {} must be finite and >= 0", pt.t)));
            }
            if !(0.0..=1.0).contains(&pt.p) {
                return Err(Error::Validation(format!(
                    "probability {} at t = {} outside [0, 1]",
                    pt.p, pt.t
                )));
            }
            if let Some(s) = pt.sigma {
                if !(s > 0.0 && s.is_finite()) {
                    return Err(Error::Validation(format!(
                        "sigma {s} at t = {} must be > 0",
                        pt.t
                    )));
                }
            }
        }
        points.sort_by(|a, b| a.t.total_cmp(&b.t));
        if let Some(w) = points.windows(2).find(|w| w[0].t == w[1].t) {
            return Err(Error::Validation(format!("duplicate time {}", w[0].t)));
        }
        Ok(Self {
            points,
            source: source.into(),
        })
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    /// Writes `t_seconds,p2[,sigma]` with a header; every value round-trips.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# source = {}", self.source)?;
        let with_sigma = self.points.iter().any(|p| p.sigma.is_some());
        if with_sigma {
            writeln!(out, "t_seconds,p2,sigma")?;
        } else {
            writeln!(out, "t_seconds,p2")?;
        }
        for p in &self.points {
            match (with_sigma, p.sigma) {
                (true, Some(s)) => writeln!(out, "{:?},{:?},{:?}", p.t, p.p, s)?,
                (true, None) => writeln!(out, "{:?},{:?},1.0", p.t, p.p)?,
                _ => writeln!(out, "{:?},{:?}", p.t, p.p)?,
            }
        }
        Ok(())
    }
}

/// Parses the CSV trace format: `t_seconds,p2[,sigma]`, optional header,
/// `#` comment lines, `.` decimal point.
pub fn parse_trace(text: &str, origin: &Path) -> Result<FlopTrace> {
    let mut points = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: line_no,
            message,
        };
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(format!(
                "expected 2 or 3 columns, found {}",
                fields.len()
            )));
        }
        let numbers: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        match numbers {
            Ok(v) => {
                seen_data = true;
                points.push(TracePoint {
                    t: v[0],
                    p: v[1],
                    sigma: v.get(2).copied(),
                });
            }
            Err(e) => {
                let is_header = !seen_data
                    && points.is_empty()
                    && fields.iter().all(|f| f.parse::<f64>().is_err());
                if !is_header {
                    return Err(parse_err(format!("malformed number: {e}")));
                }
                seen_data = true;
            }
        }
    }
    FlopTrace::new(points, origin.display().to_string())
}

/// Reads a CSV trace from disk.
pub fn load_trace(path: impl AsRef<Path>) -> Result<FlopTrace> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_trace(&text, path)
}

/// How the Rabi frequency is pinned during the fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coupling {
    /// Recompute `omega_gamma` from the self-consistent cavity relation at
    /// each trial `A`.
    DipoleMoment(f64),
    /// Keep `omega_gamma` (rad/s) fixed.
    RabiFrequency(f64),
}

/// Quantities held fixed while `A` is estimated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityFixed {
    pub omega0: f64,
    pub q: f64,
    pub temperature: f64,
    pub coupling: Coupling,
}

impl CavityFixed {
    /// `(omega_gamma, Gamma)` for decay rate `a_rate`.
    pub fn rates(&self, a_rate: f64) -> Result<(f64, f64)> {
        let mu = match self.coupling {
            Coupling::DipoleMoment(mu) => mu,
            Coupling::RabiFrequency(_) => 0.0,
        };
        let sys = TwoLevelSystem::new(self.omega0, mu)?;
        let gamma = cavity_decay_rate(&sys, self.q, a_rate)?;
        let wg = match self.coupling {
            Coupling::DipoleMoment(_) => rabi_frequency_cavity(&sys, self.temperature, self.q, a_rate)?,
            Coupling::RabiFrequency(w) => w,
        };
        if !(wg > 0.0) {
            return Err(domain("omega_gamma", wg, "> 0"));
        }
        Ok((wg, gamma))
    }

    /// Unscaled cavity probability at each time.
    pub fn curve(&self, a_rate: f64, times: &[f64], quad_tol: f64) -> Result<Vec<f64>> {
        let (wg, gamma) = self.rates(a_rate)?;
        cavity_curve(times, wg, gamma, quad_tol)
    }
}

/// Optimizer settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Relative central-difference step.
    pub relative_step: f64,
    /// Stop when every parameter moves less than this, relatively.
    pub parameter_tol: f64,
    /// Convergence threshold on the scaled gradient reported in
    /// [`FitResult::gradient_norm`].
    pub gradient_tol: f64,
    /// Absolute tolerance of each cavity quadrature.
    pub quad_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            relative_step: 1e-6,
            parameter_tol: 1e-8,
            gradient_tol: 1e-6,
            quad_tol: 1e-11,
        }
    }
}

/// Estimated parameters and diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub a_hat: f64,
    pub scale_hat: f64,
    pub offset_hat: f64,
    /// Unweighted root-mean-square residual.
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Scaled gradient at the solution; `converged` means it is at most
    /// [`FitOptions::gradient_tol`].
    pub gradient_norm: f64,
    /// Gauss-Newton covariance of (A, scale, offset).
    pub covariance: [[f64; 3]; 3],
}

/// Largest `|J_j . r| / max(|J_j| |r|, 1)` over the columns: the cosine
/// between residual and Jacobian columns, or the plain gradient once the
/// residual is small.
fn scaled_gradient(jac: &DMatrix<f64>, res: &DVector<f64>) -> f64 {
    let rn = res.norm();
    jac.column_iter()
        .map(|col| col.dot(res).abs() / (col.norm() * rn).max(1.0))
        .fold(0.0, f64::max)
}

type CurveCache = Mutex<HashMap<u64, Arc<Vec<f64>>>>;

struct Problem<'a> {
    trace: &'a FlopTrace,
    fixed: &'a CavityFixed,
    times: Vec<f64>,
    sqrt_w: Vec<f64>,
    quad_tol: f64,
    cache: CurveCache,
}

impl Problem<'_> {
    fn curve(&self, ln_a: f64) -> Result<Arc<Vec<f64>>> {
        let key = ln_a.to_bits();
        if let Some(c) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(c));
        }
        let c = Arc::new(self.fixed.curve(ln_a.exp(), &self.times, self.quad_tol)?);
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.len() > 64 {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&c));
        Ok(c)
    }

    /// Weighted residuals `sqrt(w) (model - p)`.
    fn residuals(&self, theta: &Vector3<f64>) -> Result<DVector<f64>> {
        let curve = self.curve(theta[0])?;
        Ok(DVector::from_iterator(
            self.times.len(),
            self.trace
                .points()
                .iter()
                .zip(curve.iter())
                .zip(&self.sqrt_w)
                .map(|((pt, c), w)| w * (theta[1] * c + theta[2] - pt.p)),
        ))
    }

    fn jacobian(&self, theta: &Vector3<f64>, rel_step: f64) -> Result<DMatrix<f64>> {
        let m = self.times.len();
        let mut jac = DMatrix::zeros(m, 3);
        for j in 0..3 {
            let h = rel_step * theta[j].abs().max(1.0);
            let mut up = *theta;
            let mut down = *theta;
            up[j] += h;
            down[j] -= h;
            let col = (self.residuals(&up)? - self.residuals(&down)?) / (2.0 * h);
            jac.set_column(j, &col);
        }
        Ok(jac)
    }
}

/// Levenberg-Marquardt fit of `(A, scale, offset)` with a central-difference
/// Jacobian. Sigma columns, when present, weight points by `1/sigma^2`.
pub fn fit_cavity_a(
    trace: &FlopTrace,
    fixed: &CavityFixed,
    a_init: f64,
    options: &FitOptions,
) -> Result<FitResult> {
    if trace.len() < 8 {
        return Err(Error::Validation(format!(
            "need at least 8 points, got {}",
            trace.len()
        )));
    }
    if !(a_init > 0.0) {
        return Err(domain("initial A", a_init, "> 0"));
    }
    let (wg0, _) = fixed.rates(a_init)?;
    let times = trace.times();
    let span = times[times.len() - 1] - times[0];
    let period = 2.0 * std::f64::consts::PI / wg0;
    if span < period {
        return Err(Error::Validation(format!(
            "trace spans {span:e} s, less than one flop period ({period:e} s)"
        )));
    }
    let sqrt_w = trace
        .points()
        .iter()
        .map(|p| p.sigma.map_or(1.0, |s| 1.0 / s))
        .collect();
    let problem = Problem {
        trace,
        fixed,
        times,
        sqrt_w,
        quad_tol: options.quad_tol,
        cache: Mutex::new(HashMap::new()),
    };

    let mut theta = Vector3::new(a_init.ln(), 1.0, 0.0);
    let mut res = problem.residuals(&theta)?;
    let mut cost = 0.5 * res.norm_squared();
    let mut jac = problem.jacobian(&theta, options.relative_step)?;
    let mut lambda = 1e-3;
    let mut iterations = 0;

    while iterations < options.max_iterations {
        if scaled_gradient(&jac, &res) <= options.gradient_tol {
            break;
        }
        iterations += 1;
        let jtj: Matrix3<f64> = (jac.transpose() * &jac).fixed_view::<3, 3>(0, 0).into();
        let grad: Vector3<f64> = (jac.transpose() * &res).fixed_rows::<3>(0).into();
        let mut accepted = None;
        while lambda < 1e16 {
            let mut damped = jtj;
            for i in 0..3 {
                damped[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let Some(delta) = damped.cholesky().map(|c| c.solve(&(-grad))) else {
                lambda *= 10.0;
                continue;
            };
            let trial = theta + delta;
            let trial_res = problem.residuals(&trial)?;
            let trial_cost = 0.5 * trial_res.norm_squared();
            if trial_cost < cost {
                lambda = (lambda / 10.0).max(1e-12);
                accepted = Some((delta, trial, trial_res, trial_cost));
                break;
            }
            lambda *= 10.0;
        }
        let Some((delta, trial, trial_res, trial_cost)) = accepted else {
            break;
        };
        let small = (0..3).all(|i| {
            delta[i].abs() <= options.parameter_tol * (theta[i].abs() + options.parameter_tol)
        });
        theta = trial;
        res = trial_res;
        cost = trial_cost;
        jac = problem.jacobian(&theta, options.relative_step)?;
        if small {
            break;
        }
    }
    let gradient_norm = scaled_gradient(&jac, &res);
    let converged = gradient_norm <= options.gradient_tol;

    let a_hat = theta[0].exp();
    let curve = problem.curve(theta[0])?;
    let m = trace.len() as f64;
    let residual_rms = (trace
        .points()
        .iter()
        .zip(curve.iter())
        .map(|(pt, c)| (theta[1] * c + theta[2] - pt.p).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();

    let jtj: Matrix3<f64> = (jac.transpose() * &jac).fixed_view::<3, 3>(0, 0).into();
    let weighted = trace.points().iter().any(|p| p.sigma.is_some());
    let variance = if weighted {
        1.0
    } else {
        2.0 * cost / (m - 3.0).max(1.0)
    };
    let to_linear = Matrix3::from_diagonal(&Vector3::new(a_hat, 1.0, 1.0));
    let covariance = jtj
        .try_inverse()
        .map(|inv| to_linear * inv * to_linear * variance)
        .unwrap_or_else(|| Matrix3::from_element(f64::NAN));
    let mut cov = [[0.0; 3]; 3];
    for (i, row) in cov.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = covariance[(i, j)];
        }
    }
    Ok(FitResult {
        a_hat,
        scale_hat: theta[1],
        offset_hat: theta[2],
        residual_rms,
        iterations,
        converged,
        gradient_norm,
        covariance: cov,
    })
}

/// Synthetic trace `scale * P_cav(t; A) + offset`, optionally with seeded
/// Gaussian noise; probabilities are clipped to [0, 1].
pub fn synthetic_trace(
    fixed: &CavityFixed,
    a_rate: f64,
    times: &[f64],
    noise: Option<(f64, u64)>,
    quad_tol: f64,
) -> Result<FlopTrace> {
    let clean = fixed.curve(a_rate, times, quad_tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.map_or(0, |(_, seed)| seed));
    let normal = match noise {
        Some((sigma, _)) => Some(
            Normal::new(0.0, sigma).map_err(|_| domain("noise sigma", sigma, "finite and >= 0"))?,
        ),
        None => None,
    };
    let points = times
        .iter()
        .zip(clean)
        .map(|(&t, p)| {
            let noisy = match &normal {
                Some(n) => p + n.sample(&mut rng),
                None => p,
            };
            TracePoint {
                t,
                p: noisy.clamp(0.0, 1.0),
                sigma: noise.map(|(s, _)| s),
            }
        })
        .collect();
    let source = match noise {
        Some((s, seed)) => format!("synthetic A={a_rate:e} sigma={s} seed={seed}"),
        None => format!("synthetic A={a_rate:e} noiseless"),
    };
    FlopTrace::new(points, source)
}
