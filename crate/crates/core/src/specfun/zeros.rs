use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use super::bessel::{j0, j1};
use super::cumulative::{cumulative_series, CUMULATIVE_SERIES_LIMIT};
use crate::error::{domain, Result};
use crate::quad::gauss_legendre_20;

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;

/// Positive zeros of J0 together with the running integrals of J0 and |J0|
/// evaluated at each zero. Grown on demand, never shrunk.
#[derive(Debug, Default)]
pub(crate) struct ZeroTable {
    pub zeros: Vec<f64>,
    /// integral_0^{zero_j} J0
    pub cumulative: Vec<f64>,
    /// integral_0^{zero_j} |J0|
    pub abs_integral: Vec<f64>,
}

fn table() -> &'static RwLock<ZeroTable> {
    static TABLE: OnceLock<RwLock<ZeroTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(ZeroTable::default()))
}

fn newton_zero(j: usize) -> f64 {
    let mut x = (j as f64 - 0.25) * PI;
    for _ in 0..NEWTON_MAX_ITER {
        let dx = j0(x) / j1(x);
        x += dx;
        if dx.abs() < NEWTON_TOL {
            break;
        }
    }
    x
}

impl ZeroTable {
    fn push_next(&mut self) {
        let j = self.zeros.len() + 1;
        let z = newton_zero(j);
        let (prev_z, prev_c, prev_f) = match self.zeros.last() {
            Some(&pz) => (pz, self.cumulative[j - 2], self.abs_integral[j - 2]),
            None => (0.0, 0.0, 0.0),
        };
        let c = if z <= CUMULATIVE_SERIES_LIMIT {
            cumulative_series(z)
        } else {
            let rule = gauss_legendre_20();
            let (from, base) = if prev_z >= CUMULATIVE_SERIES_LIMIT {
                (prev_z, prev_c)
            } else {
                (
                    CUMULATIVE_SERIES_LIMIT,
                    cumulative_series(CUMULATIVE_SERIES_LIMIT),
                )
            };
            base + rule.integrate(j0, from, z)
        };
        self.zeros.push(z);
        self.cumulative.push(c);
        self.abs_integral.push(prev_f + (c - prev_c).abs());
    }

    fn grow_past(&mut self, x: f64) {
        while self.zeros.last().is_none_or(|&z| z <= x) {
            self.push_next();
        }
    }
}

/// Anchor data for the largest zero not exceeding `x`: (count of zeros <= x,
/// that zero or 0, C there, integral of |J0| there).
pub(crate) fn zero_anchor(x: f64) -> (usize, f64, f64, f64) {
    {
        let t = table().read().expect("zero table lock poisoned");
        if t.zeros.last().is_some_and(|&z| z > x) {
            return anchor_from(&t, x);
        }
    }
    let mut t = table().write().expect("zero table lock poisoned");
    t.grow_past(x);
    anchor_from(&t, x)
}

fn anchor_from(t: &ZeroTable, x: f64) -> (usize, f64, f64, f64) {
    let m = t.zeros.partition_point(|&z| z <= x);
    if m == 0 {
        (0, 0.0, 0.0, 0.0)
    } else {
        (m, t.zeros[m - 1], t.cumulative[m - 1], t.abs_integral[m - 1])
    }
}

/// Zeros of J0 strictly inside (0, x].
pub(crate) fn zeros_below(x: f64) -> Vec<f64> {
    let (m, ..) = zero_anchor(x);
    let t = table().read().expect("zero table lock poisoned");
    t.zeros[..m].to_vec()
}

/// The j-th positive zero of J0 (j >= 1).
pub fn j0_zero(j: usize) -> Result<f64> {
    if j == 0 {
        return Err(domain("zero index", 0.0, ">= 1"));
    }
    {
        let t = table().read().expect("zero table lock poisoned");
        if let Some(&z) = t.zeros.get(j - 1) {
            return Ok(z);
        }
    }
    let mut t = table().write().expect("zero table lock poisoned");
    while t.zeros.len() < j {
        t.push_next();
    }
    Ok(t.zeros[j - 1])
}

/// All positive zeros of J0 not exceeding `x`.
pub fn j0_zeros_up_to(x: f64) -> Vec<f64> {
    if !(x > 0.0) {
        return Vec::new();
    }
    zeros_below(x)
}
