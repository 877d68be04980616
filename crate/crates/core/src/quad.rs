//! Quadrature engines: fixed Gauss-Legendre panels, adaptive Gauss-Kronrod
//! (7/15) and Fourier-type tails summed panel by panel with Wynn's epsilon
//! extrapolation.

use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 20-point rule.
pub fn gauss_legendre_20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: (estimate, error estimate).
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_error: f64,
}

/// Globally adaptive Gauss-Kronrod integration on a finite interval.
///
/// Bisects the panel with the largest error estimate until the summed error
/// drops below `abs_tol`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Result<QuadEstimate> {
    if a == b {
        return Ok(QuadEstimate {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    let (value, err) = gauss_kronrod_15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, err });
    let mut total = value;
    let mut total_err = err;
    while total_err > abs_tol {
        if heap.len() >= max_segments {
            return Err(Error::Quadrature {
                requested: abs_tol,
                achieved: total_err,
                estimate: total,
            });
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval can no longer be split in floating point
            heap.push(seg);
            return Err(Error::Quadrature {
                requested: abs_tol,
                achieved: total_err,
                estimate: total,
            });
        }
        let (v1, e1) = gauss_kronrod_15(&f, seg.a, mid);
        let (v2, e2) = gauss_kronrod_15(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.err;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            err: e2,
        });
        // re-sum occasionally to shed accumulated rounding in the running totals
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.err).sum();
        }
    }
    let value = heap.iter().map(|s| s.value).sum();
    let abs_error = heap.iter().map(|s| s.err).sum();
    Ok(QuadEstimate { value, abs_error })
}

/// Wynn's epsilon algorithm over a growing sequence of partial sums.
///
/// Keeps only the latest anti-diagonal of the table; even columns hold the
/// extrapolated limits.
#[derive(Debug, Default)]
pub struct WynnEpsilon {
    diagonal: Vec<f64>,
}

const MAX_EPSILON_COLUMNS: usize = 41;

impl WynnEpsilon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the next partial sum and returns the current best extrapolation.
    pub fn push(&mut self, s: f64) -> f64 {
        let mut next = Vec::with_capacity(self.diagonal.len() + 1);
        next.push(s);
        for (k, &old) in self.diagonal.iter().enumerate() {
            if k + 1 >= MAX_EPSILON_COLUMNS {
                break;
            }
            let diff = next[k] - old;
            if diff == 0.0 || !diff.is_finite() {
                break;
            }
            let below = if k == 0 { 0.0 } else { self.diagonal[k - 1] };
            let value = below + 1.0 / diff;
            if !value.is_finite() {
                break;
            }
            next.push(value);
        }
        self.diagonal = next;
        let top = (self.diagonal.len() - 1) & !1;
        self.diagonal[top]
    }
}

/// Which trigonometric factor multiplies the tail integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oscillation {
    Sin,
    Cos,
}

/// `integral_{start}^{inf} h(x) trig(freq x) dx` for a slowly varying,
/// decaying `h`.
///
/// The range is cut at the zeros of the trigonometric factor; the alternating
/// panel sums are accelerated with the epsilon algorithm. Convergence is
/// declared when two successive extrapolations agree to `abs_tol`.
pub fn fourier_tail<F: Fn(f64) -> f64>(
    h: F,
    start: f64,
    freq: f64,
    kind: Oscillation,
    abs_tol: f64,
    max_panels: usize,
) -> Result<QuadEstimate> {
    assert!(freq > 0.0, "fourier_tail needs a positive frequency");
    let half_period = PI / freq;
    // zeros: sin at k pi / freq, cos at (k + 1/2) pi / freq
    let phase = match kind {
        Oscillation::Sin => 0.0,
        Oscillation::Cos => 0.5,
    };
    let first_index = (start / half_period - phase).floor() + 1.0;
    let integrand = |x: f64| {
        let arg = freq * x;
        h(x) * match kind {
            Oscillation::Sin => arg.sin(),
            Oscillation::Cos => arg.cos(),
        }
    };
    let panel_tol = abs_tol * 0.05;
    let mut lo = start;
    let mut partial = 0.0;
    let mut quad_err = 0.0;
    let mut eps = WynnEpsilon::new();
    let mut last = f64::NAN;
    let mut agree = 0;
    for n in 0..max_panels {
        let hi = (first_index + n as f64 + phase) * half_period;
        let piece = adaptive(integrand, lo, hi, panel_tol, 200)?;
        partial += piece.value;
        quad_err += piece.abs_error;
        let estimate = eps.push(partial);
        let change = (estimate - last).abs();
        if change < abs_tol && n >= 4 {
            agree += 1;
            if agree >= 2 {
                return Ok(QuadEstimate {
                    value: estimate,
                    abs_error: change + quad_err,
                });
            }
        } else {
            agree = 0;
        }
        last = estimate;
        lo = hi;
    }
    Err(Error::Quadrature {
        requested: abs_tol,
        achieved: (last - partial).abs(),
        estimate: last,
    })
}
