//! Adaptive 1D quadrature: Gauss–Kronrod 7–15 pairs on a worst-interval-first
//! subdivision queue, with a rational map for semi-infinite domains.

use std::collections::BinaryHeap;

use thiserror::Error;

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Standard QUADPACK constants, kept at their
// published precision.
#[allow(clippy::excessive_precision)]
mod gk {
    pub const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
    pub const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
    pub const WG: [f64; 4] = [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ];
}
use gk::{WG, WGK, XGK};

const MAX_INTERVALS: usize = 8192;

/// Quadrature value with its error estimate and the number of subintervals
/// the adaptive pass ended with.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("tolerance not met: value {value:e}, error estimate {error_estimate:e}")]
    ToleranceNotMet { value: f64, error_estimate: f64 },
    #[error("integrand returned NaN at x = {x}")]
    NanInIntegrand { x: f64 },
}

/// Integration domain for [`integrate_1d`].
#[derive(Debug, Clone, Copy)]
pub enum Domain1D {
    /// [a, b] with finite endpoints.
    Finite(f64, f64),
    /// [start, ∞), mapped through s = start + scale·x/(1−x). `scale` should
    /// roughly match the decay length of the integrand.
    SemiInfinite { start: f64, scale: f64 },
}

/// Adaptive integral of `f` over `domain` to absolute tolerance `tol`.
pub fn integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain1D,
    tol: f64,
) -> Result<Quadrature, QuadError> {
    match domain {
        Domain1D::Finite(a, b) => integrate(f, a, b, tol),
        Domain1D::SemiInfinite { start, scale } => {
            integrate_semi_inf(move |s| f(start + s), scale, tol)
        }
    }
}

/// Adaptive integral over the finite interval [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature, QuadError> {
    adaptive(&f, a, b, tol)
}

/// Adaptive integral over [0, ∞) through the substitution s = scale·x/(1−x).
///
/// The map is the u = 1/(1 + s/scale) family: exponential-decay integrands
/// become smooth and flat at the x = 1 endpoint, which adaptive subdivision
/// handles without endpoint trouble. Kronrod nodes are interior, so f is
/// never evaluated at s = ∞, but it must remain finite for arbitrarily large
/// arguments.
pub fn integrate_semi_inf<F: Fn(f64) -> f64>(
    f: F,
    scale: f64,
    tol: f64,
) -> Result<Quadrature, QuadError> {
    assert!(scale > 0.0 && scale.is_finite(), "scale must be positive, got {scale}");
    let g = move |x: f64| {
        let om = 1.0 - x;
        let s = scale * x / om;
        let jac = scale / (om * om);
        let v = f(s) * jac;
        // decaying integrands can produce 0·inf at the far endpoint
        if v.is_nan() && f(s) == 0.0 {
            0.0
        } else {
            v
        }
    };
    adaptive(&g, 0.0, 1.0, tol)
}

/// Nested adaptive integration over a low-dimensional product chart (up to
/// a few dimensions; cost is multiplicative). Inner levels run at tighter
/// tolerances so the outer error estimates stay meaningful. Products that
/// evaluate to NaN through 0·∞ of a decaying factor against an overflowing
/// one are mathematically zero and are mapped to zero; inner-level failures
/// propagate out.
pub fn nested_integrate(
    domains: &[Domain1D],
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    tol: f64,
) -> Result<f64, QuadError> {
    fn go(
        domains: &[Domain1D],
        point: &[f64],
        f: &(dyn Fn(&[f64]) -> f64 + Sync),
        tol: f64,
    ) -> Result<f64, QuadError> {
        let depth = point.len();
        if depth == domains.len() {
            let v = f(point);
            return Ok(if v.is_nan() { 0.0 } else { v });
        }
        let inner_tol = tol / 10.0f64.powi((domains.len() - depth - 1) as i32);
        let cell = std::cell::RefCell::new((point.to_vec(), None::<QuadError>));
        let q = integrate_1d(
            |x| {
                let mut borrow = cell.borrow_mut();
                let (ref mut pt, ref mut err) = *borrow;
                pt.push(x);
                let r = go(domains, pt, f, inner_tol);
                pt.pop();
                match r {
                    Ok(v) => v,
                    Err(e) => {
                        *err = Some(e);
                        f64::NAN
                    }
                }
            },
            domains[depth],
            tol,
        );
        match q {
            Ok(q) => Ok(q.value),
            Err(outer) => {
                let inner = cell.into_inner().1;
                Err(inner.unwrap_or(outer))
            }
        }
    }
    go(domains, &[], f, tol)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error.total_cmp(&other.error)
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Quadrature, QuadError> {
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(f, a, b)?);
    let mut count = 1usize;
    loop {
        let total_err: f64 = heap.iter().map(|s| s.error).sum();
        if total_err <= tol {
            let value = heap.iter().map(|s| s.value).sum();
            return Ok(Quadrature { value, error_estimate: total_err, intervals: count });
        }
        if count >= MAX_INTERVALS {
            let value = heap.iter().map(|s| s.value).sum();
            return Err(QuadError::ToleranceNotMet { value, error_estimate: total_err });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; keep its estimate
            let mut stuck = worst;
            stuck.error = 0.0;
            heap.push(stuck);
            continue;
        }
        heap.push(kronrod(f, worst.a, mid)?);
        heap.push(kronrod(f, mid, worst.b)?);
        count += 1;
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0f64; 15];
    for (i, &x) in XGK.iter().enumerate() {
        if i == 7 {
            fv[7] = f(center);
            if fv[7].is_nan() {
                return Err(QuadError::NanInIntegrand { x: center });
            }
        } else {
            let lo = center - half * x;
            let hi = center + half * x;
            fv[i] = f(lo);
            fv[14 - i] = f(hi);
            if fv[i].is_nan() {
                return Err(QuadError::NanInIntegrand { x: lo });
            }
            if fv[14 - i].is_nan() {
                return Err(QuadError::NanInIntegrand { x: hi });
            }
        }
    }
    let mut resk = 0.0;
    let mut resabs = 0.0;
    for i in 0..8 {
        let w = WGK[i];
        if i == 7 {
            resk += w * fv[7];
            resabs += w * fv[7].abs();
        } else {
            resk += w * (fv[i] + fv[14 - i]);
            resabs += w * (fv[i].abs() + fv[14 - i].abs());
        }
    }
    // embedded Gauss rule uses the odd-index Kronrod nodes plus the center
    let resg = WG[0] * (fv[1] + fv[13])
        + WG[1] * (fv[3] + fv[11])
        + WG[2] * (fv[5] + fv[9])
        + WG[3] * fv[7];
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fv[7] - mean).abs();
    for i in 0..7 {
        resasc += WGK[i] * ((fv[i] - mean).abs() + (fv[14 - i] - mean).abs());
    }
    let resasc = resasc * half.abs();
    let value = resk * half;
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * 1.0f64.min((200.0 * error / resasc).powf(1.5));
    }
    let round_floor = 50.0 * f64::EPSILON * resabs * half.abs();
    if round_floor > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round_floor);
    }
    Ok(Segment { a, b, value, error })
}
