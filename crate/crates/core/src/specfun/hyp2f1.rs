use super::{KahanSum, SpecFunError};

const REL_TOL: f64 = 1e-13;
// diagnose stagnation: terms still not shrinking this deep means the
// parameters are outside the intended domain
const DECREASE_CHECK: usize = 100_000;
const HARD_CAP: usize = 20_000_000;

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real parameters and
/// z ≤ 0 or 0 ≤ z < 1.
///
/// For z < 0 the series argument is first mapped into [0, 1) by the Pfaff
/// transformation ₂F₁(a,b;c;z) = (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1)). When the
/// parameters satisfy c = a + b + ½ (the family arising from averaged
/// twin-beam fidelities) and z < −1, the quadratic transformation
/// ₂F₁(a,b;a+b+½;z) = ₂F₁(2a,2b;a+b+½;(1−√(1−z))/2) is applied first; this
/// turns a Pfaff argument of 1 − O(e^{−2r}) into tanh²(r/2) and keeps the
/// series length manageable at large |z|.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    if c <= 0.0 && (c - c.round()).abs() < 1e-12 {
        return Err(SpecFunError::Domain(format!(
            "2F1 undefined for non-positive integer c = {c}"
        )));
    }
    if !z.is_finite() {
        return Err(SpecFunError::Domain(format!("2F1 argument must be finite, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z >= 1.0 {
        return Err(SpecFunError::Domain(format!(
            "2F1 series domain is z <= 0 or |z| < 1, got {z}"
        )));
    }
    if z > 0.0 {
        return series(a, b, c, z);
    }
    let quadratic_applies = (a + b + 0.5 - c).abs() <= 1e-9 * (1.0 + c.abs());
    if quadratic_applies && z < -1.0 {
        let u = (1.0 - (1.0 - z).sqrt()) / 2.0;
        return pfaff(2.0 * a, 2.0 * b, c, u);
    }
    pfaff(a, b, c, z)
}

// Pfaff-transform z < 0 to w = z/(z-1) in (0, 1). Transforming on the smaller
// of a, b gives transformed terms ~ k^{min(a,b)-max(a,b)-1} w^k, the fastest
// polynomial decay available.
fn pfaff(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecFunError> {
    debug_assert!(z < 0.0);
    let w = z / (z - 1.0);
    let (exp_param, other) = if a <= b { (a, b) } else { (b, a) };
    let prefactor = (1.0 - z).powf(-exp_param);
    Ok(prefactor * series(exp_param, c - other, c, w)?)
}

fn series(a: f64, b: f64, c: f64, w: f64) -> Result<f64, SpecFunError> {
    debug_assert!((0.0..1.0).contains(&w));
    let mut sum = KahanSum::default();
    sum.add(1.0);
    let mut term = 1.0f64;
    let mut prev_abs = f64::INFINITY;
    for k in 0..HARD_CAP {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (1.0 + kf)) * w;
        let next = term * ratio;
        if next == 0.0 {
            // terminating (polynomial) case
            return Ok(sum.value());
        }
        sum.add(next);
        // once the term ratio is a genuine contraction, the geometric tail
        // bound |t|·r/(1−r) controls the truncation error
        let r = ratio.abs();
        if r < 1.0 && next.abs() * r / (1.0 - r) <= REL_TOL * sum.value().abs() {
            return Ok(sum.value());
        }
        if k >= DECREASE_CHECK && next.abs() >= prev_abs {
            return Err(SpecFunError::NonConvergence { terms: k, last_term: next });
        }
        prev_abs = next.abs();
        term = next;
    }
    Err(SpecFunError::NonConvergence { terms: HARD_CAP, last_term: term })
}
