use super::{KahanSum, SpecFunError};

// Crossover between the power series and the asymptotic expansion. At 25 the
// asymptotic series bottoms out below 1e-15 relative by ~17 terms, and the
// power series is still short (~45 terms), so both sides are comfortable.
const SERIES_CUTOFF: f64 = 25.0;

/// Modified Bessel function of the first kind, order zero, for z ≥ 0.
///
/// Power series Σ (z²/4)ᵏ/(k!)² below z = 25 (all terms positive, no
/// cancellation), asymptotic expansion above. Overflows for z ≳ 713; use
/// [`bessel_i0_scaled`] there.
pub fn bessel_i0(z: f64) -> Result<f64, SpecFunError> {
    if z.is_nan() || z < 0.0 {
        return Err(SpecFunError::Domain(format!("bessel_i0 needs z >= 0, got {z}")));
    }
    if z <= SERIES_CUTOFF {
        return Ok(i0_series(z));
    }
    let scaled = i0_scaled_asymptotic(z);
    let value = scaled * z.exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SpecFunError::Overflow { arg: z })
    }
}

/// e^{−z} I₀(z) for z ≥ 0. Total on the domain; decays like 1/√(2πz).
pub fn bessel_i0_scaled(z: f64) -> f64 {
    assert!(z >= 0.0, "bessel_i0_scaled needs z >= 0, got {z}");
    if z <= SERIES_CUTOFF {
        i0_series(z) * (-z).exp()
    } else {
        i0_scaled_asymptotic(z)
    }
}

fn i0_series(z: f64) -> f64 {
    let q = z * z / 4.0;
    let mut term = 1.0;
    let mut sum = KahanSum::default();
    sum.add(1.0);
    for k in 1..1000 {
        term *= q / ((k * k) as f64);
        sum.add(term);
        if term < f64::EPSILON * sum.value() {
            break;
        }
    }
    sum.value()
}

// e^{-z} I0(z) ~ (2πz)^{-1/2} Σ_k a_k z^{-k}, a_0 = 1,
// a_k = a_{k-1} (2k-1)^2 / (8k). Divergent; truncate at the smallest term.
fn i0_scaled_asymptotic(z: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = KahanSum::default();
    sum.add(term);
    for k in 1..40u32 {
        let next = term * ((2 * k - 1) * (2 * k - 1)) as f64 / (8.0 * k as f64 * z);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum.add(term);
        if term.abs() < f64::EPSILON * sum.value() {
            break;
        }
    }
    sum.value() / (2.0 * std::f64::consts::PI * z).sqrt()
}
