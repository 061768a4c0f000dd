use num_complex::Complex64 as C64;

use super::{displacement_matrix_element, FockError, FockVector, GaussianParams};
use crate::specfun::ln_cosh;

/// Squeezed vacuum S(ξ)|0⟩ on the truncated basis, ξ = s·e^{iθ}.
///
/// Supported on even photon numbers only; the amplitude on |2n⟩ is
/// (cosh s)^{−1/2} √(binom(n−1/2, n)) (tanh s)^n e^{inθ}, generated by the
/// ratio recurrence c_{n+1}/c_n = e^{iθ} tanh s √((2n+1)/(2n+2)).
pub fn squeezed_vacuum(s: f64, theta: f64, n_cut: usize) -> Result<FockVector, FockError> {
    if n_cut < 2 || !n_cut.is_multiple_of(2) {
        return Err(FockError::BadCutoff { n_cut, reason: "cutoff must be even and at least 2" });
    }
    assert!(s >= 0.0, "squeezing degree must be non-negative, got {s}");
    let mut amplitudes = vec![C64::new(0.0, 0.0); n_cut + 1];
    let t = s.tanh();
    let phase = C64::from_polar(1.0, theta);
    let mut c = C64::new((-0.5 * ln_cosh(s)).exp(), 0.0);
    amplitudes[0] = c;
    for n in 0..n_cut / 2 {
        let ratio = ((2 * n + 1) as f64 / (2 * n + 2) as f64).sqrt();
        c *= phase * t * ratio;
        amplitudes[2 * (n + 1)] = c;
    }
    Ok(FockVector::from_amplitudes(amplitudes))
}

/// Squared overlap |⟨0|α,ξ⟩|² of a pure Gaussian state with the vacuum:
/// e^{−|α|² + Re(e^{−iθ}α²)·tanh s}/cosh s. Always in (0, 1].
pub fn vacuum_overlap_sq(params: &GaussianParams) -> f64 {
    let alpha = params.alpha;
    let re_part = (C64::from_polar(1.0, -params.theta) * alpha * alpha).re;
    (-alpha.norm_sqr() + re_part * params.s.tanh() - ln_cosh(params.s)).exp()
}

/// Truncation tail of the squeezed-vacuum expansion at the given cutoff;
/// the cheap way to decide whether a contraction at this cutoff is
/// trustworthy before computing it.
pub fn squeezed_tail_mass(s: f64, n_cut: usize) -> Result<f64, FockError> {
    squeezed_vacuum(s, 0.0, n_cut).map(|v| v.tail_mass())
}

/// ⟨n|D(α)S(ξ)|0⟩ by contracting displacement matrix elements with the
/// truncated squeezed-vacuum expansion. Valid while the expansion's tail
/// mass at `n_cut` is negligible; probe [`squeezed_tail_mass`] (or
/// [`FockVector::tail_ok`]) first when s may be large, or use the
/// cutoff-free [`displaced_squeezed_wave`].
pub fn displaced_squeezed_amplitude(
    n: usize,
    params: &GaussianParams,
    n_cut: usize,
) -> Result<C64, FockError> {
    if n > n_cut {
        return Err(FockError::BadCutoff { n_cut, reason: "requested index exceeds cutoff" });
    }
    let sv = squeezed_vacuum(params.s, params.theta, n_cut)?;
    let mut acc = C64::new(0.0, 0.0);
    for m in (0..=n_cut).step_by(2) {
        let c = sv.amplitudes()[m];
        if c.norm_sqr() > 0.0 {
            acc += displacement_matrix_element(n, m, params.alpha) * c;
        }
    }
    Ok(acc)
}

/// Amplitudes ⟨n|D(α)S(ξ)|0⟩ for n = 0..=n_max via the eigenvalue relation
/// cosh s·(a − w) |ψ⟩ = sinh s·(a† − w̄) |ψ⟩ of the displaced-squeezed state
/// (w is the displacement in the frame where the squeezing phase vanishes):
///
///   ψ_{n+1} = [(w − w̄·tanh s)·ψ_n + tanh s·√n·ψ_{n−1}] / √(n+1),
///   ψ_0     = (cosh s)^{−1/2} e^{−|w|²/2 + w̄²·tanh s/2}.
///
/// A phase e^{inθ/2} restores a general squeezing phase. Unlike the
/// truncated contraction in [`displaced_squeezed_amplitude`], this has no
/// cutoff error and stays accurate at large s; only a handful of upward
/// steps are ever taken.
pub fn displaced_squeezed_wave(n_max: usize, params: &GaussianParams) -> Vec<C64> {
    let half_phase = C64::from_polar(1.0, params.theta / 2.0);
    let w = params.alpha * half_phase.conj();
    let mut out = displaced_squeezed_wave_rotated(n_max, w.re, w.im, params.s);
    // restore the squeezing-phase frame
    let mut phase = C64::new(1.0, 0.0);
    for (n, v) in out.iter_mut().enumerate() {
        if n > 0 {
            phase *= half_phase;
        }
        *v *= phase;
    }
    out
}

/// The same amplitudes in the frame where the squeezing phase vanishes,
/// taking the displacement components u + iv directly. The ψ₀ exponent is
/// assembled as −[u²(1−tanh s) + v²(1+tanh s)]/2, which stays accurate when
/// u ~ e^s along the anti-squeezed axis would make −|w|²/2 + Re(w̄²)t/2
/// cancel catastrophically.
pub fn displaced_squeezed_wave_rotated(n_max: usize, u: f64, v: f64, s: f64) -> Vec<C64> {
    let t = s.tanh();
    let omt = crate::specfun::one_minus_tanh(s);
    let opt = crate::specfun::one_plus_tanh(s);
    let magnitude = (-(u * u * omt + v * v * opt) / 2.0 - 0.5 * ln_cosh(s)).exp();
    // Im(w̄²)·t/2 with w = u+iv: −uvt
    let psi0 = C64::from_polar(magnitude, -u * v * t);
    // w − w̄·t = u(1−t) + i·v(1+t)
    let drift = C64::new(u * omt, v * opt);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(psi0);
    if n_max == 0 {
        return out;
    }
    out.push(drift * psi0); // n = 1: (w − w̄t)ψ0 / √1
    for n in 1..n_max {
        let nf = n as f64;
        let next = (drift * out[n] + out[n - 1] * (t * nf.sqrt())) / (nf + 1.0).sqrt();
        out.push(next);
    }
    out
}
