//! Square-root-measurement fidelity for the squeezed ensemble: the
//! measure-and-prepare strategy that measures with the POVM built from the
//! ensemble of width η and re-prepares the estimated state. Evaluated as a
//! double series over paired blocks, cross-checked against the operator
//! trace over the same blocks, and maximized over η.

use crate::benchmark::{cft_squeezed, pair_binomials, rho_block_weight, tau_weights};

/// One evaluation of the series.
#[derive(Debug, Clone)]
pub struct SrmEvaluation {
    pub beta: f64,
    pub eta: f64,
    pub k_max: usize,
    /// partial sum through k_max (monotone non-decreasing in k_max)
    pub value: f64,
    /// geometric extrapolation of the residual from the last three terms;
    /// an underestimate when the terms decay polynomially
    pub tail_estimate: f64,
    /// term ratio above 0.999 at k_max
    pub slow_convergence: bool,
}

/// Partial sum of the square-root-measurement fidelity series:
/// (β/(β+2))·((η+1)/(η+2)) Σ_k |Σ_n binom(k−n−½, k−n)·√(binom(n−½,n)·
/// binom((η+1)/2+n, n))|² / [binom((β+2)/2+k, k)·binom((η+2)/2+k, k)].
///
/// Every factor is positive (the half-integer falling factorials never
/// change sign), so plain accumulation is stable and the partial sums are
/// monotone.
pub fn srm_fidelity(beta: f64, eta: f64, k_max: usize) -> SrmEvaluation {
    assert!(beta > 0.0 && eta > 0.0, "widths must be positive, got beta={beta} eta={eta}");
    let b = pair_binomials(k_max);
    // the η-side binomials overflow f64 around η·k ~ 10⁵·10², so keep
    // ln binom((η+1)/2+n, n) and ln binom((·+2)/2+k, k) and push the k-block
    // denominator inside the square root of the inner sum, where every
    // addend is then ≤ 1
    let mut ln_c = Vec::with_capacity(k_max + 1);
    ln_c.push(0.0f64);
    for n in 0..k_max {
        let nf = n as f64;
        let last = *ln_c.last().unwrap();
        ln_c.push(last + ((eta + 3.0) / 2.0 + nf).ln() - (nf + 1.0).ln());
    }
    let mut ln_denom_beta = Vec::with_capacity(k_max + 1);
    let mut ln_denom_eta = Vec::with_capacity(k_max + 1);
    ln_denom_beta.push(0.0f64);
    ln_denom_eta.push(0.0f64);
    for k in 0..k_max {
        let kf = (k + 1) as f64;
        ln_denom_beta
            .push(ln_denom_beta[k] + ((beta + 2.0) / 2.0 + kf).ln() - kf.ln());
        ln_denom_eta.push(ln_denom_eta[k] + ((eta + 2.0) / 2.0 + kf).ln() - kf.ln());
    }

    let mut sum = 0.0;
    let mut last_terms = [0.0f64; 3];
    for k in 0..=k_max {
        let inner: f64 = (0..=k)
            .map(|n| b[k - n] * (0.5 * (b[n].ln() + ln_c[n] - ln_denom_eta[k])).exp())
            .sum();
        let term = inner * inner * (-ln_denom_beta[k]).exp();
        sum += term;
        last_terms = [last_terms[1], last_terms[2], term];
    }
    let prefactor = beta / (beta + 2.0) * (eta + 1.0) / (eta + 2.0);

    let (tail_estimate, slow) = if k_max >= 2 && last_terms[0] > 0.0 {
        let ratio = (last_terms[2] / last_terms[0]).sqrt();
        if ratio < 1.0 {
            (prefactor * last_terms[2] * ratio / (1.0 - ratio), ratio > 0.999)
        } else {
            (f64::INFINITY, true)
        }
    } else {
        (0.0, false)
    };

    SrmEvaluation {
        beta,
        eta,
        k_max,
        value: prefactor * sum,
        tail_estimate,
        slow_convergence: slow,
    }
}

/// The same fidelity from the operator side:
/// Tr[ρ_β (I⊗τ_η^{−1/2}) ρ_η (I⊗τ_η^{−1/2})], block by block. The two-copy
/// states share their block vectors, so the trace collapses to
/// Σ_k w_k(β)·w_k(η)·(Σ_n Φ_k[n]²/√t_η[n])².
pub fn srm_trace_oracle(beta: f64, eta: f64, k_blocks: usize) -> f64 {
    let b = pair_binomials(k_blocks);
    let t_eta = tau_weights(eta, k_blocks);
    let mut total = 0.0;
    for k in 0..=k_blocks {
        let bracket: f64 = (0..=k).map(|n| (b[k - n] * b[n]) / t_eta[n].sqrt()).sum();
        total += rho_block_weight(beta, k) * rho_block_weight(eta, k) * bracket * bracket;
    }
    total
}

/// Result of the η-maximization.
#[derive(Debug, Clone, Copy)]
pub struct SrmOptimum {
    pub eta_star: f64,
    pub value: f64,
    /// the coarse scan looked multimodal and a dense-grid fallback was used
    pub grid_fallback: bool,
}

/// Maximize the square-root-measurement fidelity over the measurement width
/// η ∈ (0, 10β+20] by coarse log-scan plus golden-section refinement.
pub fn srm_optimize_eta(beta: f64, k_max: usize) -> SrmOptimum {
    assert!(beta > 0.0);
    let hi = 10.0 * beta + 20.0;
    let lo = (beta / 50.0).max(1e-3);
    let coarse: Vec<f64> = log_grid(lo, hi, 41);
    let values: Vec<f64> = coarse.iter().map(|&e| srm_fidelity(beta, e, k_max).value).collect();
    let peak = argmax(&values);

    // unimodality sanity: rising to the peak, falling after (tiny numerical
    // wiggles tolerated)
    let wiggle = 1e-12;
    let unimodal = values.windows(2).enumerate().all(|(i, w)| {
        if i < peak {
            w[1] >= w[0] - wiggle
        } else {
            w[1] <= w[0] + wiggle
        }
    });

    let (bracket_lo, bracket_hi, fallback) = if unimodal {
        let l = if peak == 0 { lo } else { coarse[peak - 1] };
        let r = if peak + 1 == coarse.len() { hi } else { coarse[peak + 1] };
        (l, r, false)
    } else {
        // dense grid, then refine around its best point
        let dense: Vec<f64> = log_grid(lo, hi, 400);
        let dv: Vec<f64> = dense.iter().map(|&e| srm_fidelity(beta, e, k_max).value).collect();
        let p = argmax(&dv);
        let l = if p == 0 { lo } else { dense[p - 1] };
        let r = if p + 1 == dense.len() { hi } else { dense[p + 1] };
        (l, r, true)
    };

    let (eta_star, value) = golden_max(
        |e| srm_fidelity(beta, e, k_max).value,
        bracket_lo,
        bracket_hi,
        1e-9,
    );
    SrmOptimum { eta_star, value, grid_fallback: fallback }
}

/// Row of the fidelity-versus-width table.
#[derive(Debug, Clone, Copy)]
pub struct SrmCurveRow {
    pub beta: f64,
    pub eta_star: f64,
    pub srm_value: f64,
    pub cft: f64,
    pub gap: f64,
}

/// Optimized square-root-measurement fidelity against the threshold over a
/// grid of prior widths.
pub fn srm_curve(beta_grid: &[f64], k_max: usize) -> Vec<SrmCurveRow> {
    beta_grid
        .iter()
        .map(|&beta| {
            let opt = srm_optimize_eta(beta, k_max);
            let cft = cft_squeezed(beta);
            SrmCurveRow {
                beta,
                eta_star: opt.eta_star,
                srm_value: opt.value,
                cft,
                gap: cft - opt.value,
            }
        })
        .collect()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n).map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = 0.618_033_988_749_894_9;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol * (1.0 + a.abs() + b.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
