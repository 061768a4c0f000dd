//! Prior probability densities over Gaussian-state parameters, their
//! marginals, and exact samplers for Monte Carlo work.
//!
//! Conventions: the squeezed prior is a density on ds dθ over
//! [0,∞)×[0,2π); the coherent prior is a density on d²α; the general
//! Gaussian prior is a density on d²α ds dθ. Width parameters λ, β are
//! inverse widths; +∞ encodes the degenerate limits (λ→∞ pins α = 0,
//! β→∞ pins s = 0), which samplers honor exactly.

pub mod stats;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::fock::GaussianParams;
use crate::specfun::{bessel_i0_scaled, integrate, ln_cosh, one_minus_tanh, one_plus_tanh};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PriorError {
    #[error("width parameter must be positive, got {0}")]
    NonPositiveWidth(f64),
    #[error("density undefined at infinite width parameter (point mass)")]
    DegenerateWidth,
}

/// Which ensemble of pure Gaussian states is drawn, and how wide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    Coherent,
    Squeezed,
    GeneralGaussian,
}

/// Ensemble selector with inverse widths λ (displacement) and β (squeezing).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub lambda: f64,
    pub beta: f64,
}

impl EnsembleSpec {
    pub fn coherent(lambda: f64) -> Self {
        Self { kind: EnsembleKind::Coherent, lambda, beta: f64::INFINITY }
    }

    pub fn squeezed(beta: f64) -> Self {
        Self { kind: EnsembleKind::Squeezed, lambda: f64::INFINITY, beta }
    }

    pub fn gaussian(lambda: f64, beta: f64) -> Self {
        Self { kind: EnsembleKind::GeneralGaussian, lambda, beta }
    }

    pub fn validate(&self) -> Result<(), PriorError> {
        let check = |w: f64| {
            if w > 0.0 {
                Ok(())
            } else {
                Err(PriorError::NonPositiveWidth(w))
            }
        };
        match self.kind {
            EnsembleKind::Coherent => check(self.lambda),
            EnsembleKind::Squeezed => check(self.beta),
            EnsembleKind::GeneralGaussian => check(self.lambda).and(check(self.beta)),
        }
    }

    /// Draw one state from the ensemble (degenerate limits short-circuit to
    /// point masses at α = 0 / s = 0).
    pub fn sample<R: Rng>(&self, rng: &mut R) -> GaussianParams {
        match self.kind {
            EnsembleKind::Coherent => {
                GaussianParams::new(sample_coherent(self.lambda, rng), 0.0, 0.0)
            }
            EnsembleKind::Squeezed => {
                let (s, theta) = sample_squeezing(self.beta, rng);
                GaussianParams::new(C64::new(0.0, 0.0), s, theta)
            }
            EnsembleKind::GeneralGaussian => sample_gaussian_params(self.lambda, self.beta, rng),
        }
    }
}

/// Squeezing-and-phase prior p_β(s)/(2π) with p_β(s) = β sinh s/(cosh s)^{β+1}.
pub fn density_squeezed(s: f64, _theta: f64, beta: f64) -> f64 {
    assert!(beta > 0.0 && beta.is_finite(), "beta must be positive finite, got {beta}");
    if s < 0.0 {
        return 0.0;
    }
    squeezing_marginal(s, beta) / TWO_PI
}

/// The s-marginal p_β(s) = β sinh s (cosh s)^{−β−1}, stable at any s.
pub fn squeezing_marginal(s: f64, beta: f64) -> f64 {
    beta * s.tanh() * (-beta * ln_cosh(s)).exp()
}

/// CDF of p_β: F(s) = 1 − (cosh s)^{−β}.
pub fn squeezing_cdf(s: f64, beta: f64) -> f64 {
    -(-beta * ln_cosh(s)).exp_m1()
}

/// Inverse CDF, s = arccosh((1−u)^{−1/β}), evaluated without cancellation:
/// with t = −ln(1−u)/β, s = t + ln(1 + √(1−e^{−2t})).
pub fn inverse_squeezing_cdf(u: f64, beta: f64) -> f64 {
    assert!((0.0..1.0).contains(&u));
    let t = -(1.0 - u).ln() / beta;
    t + (-(-2.0 * t).exp_m1()).sqrt().ln_1p()
}

/// General Gaussian prior over (α, s, θ):
/// λβ/(2π²) e^{−λ|α|² + λ·Re(e^{−iθ}α²)·tanh s} sinh s (cosh s)^{−β−2}.
pub fn density_gaussian(params: &GaussianParams, lambda: f64, beta: f64) -> f64 {
    assert!(
        lambda > 0.0 && lambda.is_finite() && beta > 0.0 && beta.is_finite(),
        "widths must be positive finite, got lambda={lambda} beta={beta}"
    );
    let alpha = params.alpha;
    let re_part = (C64::from_polar(1.0, -params.theta) * alpha * alpha).re;
    let exponent =
        -lambda * alpha.norm_sqr() + lambda * re_part * params.s.tanh() - (beta + 1.0) * ln_cosh(params.s);
    lambda * beta / (2.0 * std::f64::consts::PI * std::f64::consts::PI)
        * params.s.tanh()
        * exponent.exp()
}

/// θ-marginal of the general Gaussian prior at |α| = x:
/// π^{−1} λβ e^{−λx²} sinh s (cosh s)^{−β−2} I₀(λx² tanh s),
/// computed through the scaled Bessel function so large arguments stay finite.
pub fn gaussian_theta_marginal(x: f64, s: f64, lambda: f64, beta: f64) -> f64 {
    let t = s.tanh();
    let bessel_arg = lambda * x * x * t;
    lambda * beta / std::f64::consts::PI
        * s.tanh()
        * (-(beta + 1.0) * ln_cosh(s) - lambda * x * x * (1.0 - t)).exp()
        * bessel_i0_scaled(bessel_arg)
}

/// Coherent-state prior (λ/π) e^{−λ|α|²}.
pub fn density_coherent(alpha: C64, lambda: f64) -> f64 {
    assert!(lambda > 0.0 && lambda.is_finite());
    lambda / std::f64::consts::PI * (-lambda * alpha.norm_sqr()).exp()
}

/// Draw (s, θ): θ uniform on [0, 2π), s by exact inverse-CDF sampling.
/// β = ∞ pins s = 0.
pub fn sample_squeezing<R: Rng>(beta: f64, rng: &mut R) -> (f64, f64) {
    assert!(beta > 0.0, "beta must be positive, got {beta}");
    let theta = TWO_PI * rng.gen::<f64>();
    if beta.is_infinite() {
        return (0.0, theta);
    }
    let s = inverse_squeezing_cdf(rng.gen::<f64>(), beta);
    (s, theta)
}

/// Draw (α, s, θ) from the general Gaussian prior.
///
/// The s-marginal is exactly p_β (the α-integral of the prior), so (s, θ)
/// come from [`sample_squeezing`]; conditionally on them, α = e^{iθ/2}(u+iv)
/// with independent u ~ N(0, 1/(2λ(1−tanh s))) and v ~ N(0, 1/(2λ(1+tanh s))).
/// λ = ∞ pins α = 0.
pub fn sample_gaussian_params<R: Rng>(lambda: f64, beta: f64, rng: &mut R) -> GaussianParams {
    assert!(lambda > 0.0, "lambda must be positive, got {lambda}");
    let (s, theta) = sample_squeezing(beta, rng);
    if lambda.is_infinite() {
        return GaussianParams::new(C64::new(0.0, 0.0), s, theta);
    }
    let sigma_u = (2.0 * lambda * one_minus_tanh(s)).sqrt().recip();
    let sigma_v = (2.0 * lambda * one_plus_tanh(s)).sqrt().recip();
    let gu: f64 = rng.sample(StandardNormal);
    let gv: f64 = rng.sample(StandardNormal);
    let w = C64::new(sigma_u * gu, sigma_v * gv);
    GaussianParams::new(C64::from_polar(1.0, theta / 2.0) * w, s, theta)
}

/// Draw α from the coherent prior; λ = ∞ pins α = 0.
pub fn sample_coherent<R: Rng>(lambda: f64, rng: &mut R) -> C64 {
    assert!(lambda > 0.0);
    if lambda.is_infinite() {
        return C64::new(0.0, 0.0);
    }
    let sigma = (2.0 * lambda).sqrt().recip();
    let gu: f64 = rng.sample(StandardNormal);
    let gv: f64 = rng.sample(StandardNormal);
    C64::new(sigma * gu, sigma * gv)
}

/// Outcome of the binned χ² sampler-vs-density test.
#[derive(Debug, Clone)]
pub struct Chi2Report {
    pub statistic: f64,
    pub dof: usize,
    pub critical_01: f64,
    pub pass: bool,
}

/// Binned χ² test of [`sample_gaussian_params`] against [`density_gaussian`].
///
/// Samples are reduced to (u, v, s) where u + iv = e^{−iθ/2}α is the
/// displacement in the frame of the squeezing axis; the prior is independent
/// of θ there, and each slice in s is a centered Gaussian in (u, v). The
/// expected mass of a box is the s-integral of [`density_gaussian`]'s own
/// (u, v)-slab probabilities (erf differences), so the counts check the
/// density formula, not the sampler's internals. Boxes are empirical
/// sextiles in s and quartiles in u and v, keeping expected counts well away
/// from the χ² small-count regime.
pub fn gaussian_sampler_chi2(lambda: f64, beta: f64, n: usize, seed: u64) -> Chi2Report {
    use rand::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut us = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    let mut ss = Vec::with_capacity(n);
    for _ in 0..n {
        let p = sample_gaussian_params(lambda, beta, &mut rng);
        let w = C64::from_polar(1.0, -p.theta / 2.0) * p.alpha;
        us.push(w.re);
        vs.push(w.im);
        ss.push(p.s);
    }

    const NS: usize = 6;
    const NU: usize = 4;
    let s_edges = quantile_edges(&ss, NS, false);
    let u_edges = quantile_edges(&us, NU, true);
    let v_edges = quantile_edges(&vs, NU, true);

    let mut observed = vec![0.0f64; NS * NU * NU];
    for i in 0..n {
        let bs = bin_of(&s_edges, ss[i]);
        let bu = bin_of(&u_edges, us[i]);
        let bv = bin_of(&v_edges, vs[i]);
        observed[(bs * NU + bu) * NU + bv] += 1.0;
    }

    // expected mass of a box: ∫_{s0}^{s1} p_β(s)·Gu(s)·Gv(s) ds, where Gu/Gv
    // are the conditional Gaussian slab probabilities of density_gaussian's
    // quadratic form, ½[erf(√(λ(1∓tanh s))·hi) − erf(√(λ(1∓tanh s))·lo)]
    let mut expected = vec![0.0f64; NS * NU * NU];
    let slab = |a: f64, lo: f64, hi: f64| 0.5 * (libm::erf(a * hi) - libm::erf(a * lo));
    for bs in 0..NS {
        let (s0, s1) = (s_edges[bs], s_edges[bs + 1]);
        for bu in 0..NU {
            for bv in 0..NU {
                let mass = integrate(
                    |s| {
                        let au = (lambda * one_minus_tanh(s)).sqrt();
                        let av = (lambda * one_plus_tanh(s)).sqrt();
                        squeezing_marginal(s, beta)
                            * slab(au, u_edges[bu], u_edges[bu + 1])
                            * slab(av, v_edges[bv], v_edges[bv + 1])
                    },
                    s0,
                    s1,
                    1e-9,
                )
                .map(|q| q.value)
                .unwrap_or(0.0);
                expected[(bs * NU + bu) * NU + bv] = mass;
            }
        }
    }
    let total: f64 = expected.iter().sum();
    let statistic: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| {
            let e = e / total * n as f64;
            (o - e) * (o - e) / e
        })
        .sum();
    let dof = NS * NU * NU - 1;
    let critical_01 = stats::chi2_quantile(0.99, dof);
    Chi2Report { statistic, dof, critical_01, pass: statistic <= critical_01 }
}

fn quantile_edges(values: &[f64], bins: usize, signed: bool) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    let mut edges = Vec::with_capacity(bins + 1);
    // stretch the outer edges well past the sample range; the mass lost
    // beyond them is far below one expected count at these sample sizes
    edges.push(if signed { sorted[0] * 1.5 - 1.0 } else { 0.0 });
    for i in 1..bins {
        edges.push(sorted[i * n / bins]);
    }
    edges.push(sorted[n - 1] * 1.5 + 1.0);
    edges
}

fn bin_of(edges: &[f64], x: f64) -> usize {
    let k = edges.partition_point(|&e| e <= x);
    k.saturating_sub(1).min(edges.len() - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::integrate_semi_inf;
    use rand::SeedableRng;

    #[test]
    fn squeezed_density_normalizes() {
        let beta = 2.0;
        let q = integrate_semi_inf(|s| squeezing_marginal(s, beta), 1.0, 1e-11).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10, "{}", q.value);
        // the (s, θ) density carries the 1/2π
        assert!(
            (density_squeezed(0.7, 1.0, beta) * TWO_PI - squeezing_marginal(0.7, beta)).abs()
                < 1e-15
        );
    }

    #[test]
    fn squeezed_density_mode_location() {
        // argmax of sinh s (cosh s)^{−3} at β = 2: cosh² s = 3/2
        let beta = 2.0;
        let s_star = (1.5f64.sqrt()).acosh();
        assert!((s_star - 0.658478948462408).abs() < 1e-12);
        let f = |s: f64| squeezing_marginal(s, beta);
        let h = 1e-5;
        assert!(f(s_star) > f(s_star - h) && f(s_star) > f(s_star + h));
        let deriv = (f(s_star + h) - f(s_star - h)) / (2.0 * h);
        assert!(deriv.abs() < 1e-6);
    }

    #[test]
    fn squeezed_density_vanishes_at_zero() {
        assert_eq!(density_squeezed(0.0, 0.3, 5.0), 0.0);
        assert_eq!(density_squeezed(-1.0, 0.3, 5.0), 0.0);
    }

    #[test]
    fn cdf_and_inverse_are_mutually_consistent() {
        let beta = 1.7;
        for &u in &[0.0, 1e-12, 0.2, 0.5, 0.9, 0.999, 1.0 - 1e-12] {
            let s = inverse_squeezing_cdf(u, beta);
            assert!((squeezing_cdf(s, beta) - u).abs() < 1e-9, "u={u}");
        }
        assert_eq!(inverse_squeezing_cdf(0.0, beta), 0.0);
    }

    #[test]
    fn gaussian_density_alpha_marginal_recovers_squeezed_prior() {
        // ∫ d²α p^G = p^S pointwise: integrate in the rotated frame where
        // the quadratic form is diagonal (α = e^{iθ/2}(u+iv))
        let (lambda, beta) = (0.5f64, 2.0f64);
        for &(s, theta) in &[(0.3f64, 0.0f64), (0.8, 1.2), (1.5, 4.0), (0.05, 2.2)] {
            let t: f64 = s.tanh();
            let integrand = |u: f64, v: f64| {
                let alpha = C64::from_polar(1.0, theta / 2.0) * C64::new(u, v);
                density_gaussian(&GaussianParams::new(alpha, s, theta), lambda, beta)
            };
            let su = (2.0 * lambda * (1.0 - t)).sqrt().recip();
            let sv = (2.0 * lambda * (1.0 + t)).sqrt().recip();
            let outer = integrate_semi_inf(
                |u| {
                    4.0 * integrate_semi_inf(|v| integrand(u, v), 3.0 * sv, 1e-12)
                        .unwrap()
                        .value
                },
                3.0 * su,
                1e-10,
            )
            .unwrap();
            let expected = density_squeezed(s, theta, beta);
            assert!(
                (outer.value - expected).abs() < 1e-8,
                "s={s} theta={theta}: {} vs {expected}",
                outer.value
            );
        }
    }

    #[test]
    fn gaussian_theta_marginal_matches_direct_integral() {
        let (lambda, beta) = (0.5, 2.0);
        for &(x, s) in &[(0.4, 0.3), (1.5, 1.0), (2.5, 0.2), (0.1, 2.0)] {
            let direct = integrate(
                |theta| {
                    // α = x e^{iφ}: any φ works; take φ = 0 so Re(e^{−iθ}α²) = x² cos θ
                    let p = GaussianParams::new(C64::new(x, 0.0), s, theta);
                    density_gaussian(&p, lambda, beta)
                },
                0.0,
                TWO_PI,
                1e-12,
            )
            .unwrap();
            let closed = gaussian_theta_marginal(x, s, lambda, beta);
            assert!(
                (direct.value - closed).abs() < 1e-8 * closed.max(1e-4),
                "x={x} s={s}: {} vs {closed}",
                direct.value
            );
        }
    }

    #[test]
    fn gaussian_density_total_mass_is_one() {
        let (lambda, beta) = (0.5f64, 2.0f64);
        let q = integrate_semi_inf(
            |s| {
                integrate_semi_inf(
                    |x| TWO_PI * x * gaussian_theta_marginal(x, s, lambda, beta),
                    2.0 / lambda.sqrt(),
                    1e-9,
                )
                .unwrap()
                .value
            },
            1.0,
            1e-7,
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-6, "total = {}", q.value);
    }

    #[test]
    fn gaussian_prior_factors_through_overlap_powers() {
        // the prior equals λβ/(2π²) × (vacuum overlap of the state with the
        // displacement rescaled by √λ) × (vacuum overlap of the undisplaced
        // state)^{4+β} × the invariant-measure weight sinh s cosh³s — the
        // product structure is checked numerically, not assumed, because the
        // two sides carry opposite-looking sign conventions in the exponent
        use crate::fock::vacuum_overlap_sq;
        let (lambda, beta) = (0.7f64, 2.3f64);
        for &(ax, ay, s, theta) in &[
            (0.4f64, -1.1f64, 0.6f64, 0.9f64),
            (1.2, 0.3, 1.4, 4.1),
            (0.0, 0.8, 0.2, 2.5),
            (2.0, 0.0, 2.2, 0.0),
        ] {
            let alpha = C64::new(ax, ay);
            let p = GaussianParams::new(alpha, s, theta);
            let direct = density_gaussian(&p, lambda, beta);
            let rescaled = GaussianParams::new(alpha * lambda.sqrt(), s, theta);
            let displaced_factor = vacuum_overlap_sq(&rescaled);
            let squeezed_factor = (-(4.0 + beta) * ln_cosh(s)).exp();
            let measure = s.sinh() * s.cosh().powi(3);
            let assembled = lambda * beta / (2.0 * std::f64::consts::PI.powi(2))
                * displaced_factor
                * squeezed_factor
                * measure;
            assert!(
                (direct - assembled).abs() <= 1e-13 * direct.max(1e-300),
                "({ax},{ay},{s},{theta}): {direct} vs {assembled}"
            );
        }
    }

    #[test]
    fn squeezed_prior_factors_through_overlap_powers() {
        // p_β(s)/2π = β · |⟨0|ξ⟩|^{2(2+β)} · sinh s cosh s / 2π, with the
        // prefactor β playing the normalizing reciprocal-integral role
        let beta = 1.7f64;
        for &s in &[0.1f64, 0.7, 1.9, 3.5] {
            let direct = density_squeezed(s, 0.0, beta);
            let overlap_pow = (-(2.0 + beta) * ln_cosh(s)).exp();
            let measure = s.sinh() * s.cosh() / TWO_PI;
            let assembled = beta * overlap_pow * measure;
            assert!((direct - assembled).abs() <= 1e-14 * direct, "s={s}");
        }
        // and that prefactor is the reciprocal of the overlap-power integral
        // ∫ |⟨0|ξ⟩|^{2(2+β)} sinh s cosh s ds, log-composed so the measure's
        // growth cancels against the overlap's decay before exponentiation
        let integral = integrate_semi_inf(
            |s| ((2.0 - (2.0 + beta)) * ln_cosh(s)).exp() * s.tanh(),
            1.0,
            1e-11,
        )
        .unwrap();
        assert!((integral.value - 1.0 / beta).abs() < 1e-9, "{}", integral.value);
    }

    #[test]
    fn coherent_density_basics() {
        assert!((density_coherent(C64::new(0.0, 0.0), 2.0) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        let lambda = 0.8f64;
        let q = integrate_semi_inf(
            |x| TWO_PI * x * density_coherent(C64::new(x, 0.0), lambda),
            lambda.sqrt().recip(),
            1e-13,
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_limit_of_gaussian_prior() {
        // β = 10³ surrogate: ∫ d²ξ p^G → p^C within 1e−3 pointwise on |α| ≤ 3
        let (lambda, beta) = (1.0, 1e3);
        for &x in &[0.0f64, 0.5, 1.0, 2.0, 3.0] {
            let integral = integrate_semi_inf(
                |s| gaussian_theta_marginal(x, s, lambda, beta),
                0.05,
                1e-9,
            )
            .unwrap();
            let target = density_coherent(C64::new(x, 0.0), lambda);
            assert!(
                (integral.value - target).abs() < 1e-3,
                "x={x}: {} vs {target}",
                integral.value
            );
        }
    }

    #[test]
    fn squeezing_sampler_ks_test() {
        use rand::SeedableRng;
        let beta = 1.0;
        let n = 100_000;
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let samples: Vec<f64> = (0..n).map(|_| sample_squeezing(beta, &mut rng).0).collect();
        let d = stats::ks_statistic(&samples, |s| squeezing_cdf(s, beta));
        assert!(d < 0.006, "KS distance {d}");
        assert!(d < stats::ks_critical_001(n) * 1.2, "KS distance {d}");
    }

    #[test]
    fn squeezing_sampler_sech_moment() {
        // E[1/cosh s] = β/(β+1) = 3/4 at β = 3
        let beta = 3.0;
        let n = 100_000;
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let vals: Vec<f64> =
            (0..n).map(|_| 1.0 / sample_squeezing(beta, &mut rng).0.cosh()).collect();
        let (mean, se) = stats::mean_and_stderr(&vals);
        assert!((mean - 0.75).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn gaussian_sampler_isotropic_at_pinned_s() {
        // β = ∞ pins s = 0; both quadratures of e^{−iθ/2}α then have
        // variance 1/(2λ)
        let lambda = 2.0;
        let n = 100_000;
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let mut us = Vec::with_capacity(n);
        let mut vs = Vec::with_capacity(n);
        for _ in 0..n {
            let p = sample_gaussian_params(lambda, f64::INFINITY, &mut rng);
            assert_eq!(p.s, 0.0);
            let w = C64::from_polar(1.0, -p.theta / 2.0) * p.alpha;
            us.push(w.re * w.re);
            vs.push(w.im * w.im);
        }
        let target = 1.0 / (2.0 * lambda);
        let (mu, se_u) = stats::mean_and_stderr(&us);
        let (mv, se_v) = stats::mean_and_stderr(&vs);
        assert!((mu - target).abs() < 4.0 * se_u, "{mu} vs {target}");
        assert!((mv - target).abs() < 4.0 * se_v, "{mv} vs {target}");
    }

    #[test]
    fn gaussian_sampler_alpha_second_moment_vs_quadrature() {
        let (lambda, beta) = (1.0, 5.0);
        let n = 100_000;
        let mut rng = ChaCha12Rng::seed_from_u64(44);
        let vals: Vec<f64> = (0..n)
            .map(|_| sample_gaussian_params(lambda, beta, &mut rng).alpha.norm_sqr())
            .collect();
        let (mean, se) = stats::mean_and_stderr(&vals);
        let quad = integrate_semi_inf(
            |s| {
                integrate_semi_inf(
                    |x| TWO_PI * x * x * x * gaussian_theta_marginal(x, s, lambda, beta),
                    2.0,
                    1e-10,
                )
                .unwrap()
                .value
            },
            0.5,
            1e-8,
        )
        .unwrap();
        assert!((mean - quad.value).abs() < 3.0 * se, "{mean} vs {} (se {se})", quad.value);
    }

    #[test]
    fn coherent_sampler_second_moment() {
        let lambda = 4.0;
        let n = 100_000;
        let mut rng = ChaCha12Rng::seed_from_u64(45);
        let vals: Vec<f64> = (0..n).map(|_| sample_coherent(lambda, &mut rng).norm_sqr()).collect();
        let (mean, se) = stats::mean_and_stderr(&vals);
        assert!((mean - 0.25).abs() < 3.0 * se);
    }

    #[test]
    fn gaussian_sampler_chi2_passes() {
        let report = gaussian_sampler_chi2(0.5, 2.0, 100_000, 46);
        assert!(
            report.pass,
            "chi2 {} vs critical {} (dof {})",
            report.statistic, report.critical_01, report.dof
        );
    }

    #[test]
    fn conditional_covariance_positive_definite() {
        // variances 1/(2λ(1∓tanh s)) stay positive and finite far past the
        // point where naive 1 − tanh s underflows (s ≈ 19)
        for &s in &[0.0f64, 0.5, 2.0, 10.0, 40.0, 300.0] {
            let omt = one_minus_tanh(s);
            assert!(omt > 0.0, "s={s}");
            assert!((2.0 * omt).recip().is_finite(), "s={s}");
            assert!(one_plus_tanh(s) > 0.0);
        }
    }

    #[test]
    fn ensemble_spec_validation_and_sampling() {
        assert!(EnsembleSpec::coherent(1.0).validate().is_ok());
        assert!(EnsembleSpec::coherent(0.0).validate().is_err());
        assert!(EnsembleSpec::gaussian(1.0, -2.0).validate().is_err());
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let p = EnsembleSpec::squeezed(2.0).sample(&mut rng);
        assert_eq!(p.alpha, C64::new(0.0, 0.0));
        let p = EnsembleSpec::coherent(f64::INFINITY).sample(&mut rng);
        assert_eq!(p.alpha, C64::new(0.0, 0.0));
    }

    proptest::proptest! {
        #[test]
        fn densities_nonnegative(
            s in 0.0f64..5.0,
            theta in 0.0f64..6.28,
            x in -3.0f64..3.0,
            y in -3.0f64..3.0,
        ) {
            let p = GaussianParams::new(C64::new(x, y), s, theta);
            proptest::prop_assert!(density_squeezed(s, theta, 2.0) >= 0.0);
            proptest::prop_assert!(density_gaussian(&p, 0.7, 1.3) >= 0.0);
            proptest::prop_assert!(density_coherent(p.alpha, 1.1) >= 0.0);
            proptest::prop_assert!(gaussian_theta_marginal(x.abs(), s, 0.7, 1.3) >= 0.0);
        }

        #[test]
        fn inverse_cdf_monotone(u1 in 0.001f64..0.999, u2 in 0.001f64..0.999) {
            let beta = 2.5;
            let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
            proptest::prop_assert!(
                inverse_squeezing_cdf(lo, beta) <= inverse_squeezing_cdf(hi, beta)
            );
        }
    }
}
