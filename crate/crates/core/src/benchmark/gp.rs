//! Generic threshold engine for group-orbit ensembles: the threshold is the
//! ratio ∫p(g)·o(g)² dg / ∫p(g)·o(g) dg of prior-weighted powers of the
//! squared base overlap o(g), and the prior-free worst-case estimation
//! fidelity is the same ratio against the bare invariant measure.

use crate::fock::vacuum_overlap_sq;
use crate::priors::EnsembleSpec;
use crate::specfun::{ln_cosh, nested_integrate, Domain1D, QuadError};

/// A prior density, squared base overlap, and invariant-measure weight over
/// a low-dimensional coordinate chart of the group.
///
/// `prior_density` integrates to 1 against the bare coordinates (no measure
/// factor); `measure_weight` is the invariant-measure density in the same
/// coordinates and only enters the prior-free estimation integrals.
pub struct OverlapKernel {
    pub domains: Vec<Domain1D>,
    pub prior_density: KernelFn,
    pub overlap_sq: KernelFn,
    pub measure_weight: KernelFn,
    pub label: &'static str,
}

/// A function of one point of the kernel's coordinate chart.
pub type KernelFn = Box<dyn Fn(&[f64]) -> f64 + Sync>;

/// Borrowed figure-of-merit overlap for the estimation integrals.
pub type FigureFn<'a> = &'a (dyn Fn(&[f64]) -> f64 + Sync);

impl OverlapKernel {
    /// Coherent ensemble, coordinates (ρ = |α|,): folded radial chart of the
    /// plane, measure d²α/π.
    pub fn coherent(lambda: f64) -> Self {
        assert!(lambda > 0.0 && lambda.is_finite());
        Self {
            domains: vec![Domain1D::SemiInfinite { start: 0.0, scale: lambda.sqrt().recip() }],
            prior_density: Box::new(move |g| {
                let rho = g[0];
                2.0 * lambda * rho * (-lambda * rho * rho).exp()
            }),
            overlap_sq: Box::new(|g| (-g[0] * g[0]).exp()),
            measure_weight: Box::new(|g| 2.0 * g[0]),
            label: "coherent",
        }
    }

    /// Squeezed ensemble, coordinates (s,): phase folded into the measure.
    pub fn squeezed(beta: f64) -> Self {
        assert!(beta > 0.0 && beta.is_finite());
        Self {
            domains: vec![Domain1D::SemiInfinite { start: 0.0, scale: 2.0 / beta.min(4.0) }],
            prior_density: Box::new(move |g| {
                let s = g[0];
                beta * s.tanh() * (-beta * ln_cosh(s)).exp()
            }),
            overlap_sq: Box::new(|g| (-ln_cosh(g[0])).exp()),
            // sinh s cosh s, composed stably: tanh·e^{2 ln cosh}
            measure_weight: Box::new(|g| g[0].tanh() * (2.0 * ln_cosh(g[0])).exp()),
            label: "squeezed",
        }
    }

    /// General Gaussian ensemble in whitened coordinates (p, q, s): the
    /// displacement is rescaled along the squeezing axes so the prior
    /// factorizes as (4/π)·e^{−p²−q²}·p_β(s) over a quadrant × [0,∞); the
    /// base overlap becomes e^{−(p²+q²)/λ}/cosh s.
    pub fn gaussian(lambda: f64, beta: f64) -> Self {
        assert!(lambda > 0.0 && lambda.is_finite() && beta > 0.0 && beta.is_finite());
        Self {
            domains: vec![
                Domain1D::SemiInfinite { start: 0.0, scale: 1.0 },
                Domain1D::SemiInfinite { start: 0.0, scale: 1.0 },
                Domain1D::SemiInfinite { start: 0.0, scale: 2.0 / beta.min(4.0) },
            ],
            prior_density: Box::new(move |g| {
                let (p, q, s) = (g[0], g[1], g[2]);
                4.0 / std::f64::consts::PI
                    * (-p * p - q * q).exp()
                    * beta
                    * s.tanh()
                    * (-beta * ln_cosh(s)).exp()
            }),
            overlap_sq: Box::new(move |g| {
                let (p, q, s) = (g[0], g[1], g[2]);
                (-(p * p + q * q) / lambda - ln_cosh(s)).exp()
            }),
            // invariant measure d²α sinh s cosh³ s ds dθ in these coordinates
            measure_weight: Box::new(move |g| {
                let s = g[2];
                8.0 * std::f64::consts::PI / lambda * s.tanh() * (4.0 * ln_cosh(s)).exp()
            }),
            label: "gaussian",
        }
    }

    /// Estimation kernel for the squeezed problem with prior width β: the
    /// measured object carries the (3+β)-fold squeezed overlap (input mode
    /// plus the prior-generating modes), integrated against the bare
    /// invariant measure.
    pub fn squeezed_estimation(beta: f64) -> Self {
        assert!(beta > 0.0 && beta.is_finite());
        Self {
            domains: vec![Domain1D::SemiInfinite { start: 0.0, scale: 2.0 / beta.min(4.0) }],
            prior_density: Box::new(move |g| {
                let s = g[0];
                beta * s.tanh() * (-beta * ln_cosh(s)).exp()
            }),
            overlap_sq: Box::new(move |g| (-(3.0 + beta) * ln_cosh(g[0])).exp()),
            measure_weight: Box::new(|g| g[0].tanh() * (2.0 * ln_cosh(g[0])).exp()),
            label: "squeezed-estimation",
        }
    }
}

/// Threshold by the overlap-ratio formula: ∫p·o² / ∫p·o, each integral to
/// absolute tolerance tol·(denominator scale).
pub fn gp_cft_numeric(kernel: &OverlapKernel, tol: f64) -> Result<f64, QuadError> {
    let den = nested_integrate(
        &kernel.domains,
        &|g| (kernel.prior_density)(g) * (kernel.overlap_sq)(g),
        tol,
    )?;
    let num = nested_integrate(
        &kernel.domains,
        &|g| {
            let o = (kernel.overlap_sq)(g);
            (kernel.prior_density)(g) * o * o
        },
        tol * den,
    )?;
    Ok(num / den)
}

/// Worst-case estimation fidelity over the bare invariant measure:
/// ∫dg fig(g)·o(g) / ∫dg o(g), with fig defaulting to o itself. The prior
/// plays no role; square-summability of the kernel's overlap against its
/// measure is the caller's responsibility (divergence surfaces as a
/// tolerance failure).
pub fn gp_estimation_fidelity(
    kernel: &OverlapKernel,
    figure: Option<FigureFn<'_>>,
    tol: f64,
) -> Result<f64, QuadError> {
    let den = nested_integrate(
        &kernel.domains,
        &|g| (kernel.measure_weight)(g) * (kernel.overlap_sq)(g),
        tol,
    )?;
    let num = nested_integrate(
        &kernel.domains,
        &|g| {
            let o = (kernel.overlap_sq)(g);
            let fig = match figure {
                Some(f) => f(g),
                None => o,
            };
            (kernel.measure_weight)(g) * o * fig
        },
        tol * den,
    )?;
    Ok(num / den)
}

/// Monte Carlo route for the same ratio: sample the ensemble, average the
/// squared vacuum overlap and its square, and return the ratio estimate with
/// a linearized standard error.
pub fn gp_cft_monte_carlo(spec: &EnsembleSpec, n: usize, seed: u64) -> (f64, f64) {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut o_vals = Vec::with_capacity(n);
    for _ in 0..n {
        let params = spec.sample(&mut rng);
        o_vals.push(vacuum_overlap_sq(&params));
    }
    let nf = n as f64;
    let mean_o: f64 = o_vals.iter().sum::<f64>() / nf;
    let mean_o2: f64 = o_vals.iter().map(|o| o * o).sum::<f64>() / nf;
    let ratio = mean_o2 / mean_o;
    // delta method on the influence o² − ratio·o
    let var: f64 = o_vals
        .iter()
        .map(|o| {
            let infl = o * o - ratio * o;
            infl * infl
        })
        .sum::<f64>()
        / (nf - 1.0);
    let se = (var / nf).sqrt() / mean_o;
    (ratio, se)
}
