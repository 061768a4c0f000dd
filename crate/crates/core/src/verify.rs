//! The release gate: every closed-form result is re-derived by at least one
//! independent numerical route at a pinned tolerance. Each criterion
//! returns a structured report; the acceptance test target and the CLI
//! `verify-all` command both drive these runners.

use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;

use crate::benchmark::{
    cft_coherent, cft_gaussian, cft_squeezed, gaussian_block_eigencheck, gaussian_cft_quadrature,
    gp_cft_numeric, squeezed_benchmark_eigen, OverlapKernel,
};
use crate::fock::GaussianParams;
use crate::priors::{
    density_coherent, density_gaussian, density_squeezed, gaussian_sampler_chi2,
    gaussian_theta_marginal, inverse_squeezing_cdf, sample_squeezing, squeezing_cdf,
    squeezing_marginal, stats,
};
use crate::specfun::{integrate, integrate_semi_inf};
use crate::teleport::{
    fidelity_avg_closed, fidelity_avg_mc, fidelity_avg_quadrature, threshold_r, ThresholdOutcome,
};

/// One bound check inside a criterion: pass ⇔ observed ≤ bound.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub bound: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.observed <= self.bound
    }

    /// How close the check came to its bound (1 = at the bound); bounds of
    /// exactly zero map to 0 or ∞ so report sorting stays meaningful.
    pub fn severity(&self) -> f64 {
        if self.bound > 0.0 {
            self.observed / self.bound
        } else if self.observed <= self.bound {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub wall_time: Duration,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    /// One pass/fail line, with the worst margin for context.
    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let worst = self.checks.iter().max_by(|a, b| a.severity().total_cmp(&b.severity()));
        match worst {
            Some(w) => format!(
                "[{status}] criterion {}: {} ({} checks, worst: {} = {:.3e} vs {:.1e}, {:.2}s)",
                self.id,
                self.title,
                self.checks.len(),
                w.name,
                w.observed,
                w.bound,
                self.wall_time.as_secs_f64()
            ),
            None => format!("[{status}] criterion {}: {} (no checks)", self.id, self.title),
        }
    }
}

/// Knobs for the suite. `quick` shrinks Monte Carlo sample counts and scan
/// grids (bounds stay identical); the default runs the criteria exactly as
/// stated.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub quick: bool,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { quick: false, seed: 7 }
    }
}

impl VerifyConfig {
    fn mc_samples(&self) -> usize {
        if self.quick {
            20_000
        } else {
            100_000
        }
    }
}

/// Run all eight criteria in order.
pub fn run_all(config: &VerifyConfig) -> Vec<CriterionReport> {
    vec![
        criterion_1_squeezed_operator_route(config),
        criterion_2_gaussian_quadrature(config),
        criterion_3_limit_recovery(config),
        criterion_4_block_eigencheck(config),
        criterion_5_srm_suite(config),
        criterion_6_teleportation(config),
        criterion_7_priors(config),
        criterion_8_gp_engine(config),
    ]
}

/// Criterion 1: flat spectrum of the squeezed-ensemble operator route.
pub fn criterion_1_squeezed_operator_route(_config: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    for &beta in &[0.5, 1.0, 2.0, 5.0] {
        let report = squeezed_benchmark_eigen(beta, 120, 15).expect("block construction");
        checks.push(Check {
            name: format!("beta={beta}: max |eigenvalue − (1+β)/(2+β)| over blocks k ≤ 15"),
            observed: report.max_flatness_dev,
            bound: 1e-8,
        });
        let worst_residual = report
            .blocks
            .iter()
            .map(|b| b.eigvec_residual)
            .fold(0.0f64, f64::max);
        checks.push(Check {
            name: format!("beta={beta}: worst transformed-block-vector residual"),
            observed: worst_residual,
            bound: 1e-8,
        });
    }
    CriterionReport {
        id: 1,
        title: "squeezed benchmark, operator route",
        checks,
        wall_time: start.elapsed(),
    }
}

/// Criterion 2: Gaussian benchmark by both quadrature routes on the 3×3 grid.
pub fn criterion_2_gaussian_quadrature(_config: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    for &lambda in &[0.2, 1.0, 5.0] {
        for &beta in &[0.2, 1.0, 5.0] {
            let q = gaussian_cft_quadrature(lambda, beta, 1e-8).expect("quadrature");
            checks.push(Check {
                name: format!("(λ={lambda}, β={beta}): Bessel-reduced route"),
                observed: q.i0_abs_discrepancy,
                bound: 1e-6,
            });
            checks.push(Check {
                name: format!("(λ={lambda}, β={beta}): fully reduced route"),
                observed: q.reduced_abs_discrepancy,
                bound: 1e-6,
            });
        }
    }
    CriterionReport {
        id: 2,
        title: "general Gaussian benchmark, quadrature routes",
        checks,
        wall_time: start.elapsed(),
    }
}

/// Criterion 3: width limits recover the simpler thresholds.
pub fn criterion_3_limit_recovery(_config: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    for &beta in &[1.0, 2.0] {
        let q = gaussian_cft_quadrature(1e3, beta, 1e-8).expect("quadrature");
        let target = cft_squeezed(beta);
        checks.push(Check {
            name: format!("λ=10³ surrogate vs squeezed threshold at β={beta} (Bessel route)"),
            observed: (q.i0_route - target).abs(),
            bound: 1e-3,
        });
        checks.push(Check {
            name: format!("λ=10³ surrogate vs squeezed threshold at β={beta} (reduced route)"),
            observed: (q.reduced_route - target).abs(),
            bound: 1e-3,
        });
    }
    checks.push(Check {
        name: "closed form at (10⁻³, 10⁻³) vs the fully random limit 1/4".into(),
        observed: (cft_gaussian(1e-3, 1e-3) - 0.25).abs(),
        bound: 2e-2,
    });
    CriterionReport { id: 3, title: "limit recovery", checks, wall_time: start.elapsed() }
}

/// Criterion 4: photon-number-block eigenvalues of the Gaussian ensemble.
pub fn criterion_4_block_eigencheck(config: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let k_max = if config.quick { 3 } else { 4 };
    let mut checks = Vec::new();
    for &(lambda, beta) in &[(1.0, 2.0), (0.5, 5.0)] {
        let report = gaussian_block_eigencheck(lambda, beta, k_max, 1e-4).expect("quadrature");
        checks.push(Check {
            name: format!("(λ={lambda}, β={beta}): quadrature failures"),
            observed: report.quad_failures.len() as f64,
            bound: 0.0,
        });
        checks.push(Check {
            name: format!("(λ={lambda}, β={beta}): |[A⁽⁰⁾]₀₀ − closed form|"),
            observed: (report.a00 - report.closed_form).abs(),
            bound: 1e-4,
        });
        let max_excess = report
            .blocks
            .iter()
            .flat_map(|b| b.eigenvalues.iter())
            .map(|&ev| ev - report.a00)
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check {
            name: format!("(λ={lambda}, β={beta}): max eigenvalue excess over [A⁽⁰⁾]₀₀, k ≤ {k_max}"),
            observed: max_excess,
            bound: 1e-4,
        });
    }
    CriterionReport {
        id: 4,
        title: "Gaussian block eigen-verification",
        checks,
        wall_time: start.elapsed(),
    }
}

/// Criterion 5: square-root-measurement suite.
pub fn criterion_5_srm_suite(_config: &VerifyConfig) -> CriterionReport {
    use crate::srm::{srm_fidelity, srm_optimize_eta, srm_trace_oracle};
    let start = Instant::now();
    let mut checks = Vec::new();
    for &beta in &[0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0] {
        let opt = srm_optimize_eta(beta, 200);
        checks.push(Check {
            name: format!("β={beta}: sup_η fidelity minus threshold"),
            observed: opt.value - cft_squeezed(beta),
            bound: 1e-9,
        });
        if beta == 30.0 {
            checks.push(Check {
                name: "β=30: relative gap to the threshold".into(),
                observed: (cft_squeezed(beta) - opt.value) / cft_squeezed(beta),
                bound: 0.01,
            });
        }
    }
    for &beta in &[0.8, 2.0, 5.0] {
        for &eta in &[1.0, 3.0, 6.0] {
            let series = srm_fidelity(beta, eta, 25).value;
            let trace = srm_trace_oracle(beta, eta, 25);
            checks.push(Check {
                name: format!("series vs block trace at (β={beta}, η={eta})"),
                observed: (series - trace).abs(),
                bound: 1e-8,
            });
        }
    }
    CriterionReport {
        id: 5,
        title: "square-root measurement suite",
        checks,
        wall_time: start.elapsed(),
    }
}

/// Criterion 6: teleportation fidelity routes and benchmark thresholds.
pub fn criterion_6_teleportation(config: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut worst_quad: f64 = 0.0;
    for &beta in &[0.3, 1.0, 2.0, 5.0, 20.0] {
        for &r in &[0.0, 0.5, 1.0, 2.0, 4.0] {
            let closed = fidelity_avg_closed(beta, r).expect("series");
            let quad = fidelity_avg_quadrature(beta, r, 1e-11).expect("quadrature");
            worst_quad = worst_quad.max((closed - quad.value).abs());
        }
    }
    checks.push(Check {
        name: "closed form vs quadrature, worst over the 5×5 grid".into(),
        observed: worst_quad,
        bound: 1e-8,
    });

    let (mean, se) = fidelity_avg_mc(2.0, 1.0, config.mc_samples(), config.seed);
    let closed = fidelity_avg_closed(2.0, 1.0).expect("series");
    checks.push(Check {
        name: "Monte Carlo pull |mean − closed|/se at (β=2, r=1)".into(),
        observed: (mean - closed).abs() / se,
        bound: 4.0,
    });

    match threshold_r(1e3, 0.0, 1e-6).expect("threshold") {
        ThresholdOutcome::Beats(r) => checks.push(Check {
            name: "β=10³, λ→0: any resource beats the coherent-limit benchmark".into(),
            observed: r,
            bound: 0.01,
        }),
        ThresholdOutcome::NeverBeats { .. } => checks.push(Check {
            name: "β=10³, λ→0: unexpectedly never beats".into(),
            observed: 1.0,
            bound: 0.0,
        }),
    }

    let points = if config.quick { 15 } else { 41 };
    let mut min_threshold = f64::INFINITY;
    for i in 0..points {
        let beta = (0.1f64.ln() + (500.0f64).ln() * i as f64 / (points - 1) as f64).exp();
        if let ThresholdOutcome::Beats(r) = threshold_r(beta, f64::INFINITY, 1e-5).expect("threshold")
        {
            min_threshold = min_threshold.min(r);
        }
    }
    checks.push(Check {
        name: "λ=∞: 1.151 minus min threshold over β ∈ [0.1, 50] (10 dB floor)".into(),
        observed: 1.151 - min_threshold,
        bound: 0.0,
    });
    CriterionReport { id: 6, title: "teleportation suite", checks, wall_time: start.elapsed() }
}

/// Criterion 7: prior normalizations, marginal identities, sampler tests.
pub fn criterion_7_priors(config: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    let two_pi = 2.0 * std::f64::consts::PI;

    // normalizations
    let coherent_mass = integrate_semi_inf(
        |x| two_pi * x * density_coherent(C64::new(x, 0.0), 0.8),
        1.0,
        1e-9,
    )
    .expect("quadrature");
    checks.push(Check {
        name: "coherent prior total mass".into(),
        observed: (coherent_mass.value - 1.0).abs(),
        bound: 1e-6,
    });
    let squeezed_mass = integrate_semi_inf(
        |s| two_pi * density_squeezed(s, 0.0, 2.0),
        1.0,
        1e-9,
    )
    .expect("quadrature");
    checks.push(Check {
        name: "squeezed prior total mass".into(),
        observed: (squeezed_mass.value - 1.0).abs(),
        bound: 1e-6,
    });
    let (lambda, beta) = (0.5f64, 2.0f64);
    let gaussian_mass = integrate_semi_inf(
        |s| {
            integrate_semi_inf(
                |x| two_pi * x * gaussian_theta_marginal(x, s, lambda, beta),
                2.0 / lambda.sqrt(),
                1e-9,
            )
            .map(|q| q.value)
            .unwrap_or(f64::NAN)
        },
        1.0,
        1e-7,
    )
    .expect("quadrature");
    checks.push(Check {
        name: "general Gaussian prior total mass".into(),
        observed: (gaussian_mass.value - 1.0).abs(),
        bound: 1e-6,
    });

    // marginal identities, pointwise
    let mut worst_alpha_marginal: f64 = 0.0;
    for &(s, theta) in &[(0.3f64, 0.0f64), (0.8, 1.2), (1.5, 4.0)] {
        let t: f64 = s.tanh();
        let su = (2.0 * lambda * (1.0 - t)).sqrt().recip();
        let sv = (2.0 * lambda * (1.0 + t)).sqrt().recip();
        let integral = integrate_semi_inf(
            |u| {
                4.0 * integrate_semi_inf(
                    |v| {
                        let alpha = C64::from_polar(1.0, theta / 2.0) * C64::new(u, v);
                        density_gaussian(&GaussianParams::new(alpha, s, theta), lambda, beta)
                    },
                    3.0 * sv,
                    1e-12,
                )
                .map(|q| q.value)
                .unwrap_or(f64::NAN)
            },
            3.0 * su,
            1e-10,
        )
        .expect("quadrature");
        worst_alpha_marginal =
            worst_alpha_marginal.max((integral.value - density_squeezed(s, theta, beta)).abs());
    }
    checks.push(Check {
        name: "∫d²α of the Gaussian prior vs the squeezed prior, pointwise".into(),
        observed: worst_alpha_marginal,
        bound: 1e-8,
    });

    let mut worst_theta_marginal: f64 = 0.0;
    for &(x, s) in &[(0.4, 0.3), (1.5, 1.0), (0.1, 2.0)] {
        let direct = integrate(
            |theta| {
                let p = GaussianParams::new(C64::new(x, 0.0), s, theta);
                density_gaussian(&p, lambda, beta)
            },
            0.0,
            two_pi,
            1e-12,
        )
        .expect("quadrature");
        worst_theta_marginal =
            worst_theta_marginal.max((direct.value - gaussian_theta_marginal(x, s, lambda, beta)).abs());
    }
    checks.push(Check {
        name: "θ-marginal with the Bessel factor, pointwise".into(),
        observed: worst_theta_marginal,
        bound: 1e-8,
    });

    // samplers
    let n = config.mc_samples();
    let mut rng = <rand_chacha::ChaCha12Rng as rand::SeedableRng>::seed_from_u64(config.seed);
    let samples: Vec<f64> = (0..n).map(|_| sample_squeezing(1.0, &mut rng).0).collect();
    let d = stats::ks_statistic(&samples, |s| squeezing_cdf(s, 1.0));
    checks.push(Check {
        name: format!("KS distance of the squeezing sampler (n={n})"),
        observed: d,
        bound: stats::ks_critical_001(n).max(0.006 * (100_000.0 / n as f64).sqrt()),
    });
    // inverse-CDF fixed point at u = 0
    checks.push(Check {
        name: "inverse CDF at u=0".into(),
        observed: inverse_squeezing_cdf(0.0, 1.0).abs(),
        bound: 0.0,
    });

    let chi2 = gaussian_sampler_chi2(lambda, beta, n, config.seed + 1);
    checks.push(Check {
        name: format!("χ² of the Gaussian sampler vs its density (dof={})", chi2.dof),
        observed: chi2.statistic,
        bound: chi2.critical_01,
    });

    // mode location sanity of the squeezing marginal
    let s_star = (1.5f64.sqrt()).acosh();
    let h = 1e-5;
    let deriv = (squeezing_marginal(s_star + h, 2.0) - squeezing_marginal(s_star - h, 2.0)) / (2.0 * h);
    checks.push(Check {
        name: "stationarity of the squeezing marginal at its analytic mode".into(),
        observed: deriv.abs(),
        bound: 1e-6,
    });

    CriterionReport { id: 7, title: "prior suite", checks, wall_time: start.elapsed() }
}

/// Criterion 8: generic engine reproduces the closed forms.
pub fn criterion_8_gp_engine(_config: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    for &lambda in &[0.5, 1.0, 2.0] {
        let v = gp_cft_numeric(&OverlapKernel::coherent(lambda), 1e-8).expect("quadrature");
        checks.push(Check {
            name: format!("coherent kernel at λ={lambda}"),
            observed: (v - cft_coherent(lambda)).abs(),
            bound: 1e-6,
        });
    }
    for &beta in &[1.0, 2.0, 5.0] {
        let v = gp_cft_numeric(&OverlapKernel::squeezed(beta), 1e-8).expect("quadrature");
        checks.push(Check {
            name: format!("squeezed kernel at β={beta}"),
            observed: (v - cft_squeezed(beta)).abs(),
            bound: 1e-6,
        });
    }
    CriterionReport { id: 8, title: "generic engine consistency", checks, wall_time: start.elapsed() }
}
