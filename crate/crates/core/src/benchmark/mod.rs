//! Classical fidelity thresholds for measure-and-prepare strategies on pure
//! single-mode Gaussian ensembles: closed forms, the operator route over
//! paired Fock blocks, the generic overlap-ratio engine, Gaussian-case
//! quadrature, and the photon-number-block eigenvalue verification.

mod block_eigen;
mod gaussian_quad;
mod gp;
mod pair_ensemble;

pub use block_eigen::{gaussian_block_eigencheck, BlockEigenError, BlockEigenReport, BlockSpectrum};
pub use gaussian_quad::{gaussian_cft_quadrature, GaussianQuadrature};
pub use gp::{
    gp_cft_monte_carlo, gp_cft_numeric, gp_estimation_fidelity, FigureFn, KernelFn,
    OverlapKernel,
};
pub use pair_ensemble::{
    pair_binomials, rho_beta, rho_block_weight, squeezed_benchmark_eigen, tau_beta, tau_weights,
    BlockFlatness, SqueezedEigenReport, TwoModeBlockOperator,
};

/// How a benchmark number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    FockEigen,
    Quadrature,
    MonteCarlo,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::ClosedForm => "closed-form",
            Method::FockEigen => "fock-eigen",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte-carlo",
        };
        f.write_str(s)
    }
}

/// Numeric knobs that produced a benchmark value.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ResultMetadata {
    pub n_cut: Option<usize>,
    pub k_max: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

/// A closed-form threshold next to an independently computed value.
#[derive(Debug, Clone)]
pub struct BenchmarkResult {
    pub closed_form: f64,
    pub numeric: f64,
    pub abs_discrepancy: f64,
    pub method: Method,
    pub metadata: ResultMetadata,
}

impl BenchmarkResult {
    pub fn new(closed_form: f64, numeric: f64, method: Method, metadata: ResultMetadata) -> Self {
        Self {
            closed_form,
            numeric,
            abs_discrepancy: (closed_form - numeric).abs(),
            method,
            metadata,
        }
    }
}

// (1+x)/(2+x), with the x = ∞ limit pinned to 1 so degenerate widths stay on
// one code path.
fn width_ratio(x: f64) -> f64 {
    assert!(x >= 0.0, "width parameter must be non-negative, got {x}");
    if x.is_infinite() {
        1.0
    } else {
        (1.0 + x) / (2.0 + x)
    }
}

/// Coherent-ensemble threshold (1+λ)/(2+λ).
pub fn cft_coherent(lambda: f64) -> f64 {
    width_ratio(lambda)
}

/// Squeezed-ensemble threshold (1+β)/(2+β).
pub fn cft_squeezed(beta: f64) -> f64 {
    width_ratio(beta)
}

/// General Gaussian threshold (1+λ)(1+β)/((2+λ)(2+β)). Infinite widths
/// reproduce the coherent (β→∞) and squeezed (λ→∞) thresholds.
pub fn cft_gaussian(lambda: f64, beta: f64) -> f64 {
    width_ratio(lambda) * width_ratio(beta)
}
