//! Truncated photon-number-basis representation of single-mode states and
//! operators: squeezed-vacuum expansions, displacement matrix elements,
//! displaced-squeezed amplitudes, and dense Hermitian eigensolving.

mod displacement;
mod eigen;
mod state;

pub use displacement::{displacement_matrix, displacement_matrix_element};
pub use eigen::{hermitian_eigen, HermitianEigen};
pub use state::{
    displaced_squeezed_amplitude, displaced_squeezed_wave, displaced_squeezed_wave_rotated,
    squeezed_tail_mass, squeezed_vacuum, vacuum_overlap_sq,
};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Max-norm threshold below which a matrix counts as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Tail mass above which a truncated squeezed-vacuum expansion is suspect.
pub const TAIL_MASS_WARN: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("cutoff {n_cut} is invalid: {reason}")]
    BadCutoff { n_cut: usize, reason: &'static str },
}

/// Displacement, squeezing degree, and squeezing phase of a pure Gaussian
/// state D(α)S(ξ)|0⟩ with ξ = s·e^{iθ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub alpha: C64,
    pub s: f64,
    pub theta: f64,
}

impl GaussianParams {
    /// Build parameters, reducing θ modulo 2π. Panics on s < 0.
    pub fn new(alpha: C64, s: f64, theta: f64) -> Self {
        assert!(s >= 0.0, "squeezing degree must be non-negative, got {s}");
        let two_pi = 2.0 * std::f64::consts::PI;
        Self { alpha, s, theta: theta.rem_euclid(two_pi) }
    }

    /// Complex squeezing parameter ξ = s·e^{iθ}.
    pub fn xi(&self) -> C64 {
        C64::from_polar(self.s, self.theta)
    }
}

/// Complex amplitude sequence over photon numbers 0..=cutoff.
#[derive(Debug, Clone)]
pub struct FockVector {
    amplitudes: Vec<C64>,
}

impl FockVector {
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Self {
        assert!(!amplitudes.is_empty());
        Self { amplitudes }
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Probability mass lost to truncation, clamped at zero.
    pub fn tail_mass(&self) -> f64 {
        (1.0 - self.norm_sq()).max(0.0)
    }

    /// True when the truncation tail is below [`TAIL_MASS_WARN`].
    pub fn tail_ok(&self) -> bool {
        self.tail_mass() <= TAIL_MASS_WARN
    }
}

/// Complex square matrix over a truncated Fock basis.
#[derive(Debug, Clone)]
pub struct FockOperator {
    mat: DMatrix<C64>,
    hermitian: bool,
}

impl FockOperator {
    /// Wrap a matrix, detecting hermiticity within [`HERMITICITY_TOL`].
    pub fn from_matrix(mat: DMatrix<C64>) -> Self {
        assert!(mat.is_square());
        let dev = hermiticity_deviation(&mat);
        Self { hermitian: dev <= HERMITICITY_TOL, mat }
    }

    /// Diagonal operator with real entries.
    pub fn from_real_diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut mat = DMatrix::<C64>::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            mat[(i, i)] = C64::new(e, 0.0);
        }
        Self { mat, hermitian: true }
    }

    pub fn cutoff(&self) -> usize {
        self.mat.nrows() - 1
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.diagonal().sum()
    }
}

fn hermiticity_deviation(mat: &DMatrix<C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..mat.nrows() {
        for j in i..mat.ncols() {
            dev = dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    dev
}
