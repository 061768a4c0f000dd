//! Eigenvalue verification of the general Gaussian threshold on the
//! fixed-total-photon-number blocks of the two-copy operator
//! (I⊗τ^{−1/2}) ρ (I⊗τ^{−1/2}).
//!
//! Block k is the (k+1)×(k+1) Hermitian matrix
//!   [A^(k)]_{mn} = ∫ p(α,s,θ) ψ_n ψ_{k−n} (ψ_m ψ_{k−m})* dg / √(t_n t_m),
//! with ψ_j = ⟨j|D(α)S(ξ)|0⟩ and t_n the diagonal weights of the ensemble
//! average, themselves computed by the same quadrature so both sides share
//! discretization error. The squeezing phase factors e^{ijθ/2} cancel
//! inside every product here, so the θ-integral contributes exactly 2π and
//! the working chart is the whitened (p, q, s) with α = e^{iθ/2}(u+iv),
//! u = p/√(λ(1−tanh s)), v = q/√(λ(1+tanh s)). Products are even under the
//! sign flips of p and q (quadrant folding ×4) and real after adding the
//! conjugate pair, so entries come out real symmetric.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{cft_gaussian, ResultMetadata};
use crate::fock::{displaced_squeezed_wave_rotated, hermitian_eigen, FockError, FockOperator};
use crate::specfun::{
    ln_cosh, nested_integrate, one_minus_tanh, one_plus_tanh, Domain1D, QuadError,
};

/// Eigenvalues of one total-photon-number block.
#[derive(Debug, Clone)]
pub struct BlockSpectrum {
    pub k: usize,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BlockEigenReport {
    pub lambda: f64,
    pub beta: f64,
    /// quadrature-computed ensemble-average weights t_n, n = 0..=k_max
    pub t_weights: Vec<f64>,
    pub blocks: Vec<BlockSpectrum>,
    /// the (0,0) element of the k = 0 block, r₀₀/t₀
    pub a00: f64,
    pub closed_form: f64,
    pub max_eigenvalue: f64,
    /// entries whose quadrature failed, as (k, m, n)
    pub quad_failures: Vec<(usize, usize, usize)>,
    pub metadata: ResultMetadata,
}

#[derive(Debug, thiserror::Error)]
pub enum BlockEigenError {
    #[error("quadrature failed for every route: {0}")]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Eigen(#[from] FockError),
}

/// Build and diagonalize the photon-number blocks k = 0..=k_max of the
/// Gaussian-ensemble operator, verifying that the largest eigenvalue is the
/// (0,0) element, which in turn should equal the closed-form threshold.
/// Cost grows quickly with k_max; k_max ≤ 6 is the intended range.
pub fn gaussian_block_eigencheck(
    lambda: f64,
    beta: f64,
    k_max: usize,
    quad_tol: f64,
) -> Result<BlockEigenReport, BlockEigenError> {
    assert!(lambda > 0.0 && lambda.is_finite() && beta > 0.0 && beta.is_finite());
    assert!(k_max <= 6, "block construction cost grows as k²·quadrature; got k_max={k_max}");

    // prior s-tail (cosh s)^{−β} below 1e−12, Gaussian tails below e^{−42}
    let s_max = (12.0 * std::f64::consts::LN_10 / beta + 2.0).min(400.0);
    let domains = [
        Domain1D::Finite(0.0, 6.5),
        Domain1D::Finite(0.0, 6.5),
        Domain1D::Finite(0.0, s_max),
    ];
    let entry_tol = quad_tol * 1e-3;

    // weight·F(wave) integrals over the whitened chart
    let integral = |f: &(dyn Fn(&[C64]) -> f64 + Sync), tol: f64| -> Result<f64, QuadError> {
        nested_integrate(
            &domains,
            &|g: &[f64]| {
                let (p, q, s) = (g[0], g[1], g[2]);
                let weight = 4.0 / std::f64::consts::PI
                    * (-p * p - q * q).exp()
                    * beta
                    * s.tanh()
                    * (-beta * ln_cosh(s)).exp();
                if weight == 0.0 {
                    return 0.0;
                }
                let u = p / (lambda * one_minus_tanh(s)).sqrt();
                let v = q / (lambda * one_plus_tanh(s)).sqrt();
                let wave = displaced_squeezed_wave_rotated(k_max, u, v, s);
                weight * f(&wave)
            },
            tol,
        )
    };

    let mut quad_failures = Vec::new();

    let mut t_weights = Vec::with_capacity(k_max + 1);
    for n in 0..=k_max {
        match integral(&move |wave: &[C64]| wave[n].norm_sqr(), entry_tol) {
            Ok(v) => t_weights.push(v),
            Err(QuadError::ToleranceNotMet { value, .. }) => {
                quad_failures.push((usize::MAX, n, n));
                t_weights.push(value);
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut blocks = Vec::with_capacity(k_max + 1);
    let mut max_eigenvalue = f64::NEG_INFINITY;
    let mut a00 = f64::NAN;
    for k in 0..=k_max {
        let dim = k + 1;
        let mut mat = DMatrix::<C64>::zeros(dim, dim);
        for m in 0..dim {
            for n in m..dim {
                let raw = integral(
                    &move |wave: &[C64]| {
                        (wave[n] * wave[k - n] * (wave[m] * wave[k - m]).conj()).re
                    },
                    entry_tol,
                );
                let value = match raw {
                    Ok(v) => v,
                    Err(QuadError::ToleranceNotMet { value, .. }) => {
                        quad_failures.push((k, m, n));
                        value
                    }
                    Err(e) => return Err(e.into()),
                };
                let normalized = value / (t_weights[m] * t_weights[n]).sqrt();
                mat[(m, n)] = C64::new(normalized, 0.0);
                mat[(n, m)] = C64::new(normalized, 0.0);
            }
        }
        if k == 0 {
            a00 = mat[(0, 0)].re;
        }
        let eig = hermitian_eigen(&FockOperator::from_matrix(mat))?;
        max_eigenvalue = max_eigenvalue.max(eig.values[0]);
        blocks.push(BlockSpectrum { k, eigenvalues: eig.values });
    }

    Ok(BlockEigenReport {
        lambda,
        beta,
        t_weights,
        blocks,
        a00,
        closed_form: cft_gaussian(lambda, beta),
        max_eigenvalue,
        quad_failures,
        metadata: ResultMetadata { k_max: Some(k_max), tol: Some(quad_tol), ..Default::default() },
    })
}
