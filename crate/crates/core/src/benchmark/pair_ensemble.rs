//! Phase-averaged squeezed ensemble in the Fock basis: the diagonal average
//! state, the two-copy average state in its paired-block form, and the
//! operator-route verification that the squeezed threshold's spectrum is
//! flat.
//!
//! The two-copy state is block diagonal over total pair number k with unit
//! coefficient vectors
//!   Φ_k[n] = √(binom(k−n−1/2, k−n)·binom(n−1/2, n)),  n = 0..k,
//! in the basis |2(k−n)⟩|2n⟩, so everything here works blockwise instead of
//! materializing the (N/2+1)²-dimensional two-mode matrix.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{cft_squeezed, BenchmarkResult, Method, ResultMetadata};
use crate::fock::{hermitian_eigen, FockError, FockOperator};

/// binom(j − 1/2, j) for j = 0..=j_max, by the ratio recurrence
/// b_{j+1} = b_j (2j+1)/(2j+2). These weight both the squeezed-vacuum
/// expansion and the paired-block vectors.
pub fn pair_binomials(j_max: usize) -> Vec<f64> {
    let mut b = Vec::with_capacity(j_max + 1);
    b.push(1.0);
    for j in 0..j_max {
        let last = *b.last().unwrap();
        b.push(last * (2 * j + 1) as f64 / (2 * j + 2) as f64);
    }
    b
}

/// Diagonal weights of the phase-averaged squeezed ensemble on |2n⟩ for
/// n = 0..=n_pairs: (β/(β+1))·binom(n−1/2,n)/binom((β+1)/2+n, n).
pub fn tau_weights(beta: f64, n_pairs: usize) -> Vec<f64> {
    assert!(beta > 0.0 && beta.is_finite());
    let mut q = Vec::with_capacity(n_pairs + 1);
    q.push(beta / (beta + 1.0));
    for n in 0..n_pairs {
        let nf = n as f64;
        let last = *q.last().unwrap();
        q.push(last * (nf + 0.5) / ((beta + 3.0) / 2.0 + nf));
    }
    q
}

/// The average state of the squeezed ensemble as a diagonal Fock operator
/// (zero on odd photon numbers).
pub fn tau_beta(beta: f64, n_cut: usize) -> Result<FockOperator, FockError> {
    if n_cut < 2 || !n_cut.is_multiple_of(2) {
        return Err(FockError::BadCutoff { n_cut, reason: "cutoff must be even and at least 2" });
    }
    let weights = tau_weights(beta, n_cut / 2);
    let mut diag = vec![0.0; n_cut + 1];
    for (n, w) in weights.iter().enumerate() {
        diag[2 * n] = *w;
    }
    Ok(FockOperator::from_real_diagonal(&diag))
}

/// Block weight β/(β+2)/binom((β+2)/2+k, k) of the two-copy average state.
pub fn rho_block_weight(beta: f64, k: usize) -> f64 {
    let mut binom = 1.0;
    for j in 0..k {
        let jf = j as f64;
        binom *= ((beta + 2.0) / 2.0 + jf + 1.0) / (jf + 1.0);
    }
    beta / (beta + 2.0) / binom
}

/// Two-copy average state ρ_β in blockwise form: weight w_k and unit vector
/// Φ_k per total-pair-number block k.
#[derive(Debug, Clone)]
pub struct TwoModeBlockOperator {
    pub beta: f64,
    /// (w_k, Φ_k coefficients over n = 0..k in the basis |2(k−n)⟩|2n⟩)
    pub blocks: Vec<(f64, Vec<f64>)>,
}

/// Build ρ_β with blocks k = 0..=n_cut/2 (block k lives on photon numbers
/// up to 2k in each mode).
pub fn rho_beta(beta: f64, n_cut: usize) -> Result<TwoModeBlockOperator, FockError> {
    if n_cut < 2 || !n_cut.is_multiple_of(2) {
        return Err(FockError::BadCutoff { n_cut, reason: "cutoff must be even and at least 2" });
    }
    let k_max = n_cut / 2;
    let b = pair_binomials(k_max);
    let mut blocks = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let w = rho_block_weight(beta, k);
        let phi: Vec<f64> = (0..=k).map(|n| (b[k - n] * b[n]).sqrt()).collect();
        blocks.push((w, phi));
    }
    Ok(TwoModeBlockOperator { beta, blocks })
}

impl TwoModeBlockOperator {
    /// Tr ρ over the retained blocks (approaches 1 from below as blocks are
    /// added; the block weights decay polynomially, ~k^{−(β+2)/2}).
    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(|(w, phi)| w * phi.iter().map(|x| x * x).sum::<f64>()).sum()
    }

    /// Matrix element ⟨2a, 2b|ρ|2c, 2d⟩ (photon pair indices per mode).
    pub fn entry(&self, (a, b): (usize, usize), (c, d): (usize, usize)) -> f64 {
        if a + b != c + d {
            return 0.0;
        }
        let k = a + b;
        match self.blocks.get(k) {
            Some((w, phi)) => w * phi[b] * phi[d],
            None => 0.0,
        }
    }

    /// Dense two-mode matrix over pair indices 0..=n_pairs per mode, ordered
    /// as index = a·(n_pairs+1) + b for |2a⟩|2b⟩.
    pub fn to_dense(&self, n_pairs: usize) -> DMatrix<C64> {
        let dim = n_pairs + 1;
        let mut m = DMatrix::<C64>::zeros(dim * dim, dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        let v = self.entry((a, b), (c, d));
                        if v != 0.0 {
                            m[(a * dim + b, c * dim + d)] = C64::new(v, 0.0);
                        }
                    }
                }
            }
        }
        m
    }
}

/// Eigenvalues of one paired block of (I⊗τ^{−1/2}) ρ (I⊗τ^{−1/2}).
#[derive(Debug, Clone)]
pub struct BlockFlatness {
    pub k: usize,
    pub eigenvalues: Vec<f64>,
    /// residual ‖A w − a w‖ of the transformed block vector as eigenvector
    pub eigvec_residual: f64,
}

/// Operator-route verification of the squeezed threshold.
#[derive(Debug, Clone)]
pub struct SqueezedEigenReport {
    pub result: BenchmarkResult,
    pub blocks: Vec<BlockFlatness>,
    /// largest |λ − (1+β)/(2+β)| over the retained nonzero eigenvalues
    pub max_flatness_dev: f64,
    /// blocks skipped because 2k exceeded the cutoff
    pub skipped_blocks: usize,
}

/// Build A_β = (I⊗τ_β^{−1/2}) ρ_β (I⊗τ_β^{−1/2}) block by block and
/// eigensolve each block. Every nonzero eigenvalue should equal
/// (1+β)/(2+β); `numeric` is the overall maximum.
///
/// Each block is the rank-one matrix w_k·ṽṽᵀ with ṽ_n = Φ_k[n]/√t_{2n}, and
/// the blocks decouple because the transformed block vectors stay mutually
/// orthogonal across k.
pub fn squeezed_benchmark_eigen(
    beta: f64,
    n_cut: usize,
    k_max: usize,
) -> Result<SqueezedEigenReport, FockError> {
    let buildable = n_cut / 2;
    let retained_k = k_max.min(buildable);
    let skipped_blocks = k_max.saturating_sub(buildable);
    let t = tau_weights(beta, retained_k);
    let rho = rho_beta(beta, 2 * retained_k.max(1))?;
    let expected = cft_squeezed(beta);

    let mut blocks = Vec::with_capacity(retained_k + 1);
    let mut max_eig = f64::NEG_INFINITY;
    let mut max_dev: f64 = 0.0;
    for k in 0..=retained_k {
        let (w, phi) = &rho.blocks[k];
        let v_tilde: Vec<f64> = (0..=k).map(|n| phi[n] / t[n].sqrt()).collect();
        let dim = k + 1;
        let mut mat = DMatrix::<C64>::zeros(dim, dim);
        for m in 0..dim {
            for n in 0..dim {
                mat[(m, n)] = C64::new(w * v_tilde[m] * v_tilde[n], 0.0);
            }
        }
        let op = FockOperator::from_matrix(mat.clone());
        let eig = hermitian_eigen(&op)?;
        // eigenvector check: the transformed block vector itself
        let norm = v_tilde.iter().map(|x| x * x).sum::<f64>().sqrt();
        let wvec = nalgebra::DVector::<C64>::from_iterator(
            dim,
            v_tilde.iter().map(|x| C64::new(x / norm, 0.0)),
        );
        let residual = (&mat * &wvec - &wvec * C64::new(expected, 0.0)).norm();
        for &lambda in &eig.values {
            max_eig = max_eig.max(lambda);
            if lambda > 1e-6 * expected {
                max_dev = max_dev.max((lambda - expected).abs());
            }
        }
        blocks.push(BlockFlatness { k, eigenvalues: eig.values, eigvec_residual: residual });
    }

    let metadata = ResultMetadata { n_cut: Some(n_cut), k_max: Some(retained_k), ..Default::default() };
    Ok(SqueezedEigenReport {
        result: BenchmarkResult::new(expected, max_eig, Method::FockEigen, metadata),
        blocks,
        max_flatness_dev: max_dev,
        skipped_blocks,
    })
}
