use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::FockOperator;

/// Matrix element ⟨m|D(α)|n⟩ of the displacement operator.
///
/// For m ≥ n this is √(n!/m!)·α^{m−n}·e^{−|α|²/2}·L_n^{(m−n)}(|α|²), with the
/// associated Laguerre polynomial evaluated by its three-term recurrence in
/// the degree (no factorial ratios). The m < n case follows from
/// ⟨m|D(α)|n⟩ = conj(⟨n|D(−α)|m⟩).
pub fn displacement_matrix_element(m: usize, n: usize, alpha: C64) -> C64 {
    if m < n {
        return displacement_matrix_element(n, m, -alpha).conj();
    }
    let d = m - n;
    let x = alpha.norm_sqr();
    // α^d √(n!/m!) accumulated as ∏_{j=n+1}^m α/√j
    let mut coef = C64::new(1.0, 0.0);
    for j in (n + 1)..=m {
        coef *= alpha / (j as f64).sqrt();
    }
    coef * (-x / 2.0).exp() * laguerre(n, d as f64, x)
}

// L_k^{(a)}(x) by upward recurrence in k.
fn laguerre(k: usize, a: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + a - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * l - (jf + a) * lm1) / (jf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Full displacement matrix on the truncated basis 0..=n_cut.
pub fn displacement_matrix(alpha: C64, n_cut: usize) -> FockOperator {
    let dim = n_cut + 1;
    let mut mat = DMatrix::<C64>::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            mat[(m, n)] = displacement_matrix_element(m, n, alpha);
        }
    }
    FockOperator::from_matrix(mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_to_vacuum() {
        let alpha = C64::new(0.3, -0.7);
        let v = displacement_matrix_element(0, 0, alpha);
        let expected = (-alpha.norm_sqr() / 2.0).exp();
        assert!((v - C64::new(expected, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn one_photon_from_vacuum() {
        let alpha = C64::new(0.4, 0.9);
        let v = displacement_matrix_element(1, 0, alpha);
        let expected = alpha * (-alpha.norm_sqr() / 2.0).exp();
        assert!((v - expected).norm() < 1e-15);
    }

    #[test]
    fn identity_at_zero_displacement() {
        let d = displacement_matrix(C64::new(0.0, 0.0), 8);
        for i in 0..=8 {
            for j in 0..=8 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((d.matrix()[(i, j)] - C64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    // truncated matrix exponential of α a† − α* a, by scaling and squaring
    fn expm_oracle(alpha: C64, dim: usize) -> DMatrix<C64> {
        let mut gen = DMatrix::<C64>::zeros(dim, dim);
        for n in 0..dim - 1 {
            let root = ((n + 1) as f64).sqrt();
            gen[(n + 1, n)] += alpha * root; // a† part
            gen[(n, n + 1)] -= alpha.conj() * root; // a part
        }
        let norm = gen.norm();
        let squarings = (norm.log2().ceil().max(0.0) as u32) + 2;
        let scaled = gen / C64::new(2f64.powi(squarings as i32), 0.0);
        let mut result = DMatrix::<C64>::identity(dim, dim);
        let mut term = DMatrix::<C64>::identity(dim, dim);
        for k in 1..60 {
            term = &term * &scaled / C64::new(k as f64, 0.0);
            result += &term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            result = &result * &result;
        }
        result
    }

    #[test]
    fn matches_matrix_exponential_on_interior_block() {
        let alpha = C64::new(0.7, 0.3);
        let n_cut = 30;
        let direct = displacement_matrix(alpha, n_cut);
        let oracle = expm_oracle(alpha, n_cut + 1);
        for m in 0..=20 {
            for n in 0..=20 {
                let diff = (direct.matrix()[(m, n)] - oracle[(m, n)]).norm();
                assert!(diff < 1e-8, "({m},{n}): diff {diff:e}");
            }
        }
    }

    #[test]
    fn near_unitary_on_interior_block() {
        // ‖DD† − I‖_max small on indices ≤ n_cut/2 for |α| ≤ 2
        let n_cut = 120;
        for &alpha in &[C64::new(2.0, 0.0), C64::new(1.2, -1.4), C64::new(0.0, 0.5)] {
            let d = displacement_matrix(alpha, n_cut);
            let prod = d.matrix() * d.matrix().adjoint();
            let mut max_dev: f64 = 0.0;
            for i in 0..=n_cut / 2 {
                for j in 0..=n_cut / 2 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    max_dev = max_dev.max((prod[(i, j)] - C64::new(expected, 0.0)).norm());
                }
            }
            assert!(max_dev < 1e-6, "alpha={alpha}: ‖DD†−I‖ interior = {max_dev:e}");
        }
    }
}
