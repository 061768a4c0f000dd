use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::{FockError, FockOperator, HERMITICITY_TOL};

/// Eigenvalues (descending) with matching eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<DVector<C64>>,
}

/// Dense Hermitian eigendecomposition, eigenvalues sorted descending.
///
/// Rejects operators whose hermiticity flag is unset. Matrices here are at
/// most a few hundred square, so a dense solve is the right tool.
pub fn hermitian_eigen(op: &FockOperator) -> Result<HermitianEigen, FockError> {
    if !op.is_hermitian() {
        let dev = max_hermiticity_deviation(op.matrix());
        return Err(FockError::NotHermitian { deviation: dev.max(HERMITICITY_TOL) });
    }
    let eig = op.matrix().clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    Ok(HermitianEigen { values, vectors })
}

fn max_hermiticity_deviation(mat: &DMatrix<C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..mat.nrows() {
        for j in i..mat.ncols() {
            dev = dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    dev
}
