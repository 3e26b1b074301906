use cvwave_core::linalg::Matrix;
use nalgebra::{Complex, DMatrix};

/// Eigenvalues of a dense square matrix.
pub fn eigenvalues(m: &Matrix) -> Vec<Complex<f64>> {
    let a = DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice());
    a.complex_eigenvalues().iter().cloned().collect()
}

/// The eigenvalue closest to `target`.
pub fn nearest(eigs: &[Complex<f64>], target: Complex<f64>) -> Option<Complex<f64>> {
    eigs.iter()
        .cloned()
        .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
}
