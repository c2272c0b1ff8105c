//! Dense Hermitian eigendecomposition with deterministic ordering and phases.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::SpectralError;
use crate::model::HamiltonianModel;

/// Relative tolerance under which two magnitudes count as tied for phase fixing.
const PHASE_TIE_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100_000;

#[derive(Clone, Debug)]
pub struct Eigenpairs {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` belongs to `values[i]`; unit Euclidean norm, phase-fixed.
    pub vectors: DMatrix<Complex64>,
    /// `‖H v - λ v‖` per pair.
    pub residuals: Vec<f64>,
}

/// Rotates `v` so its largest-magnitude entry (lowest index among ties) is real positive.
pub fn fix_phase(v: &mut DVector<Complex64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v.iter().position(|z| z.norm() >= max * (1.0 - PHASE_TIE_TOL)).unwrap();
    let z = v[pivot];
    let rot = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= rot;
    }
    v[pivot] = Complex64::new(v[pivot].norm(), 0.0);
}

pub fn residual(matrix: &DMatrix<Complex64>, value: f64, v: &DVector<Complex64>) -> f64 {
    (matrix * v - v * Complex64::new(value, 0.0)).norm()
}

/// Full eigendecomposition of the model's Hermitian matrix.
///
/// Fails with `ResidualTooLarge` when some pair has
/// `‖Hv - λv‖ > tol · max|H| · dim`.
pub fn eigensolve(model: &HamiltonianModel, tol: f64) -> Result<Eigenpairs, SpectralError> {
    eigensolve_matrix(&model.matrix, tol)
}

pub fn eigensolve_matrix(matrix: &DMatrix<Complex64>, tol: f64) -> Result<Eigenpairs, SpectralError> {
    let len = matrix.nrows();
    let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or(SpectralError::NoConvergence { max_iterations: MAX_SWEEPS })?;

    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(len, len);
    for (col, &src) in order.iter().enumerate() {
        let mut v: DVector<Complex64> = eig.eigenvectors.column(src).into_owned();
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        fix_phase(&mut v);
        vectors.set_column(col, &v);
    }

    let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let limit = tol * scale * len as f64;
    let residuals: Vec<f64> = (0..len)
        .map(|i| residual(matrix, values[i], &vectors.column(i).into_owned()))
        .collect();
    if let Some((index, &r)) = residuals.iter().enumerate().find(|(_, &r)| r > limit) {
        return Err(SpectralError::ResidualTooLarge { index, residual: r, limit });
    }
    Ok(Eigenpairs { values, vectors, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let d = [3.0, -1.0, 2.0, 0.5];
        let m = DMatrix::from_fn(4, 4, |i, j| Complex64::new(if i == j { d[i] } else { 0.0 }, 0.0));
        let e = eigensolve_matrix(&m, 1e-9).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.5, 2.0, 3.0]);
        // permuted standard basis
        for (col, src) in [1usize, 3, 2, 0].into_iter().enumerate() {
            assert!((e.vectors[(src, col)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn hermitian_two_by_two() {
        let i = Complex64::new(0.0, 1.0);
        let m = DMatrix::from_row_slice(2, 2, &[Complex64::new(2.0, 0.0), i, -i, Complex64::new(2.0, 0.0)]);
        let e = eigensolve_matrix(&m, 1e-9).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
        for c in 0..2 {
            let v = e.vectors.column(c);
            assert!((v.norm() - 1.0).abs() < 1e-14);
            assert!(e.residuals[c] < 1e-13);
        }
    }

    #[test]
    fn phase_fix_prefers_lowest_index_on_ties() {
        let mut v = DVector::from_vec(vec![
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, -0.5),
            Complex64::new(0.1, 0.0),
        ]);
        fix_phase(&mut v);
        assert_eq!(v[0], Complex64::new(0.5, 0.0));
        assert!((v[1] - Complex64::new(-0.5, 0.0)).norm() < 1e-16);
    }
}
