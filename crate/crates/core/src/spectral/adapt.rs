//! Shell-adapted bases for degenerate eigenspaces.
//!
//! A generic solver returns an arbitrary basis of a degenerate eigenspace.
//! Diagonalizing `A = Σ_s w_s V^* P_s V` (distinct weights `w_s`, `P_s` the
//! indicator projection of shell `s`) inside the span rotates the basis onto
//! vectors carried by as few shells as the eigenspace allows: whenever the
//! span splits along shells, `A` is diagonal in that split with eigenvalue
//! `w_s` on the shell-`s` part.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::eigen::fix_phase;
use super::SpectralError;
use crate::model::Grid;

pub fn shell_adapt(
    grid: &Grid,
    vectors: &DMatrix<Complex64>,
    values: &[f64],
    cluster_tol: f64,
) -> Result<DMatrix<Complex64>, SpectralError> {
    assert_eq!(vectors.ncols(), values.len());
    assert_eq!(vectors.nrows(), grid.len());
    let m = values.len();
    if m == 0 {
        return Ok(vectors.clone());
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    if spread > cluster_tol * lo.abs().max(hi.abs()).max(1.0) {
        return Err(SpectralError::NotAnEigenspace { spread });
    }
    let mut out = vectors.clone();
    if m > 1 {
        let shells = grid.shell_list();
        let weight: Vec<f64> = (0..grid.len())
            .map(|i| (shells.binary_search(&grid.shell(i)).unwrap() + 1) as f64)
            .collect();
        // A = V^* W V with W = diag(weight)
        let mut wv = vectors.clone();
        for (mut row, w) in wv.row_iter_mut().zip(&weight) {
            row *= Complex64::new(*w, 0.0);
        }
        let a = vectors.adjoint() * wv;
        let a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(a);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]).then(x.cmp(&y)));
        let mut u = DMatrix::zeros(m, m);
        for (c, &src) in order.iter().enumerate() {
            u.set_column(c, &eig.eigenvectors.column(src));
        }
        out = vectors * u;
    }
    for c in 0..m {
        let mut v = out.column(c).into_owned();
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        fix_phase(&mut v);
        out.set_column(c, &v);
    }
    Ok(out)
}

/// Orthogonal projector onto the column span of an orthonormal `vectors`.
pub fn span_projector(vectors: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    vectors * vectors.adjoint()
}
