//! Dense SVD and Hermitian eigendecomposition.
//!
//! nalgebra's complex SVD can return factors that do not reassemble the
//! input for some rank-deficient Hermitian matrices, so both factorizations
//! are delegated to faer. Results are converted back to nalgebra matrices.

use faer::{Mat, MatRef, Side};

use super::Matrix;

fn to_faer(m: &Matrix) -> Mat<faer::c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, faer::c64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD `m = U·diag(σ)·Vᴴ` with `σ` nonincreasing.
pub(crate) fn svd(m: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let f = to_faer(m);
    let svd = f
        .thin_svd()
        .expect("SVD iteration converges for finite input");
    let s = svd.S().column_vector();
    let sigma = (0..s.nrows()).map(|i| s[i].re).collect();
    (from_faer(svd.U()), sigma, from_faer(svd.V()))
}

pub(crate) fn singular_values(m: &Matrix) -> Vec<f64> {
    let f = to_faer(m);
    let mut s: Vec<f64> = f
        .singular_values()
        .expect("SVD iteration converges for finite input");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Eigendecomposition of the Hermitian part of `m`, eigenvalues
/// nonincreasing with matching eigenvector columns.
pub(crate) fn eigh(m: &Matrix) -> (Vec<f64>, Matrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let f = to_faer(&h);
    let eig = f
        .self_adjoint_eigen(Side::Lower)
        .expect("Hermitian eigensolver converges for finite input");
    let s = eig.S().column_vector();
    let n = s.nrows();
    let values = (0..n).rev().map(|i| s[i].re).collect();
    let u = eig.U();
    let vectors = Matrix::from_fn(n, n, |i, j| u[(i, n - 1 - j)]);
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{fro, real_diag};
    use crate::random::{gaussian_matrix, rng};

    #[test]
    fn svd_reassembles_rank_deficient_hermitian() {
        let mut r = rng(29);
        for _ in 0..200 {
            let g = gaussian_matrix(&mut r, 3, 1);
            let m = &g * g.adjoint();
            let (u, s, v) = svd(&m);
            let rebuilt =
                &u * Matrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    s.len(),
                    s.iter().map(|&x| faer::c64::new(x, 0.0)),
                )) * v.adjoint();
            assert!(fro(&(rebuilt - &m)) < 1e-12 * (1.0 + fro(&m)));
        }
    }

    #[test]
    fn eigh_orders_descending() {
        let (vals, vecs) = eigh(&real_diag(&[1.0, 3.0, 2.0]));
        assert_eq!(vals, vec![3.0, 2.0, 1.0]);
        assert!((vecs[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }
}
