use super::dense::{eigh, svd};
use super::{check_finite, zeros, Matrix, Subspace, Tolerances};
use crate::error::Result;

/// Truncated SVD `M ≈ left · diag(σ) · rightᴴ` keeping only the singular
/// values above the rank cutoff.
#[derive(Debug, Clone)]
pub struct RankFactorization {
    pub left: Matrix,
    pub singular_values: Vec<f64>,
    pub right: Matrix,
    pub rank: usize,
}

impl RankFactorization {
    /// `right · diag(1/σ) · leftᴴ`.
    pub fn pseudo_inverse(&self) -> Matrix {
        let mut scaled = self.right.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(1.0 / s);
        }
        scaled * self.left.adjoint()
    }

    pub fn reassemble(&self) -> Matrix {
        let mut scaled = self.left.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*s);
        }
        scaled * self.right.adjoint()
    }
}

pub fn rank_factorization(m: &Matrix, tol: &Tolerances) -> Result<RankFactorization> {
    rank_factorization_with_reference(m, tol, 0.0)
}

/// Like [`rank_factorization`], but the cutoff is measured against
/// `max(σ_max(M), reference)`. Use it when `M` is derived from a larger
/// operator (e.g. a compression `Uᴴ·A·U`) whose norm sets the noise level.
pub fn rank_factorization_with_reference(
    m: &Matrix,
    tol: &Tolerances,
    reference: f64,
) -> Result<RankFactorization> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(RankFactorization {
            left: zeros(rows, 0),
            singular_values: Vec::new(),
            right: zeros(cols, 0),
            rank: 0,
        });
    }

    let (u, sv, v) = svd(m);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_rel_tol * sigma_max.max(reference);
    let kept: Vec<usize> = (0..sv.len())
        .filter(|&i| sv[i] > cutoff && sv[i] > 0.0)
        .collect();

    let left = Matrix::from_fn(rows, kept.len(), |i, j| u[(i, kept[j])]);
    let right = Matrix::from_fn(cols, kept.len(), |i, j| v[(i, kept[j])]);
    Ok(RankFactorization {
        rank: kept.len(),
        singular_values: kept.iter().map(|&i| sv[i]).collect(),
        left,
        right,
    })
}

pub fn pseudo_inverse(m: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    pseudo_inverse_with_reference(m, tol, 0.0)
}

pub fn pseudo_inverse_with_reference(
    m: &Matrix,
    tol: &Tolerances,
    reference: f64,
) -> Result<Matrix> {
    Ok(rank_factorization_with_reference(m, tol, reference)?.pseudo_inverse())
}

pub fn column_space(m: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    column_space_with_reference(m, tol, 0.0)
}

pub fn column_space_with_reference(
    m: &Matrix,
    tol: &Tolerances,
    reference: f64,
) -> Result<Subspace> {
    let f = rank_factorization_with_reference(m, tol, reference)?;
    Ok(Subspace::from_orthonormal(f.left))
}

pub fn null_space(m: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    null_space_with_reference(m, tol, 0.0)
}

pub fn null_space_with_reference(m: &Matrix, tol: &Tolerances, reference: f64) -> Result<Subspace> {
    let f = rank_factorization_with_reference(m, tol, reference)?;
    Ok(Subspace::from_orthonormal(orthonormal_complement(&f.right)))
}

/// Orthonormal basis of `range(q)⊥` for `q` with orthonormal columns.
///
/// The dimension is fixed to `rows − cols` so it always agrees with the rank
/// decision that produced `q`.
pub(crate) fn orthonormal_complement(q: &Matrix) -> Matrix {
    let (n, k) = q.shape();
    let m = n - k;
    if m == 0 {
        return zeros(n, 0);
    }
    if k == 0 {
        return Matrix::identity(n, n);
    }
    let p_perp = Matrix::identity(n, n) - q * q.adjoint();
    let (_, vectors) = eigh(&p_perp);
    vectors.columns(0, m).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{fro, identity, real_diag, real_matrix};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let f = rank_factorization(&zeros(2, 2), &tol()).unwrap();
        assert_eq!(f.rank, 0);
        assert_eq!(f.left.ncols(), 0);
        assert_eq!(f.right.ncols(), 0);
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let f = rank_factorization(&identity(3), &tol()).unwrap();
        assert_eq!(f.rank, 3);
        for s in f.singular_values {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_one_singular_value() {
        // MᴴM = [[5,10],[10,20]] has characteristic polynomial λ² − 25λ, so σ₁ = 5.
        let m = real_matrix(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let f = rank_factorization(&m, &tol()).unwrap();
        assert_eq!(f.rank, 1);
        assert!((f.singular_values[0] - 5.0).abs() < 1e-12);
        assert!(fro(&(f.reassemble() - &m)) < 1e-12);
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = identity(2);
        m[(0, 1)].re = f64::NAN;
        assert!(rank_factorization(&m, &tol()).is_err());
    }

    #[test]
    fn pinv_examples() {
        assert!(fro(&(pseudo_inverse(&identity(3), &tol()).unwrap() - identity(3))) < 1e-14);
        let p = pseudo_inverse(&real_diag(&[2.0, 0.0]), &tol()).unwrap();
        assert!(fro(&(p - real_diag(&[0.5, 0.0]))) < 1e-14);
        let m = real_matrix(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let p = pseudo_inverse(&m, &tol()).unwrap();
        assert!(fro(&(&p - m.unscale(25.0))) < 1e-14);
    }

    #[test]
    fn null_and_column_space_examples() {
        let n = null_space(&real_diag(&[1.0, 0.0]), &tol()).unwrap();
        assert_eq!(n.dim(), 1);
        assert!(n.basis()[(0, 0)].norm() < 1e-14);
        assert!((n.basis()[(1, 0)].norm() - 1.0).abs() < 1e-14);

        let c = column_space(&real_matrix(2, 1, &[1.0, 1.0]), &tol()).unwrap();
        let expected =
            Subspace::from_orthonormal(real_matrix(2, 1, &[1.0, 1.0]).unscale(2f64.sqrt()));
        assert!(c.equals(&expected, 1e-12));

        let m = real_matrix(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let n = null_space(&m, &tol()).unwrap();
        assert_eq!(n.dim(), 1);
        assert!(fro(&(&m * n.basis())) < 1e-12);
        let expected =
            Subspace::from_orthonormal(real_matrix(2, 1, &[2.0, -1.0]).unscale(5f64.sqrt()));
        assert!(n.equals(&expected, 1e-12));
    }

    #[test]
    fn wide_matrix_null_space() {
        let m = real_matrix(1, 3, &[1.0, 1.0, 0.0]);
        let n = null_space(&m, &tol()).unwrap();
        let c = column_space(&m.adjoint(), &tol()).unwrap();
        assert_eq!(n.dim() + c.dim(), 3);
        assert!(fro(&(&m * n.basis())) < 1e-12);
    }
}
