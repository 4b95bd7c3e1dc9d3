use super::{
    check_finite, check_square, check_vector, eigh, fro, hermitian_residual, Matrix, Subspace,
    Tolerances,
};
use crate::error::{Error, Result};

/// Hermitian positive semidefinite weight operator.
///
/// Construction validates the matrix and caches its eigendecomposition.
/// Eigenvalues at or below `rank_rel_tol · λ_max` are treated as zero, so the
/// square root, its pseudoinverse and the range of the operator all share one
/// rank decision.
#[derive(Debug, Clone)]
pub struct PsdOperator {
    mat: Matrix,
    /// Clamped eigenvalues, nonincreasing.
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
    rank: usize,
}

impl PsdOperator {
    pub fn new(mat: Matrix, tol: &Tolerances) -> Result<Self> {
        check_finite(&mat)?;
        check_square("PSD operator", &mat)?;
        let norm = fro(&mat);
        let herm = hermitian_residual(&mat);
        if herm > tol.threshold(&[norm]) {
            return Err(Error::NotHermitian { residual: herm });
        }
        let mat = (&mat + mat.adjoint()).scale(0.5);
        let n = mat.nrows();
        if n == 0 {
            return Ok(PsdOperator {
                mat,
                eigenvalues: Vec::new(),
                eigenvectors: Matrix::zeros(0, 0),
                rank: 0,
            });
        }

        let (raw, eigenvectors) = eigh(&mat);
        let lambda_max = raw[0].max(0.0);
        let lambda_min = raw[n - 1];
        if lambda_min < 0.0 && lambda_min < -tol.residual_tol * lambda_max {
            return Err(Error::NotPsd {
                min_eigenvalue: lambda_min,
            });
        }
        let cutoff = tol.rank_rel_tol * lambda_max;
        let eigenvalues: Vec<f64> = raw
            .iter()
            .map(|&l| if l > cutoff { l } else { 0.0 })
            .collect();
        let rank = eigenvalues.iter().filter(|&&l| l > 0.0).count();
        Ok(PsdOperator {
            mat,
            eigenvalues,
            eigenvectors,
            rank,
        })
    }

    pub fn identity(n: usize) -> Self {
        PsdOperator {
            mat: Matrix::identity(n, n),
            eigenvalues: vec![1.0; n],
            eigenvectors: Matrix::identity(n, n),
            rank: n,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Largest eigenvalue, i.e. the operator norm.
    pub fn norm(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn fro_norm(&self) -> f64 {
        fro(&self.mat)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank == self.dim()
    }

    /// `V · diag(f(λ)) · Vᴴ` over the retained spectrum.
    fn spectral_map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let factor = if l > 0.0 { f(l) } else { 0.0 };
            scaled.column_mut(j).scale_mut(factor);
        }
        let m = scaled * self.eigenvectors.adjoint();
        // enforce exact Hermitian symmetry
        let m = (&m + m.adjoint()).scale(0.5);
        debug_assert_eq!(m.nrows(), n);
        m
    }

    pub fn sqrt(&self) -> Matrix {
        self.spectral_map(f64::sqrt)
    }

    /// `(A^{1/2})†`.
    pub fn pinv_sqrt(&self) -> Matrix {
        self.spectral_map(|l| 1.0 / l.sqrt())
    }

    pub fn pinv(&self) -> Matrix {
        self.spectral_map(|l| 1.0 / l)
    }

    /// `A^{-1/2}`; fails unless the operator is invertible.
    pub fn inv_sqrt(&self) -> Result<Matrix> {
        if self.is_invertible() {
            Ok(self.pinv_sqrt())
        } else {
            Err(Error::Singular)
        }
    }

    /// Orthogonal projector onto `R(A)`.
    pub fn range_projector(&self) -> Matrix {
        self.spectral_map(|_| 1.0)
    }

    pub fn range(&self) -> Subspace {
        Subspace::from_orthonormal(self.eigenvectors.columns(0, self.rank).into_owned())
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::from_orthonormal(
            self.eigenvectors
                .columns(self.rank, self.dim() - self.rank)
                .into_owned(),
        )
    }

    /// Semi-inner product `⟨x, y⟩_A = ⟨Ax, y⟩ = yᴴ·A·x`.
    pub fn inner(&self, x: &Matrix, y: &Matrix) -> num_complex::Complex64 {
        (y.adjoint() * &self.mat * x)[(0, 0)]
    }
}

pub fn psd_sqrt(a: &PsdOperator) -> Matrix {
    a.sqrt()
}

/// `‖x‖_A = ‖A^{1/2}x‖`.
pub fn seminorm(a: &PsdOperator, x: &Matrix, tol: &Tolerances) -> Result<f64> {
    check_vector("seminorm", x, a.dim())?;
    check_finite(x)?;
    let quad = a.inner(x, x);
    let xn = fro(x);
    if quad.re < -tol.threshold(&[a.fro_norm() * xn * xn]) {
        return Err(Error::NotPsd {
            min_eigenvalue: quad.re,
        });
    }
    Ok(fro(&(a.sqrt() * x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{real_diag, real_matrix, real_vector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn sqrt_of_diagonal() {
        let a = PsdOperator::new(real_diag(&[4.0, 9.0]), &tol()).unwrap();
        assert!(fro(&(a.sqrt() - real_diag(&[2.0, 3.0]))) < 1e-13);
        let i = PsdOperator::new(Matrix::identity(3, 3), &tol()).unwrap();
        assert!(fro(&(i.sqrt() - Matrix::identity(3, 3))) < 1e-13);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = real_matrix(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let a = PsdOperator::new(m.clone(), &tol()).unwrap();
        let r = a.sqrt();
        assert!(fro(&(&r * &r - &m)) < 1e-13);
        assert!(hermitian_residual(&r) < 1e-14);
        assert!(fro(&(&r * &m - &m * &r)) < 1e-13);
    }

    #[test]
    fn indefinite_rejected() {
        let m = real_diag(&[1.0, -0.5]);
        assert!(matches!(
            PsdOperator::new(m, &tol()),
            Err(Error::NotPsd { .. })
        ));
        let m = real_matrix(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            PsdOperator::new(m, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn tiny_negative_eigenvalue_clamped() {
        let m = real_diag(&[1.0, -1e-12]);
        let a = PsdOperator::new(m, &tol()).unwrap();
        assert_eq!(a.rank(), 1);
        assert!(a.eigenvalues()[1] == 0.0);
    }

    #[test]
    fn seminorm_examples() {
        let x = real_vector(&[3.0, 4.0]);
        let i = PsdOperator::identity(2);
        assert!((seminorm(&i, &x, &tol()).unwrap() - 5.0).abs() < 1e-14);

        let a = PsdOperator::new(real_diag(&[1.0, 0.0]), &tol()).unwrap();
        assert!(
            seminorm(&a, &real_vector(&[0.0, 5.0]), &tol())
                .unwrap()
                .abs()
                < 1e-14
        );

        // ⟨Ax, x⟩ = 2 + 1 + 1 + 2 = 6
        let a = PsdOperator::new(real_matrix(2, 2, &[2.0, 1.0, 1.0, 2.0]), &tol()).unwrap();
        let v = seminorm(&a, &real_vector(&[1.0, 1.0]), &tol()).unwrap();
        assert!((v - 6f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn seminorm_rejects_wrong_shape() {
        let a = PsdOperator::identity(2);
        assert!(seminorm(&a, &real_vector(&[1.0, 2.0, 3.0]), &tol()).is_err());
    }

    #[test]
    fn pinv_sqrt_on_range() {
        let a = PsdOperator::new(real_diag(&[4.0, 0.0]), &tol()).unwrap();
        assert!(fro(&(a.pinv_sqrt() - real_diag(&[0.5, 0.0]))) < 1e-14);
        assert!(a.inv_sqrt().is_err());
        assert_eq!(a.kernel().dim(), 1);
    }
}
