use super::factor::{null_space_with_reference, orthonormal_complement};
use super::{column_space, fro, zeros, Matrix, Tolerances};
use crate::error::{Error, Result};

/// Subspace of `Cⁿ` stored through an orthonormal column basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Span of the columns of `spanning`, re-orthonormalized.
    pub fn new(spanning: &Matrix, tol: &Tolerances) -> Result<Self> {
        column_space(spanning, tol)
    }

    /// Wrap a basis already known to have orthonormal columns.
    pub fn from_orthonormal(basis: Matrix) -> Self {
        debug_assert!(
            basis.ncols() == 0
                || fro(&(basis.adjoint() * &basis - Matrix::identity(basis.ncols(), basis.ncols())))
                    < 1e-6,
            "basis is not orthonormal"
        );
        Subspace { basis }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { basis: zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: Matrix::identity(n, n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.adjoint()
    }

    /// `I − P`.
    pub fn complement_projector(&self) -> Matrix {
        Matrix::identity(self.ambient_dim(), self.ambient_dim()) - self.projector()
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        Subspace {
            basis: orthonormal_complement(&self.basis),
        }
    }

    /// `‖P_self − P_other‖_F`, the basis-independent distance used for equality.
    pub fn distance(&self, other: &Subspace) -> f64 {
        fro(&(self.projector() - other.projector()))
    }

    pub fn equals(&self, other: &Subspace, threshold: f64) -> bool {
        self.ambient_dim() == other.ambient_dim() && self.distance(other) <= threshold
    }

    /// `‖(I − P)·M‖_F`: zero iff every column of `m` lies in the subspace.
    pub fn containment_residual(&self, m: &Matrix) -> f64 {
        fro(&(m - &self.basis * (self.basis.adjoint() * m)))
    }

    /// Whether `self ⊆ other`, measured as `‖(I − P_other)·basis‖_F`.
    pub fn inclusion_residual(&self, other: &Subspace) -> f64 {
        other.containment_residual(&self.basis)
    }

    pub fn intersection(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let n = self.ambient_dim();
        // x lies in both iff (I − P₁)x = 0 and (I − P₂)x = 0.
        let mut stacked = zeros(2 * n, n);
        stacked
            .rows_mut(0, n)
            .copy_from(&self.complement_projector());
        stacked
            .rows_mut(n, n)
            .copy_from(&other.complement_projector());
        null_space_with_reference(&stacked, tol, 1.0)
    }

    /// `self ⊖ other = self ∩ (self ∩ other)⊥`.
    pub fn ominus(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        let common = self.intersection(other, tol)?;
        if common.is_zero() {
            return Ok(self.clone());
        }
        // coefficients c with commonᴴ·U·c = 0
        let coupling = common.basis.adjoint() * &self.basis;
        let coeffs = null_space_with_reference(&coupling, tol, 1.0)?;
        Ok(Subspace::from_orthonormal(&self.basis * coeffs.basis()))
    }

    /// Orthogonal sum of two mutually orthogonal subspaces.
    pub fn orthogonal_sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut basis = zeros(self.ambient_dim(), self.dim() + other.dim());
        basis.columns_mut(0, self.dim()).copy_from(&self.basis);
        basis
            .columns_mut(self.dim(), other.dim())
            .copy_from(&other.basis);
        Ok(Subspace { basis })
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() == other.ambient_dim() {
            Ok(())
        } else {
            Err(Error::dims(
                "subspace ambient dimension",
                self.ambient_dim(),
                other.ambient_dim(),
            ))
        }
    }
}

pub fn orthogonal_projector(s: &Subspace) -> Matrix {
    s.projector()
}

pub fn subspace_ominus(m1: &Subspace, m2: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    m1.ominus(m2, tol)
}
