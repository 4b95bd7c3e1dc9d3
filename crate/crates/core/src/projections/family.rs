use rand::Rng;

use crate::numkernel::{fro, Flag, Matrix, Subspace, Tolerances};
use crate::random::gaussian_matrix;

/// Solution set `base + {W : R(W) ⊆ N, W vanishes on V⊥}`.
///
/// `range_space` is `N` and `domain_space` is `V`; the free part is
/// parametrized as `N_basis · X · V_basisᴴ` with `X` of size `dim N × dim V`.
#[derive(Debug, Clone)]
pub struct AffineOperatorFamily {
    pub base: Matrix,
    pub range_space: Subspace,
    pub domain_space: Subspace,
}

impl AffineOperatorFamily {
    pub fn new(base: Matrix, range_space: Subspace, domain_space: Subspace) -> Self {
        AffineOperatorFamily {
            base,
            range_space,
            domain_space,
        }
    }

    pub fn param_dims(&self) -> (usize, usize) {
        (self.range_space.dim(), self.domain_space.dim())
    }

    /// True when the free part is trivial.
    pub fn is_singleton(&self) -> bool {
        let (r, c) = self.param_dims();
        r == 0 || c == 0
    }

    /// The free operator `N_basis · X · V_basisᴴ`.
    pub fn free_part(&self, params: &Matrix) -> Matrix {
        assert_eq!(
            params.shape(),
            self.param_dims(),
            "family parameters have the wrong shape"
        );
        self.range_space.basis() * params * self.domain_space.basis().adjoint()
    }

    pub fn member(&self, params: &Matrix) -> Matrix {
        &self.base + self.free_part(params)
    }

    /// A member with standard Gaussian parameters.
    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix {
        let (r, c) = self.param_dims();
        self.member(&gaussian_matrix(rng, r, c))
    }

    /// Structural test `(I − P_N)(T − base) ≈ 0` and `(T − base)(I − P_V) ≈ 0`.
    pub fn structural_membership(&self, t: &Matrix, tol: &Tolerances) -> Flag {
        if t.shape() != self.base.shape() {
            return Flag::new(f64::INFINITY, 0.0);
        }
        let diff = t - &self.base;
        let off_range = self.range_space.containment_residual(&diff);
        let v = self.domain_space.basis();
        let off_domain = fro(&(&diff - &diff * v * v.adjoint()));
        Flag::new(
            off_range + off_domain,
            tol.threshold(&[fro(&self.base), fro(t)]),
        )
    }
}
