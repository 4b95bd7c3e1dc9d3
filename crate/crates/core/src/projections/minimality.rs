use serde::Serialize;

use super::{distinguished_projection, kernel_intersection, weighted_projection_membership};
use crate::error::{Error, Result};
use crate::numkernel::{
    check_vector, fro, spectral_norm, Matrix, PsdOperator, Subspace, Tolerances,
};

#[derive(Debug, Clone, Serialize)]
pub struct MinimalityReport {
    /// `‖T‖ − ‖P_{A,S}‖` (spectral norms).
    pub norm_gap: f64,
    /// `‖(I − T)x‖ − ‖(I − P_{A,S})x‖`, when `x` is supplied.
    pub pointwise_gap: Option<f64>,
    /// Whether `P_{A,S}` has minimal norm over `Π(A,S)`.
    ///
    /// False exactly when `{0} ≠ S ⊆ N(A)`: then `P_{A,S} = P_S` has norm 1
    /// while the zero operator also lies in `Π(A,S)`. Otherwise
    /// `‖T‖ ≥ ‖P_{A,S⊖N}‖ = ‖P_{A,S}‖` for every member.
    pub norm_bound_applies: bool,
}

/// Compare a member `T` of `Π(A,S)` with `P_{A,S}` in operator norm and
/// pointwise on `(I − ·)x`.
pub fn minimality_report(
    op: &PsdOperator,
    s: &Subspace,
    t: &Matrix,
    x: Option<&Matrix>,
    tol: &Tolerances,
) -> Result<MinimalityReport> {
    let membership = weighted_projection_membership(op, s, t, tol)?;
    if !membership.member {
        return Err(Error::NotMember {
            set: "Π(A,S)",
            residual: membership.flag().residual,
        });
    }
    let p = distinguished_projection(op, s, tol)?;
    let n = kernel_intersection(op, s, tol)?;
    let norm_gap = spectral_norm(t) - spectral_norm(&p);

    let pointwise_gap = match x {
        Some(x) => {
            check_vector("minimality point", x, op.dim())?;
            let id = Matrix::identity(op.dim(), op.dim());
            Some(fro(&((&id - t) * x)) - fro(&((&id - &p) * x)))
        }
        None => None,
    };

    Ok(MinimalityReport {
        norm_gap,
        pointwise_gap,
        norm_bound_applies: s.dim() == 0 || s.dim() > n.dim(),
    })
}
