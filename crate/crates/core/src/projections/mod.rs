//! Compatibility of a PSD weight with a subspace, the distinguished
//! A-selfadjoint projection `P_{A,S}`, the affine sets `P(A,S)` and `Π(A,S)`,
//! and predicates classifying operators with respect to the A-seminorm.

mod classify;
mod family;
mod minimality;

pub use classify::{classify_operator, operator_seminorm, OperatorReport, ProjectionRoutes};
pub use family::AffineOperatorFamily;
pub use minimality::{minimality_report, MinimalityReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{
    block_decompose, check_square, column_space, fro, null_space_with_reference,
    rank_factorization_with_reference, BlockDecomposition, Flag, Matrix, PsdOperator, Subspace,
    Tolerances,
};

/// Outcome of the compatibility test `R(b) ⊆ R(a)` for the pair `(A, S)`.
#[derive(Debug, Clone)]
pub struct CompatibilityCertificate {
    pub compatible: bool,
    /// `‖a·d − b‖_F` for the reduced solution `d` of `a·x = b`.
    pub residual: f64,
    pub threshold: f64,
    /// `N = S ∩ N(A)`.
    pub degenerate: Subspace,
}

/// Everything derived from one factorization of the compression `a`.
struct Compression {
    dec: BlockDecomposition,
    /// Reduced solution of `a·x = b` (in the bases of `S` and `S⊥`).
    d: Matrix,
    residual: f64,
    threshold: f64,
    degenerate: Subspace,
}

fn compress(op: &PsdOperator, s: &Subspace, tol: &Tolerances) -> Result<Compression> {
    let dec = block_decompose(op, s)?;
    // The noise floor of a = UᴴAU is set by ‖A‖, not by ‖a‖.
    let f = rank_factorization_with_reference(&dec.a, tol, op.norm())?;
    let d = f.pseudo_inverse() * &dec.b;
    let residual = fro(&(&dec.a * &d - &dec.b));
    let threshold = tol.threshold(&[fro(&dec.a), fro(&dec.b)]);
    let coeffs = Subspace::from_orthonormal(f.right.clone()).orthogonal_complement();
    let degenerate = Subspace::from_orthonormal(s.basis() * coeffs.basis());
    Ok(Compression {
        dec,
        d,
        residual,
        threshold,
        degenerate,
    })
}

/// `N = S ∩ N(A)`, computed inside `S` as `U·N(a)`.
pub fn kernel_intersection(op: &PsdOperator, s: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    Ok(compress(op, s, tol)?.degenerate)
}

pub fn compatibility_certificate(
    op: &PsdOperator,
    s: &Subspace,
    tol: &Tolerances,
) -> Result<CompatibilityCertificate> {
    let c = compress(op, s, tol)?;
    Ok(CompatibilityCertificate {
        compatible: c.residual <= c.threshold,
        residual: c.residual,
        threshold: c.threshold,
        degenerate: c.degenerate,
    })
}

/// `A(S)⊥ = N(P_S·A)`, computed as the null space of `Uᴴ·A`.
pub fn weighted_orthocomplement(
    op: &PsdOperator,
    s: &Subspace,
    tol: &Tolerances,
) -> Result<Subspace> {
    if op.dim() != s.ambient_dim() {
        return Err(Error::dims(
            "weighted orthocomplement",
            op.dim(),
            s.ambient_dim(),
        ));
    }
    null_space_with_reference(&(s.basis().adjoint() * op.matrix()), tol, op.norm())
}

/// The distinguished projection `P_{A,S}`: range `S`, kernel `A(S)⊥ ⊖ N`,
/// assembled as `[[1, d], [0, 0]]` in the `(S, S⊥)` decomposition.
pub fn distinguished_projection(
    op: &PsdOperator,
    s: &Subspace,
    tol: &Tolerances,
) -> Result<Matrix> {
    let c = compress(op, s, tol)?;
    if c.residual > c.threshold {
        return Err(Error::RangeCondition {
            residual: c.residual,
        });
    }
    let u = c.dec.subspace.basis();
    let v = c.dec.complement.basis();
    Ok(u * (u.adjoint() + &c.d * v.adjoint()))
}

/// `A^{-1/2}·P_{A^{1/2}(S)}·A^{1/2}`, valid only for invertible `A`.
pub fn invertible_case_projection(
    op: &PsdOperator,
    s: &Subspace,
    tol: &Tolerances,
) -> Result<Matrix> {
    if op.dim() != s.ambient_dim() {
        return Err(Error::dims(
            "invertible-case projection",
            op.dim(),
            s.ambient_dim(),
        ));
    }
    let inv_sqrt = op.inv_sqrt()?;
    let sqrt = op.sqrt();
    let image = column_space(&(&sqrt * s.basis()), tol)?;
    Ok(inv_sqrt * image.projector() * sqrt)
}

/// `P(A,S)` as an affine family: `P_{A,S}` plus operators with range in `N`
/// that vanish on `S`.
pub fn projection_family(
    op: &PsdOperator,
    s: &Subspace,
    tol: &Tolerances,
) -> Result<AffineOperatorFamily> {
    let base = distinguished_projection(op, s, tol)?;
    let n = kernel_intersection(op, s, tol)?;
    Ok(AffineOperatorFamily::new(
        base,
        n,
        s.orthogonal_complement(),
    ))
}

/// `Π(A,S) = P_{A,S} + L(H, N)`.
pub fn weighted_projection_family(
    op: &PsdOperator,
    s: &Subspace,
    tol: &Tolerances,
) -> Result<AffineOperatorFamily> {
    let base = distinguished_projection(op, s, tol)?;
    let n = kernel_intersection(op, s, tol)?;
    Ok(AffineOperatorFamily::new(base, n, Subspace::full(op.dim())))
}

/// Per-condition residuals of a membership test.
#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    pub member: bool,
    pub conditions: Vec<(&'static str, Flag)>,
}

impl Membership {
    pub fn flag(&self) -> Flag {
        self.conditions
            .iter()
            .map(|(_, f)| *f)
            .reduce(Flag::and)
            .expect("non-empty")
    }
}

fn check_operator(op: &PsdOperator, s: &Subspace, t: &Matrix) -> Result<()> {
    check_square("operator", t)?;
    if t.nrows() != op.dim() || s.ambient_dim() != op.dim() {
        return Err(Error::dims("operator", op.dim(), t.nrows()));
    }
    Ok(())
}

/// `Q ∈ P(A,S)`: `Q² = Q`, `R(Q) = S`, `AQ = QᴴA`.
pub fn projection_set_membership(
    op: &PsdOperator,
    s: &Subspace,
    q: &Matrix,
    tol: &Tolerances,
) -> Result<Membership> {
    check_operator(op, s, q)?;
    let a = op.matrix();
    let thr = tol.threshold(&[op.fro_norm(), fro(q)]);
    let idem = Flag::new(fro(&(q * q - q)), thr);
    let into = Flag::new(s.containment_residual(q), thr);
    // Q acts as the identity on S, so S ⊆ R(Q)
    let onto = Flag::new(fro(&(q * s.basis() - s.basis())), thr);
    let sa = Flag::new(fro(&(a * q - q.adjoint() * a)), thr);
    let conditions = vec![
        ("idempotent", idem),
        ("range_in_s", into),
        ("identity_on_s", onto),
        ("a_selfadjoint", sa),
    ];
    Ok(Membership {
        member: conditions.iter().all(|(_, f)| f.passed),
        conditions,
    })
}

/// `T ∈ Π(A,S)`: `R(T) ⊆ S` and `P_S·A·T = P_S·A`.
pub fn weighted_projection_membership(
    op: &PsdOperator,
    s: &Subspace,
    t: &Matrix,
    tol: &Tolerances,
) -> Result<Membership> {
    check_operator(op, s, t)?;
    let a = op.matrix();
    let thr = tol.threshold(&[op.fro_norm(), fro(t)]);
    let into = Flag::new(s.containment_residual(t), thr);
    let u = s.basis();
    // P_S·X ≈ 0 iff Uᴴ·X ≈ 0
    let normal = Flag::new(fro(&(u.adjoint() * a * t - u.adjoint() * a)), thr);
    let conditions = vec![("range_in_s", into), ("projected_normal_equation", normal)];
    Ok(Membership {
        member: into.passed && normal.passed,
        conditions,
    })
}

#[cfg(test)]
mod tests;
