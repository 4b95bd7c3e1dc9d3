//! Weighted least squares and weighted generalized inverses.
//!
//! `B` maps `Cᵐ → Cⁿ`; `A` and `A₁` weight the residual space `Cⁿ`, `A₂`
//! weights the solution space `Cᵐ`. All the constructions below return one
//! canonical member; the full solution sets are exposed as
//! [`AffineOperatorFamily`] values or checked with [`inverse_check`].

mod check;

pub use check::{inverse_check, EquivalenceCheck, InverseKind, InverseReport};

use crate::error::{Error, Result};
use crate::numkernel::{
    check_finite, check_vector, column_space_with_reference, fro, null_space_with_reference,
    pseudo_inverse, rank_factorization, reduced_solution_with_reference, spectral_norm, Matrix,
    PsdOperator, Subspace, Tolerances,
};
use crate::projections::{distinguished_projection, kernel_intersection, AffineOperatorFamily};

fn check_weights(a: &PsdOperator, b: &Matrix) -> Result<()> {
    check_finite(b)?;
    if a.dim() != b.nrows() {
        return Err(Error::dims("weight vs. operator rows", a.dim(), b.nrows()));
    }
    Ok(())
}

fn check_solution_weight(a2: &PsdOperator, b: &Matrix) -> Result<()> {
    if a2.dim() != b.ncols() {
        return Err(Error::dims(
            "solution weight vs. operator columns",
            a2.dim(),
            b.ncols(),
        ));
    }
    Ok(())
}

/// `R(B)` with the rank cutoff measured against `‖B‖`.
pub(crate) fn range_of(b: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    column_space_with_reference(b, tol, spectral_norm(b))
}

pub(crate) fn kernel_of(b: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    null_space_with_reference(b, tol, spectral_norm(b))
}

/// `N(A·B)`, computed from `A^{1/2}·B`, which has the same kernel and half
/// the condition number.
pub fn weighted_kernel(a: &PsdOperator, b: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    check_weights(a, b)?;
    let lifted = a.sqrt() * b;
    null_space_with_reference(&lifted, tol, a.norm().sqrt() * spectral_norm(b))
}

/// A-least-squares solution `x₀ = (BᴴAB)†BᴴAy` of `Bx = y`.
pub fn a_lss_solve(a: &PsdOperator, b: &Matrix, y: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    check_weights(a, b)?;
    check_vector("A-LSS data", y, a.dim())?;
    check_finite(y)?;
    let bha = b.adjoint() * a.matrix();
    let normal = &bha * b;
    Ok(pseudo_inverse(&normal, tol)? * (bha * y))
}

/// Residual of the normal equation `BᴴABx = BᴴAy`.
pub fn normal_equation_residual(a: &PsdOperator, b: &Matrix, y: &Matrix, x: &Matrix) -> f64 {
    let bha = b.adjoint() * a.matrix();
    fro(&(&bha * b * x - bha * y))
}

/// Witness for the geometric characterization of A-LSS: returns
/// `T = P_{A,R(B)} + W ∈ Π(A, R(B))` with `T·y = B·u`, where `W` is the
/// rank-one completion `(Bu − P_{A,R(B)}y)·yᴴ / ‖y‖²`.
pub fn lss_projection_witness(
    a: &PsdOperator,
    b: &Matrix,
    y: &Matrix,
    u: &Matrix,
    tol: &Tolerances,
) -> Result<Matrix> {
    check_weights(a, b)?;
    check_vector("A-LSS data", y, a.dim())?;
    let range = range_of(b, tol)?;
    let p = distinguished_projection(a, &range, tol)?;
    let ny = fro(y);
    if ny == 0.0 {
        return Ok(p);
    }
    let gap = b * u - &p * y;
    let w = gap * y.adjoint().unscale(ny * ny);
    Ok(p + w)
}

/// The set of A-inverses `(BᴴAB)†BᴴA + L(Cⁿ, N(BᴴAB))`.
pub fn a_inverse_family(
    a: &PsdOperator,
    b: &Matrix,
    tol: &Tolerances,
) -> Result<AffineOperatorFamily> {
    check_weights(a, b)?;
    let bha = b.adjoint() * a.matrix();
    let normal = &bha * b;
    // base and free directions come from one rank decision
    let f = rank_factorization(&normal, tol)?;
    let base = f.pseudo_inverse() * bha;
    let kernel = Subspace::from_orthonormal(f.right.clone()).orthogonal_complement();
    Ok(AffineOperatorFamily::new(
        base,
        kernel,
        Subspace::full(b.nrows()),
    ))
}

/// A-inverse of `B` restricted to `M`: the reduced solution of
/// `B·P_M·X = P_{A, B(M)}`.
pub fn restricted_a_inverse(
    a: &PsdOperator,
    b: &Matrix,
    m: &Subspace,
    tol: &Tolerances,
) -> Result<Matrix> {
    check_weights(a, b)?;
    if m.ambient_dim() != b.ncols() {
        return Err(Error::dims(
            "restriction subspace",
            b.ncols(),
            m.ambient_dim(),
        ));
    }
    let bpm = b * m.projector();
    let image = range_of(&bpm, tol)?;
    let t = distinguished_projection(a, &image, tol)?;
    reduced_solution_with_reference(&bpm, &t, tol, spectral_norm(b))
}

/// `A₁A₂`-inverse `G = (I − T₂)·B†·T₁` with `T₁ = P_{A₁,R(B)}` and
/// `T₂ = P_{A₂,N(A₁B)}`.
pub fn a1a2_inverse(
    a1: &PsdOperator,
    a2: &PsdOperator,
    b: &Matrix,
    tol: &Tolerances,
) -> Result<Matrix> {
    check_weights(a1, b)?;
    check_solution_weight(a2, b)?;
    let t1 = distinguished_projection(a1, &range_of(b, tol)?, tol)?;
    let t2 = distinguished_projection(a2, &weighted_kernel(a1, b, tol)?, tol)?;
    let m = b.ncols();
    Ok((Matrix::identity(m, m) - t2) * pseudo_inverse(b, tol)? * t1)
}

/// Weighted generalized inverse `C = (I − P_{A₂,N(B)})·B†·P_{A₁,R(B)}`.
pub fn weighted_generalized_inverse(
    a1: &PsdOperator,
    a2: &PsdOperator,
    b: &Matrix,
    tol: &Tolerances,
) -> Result<Matrix> {
    check_weights(a1, b)?;
    check_solution_weight(a2, b)?;
    let t1 = distinguished_projection(a1, &range_of(b, tol)?, tol)?;
    let t2 = distinguished_projection(a2, &kernel_of(b, tol)?, tol)?;
    let m = b.ncols();
    Ok((Matrix::identity(m, m) - t2) * pseudo_inverse(b, tol)? * t1)
}

/// `N(BᴴA₁B)`, the directions along which A₁-LSS solutions are not unique.
pub fn lss_ambiguity(a1: &PsdOperator, b: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    weighted_kernel(a1, b, tol)
}

/// Degenerate subspace of `(A, R(B))`; nonzero iff the A-projections into
/// `R(B)` are not unique.
pub fn range_degeneracy(a: &PsdOperator, b: &Matrix, tol: &Tolerances) -> Result<Subspace> {
    check_weights(a, b)?;
    kernel_intersection(a, &range_of(b, tol)?, tol)
}
