use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{
    check_square, eigh, fro, spectral_norm, Flag, Matrix, PsdOperator, Subspace, Tolerances,
};

/// The three equivalent characterizations of an A-projection, evaluated
/// independently.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProjectionRoutes {
    /// `TᴴAT = AT`.
    pub gram: Flag,
    /// `AT = TᴴA` and `AT² = AT`.
    pub selfadjoint_idempotent: Flag,
    /// `P_{R(A)}T` idempotent and A-selfadjoint.
    pub range_compressed: Flag,
}

impl ProjectionRoutes {
    pub fn agree(&self) -> bool {
        self.gram.passed == self.selfadjoint_idempotent.passed
            && self.gram.passed == self.range_compressed.passed
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorReport {
    /// `AT = TᴴA`.
    pub a_selfadjoint: Flag,
    /// `AT² = AT`.
    pub a_idempotent: Flag,
    /// Verdict of the `TᴴAT = AT` route.
    pub a_projection: Flag,
    pub routes: ProjectionRoutes,
    pub routes_agree: bool,
    /// `R(T) ⊆ S` and `P_S·A·T = P_S·A`; present when `S` is supplied.
    pub a_projection_into_s: Option<Flag>,
    /// `TᴴAT ≤ A`; residual is the negative part of `λ_min(A − TᴴAT)`.
    pub a_contraction: Flag,
    /// `AT` Hermitian PSD.
    pub a_positive: Flag,
    /// `R(I − T) ⊥ R(AT)`, i.e. `TᴴA(I − T) = 0`.
    pub complement_orthogonal: Flag,
    /// `‖T‖_A`; `+∞` when `T` maps some vector of `N(A)` outside `N(A)`.
    pub seminorm_of_t: f64,
    /// Whether `AT ≈ 0`.
    pub at_vanishes: bool,
}

impl OperatorReport {
    /// `‖T‖_A = 1` within the residual threshold.
    pub fn unit_seminorm(&self) -> bool {
        (self.seminorm_of_t - 1.0).abs() <= self.a_projection.threshold
    }
}

fn min_hermitian_eigenvalue(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    eigh(m).0.last().copied().unwrap_or(0.0)
}

/// Operator seminorm `sup{‖Tx‖_A : ‖x‖_A ≤ 1}`.
///
/// The supremum is finite iff `T(N(A)) ⊆ N(A)`, in which case it equals
/// `‖A^{1/2}·T·(A^{1/2})†‖`. It is 0 when `A = 0`.
pub fn operator_seminorm(op: &PsdOperator, t: &Matrix, tol: &Tolerances) -> f64 {
    let sqrt = op.sqrt();
    let kernel = op.kernel();
    let leak = fro(&(&sqrt * t * kernel.basis()));
    if leak > tol.threshold(&[op.fro_norm(), fro(t)]) {
        return f64::INFINITY;
    }
    spectral_norm(&(&sqrt * t * op.pinv_sqrt()))
}

pub fn classify_operator(
    op: &PsdOperator,
    t: &Matrix,
    s: Option<&Subspace>,
    tol: &Tolerances,
) -> Result<OperatorReport> {
    check_square("classified operator", t)?;
    if t.nrows() != op.dim() {
        return Err(Error::dims("classified operator", op.dim(), t.nrows()));
    }
    if let Some(s) = s {
        if s.ambient_dim() != op.dim() {
            return Err(Error::dims("subspace", op.dim(), s.ambient_dim()));
        }
    }

    let a = op.matrix();
    let n = op.dim();
    let thr = tol.threshold(&[op.fro_norm(), fro(t)]);
    let at = a * t;
    let ta = t.adjoint() * a;
    let at2 = &at * t;

    let a_selfadjoint = Flag::new(fro(&(&at - &ta)), thr);
    let a_idempotent = Flag::new(fro(&(&at2 - &at)), thr);
    let gram = Flag::new(fro(&(&ta * t - &at)), thr);

    let pt = op.range_projector() * t;
    let pt_idem = Flag::new(fro(&(&pt * &pt - &pt)), thr);
    let pt_sa = Flag::new(fro(&(a * &pt - pt.adjoint() * a)), thr);
    let routes = ProjectionRoutes {
        gram,
        selfadjoint_idempotent: a_selfadjoint.and(a_idempotent),
        range_compressed: pt_idem.and(pt_sa),
    };

    let a_projection_into_s = s.map(|s| {
        let u = s.basis();
        let into = Flag::new(s.containment_residual(t), thr);
        let normal = Flag::new(fro(&(u.adjoint() * &at - u.adjoint() * a)), thr);
        into.and(normal)
    });

    let contraction_gap = min_hermitian_eigenvalue(&(a - &ta * t));
    let a_contraction = Flag::new((-contraction_gap).max(0.0), thr);

    let positive_gap = min_hermitian_eigenvalue(&at);
    let a_positive =
        Flag::new(fro(&(&at - at.adjoint())), thr).and(Flag::new((-positive_gap).max(0.0), thr));

    let complement = Matrix::identity(n, n) - t;
    let complement_orthogonal = Flag::new(fro(&(&ta * complement)), thr);

    Ok(OperatorReport {
        a_selfadjoint,
        a_idempotent,
        a_projection: gram,
        routes_agree: routes.agree(),
        routes,
        a_projection_into_s,
        a_contraction,
        a_positive,
        complement_orthogonal,
        seminorm_of_t: operator_seminorm(op, t, tol),
        at_vanishes: fro(&at) <= thr,
    })
}
