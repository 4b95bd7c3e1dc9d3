//! Brute-force reference computations.
//!
//! Everything here works in the lifted variable `A^{1/2}·(·)` and only uses
//! the numerical kernel: no block decompositions, normal equations or
//! weighted projections. Tests compare these against the main modules.

use rand::Rng;

use crate::error::Result;
use crate::numkernel::{
    check_rows, check_vector, fro, pseudo_inverse, Matrix, PsdOperator, Subspace, Tolerances,
};
use crate::random::{gaussian_matrix, rng};

/// Minimizer and optimal value of `‖y − Bx‖_A`, solved as the ordinary
/// least-squares problem `min ‖A^{1/2}y − A^{1/2}B·x‖`.
pub fn oracle_seminorm_lss(
    a: &PsdOperator,
    b: &Matrix,
    y: &Matrix,
    tol: &Tolerances,
) -> Result<(Matrix, f64)> {
    check_rows("oracle LSS operator", b, a.dim())?;
    check_vector("oracle LSS data", y, a.dim())?;
    let sqrt = a.sqrt();
    let lifted = &sqrt * b;
    let target = &sqrt * y;
    let x = pseudo_inverse(&lifted, tol)? * &target;
    let value = fro(&(target - lifted * &x));
    Ok((x, value))
}

/// Exact minimizer of `‖base + D·t‖_{A₂}` over coefficient vectors `t`,
/// where `D` is the orthonormal basis of `directions`.
pub fn oracle_min_over_affine(
    a2: &PsdOperator,
    base: &Matrix,
    directions: &Subspace,
    tol: &Tolerances,
) -> Result<(Matrix, f64)> {
    check_vector("affine base", base, a2.dim())?;
    let sqrt = a2.sqrt();
    let d = directions.basis();
    let lifted = &sqrt * d;
    let t = -(pseudo_inverse(&lifted, tol)? * (&sqrt * base));
    let point = base + d * t;
    let value = fro(&(&sqrt * &point));
    Ok((point, value))
}

/// Randomized falsifier for "`candidate` minimizes `‖·‖_A` over
/// `coset_base + coset_dirs`".
///
/// Returns true iff the candidate lies in the coset and
/// `‖candidate‖_A ≤ ‖p‖_A + slack` for every sampled coset point `p`.
/// Samples are deterministic in `seed` and spread over several scales.
pub fn dominance_sample_test(
    a: &PsdOperator,
    candidate: &Matrix,
    coset_base: &Matrix,
    coset_dirs: &Subspace,
    trials: usize,
    seed: u64,
    slack: f64,
) -> bool {
    let sqrt = a.sqrt();
    let feasible = coset_dirs.containment_residual(&(candidate - coset_base))
        <= slack.max(1e-12) * (1.0 + fro(candidate) + fro(coset_base));
    if !feasible {
        return false;
    }
    let own = fro(&(&sqrt * candidate));
    let mut r = rng(seed);
    let d = coset_dirs.basis();
    (0..trials).all(|_| {
        let scale = 10f64.powf(r.random_range(-3.0..2.0));
        let t = gaussian_matrix(&mut r, d.ncols(), 1).scale(scale);
        let point = coset_base + d * t;
        own <= fro(&(&sqrt * point)) + slack
    })
}
