//! Abstract spline interpolants: the minimizers of `‖C·y‖` over the coset
//! `x + S`, and the weighted distance from `x` to `S`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numkernel::{
    check_finite, check_vector, fro, seminorm, Flag, Matrix, PsdOperator, Subspace, Tolerances,
};
use crate::projections::{distinguished_projection, kernel_intersection};
use crate::random::gaussian_matrix;

/// `representative + direction_space`.
#[derive(Debug, Clone)]
pub struct AffineVectorFamily {
    pub representative: Matrix,
    pub direction_space: Subspace,
}

impl AffineVectorFamily {
    pub fn member(&self, coeffs: &Matrix) -> Matrix {
        &self.representative + self.direction_space.basis() * coeffs
    }

    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix {
        self.member(&gaussian_matrix(rng, self.direction_space.dim(), 1))
    }
}

fn gram(c: &Matrix, tol: &Tolerances) -> Result<PsdOperator> {
    check_finite(c)?;
    PsdOperator::new(c.adjoint() * c, tol)
}

fn check_inputs(c: &Matrix, s: &Subspace, x: &Matrix) -> Result<()> {
    if c.ncols() != s.ambient_dim() {
        return Err(Error::dims(
            "spline operator columns",
            s.ambient_dim(),
            c.ncols(),
        ));
    }
    check_vector("spline data", x, s.ambient_dim())?;
    check_finite(x)
}

/// `sp(C, S, x) = (I − P_{A,S})x + N` with `A = CᴴC` and `N = S ∩ N(A)`.
///
/// For `x = 0` the representative is 0 and the set is `N` itself.
pub fn spline_set(
    c: &Matrix,
    s: &Subspace,
    x: &Matrix,
    tol: &Tolerances,
) -> Result<AffineVectorFamily> {
    check_inputs(c, s, x)?;
    let a = gram(c, tol)?;
    let n = kernel_intersection(&a, s, tol)?;
    if fro(x) == 0.0 {
        return Ok(AffineVectorFamily {
            representative: x.clone(),
            direction_space: n,
        });
    }
    let p = distinguished_projection(&a, s, tol)?;
    Ok(AffineVectorFamily {
        representative: x - p * x,
        direction_space: n,
    })
}

/// `y ∈ (x + S) ∩ A(S)⊥`.
pub fn spline_membership(
    c: &Matrix,
    s: &Subspace,
    x: &Matrix,
    y: &Matrix,
    tol: &Tolerances,
) -> Result<Flag> {
    check_inputs(c, s, x)?;
    check_vector("spline candidate", y, s.ambient_dim())?;
    let a = gram(c, tol)?;
    let thr = tol.threshold(&[a.fro_norm(), fro(x), fro(y)]);
    let in_coset = Flag::new(s.containment_residual(&(y - x)), thr);
    let orthogonal = Flag::new(fro(&(s.basis().adjoint() * a.matrix() * y)), thr);
    Ok(in_coset.and(orthogonal))
}

/// `d_A(x, S) = inf_{s∈S} ‖x − s‖_A = ‖(I − P_{A,S})x‖_A`.
pub fn weighted_distance(c: &Matrix, s: &Subspace, x: &Matrix, tol: &Tolerances) -> Result<f64> {
    check_inputs(c, s, x)?;
    let a = gram(c, tol)?;
    let p = distinguished_projection(&a, s, tol)?;
    seminorm(&a, &(x - p * x), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{identity, real_diag, real_matrix, real_vector};
    use crate::random::{gaussian_vector, random_rank_matrix, random_subspace, rng};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn span(rows: usize, cols: usize, data: &[f64]) -> Subspace {
        Subspace::new(&real_matrix(rows, cols, data), &tol()).unwrap()
    }

    #[test]
    fn euclidean_spline() {
        let s = span(2, 1, &[1.0, 0.0]);
        let x = real_vector(&[1.0, 2.0]);
        let sp = spline_set(&identity(2), &s, &x, &tol()).unwrap();
        assert!(fro(&(&sp.representative - real_vector(&[0.0, 2.0]))) < 1e-14);
        assert!(sp.direction_space.is_zero());
    }

    #[test]
    fn degenerate_spline_coset() {
        // CᴴC = diag(1,0): ‖(1,t)‖_A = 1 for every t
        let c = real_diag(&[1.0, 0.0]);
        let s = span(2, 1, &[0.0, 1.0]);
        let x = real_vector(&[1.0, 0.0]);
        let sp = spline_set(&c, &s, &x, &tol()).unwrap();
        assert!(sp.direction_space.equals(&s, 1e-12));
        let a = PsdOperator::new(c.adjoint() * &c, &tol()).unwrap();
        for t in [-3.0, 0.0, 0.5, 10.0] {
            let y = sp.member(&real_vector(&[t]));
            assert!((seminorm(&a, &y, &tol()).unwrap() - 1.0).abs() < 1e-12);
            assert!(spline_membership(&c, &s, &x, &y, &tol()).unwrap().passed);
        }
        assert!((weighted_distance(&c, &s, &x, &tol()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_data_gives_degenerate_subspace() {
        let c = real_matrix(1, 3, &[1.0, 0.0, 0.0]);
        let s = span(3, 2, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let sp = spline_set(&c, &s, &Matrix::zeros(3, 1), &tol()).unwrap();
        assert!(fro(&sp.representative) == 0.0);
        assert!(sp
            .direction_space
            .equals(&span(3, 1, &[0.0, 0.0, 1.0]), 1e-10));
    }

    #[test]
    fn distance_examples() {
        let s = span(3, 1, &[1.0, 1.0, 0.0]);
        let inside = real_vector(&[2.0, 2.0, 0.0]);
        let c = random_rank_matrix(&mut rng(1), 2, 3, 2);
        assert!(weighted_distance(&c, &s, &inside, &tol()).unwrap() < 1e-12);

        let x = real_vector(&[1.0, 0.0, 3.0]);
        let euclid = fro(&(s.complement_projector() * &x));
        assert!((weighted_distance(&identity(3), &s, &x, &tol()).unwrap() - euclid).abs() < 1e-12);
    }

    #[test]
    fn members_satisfy_set_characterization() {
        let mut r = rng(9);
        for trial in 0..30 {
            let n = 3 + trial % 4;
            let c = random_rank_matrix(&mut r, n, n, trial % n);
            let s = random_subspace(&mut r, n, 1 + trial % (n - 1));
            let x = gaussian_vector(&mut r, n);
            let sp = spline_set(&c, &s, &x, &tol()).unwrap();
            let y = sp.random_member(&mut r);
            assert!(
                spline_membership(&c, &s, &x, &y, &tol()).unwrap().passed,
                "trial {trial}"
            );
        }
    }

    #[test]
    fn dimension_errors() {
        let s = span(2, 1, &[1.0, 0.0]);
        assert!(spline_set(&identity(3), &s, &real_vector(&[1.0, 2.0]), &tol()).is_err());
        assert!(spline_set(&identity(2), &s, &real_vector(&[1.0, 2.0, 3.0]), &tol()).is_err());
    }
}
