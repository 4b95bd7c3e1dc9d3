use super::factor::rank_factorization_with_reference;
use super::{check_rows, fro, Matrix, PsdOperator, Subspace, Tolerances};
use crate::error::{Error, Result};

/// The blocks `[[a, b], [bᴴ, c]]` of a PSD operator in the `(S, S⊥)`
/// decomposition, expressed in the orthonormal bases of `S` and `S⊥`.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub subspace: Subspace,
    pub complement: Subspace,
    /// `k × k` compression to `S`.
    pub a: Matrix,
    /// `k × (n−k)` coupling `S⊥ → S`.
    pub b: Matrix,
    /// `(n−k) × (n−k)` compression to `S⊥`.
    pub c: Matrix,
}

pub fn block_decompose(op: &PsdOperator, s: &Subspace) -> Result<BlockDecomposition> {
    if op.dim() != s.ambient_dim() {
        return Err(Error::dims(
            "block decomposition",
            op.dim(),
            s.ambient_dim(),
        ));
    }
    let u = s.basis();
    let complement = s.orthogonal_complement();
    let v = complement.basis();
    let m = op.matrix();
    let a = u.adjoint() * m * u;
    let a = (&a + a.adjoint()).scale(0.5);
    let c = v.adjoint() * m * v;
    let c = (&c + c.adjoint()).scale(0.5);
    Ok(BlockDecomposition {
        a,
        b: u.adjoint() * m * v,
        c,
        subspace: s.clone(),
        complement,
    })
}

impl BlockDecomposition {
    pub fn dims(&self) -> (usize, usize) {
        (self.subspace.dim(), self.complement.dim())
    }

    /// Reassemble the operator in the standard basis.
    pub fn assemble(&self) -> Matrix {
        let u = self.subspace.basis();
        let v = self.complement.basis();
        u * &self.a * u.adjoint()
            + u * &self.b * v.adjoint()
            + v * self.b.adjoint() * u.adjoint()
            + v * &self.c * v.adjoint()
    }

    /// `‖(I − P_{R(a)})·b‖_F`; zero iff `R(b) ⊆ R(a)`, which at finite
    /// dimension is the same as `R(b) ⊆ R(a^{1/2})`.
    pub fn range_residual(&self, tol: &Tolerances, reference: f64) -> Result<f64> {
        let f = rank_factorization_with_reference(&self.a, tol, reference)?;
        let proj = &f.left * f.left.adjoint();
        Ok(fro(&(&self.b - proj * &self.b)))
    }
}

pub fn assemble_from_blocks(dec: &BlockDecomposition) -> Matrix {
    dec.assemble()
}

/// The reduced solution of `A·X = B`: the unique solution with range in
/// `R(Aᴴ)`, computed as `A†·B` after checking `R(B) ⊆ R(A)`.
pub fn reduced_solution(a: &Matrix, b: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    reduced_solution_with_reference(a, b, tol, 0.0)
}

pub fn reduced_solution_with_reference(
    a: &Matrix,
    b: &Matrix,
    tol: &Tolerances,
    reference: f64,
) -> Result<Matrix> {
    check_rows("reduced solution", b, a.nrows())?;
    let f = rank_factorization_with_reference(a, tol, reference)?;
    super::check_finite(b)?;
    let d = f.pseudo_inverse() * b;
    let residual = fro(&(a * &d - b));
    if residual > tol.threshold(&[fro(a), fro(b)]) {
        return Err(Error::RangeCondition { residual });
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{identity, real_diag, real_matrix};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn read_off_blocks() {
        let a = PsdOperator::new(real_matrix(2, 2, &[2.0, 1.0, 1.0, 3.0]), &tol()).unwrap();
        let s = Subspace::new(&real_matrix(2, 1, &[1.0, 0.0]), &tol()).unwrap();
        let dec = block_decompose(&a, &s).unwrap();
        // basis signs are arbitrary; compare magnitudes and the reassembly
        assert!((dec.a[(0, 0)].re - 2.0).abs() < 1e-14);
        assert!((dec.b[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((dec.c[(0, 0)].re - 3.0).abs() < 1e-14);
        assert!(fro(&(dec.assemble() - a.matrix())) < 1e-13);
    }

    #[test]
    fn identity_blocks() {
        let a = PsdOperator::identity(3);
        let s = Subspace::new(&real_matrix(3, 1, &[1.0, 2.0, 2.0]), &tol()).unwrap();
        let dec = block_decompose(&a, &s).unwrap();
        assert!(fro(&(&dec.a - identity(1))) < 1e-13);
        assert!(fro(&dec.b) < 1e-13);
        assert!(fro(&(&dec.c - identity(2))) < 1e-13);
    }

    #[test]
    fn reduced_solution_examples() {
        let m = real_matrix(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let d = reduced_solution(&identity(2), &m, &tol()).unwrap();
        assert!(fro(&(d - &m)) < 1e-13);

        let p = real_diag(&[1.0, 0.0]);
        let d = reduced_solution(&p, &p, &tol()).unwrap();
        assert!(fro(&(d - &p)) < 1e-14);

        let a = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let b = real_matrix(2, 1, &[2.0, 2.0]);
        let d = reduced_solution(&a, &b, &tol()).unwrap();
        assert!(fro(&(&d - real_matrix(2, 1, &[1.0, 1.0]))) < 1e-13);
        assert!(fro(&(&a * &d - &b)) < 1e-13);
    }

    #[test]
    fn range_condition_failure() {
        let a = real_diag(&[1.0, 0.0]);
        let b = real_matrix(2, 1, &[0.0, 1.0]);
        assert!(matches!(
            reduced_solution(&a, &b, &tol()),
            Err(Error::RangeCondition { .. })
        ));
    }
}
