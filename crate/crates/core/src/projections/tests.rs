use super::*;
use crate::numkernel::{identity, real_diag, real_matrix, real_vector};
use crate::random::{
    gaussian_matrix, gaussian_vector, random_invertible_psd, random_psd, random_subspace, rng,
};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn psd(m: Matrix) -> PsdOperator {
    PsdOperator::new(m, &tol()).unwrap()
}

fn span(rows: usize, cols: usize, data: &[f64]) -> Subspace {
    Subspace::new(&real_matrix(rows, cols, data), &tol()).unwrap()
}

#[test]
fn kernel_intersection_examples() {
    let a = psd(real_diag(&[1.0, 0.0]));
    let s = span(2, 1, &[0.0, 1.0]);
    assert!(kernel_intersection(&a, &s, &tol())
        .unwrap()
        .equals(&s, 1e-12));

    let a = psd(real_matrix(2, 2, &[2.0, 1.0, 1.0, 2.0]));
    assert!(kernel_intersection(&a, &span(2, 1, &[1.0, 3.0]), &tol())
        .unwrap()
        .is_zero());

    let a = psd(real_diag(&[1.0, 0.0, 0.0]));
    let s = span(3, 2, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    let n = kernel_intersection(&a, &s, &tol()).unwrap();
    // independent route: intersect S with N(A) through stacked projectors
    let oracle = s.intersection(&a.kernel(), &tol()).unwrap();
    assert!(n.equals(&oracle, 1e-10));
    assert!(n.equals(&span(3, 1, &[0.0, 0.0, 1.0]), 1e-10));
}

#[test]
fn compatibility_examples() {
    let s = span(3, 2, &[1.0, 0.0, 2.0, 1.0, 0.0, 1.0]);
    let c = compatibility_certificate(&PsdOperator::identity(3), &s, &tol()).unwrap();
    assert!(c.compatible);
    assert!(c.residual < 1e-14);
    assert!(c.degenerate.is_zero());

    let a = psd(real_diag(&[1.0, 0.0]));
    let s = span(2, 1, &[0.0, 1.0]);
    let c = compatibility_certificate(&a, &s, &tol()).unwrap();
    assert!(c.compatible);
    assert!(c.degenerate.equals(&s, 1e-12));
}

#[test]
fn random_pairs_are_compatible() {
    let mut r = rng(7);
    for trial in 0..50 {
        let n = 2 + trial % 6;
        let a = random_psd(&mut r, n, trial % (n + 1));
        let s = random_subspace(&mut r, n, 1 + trial % n);
        let c = compatibility_certificate(&a, &s, &tol()).unwrap();
        assert!(c.compatible, "trial {trial}: residual {}", c.residual);
    }
}

#[test]
fn distinguished_projection_examples() {
    let s = span(3, 1, &[1.0, 2.0, 2.0]);
    let p = distinguished_projection(&PsdOperator::identity(3), &s, &tol()).unwrap();
    assert!(fro(&(p - s.projector())) < 1e-13);

    let a = psd(real_diag(&[1.0, 0.0]));
    let s = span(2, 1, &[1.0, 1.0]);
    let p = distinguished_projection(&a, &s, &tol()).unwrap();
    let expected = real_matrix(2, 2, &[1.0, 0.0, 1.0, 0.0]);
    assert!(fro(&(&p - &expected)) < 1e-13);
    assert!(fro(&(&p * &p - &p)) < 1e-13);
    assert!(fro(&(a.matrix() * &p - p.adjoint() * a.matrix())) < 1e-13);

    let a = psd(real_diag(&[1.0, 4.0]));
    let p = distinguished_projection(&a, &s, &tol()).unwrap();
    let expected = real_matrix(2, 2, &[1.0, 4.0, 1.0, 4.0]).unscale(5.0);
    assert!(fro(&(p - expected)) < 1e-13);
}

#[test]
fn distinguished_projection_of_zero_subspace() {
    let a = psd(real_diag(&[1.0, 2.0]));
    let p = distinguished_projection(&a, &Subspace::zero(2), &tol()).unwrap();
    assert!(fro(&p) == 0.0);
}

#[test]
fn distinguished_projection_kernel_and_split() {
    let mut r = rng(11);
    for trial in 0..40 {
        let n = 3 + trial % 5;
        let a = random_psd(&mut r, n, trial % n);
        let s = crate::random::random_subspace_meeting_kernel(
            &mut r,
            &a,
            1 + trial % (n - 1),
            trial % 2,
        );
        let p = distinguished_projection(&a, &s, &tol()).unwrap();
        let nn = kernel_intersection(&a, &s, &tol()).unwrap();

        // N(P) = A(S)⊥ ⊖ N
        let ker = null_space_with_reference(&p, &tol(), 1.0).unwrap();
        let expected = weighted_orthocomplement(&a, &s, &tol())
            .unwrap()
            .ominus(&nn, &tol())
            .unwrap();
        assert!(
            ker.equals(&expected, 1e-7),
            "trial {trial}: {}",
            ker.distance(&expected)
        );

        // P_{A,S} = P_{A,S⊖N} + P_N
        let reduced = s.ominus(&nn, &tol()).unwrap();
        let p_reduced = distinguished_projection(&a, &reduced, &tol()).unwrap();
        assert!(fro(&(&p - p_reduced - nn.projector())) < 1e-8 * (1.0 + a.fro_norm()));
    }
}

#[test]
fn invertible_case_examples() {
    let s = span(2, 1, &[1.0, 1.0]);
    let p = invertible_case_projection(&PsdOperator::identity(2), &s, &tol()).unwrap();
    assert!(fro(&(p - s.projector())) < 1e-13);

    let a = psd(real_diag(&[1.0, 4.0]));
    let p = invertible_case_projection(&a, &s, &tol()).unwrap();
    let expected = real_matrix(2, 2, &[1.0, 4.0, 1.0, 4.0]).unscale(5.0);
    assert!(fro(&(p - expected)) < 1e-13);

    let singular = psd(real_diag(&[1.0, 0.0]));
    assert!(matches!(
        invertible_case_projection(&singular, &s, &tol()),
        Err(Error::Singular)
    ));

    let mut r = rng(3);
    for _ in 0..20 {
        let a = random_invertible_psd(&mut r, 5);
        let s = random_subspace(&mut r, 5, 2);
        let p1 = distinguished_projection(&a, &s, &tol()).unwrap();
        let p2 = invertible_case_projection(&a, &s, &tol()).unwrap();
        assert!(fro(&(&p1 - p2)) <= 1e-8 * fro(&p1));
    }
}

#[test]
fn projection_family_examples() {
    let s = span(3, 1, &[1.0, 0.0, 1.0]);
    let fam = projection_family(&PsdOperator::identity(3), &s, &tol()).unwrap();
    assert!(fam.is_singleton());
    assert_eq!(fam.param_dims(), (0, 2));

    let a = psd(real_diag(&[1.0, 0.0]));
    let s = span(2, 1, &[0.0, 1.0]);
    let q = real_matrix(2, 2, &[0.0, 0.0, 1.0, 1.0]);
    assert!(
        projection_set_membership(&a, &s, &q, &tol())
            .unwrap()
            .member
    );
    let fam = projection_family(&a, &s, &tol()).unwrap();
    assert!(fam.structural_membership(&q, &tol()).passed);

    let a = psd(real_matrix(2, 2, &[3.0, 1.0, 1.0, 2.0]));
    let fam = projection_family(&a, &span(2, 1, &[1.0, -1.0]), &tol()).unwrap();
    assert_eq!(fam.param_dims().0, 0);
}

#[test]
fn weighted_projection_family_examples() {
    let s = span(2, 1, &[2.0, 1.0]);
    let fam = weighted_projection_family(&PsdOperator::identity(2), &s, &tol()).unwrap();
    assert!(fam.is_singleton());
    assert!(fro(&(&fam.base - s.projector())) < 1e-13);

    // P_S·A = 0, so every operator with range in span{e2} is a member
    let a = psd(real_diag(&[1.0, 0.0]));
    let s = span(2, 1, &[0.0, 1.0]);
    let fam = weighted_projection_family(&a, &s, &tol()).unwrap();
    assert_eq!(fam.param_dims(), (1, 2));
    let t = real_matrix(2, 2, &[0.0, 0.0, -3.0, 7.5]);
    assert!(
        weighted_projection_membership(&a, &s, &t, &tol())
            .unwrap()
            .member
    );
    assert!(fam.structural_membership(&t, &tol()).passed);
    let off = real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    assert!(
        !weighted_projection_membership(&a, &s, &off, &tol())
            .unwrap()
            .member
    );
}

#[test]
fn cardinality_separation() {
    let a = psd(real_diag(&[1.0, 0.0, 0.0]));
    let s = span(3, 2, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    let p = distinguished_projection(&a, &s, &tol()).unwrap();
    let n = kernel_intersection(&a, &s, &tol()).unwrap();
    assert_eq!(n.dim(), 1);
    let t = &p + n.projector();
    assert!(
        weighted_projection_membership(&a, &s, &t, &tol())
            .unwrap()
            .member
    );
    assert!(
        !projection_set_membership(&a, &s, &t, &tol())
            .unwrap()
            .member
    );
    assert!(fro(&(&t * &t - &t)) > 1e-4);
}

#[test]
fn classify_examples() {
    let s = span(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    let ps = s.projector();
    let rep = classify_operator(&PsdOperator::identity(3), &ps, Some(&s), &tol()).unwrap();
    assert!(rep.a_selfadjoint.passed && rep.a_idempotent.passed && rep.a_projection.passed);
    assert!(rep.a_projection_into_s.unwrap().passed);
    assert!(rep.a_contraction.passed && rep.a_positive.passed);
    assert!(rep.routes_agree);
    assert!((rep.seminorm_of_t - 1.0).abs() < 1e-12);

    let a = psd(real_diag(&[1.0, 0.0]));
    let t = real_matrix(2, 2, &[1.0, 0.0, 1.0, 0.0]);
    let s = span(2, 1, &[1.0, 1.0]);
    let rep = classify_operator(&a, &t, Some(&s), &tol()).unwrap();
    assert!(rep.a_projection.passed);
    assert!(rep.a_projection_into_s.unwrap().passed);
    assert!((rep.seminorm_of_t - 1.0).abs() < 1e-12);

    // TᴴAT = [[1,1],[1,1]] ≠ AT
    let t = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let rep = classify_operator(&PsdOperator::identity(2), &t, None, &tol()).unwrap();
    assert!(rep.a_idempotent.passed);
    assert!(!rep.a_selfadjoint.passed);
    assert!(!rep.a_projection.passed);
    assert!(!rep.a_contraction.passed);
    assert!(!rep.a_positive.passed);
    assert!(rep.routes_agree);
    assert!(rep.seminorm_of_t > 1.0 + 1e-3);
}

#[test]
fn seminorm_is_infinite_when_kernel_leaks() {
    // T sends e2 ∈ N(A) to e1 ∉ N(A)
    let a = psd(real_diag(&[1.0, 0.0]));
    let t = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let rep = classify_operator(&a, &t, None, &tol()).unwrap();
    assert!(rep.seminorm_of_t.is_infinite());
    assert!(!rep.a_projection.passed);
    assert!(rep.routes_agree);

    let zero = PsdOperator::new(zeros_sq(2), &tol()).unwrap();
    let rep = classify_operator(&zero, &t, None, &tol()).unwrap();
    assert_eq!(rep.seminorm_of_t, 0.0);
    assert!(rep.at_vanishes);
}

fn zeros_sq(n: usize) -> Matrix {
    Matrix::zeros(n, n)
}

#[test]
fn classify_rejects_bad_shapes() {
    let a = PsdOperator::identity(2);
    assert!(classify_operator(&a, &identity(3), None, &tol()).is_err());
    assert!(classify_operator(&a, &gaussian_matrix(&mut rng(0), 2, 3), None, &tol()).is_err());
}

#[test]
fn minimality_examples() {
    let a = psd(real_diag(&[2.0, 0.0, 0.0]));
    let s = span(3, 2, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
    let fam = weighted_projection_family(&a, &s, &tol()).unwrap();
    assert_eq!(fam.range_space.dim(), 1);
    let x = real_vector(&[1.0, -2.0, 0.5]);

    let rep = minimality_report(&a, &s, &fam.base, Some(&x), &tol()).unwrap();
    assert!(rep.norm_gap.abs() < 1e-12);
    assert!(rep.pointwise_gap.unwrap().abs() < 1e-12);
    assert!(rep.norm_bound_applies);

    let mut r = rng(5);
    for _ in 0..20 {
        let params = gaussian_matrix(&mut r, 1, 3);
        let w = fam.free_part(&params);
        let t = &fam.base + &w;
        let x = gaussian_vector(&mut r, 3);
        let rep = minimality_report(&a, &s, &t, Some(&x), &tol()).unwrap();
        assert!(rep.norm_gap >= -1e-12);
        // ‖(I−T)x‖² = ‖(I−P)x‖² + ‖Wx‖²
        let id = identity(3);
        let lhs = fro(&((&id - &t) * &x)).powi(2);
        let rhs = fro(&((&id - &fam.base) * &x)).powi(2) + fro(&(&w * &x)).powi(2);
        assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs));
    }
}

#[test]
fn minimality_norm_bound_fails_inside_kernel() {
    let a = psd(real_diag(&[1.0, 0.0]));
    let s = span(2, 1, &[0.0, 1.0]);
    let rep = minimality_report(&a, &s, &zeros_sq(2), None, &tol()).unwrap();
    assert!(!rep.norm_bound_applies);
    assert!(rep.norm_gap < -0.5);
}

#[test]
fn minimality_rejects_non_members() {
    let a = PsdOperator::identity(2);
    let s = span(2, 1, &[1.0, 0.0]);
    let err = minimality_report(&a, &s, &identity(2), None, &tol()).unwrap_err();
    assert!(matches!(err, Error::NotMember { .. }));
}
