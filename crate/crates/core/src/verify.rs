//! Randomized invariant suite behind the `verify` subcommand.
//!
//! Each property runs `trials` independent instances of dimension at most
//! `n`. Trial seeds are drawn from a ChaCha stream keyed by the root seed and
//! the property index, so any failing trial can be replayed on its own.

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{
    fro, null_space_with_reference, pseudo_inverse, spectral_norm, subspace_ominus, Matrix, PsdOperator, Subspace,
    Tolerances,
};
use crate::oracle::{dominance_sample_test, oracle_min_over_affine, oracle_seminorm_lss};
use crate::projections::{
    classify_operator, distinguished_projection, invertible_case_projection, kernel_intersection, minimality_report,
    projection_family, projection_set_membership, weighted_orthocomplement, weighted_projection_family,
    weighted_projection_membership,
};
use crate::random::{
    gaussian_matrix, gaussian_vector, random_invertible_psd, random_psd, random_rank_matrix, random_subspace,
    random_subspace_meeting_kernel, rng, InstanceRng,
};
use crate::splines::{spline_set, weighted_distance};
use crate::winverse::{
    a1a2_inverse, a_inverse_family, a_lss_solve, inverse_check, lss_projection_witness, normal_equation_residual,
    restricted_a_inverse, weighted_generalized_inverse, InverseKind,
};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub trial_seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<TrialFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub passed: bool,
    pub properties: Vec<PropertyOutcome>,
}

type Trial = fn(&mut InstanceRng, usize, &Tolerances) -> std::result::Result<(), String>;

pub const PROPERTIES: [(&str, Trial); 10] = [
    ("distinguished_projection", distinguished_projection_trial),
    ("invertible_case", invertible_case_trial),
    ("projection_routes", projection_routes_trial),
    ("idempotent_equivalences", idempotent_equivalences_trial),
    ("affine_families", affine_families_trial),
    ("minimality", minimality_trial),
    ("spline_optimality", spline_trial),
    ("lss_oracle", lss_trial),
    ("inverse_characterizations", inverse_trial),
    ("weighted_generalized_inverse", wgi_trial),
];

/// Seed of trial `trial` of property `property` under root seed `seed`.
pub fn trial_seed(seed: u64, property: usize, trial: usize) -> u64 {
    let mut root = rng(seed);
    root.set_stream(property as u64);
    root.set_word_pos(2 * trial as u128);
    root.next_u64()
}

pub fn run_suite(config: SuiteConfig, tol: &Tolerances) -> Result<SuiteReport> {
    if config.n < 2 {
        return Err(Error::InvalidArgument("verify needs n >= 2"));
    }
    if config.trials == 0 {
        return Err(Error::InvalidArgument("verify needs at least one trial"));
    }
    let properties: Vec<PropertyOutcome> = PROPERTIES
        .iter()
        .enumerate()
        .map(|(idx, (name, trial))| run_property(idx, name, *trial, config, tol))
        .collect();
    Ok(SuiteReport {
        config,
        passed: properties.iter().all(|p| p.failures == 0),
        properties,
    })
}

/// Replays a single trial, e.g. one reported in a [`TrialFailure`].
pub fn replay(property: &str, n: usize, trial_seed: u64, tol: &Tolerances) -> Option<std::result::Result<(), String>> {
    let (_, trial) = PROPERTIES.iter().find(|(name, _)| *name == property)?;
    Some(trial(&mut rng(trial_seed), n, tol))
}

fn run_property(idx: usize, name: &'static str, trial: Trial, config: SuiteConfig, tol: &Tolerances) -> PropertyOutcome {
    let mut failures = 0;
    let mut first_failure = None;
    for t in 0..config.trials {
        let s = trial_seed(config.seed, idx, t);
        if let Err(message) = trial(&mut rng(s), config.n, tol) {
            failures += 1;
            first_failure.get_or_insert(TrialFailure {
                trial: t,
                trial_seed: s,
                message,
            });
        }
    }
    PropertyOutcome {
        name,
        trials: config.trials,
        failures,
        first_failure,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn dim(r: &mut InstanceRng, n: usize) -> usize {
    r.random_range(2..=n)
}

/// PSD weight of uniformly drawn rank in `0..=n`.
fn weight(r: &mut InstanceRng, n: usize) -> PsdOperator {
    let rank = r.random_range(0..=n);
    random_psd(r, n, rank)
}

/// Subspace of dimension in `lo..=hi`; half of the draws are forced to meet
/// `N(A)` when it is nontrivial.
fn subspace(r: &mut InstanceRng, a: &PsdOperator, lo: usize, hi: usize) -> Subspace {
    let k = r.random_range(lo..=hi);
    if k > 0 && a.rank() < a.dim() && r.random_bool(0.5) {
        random_subspace_meeting_kernel(r, a, k, 1)
    } else {
        random_subspace(r, a.dim(), k)
    }
}

fn distinguished_projection_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let n = dim(r, n);
    let a = weight(r, n);
    let s = subspace(r, &a, 0, n);
    let q = lib(distinguished_projection(&a, &s, tol))?;
    let thr = tol.threshold(&[a.fro_norm(), fro(&q)]);
    let am = a.matrix();
    ensure(fro(&(&q * &q - &q)) <= thr, || "P_{A,S} is not idempotent".into())?;
    ensure(fro(&(am * &q - q.adjoint() * am)) <= thr, || "P_{A,S} is not A-selfadjoint".into())?;

    let range = lib(crate::numkernel::column_space_with_reference(&q, tol, spectral_norm(&q)))?;
    ensure(range.equals(&s, 10.0 * thr), || format!("range differs from S by {:.3e}", range.distance(&s)))?;

    let kernel = lib(null_space_with_reference(&q, tol, spectral_norm(&q)))?;
    let n_space = lib(kernel_intersection(&a, &s, tol))?;
    let expected = lib(subspace_ominus(&lib(weighted_orthocomplement(&a, &s, tol))?, &n_space, tol))?;
    ensure(kernel.equals(&expected, 10.0 * thr), || {
        format!("kernel differs from A(S)⊥ ⊖ N by {:.3e}", kernel.distance(&expected))
    })
}

fn invertible_case_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let n = dim(r, n);
    let a = random_invertible_psd(r, n);
    let k = r.random_range(0..=n);
    let s = random_subspace(r, n, k);
    let p = lib(distinguished_projection(&a, &s, tol))?;
    let q = lib(invertible_case_projection(&a, &s, tol))?;
    let gap = fro(&(&p - &q));
    ensure(gap <= tol.threshold(&[fro(&p), a.fro_norm()]), || format!("formulas differ by {gap:.3e}"))
}

fn projection_routes_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let n = dim(r, n);
    let a = weight(r, n);
    let s = subspace(r, &a, 1, n - 1);
    let fam = lib(weighted_projection_family(&a, &s, tol))?;
    let member = fam.random_member(r);
    let outsider = &member + gaussian_matrix(r, n, n).scale(0.5);
    let rep = lib(classify_operator(&a, &member, Some(&s), tol))?;
    ensure(rep.routes_agree && rep.a_projection.passed, || {
        format!("member of Π(A,S) misclassified: {:?}", rep.routes)
    })?;
    ensure(rep.a_projection_into_s.is_some_and(|f| f.passed), || "member is not an A-projection into S".into())?;
    let rep = lib(classify_operator(&a, &outsider, None, tol))?;
    ensure(rep.routes_agree, || format!("routes disagree on a perturbed operator: {:?}", rep.routes))
}

fn idempotent_equivalences_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let n = dim(r, n);
    let a = weight(r, n);
    let s = subspace(r, &a, 1, n - 1);
    let t = if r.random_bool(0.5) {
        lib(projection_family(&a, &s, tol))?.random_member(r)
    } else {
        // idempotent with range S but arbitrary kernel
        let u = s.basis();
        let v = s.orthogonal_complement();
        let k = gaussian_matrix(r, s.dim(), n - s.dim());
        u * (u.adjoint() + k * v.basis().adjoint())
    };
    let rep = lib(classify_operator(&a, &t, Some(&s), tol))?;
    ensure(rep.a_idempotent.passed, || "constructed operator is not A-idempotent".into())?;
    let verdict = rep.a_projection.passed;
    let others = [
        ("A-selfadjoint", rep.a_selfadjoint.passed),
        ("A-contraction", rep.a_contraction.passed),
        ("A-positive", rep.a_positive.passed),
        ("complement orthogonality", rep.complement_orthogonal.passed),
    ];
    for (name, v) in others {
        ensure(v == verdict, || format!("{name} = {v} but A-projection = {verdict}"))?;
    }
    if verdict && !rep.at_vanishes {
        ensure(rep.unit_seminorm(), || format!("‖T‖_A = {} for a nonzero A-projection", rep.seminorm_of_t))?;
    }
    Ok(())
}

fn affine_families_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let n = dim(r, n);
    let a = weight(r, n);
    let s = subspace(r, &a, 1, n - 1);
    let pi = lib(weighted_projection_family(&a, &s, tol))?;
    let t = pi.random_member(r);
    let m = lib(weighted_projection_membership(&a, &s, &t, tol))?;
    ensure(m.member, || format!("Π member rejected: {:?}", m.conditions))?;

    let p_fam = lib(projection_family(&a, &s, tol))?;
    let q = p_fam.random_member(r);
    let m = lib(projection_set_membership(&a, &s, &q, tol))?;
    ensure(m.member, || format!("P member rejected: {:?}", m.conditions))?;

    if !pi.range_space.is_zero() {
        let t = &pi.base + pi.range_space.projector();
        let m = lib(weighted_projection_membership(&a, &s, &t, tol))?;
        ensure(m.member, || "P_{A,S} + P_N is not in Π(A,S)".into())?;
        let defect = fro(&(&t * &t - &t));
        ensure(defect > 1e-4, || format!("P_{{A,S}} + P_N is idempotent (defect {defect:.3e})"))?;
    }
    Ok(())
}

fn minimality_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let n = dim(r, n);
    let rank = r.random_range(1..n);
    let a = random_psd(r, n, rank);
    let k = r.random_range(2..=n);
    let s = random_subspace_meeting_kernel(r, &a, k, 1);
    let fam = lib(weighted_projection_family(&a, &s, tol))?;
    ensure(!fam.range_space.is_zero(), || "generator produced N = {0}".into())?;
    let t = fam.random_member(r);
    let thr = tol.threshold(&[fro(&t), fro(&fam.base)]);
    for _ in 0..10 {
        let x = gaussian_vector(r, n);
        let rep = lib(minimality_report(&a, &s, &t, Some(&x), tol))?;
        ensure(rep.norm_bound_applies, || "S ⊆ N(A) drawn".into())?;
        ensure(rep.norm_gap >= -thr, || format!("‖T‖ < ‖P_{{A,S}}‖ by {:.3e}", -rep.norm_gap))?;
        let gap = rep.pointwise_gap.unwrap_or_default();
        ensure(gap >= -thr * (1.0 + fro(&x)), || format!("‖(I−T)x‖ < ‖(I−P)x‖ by {:.3e}", -gap))?;
    }
    Ok(())
}

fn spline_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let n = dim(r, n);
    let rows = r.random_range(1..=n);
    let rank = r.random_range(0..=rows);
    let c = random_rank_matrix(r, rows, n, rank);
    let k = r.random_range(1..n);
    let s = random_subspace(r, n, k);
    let x = gaussian_vector(r, n);
    let a = lib(PsdOperator::new(c.adjoint() * &c, tol))?;

    let sp = lib(spline_set(&c, &s, &x, tol))?;
    let y = sp.random_member(r);
    let slack = tol.threshold(&[a.fro_norm(), fro(&x), fro(&y)]);
    let seed = r.next_u64();
    ensure(dominance_sample_test(&a, &y, &x, &s, 200, seed, slack), || {
        "spline member is beaten by a coset point".into()
    })?;

    let d = lib(weighted_distance(&c, &s, &x, tol))?;
    let (_, best) = lib(oracle_seminorm_lss(&a, s.basis(), &x, tol))?;
    ensure((d - best).abs() <= 10.0 * slack, || format!("distance {d} vs oracle {best}"))?;

    let zero = lib(spline_set(&c, &s, &Matrix::zeros(n, 1), tol))?;
    let n_space = lib(s.intersection(&a.kernel(), tol))?;
    ensure(zero.direction_space.equals(&n_space, 10.0 * slack), || "sp(C,S,0) ≠ N".into())
}

fn lss_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let n = dim(r, n);
    let m = dim(r, n + 1);
    let a = weight(r, n);
    let rank = r.random_range(0..=m.min(n));
    let b = random_rank_matrix(r, n, m, rank);
    let y = gaussian_vector(r, n);
    let x = lib(a_lss_solve(&a, &b, &y, tol))?;
    let thr = tol.threshold(&[a.fro_norm(), fro(&b), fro(&y)]);
    let own = fro(&(a.sqrt() * (&y - &b * &x)));
    let (_, best) = lib(oracle_seminorm_lss(&a, &b, &y, tol))?;
    ensure((own - best).abs() <= thr, || format!("objective {own} vs oracle {best}"))?;
    let res = normal_equation_residual(&a, &b, &y, &x);
    ensure(res <= thr * (1.0 + fro(&b)).powi(2), || format!("normal equation residual {res:.3e}"))?;

    let t = lib(lss_projection_witness(&a, &b, &y, &x, tol))?;
    let range = lib(crate::numkernel::column_space_with_reference(&b, tol, spectral_norm(&b)))?;
    let mem = lib(weighted_projection_membership(&a, &range, &t, tol))?;
    ensure(mem.member, || format!("witness not in Π(A,R(B)): {:?}", mem.conditions))
}

fn inverse_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let rows = dim(r, n);
    let cols = dim(r, n);
    let a1 = weight(r, rows);
    let a2 = weight(r, cols);
    let rank = r.random_range(1..=rows.min(cols));
    let b = random_rank_matrix(r, rows, cols, rank);

    let check = |g: &Matrix, kind: InverseKind, m: Option<&Subspace>| -> std::result::Result<(), String> {
        let rep = lib(inverse_check(&a1, Some(&a2), &b, g, kind, m, tol))?;
        ensure(rep.passed, || format!("{kind} check failed: {:?}", rep.equations))
    };

    let fam = lib(a_inverse_family(&a1, &b, tol))?;
    check(&fam.base, InverseKind::AInverse, None)?;
    check(&fam.random_member(r), InverseKind::AInverse, None)?;

    let k = r.random_range(1..=cols);
    let m = random_subspace(r, cols, k);
    let g = lib(restricted_a_inverse(&a1, &b, &m, tol))?;
    check(&g, InverseKind::Restricted, Some(&m))?;

    let g = lib(a1a2_inverse(&a1, &a2, &b, tol))?;
    check(&g, InverseKind::A1A2, None)?;
    check(&g, InverseKind::WeakA1A2, None)?;

    let y = gaussian_vector(r, rows);
    let gy = &g * &y;
    let normal = b.adjoint() * a1.matrix() * &b;
    let ambiguity = lib(null_space_with_reference(&normal, tol, a1.norm() * spectral_norm(&b).powi(2)))?;
    let (_, best) = lib(oracle_min_over_affine(&a2, &gy, &ambiguity, tol))?;
    let own = fro(&(a2.sqrt() * &gy));
    let thr = tol.threshold(&[a2.fro_norm(), fro(&gy)]);
    ensure(own <= best + thr, || format!("‖Gy‖_A₂ = {own} exceeds the minimum {best}"))
}

fn wgi_trial(r: &mut InstanceRng, n: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let rows = dim(r, n);
    let cols = dim(r, n);
    let a1 = weight(r, rows);
    let a2 = weight(r, cols);
    let rank = r.random_range(1..=rows.min(cols));
    let b = random_rank_matrix(r, rows, cols, rank);
    let c = lib(weighted_generalized_inverse(&a1, &a2, &b, tol))?;
    let rep = lib(inverse_check(&a1, Some(&a2), &b, &c, InverseKind::Wgi, None, tol))?;
    ensure(rep.passed, || format!("w.g.i. equations fail: {:?}", rep.equations))?;

    let plain = lib(weighted_generalized_inverse(
        &PsdOperator::identity(rows),
        &PsdOperator::identity(cols),
        &b,
        tol,
    ))?;
    let pinv = lib(pseudo_inverse(&b, tol))?;
    let gap = fro(&(&plain - &pinv));
    ensure(gap <= tol.threshold(&[fro(&pinv)]), || format!("identity weights differ from B† by {gap:.3e}"))?;

    let corrupted = &c + gaussian_matrix(r, cols, rows).scale(0.1);
    for (label, g, expect) in [("member", &c, true), ("corrupted", &corrupted, false)] {
        let rep = lib(inverse_check(&a1, Some(&a2), &b, g, InverseKind::WeakWgiSystem, None, tol))?;
        let eq = rep.equivalence.expect("system check reports equivalence");
        ensure(eq.agree, || format!("{label}: system and three-equation forms disagree"))?;
        ensure(rep.passed == expect, || format!("{label}: system verdict {}", rep.passed))?;
    }
    Ok(())
}
