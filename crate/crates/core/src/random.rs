//! Seeded generators for random test instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numkernel::{c64, Matrix, PsdOperator, Subspace, Tolerances};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(s * re, s * im)
    })
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    gaussian_matrix(rng, n, 1)
}

/// `G·H` with `G: rows × rank`, `H: rank × cols`.
pub fn random_rank_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    rank: usize,
) -> Matrix {
    gaussian_matrix(rng, rows, rank) * gaussian_matrix(rng, rank, cols)
}

/// `G·Gᴴ` with `G: n × rank`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> PsdOperator {
    let g = gaussian_matrix(rng, n, rank);
    PsdOperator::new(&g * g.adjoint(), &Tolerances::default()).expect("Gram matrices are PSD")
}

pub fn random_invertible_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PsdOperator {
    let g = gaussian_matrix(rng, n, n);
    let m = &g * g.adjoint() + Matrix::identity(n, n).scale(0.1);
    PsdOperator::new(m, &Tolerances::default()).expect("shifted Gram matrices are PSD")
}

/// Random subspace of dimension `k` (generically exactly `k`).
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Subspace {
    Subspace::new(&gaussian_matrix(rng, n, k), &Tolerances::default()).expect("finite input")
}

/// Random `k`-dimensional subspace containing `kernel_dim` random directions
/// of `N(A)`, so that `S ∩ N(A)` is at least `kernel_dim`-dimensional.
pub fn random_subspace_meeting_kernel<R: Rng + ?Sized>(
    rng: &mut R,
    a: &PsdOperator,
    k: usize,
    kernel_dim: usize,
) -> Subspace {
    let n = a.dim();
    let kernel = a.kernel();
    let kernel_dim = kernel_dim.min(kernel.dim()).min(k);
    let mut span = Matrix::zeros(n, k);
    if kernel_dim > 0 {
        let coeffs = gaussian_matrix(rng, kernel.dim(), kernel_dim);
        span.columns_mut(0, kernel_dim)
            .copy_from(&(kernel.basis() * coeffs));
    }
    if k > kernel_dim {
        span.columns_mut(kernel_dim, k - kernel_dim)
            .copy_from(&gaussian_matrix(rng, n, k - kernel_dim));
    }
    Subspace::new(&span, &Tolerances::default()).expect("finite input")
}
