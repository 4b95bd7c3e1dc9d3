//! Dense complex linear algebra substrate: rank-revealing factorizations,
//! the Moore–Penrose inverse, PSD square roots, subspaces, block
//! decompositions, reduced (Douglas) solutions and the A-seminorm.

mod blocks;
mod dense;
mod factor;
mod psd;
mod subspace;

pub use blocks::{
    assemble_from_blocks, block_decompose, reduced_solution, reduced_solution_with_reference,
    BlockDecomposition,
};
pub use factor::{
    column_space, column_space_with_reference, null_space, null_space_with_reference,
    pseudo_inverse, pseudo_inverse_with_reference, rank_factorization,
    rank_factorization_with_reference, RankFactorization,
};
pub use psd::{psd_sqrt, seminorm, PsdOperator};
pub use subspace::{orthogonal_projector, subspace_ominus, Subspace};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub(crate) use dense::eigh;

/// Dense complex matrix; vectors are `n × 1` matrices.
pub type Matrix = DMatrix<Complex64>;

pub const DEFAULT_RANK_REL_TOL: f64 = 1e-10;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

/// Numerical cutoffs shared by every operation.
///
/// Singular values are retained iff `σ > rank_rel_tol · σ_ref`, and a
/// residual `X` counts as zero iff `‖X‖_F ≤ residual_tol · (1 + Σ‖inputs‖_F)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rank_rel_tol: f64,
    pub residual_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel_tol: DEFAULT_RANK_REL_TOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
        }
    }
}

impl Tolerances {
    pub fn new(rank_rel_tol: f64, residual_tol: f64) -> Result<Self> {
        for t in [rank_rel_tol, residual_tol] {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        Ok(Tolerances {
            rank_rel_tol,
            residual_tol,
        })
    }

    /// Zero threshold for a residual computed from inputs of the given
    /// Frobenius norms.
    pub fn threshold(&self, input_norms: &[f64]) -> f64 {
        self.residual_tol * (1.0 + input_norms.iter().sum::<f64>())
    }
}

/// Residual of a predicate `X ≈ 0` together with the threshold it was judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
}

impl Flag {
    pub fn new(residual: f64, threshold: f64) -> Self {
        Flag {
            passed: residual <= threshold,
            residual,
            threshold,
        }
    }

    /// Conjunction: passes iff both pass; reports the larger residual excess.
    pub fn and(self, other: Flag) -> Flag {
        let pick = if other.residual - other.threshold > self.residual - self.threshold {
            other
        } else {
            self
        };
        Flag {
            passed: self.passed && other.passed,
            ..pick
        }
    }
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Embed a real row-major array as a complex matrix.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> Matrix {
    assert_eq!(data.len(), rows * cols, "real_matrix: wrong data length");
    Matrix::from_fn(rows, cols, |i, j| c64(data[i * cols + j], 0.0))
}

pub fn real_vector(data: &[f64]) -> Matrix {
    real_matrix(data.len(), 1, data)
}

pub fn real_diag(d: &[f64]) -> Matrix {
    let n = d.len();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            c64(d[i], 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    Matrix::zeros(rows, cols)
}

pub fn fro(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn check_finite(m: &Matrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub(crate) fn check_square(context: &'static str, m: &Matrix) -> Result<()> {
    if m.nrows() == m.ncols() {
        Ok(())
    } else {
        Err(Error::dims(
            context,
            "square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ))
    }
}

pub(crate) fn check_rows(context: &'static str, m: &Matrix, rows: usize) -> Result<()> {
    if m.nrows() == rows {
        Ok(())
    } else {
        Err(Error::dims(
            context,
            format!("{rows} rows"),
            format!("{} rows", m.nrows()),
        ))
    }
}

pub(crate) fn check_vector(context: &'static str, x: &Matrix, n: usize) -> Result<()> {
    if x.nrows() == n && x.ncols() == 1 {
        Ok(())
    } else {
        Err(Error::dims(
            context,
            format!("{n}x1 vector"),
            format!("{}x{}", x.nrows(), x.ncols()),
        ))
    }
}

/// Largest singular value (0 for empty matrices).
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    dense::singular_values(m).first().copied().unwrap_or(0.0)
}

/// Frobenius distance between `m` and its adjoint.
pub fn hermitian_residual(m: &Matrix) -> f64 {
    fro(&(m - m.adjoint()))
}
