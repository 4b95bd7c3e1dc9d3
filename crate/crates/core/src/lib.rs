//! Projections, least-squares solutions and generalized inverses that are
//! orthogonal with respect to the seminorm `‖x‖_A = ‖A^{1/2}x‖` of a positive
//! semidefinite weight `A`.

pub mod error;
pub mod numkernel;

pub use error::{Error, Result};
pub use numkernel::{Matrix, PsdOperator, Subspace, Tolerances};
pub mod oracle;
pub mod projections;
pub mod random;
pub mod splines;
pub mod winverse;
pub mod verify;
pub mod cli;
