//! Dense linear algebra, seeded random streams, and derivative-free
//! minimization shared by every model family.
//!
//! Everything here is sized for the problem at hand: kernel matrices of a
//! few hundred rows, parameter vectors of a few hundred entries. All values
//! are immutable after construction and safe to share across workers;
//! [`RandomStream`] is single-owner, with independent child streams for
//! concurrent work.

mod matrix;
mod optim;
mod rng;

pub use matrix::{cholesky, solve_spd, DenseMatrix};
pub use optim::{finite_diff_grad, nelder_mead_min};
pub use rng::{mix_seed, RandomStream};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    /// A pivot stayed non-positive even after the diagonal jitter ladder.
    #[error("matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    /// The objective returned NaN or infinity where a finite value is required.
    #[error("objective is not finite at {context}")]
    NonFiniteObjective { context: String },
    #[error("shape error: {0}")]
    Shape(String),
}
