//! Self-contained numerical kernels shared by the rest of the crate:
//! dense linear algebra, special functions, and scalar root finding.
//! Pure functions over immutable inputs; safe to call concurrently.

mod linalg;
mod special;

pub use linalg::{dot, inf_norm, lu_solve, DenseMatrix, LinearSystemFactors};
pub use special::{beta_pdf, inv_reg_inc_beta, log_beta, log_gamma, reg_inc_beta};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    #[error("singular matrix: pivot {pivot_index} below threshold")]
    SingularMatrix { pivot_index: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    #[error("shape error: {0}")]
    Shape(String),
}
